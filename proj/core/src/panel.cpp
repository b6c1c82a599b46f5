#include "hdgc/panel.hpp"

#include "hdgc/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

namespace hdgc {

TimeSeriesPanel::TimeSeriesPanel(Matrix values, std::vector<std::string> names, std::vector<long> time_index,
                                 std::vector<std::string> units)
    : values_(std::move(values)), names_(std::move(names)), time_index_(std::move(time_index)),
      units_(std::move(units)) {
  if (static_cast<Index>(names_.size()) != values_.cols())
    throw ValidationError("panel: " + std::to_string(names_.size()) + " names for " +
                          std::to_string(values_.cols()) + " columns");
  if (static_cast<Index>(time_index_.size()) != values_.rows())
    throw ValidationError("panel: time index length does not match row count");
  if (units_.empty()) units_.resize(names_.size());
  if (units_.size() != names_.size()) throw ValidationError("panel: units length does not match column count");

  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ValidationError("panel: empty series name");
    if (!seen.insert(n).second) throw ValidationError("panel: duplicate series name '" + n + "'");
  }
  for (std::size_t i = 1; i < time_index_.size(); ++i) {
    if (time_index_[i] <= time_index_[i - 1])
      throw ValidationError("panel: time index not strictly increasing at " + std::to_string(time_index_[i]));
    if (time_index_[i] != time_index_[i - 1] + 1)
      throw ValidationError("time index not contiguous: gap between " + std::to_string(time_index_[i - 1]) +
                            " and " + std::to_string(time_index_[i]));
  }
  if (!values_.allFinite()) throw ValidationError("panel: non-finite value");
}

Index TimeSeriesPanel::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ValidationError("unknown series '" + name + "'");
  return static_cast<Index>(it - names_.begin());
}

bool TimeSeriesPanel::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

TimeSeriesPanel TimeSeriesPanel::select(const std::vector<std::string>& names) const {
  Matrix out(T(), static_cast<Index>(names.size()));
  std::vector<std::string> units;
  for (std::size_t j = 0; j < names.size(); ++j) {
    const Index k = index_of(names[j]);
    out.col(static_cast<Index>(j)) = values_.col(k);
    units.push_back(units_[static_cast<std::size_t>(k)]);
  }
  return TimeSeriesPanel(std::move(out), names, time_index_, std::move(units));
}

void TimeSeriesPanel::require_analysable() const {
  if (K() < 2) throw ValidationError("panel needs at least 2 series, has " + std::to_string(K()));
  if (T() < 2) throw ValidationError("panel needs at least 2 observations, has " + std::to_string(T()));
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      cur.push_back(c);
    } else if (c == ',' && !quoted) {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

bool is_missing_token(const std::string& s) { return s.empty() || s == "NA" || s == "NaN" || s == "nan"; }

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long> parse_long(const std::string& s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

TimeSeriesPanel parse_panel_csv(const std::string& text, const std::vector<std::string>& columns,
                                const std::string& time_column, const LoadOptions& options,
                                const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(source + ": empty file, header row expected");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);  // BOM
  const auto header = split_csv_line(line);

  auto find_col = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ValidationError(source + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t time_pos = find_col(time_column);
  std::vector<std::string> selected = columns;
  if (selected.empty()) {
    for (const auto& h : header)
      if (h != time_column) selected.push_back(h);
  }
  std::vector<std::size_t> positions;
  for (const auto& c : selected) positions.push_back(find_col(c));

  struct Row {
    long year;
    std::vector<std::optional<double>> cells;
    long line_no;
  };
  std::vector<Row> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError(source + ": row " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                           " fields, header has " + std::to_string(header.size()),
                       line_no, "");
    auto year = parse_long(fields[time_pos]);
    if (!year)
      throw ParseError(source + ": row " + std::to_string(line_no) + ", column '" + time_column +
                           "': time value '" + fields[time_pos] + "' is not an integer",
                       line_no, time_column);
    Row r{*year, {}, line_no};
    for (std::size_t j = 0; j < positions.size(); ++j) {
      const auto& cell = fields[positions[j]];
      auto v = parse_double(cell);
      if (!v && !(options.trim_common && is_missing_token(cell)))
        throw ParseError(source + ": row " + std::to_string(line_no) + ", column '" + selected[j] +
                             "': cannot parse '" + cell + "' as a number",
                         line_no, selected[j]);
      r.cells.push_back(v);
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ValidationError(source + ": no data rows");

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.year < b.year; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].year == rows[i - 1].year)
      throw ValidationError(source + ": duplicate time value " + std::to_string(rows[i].year));

  std::size_t first = 0, last = rows.size();
  if (options.trim_common) {
    auto complete = [](const Row& r) {
      return std::all_of(r.cells.begin(), r.cells.end(), [](const auto& c) { return c.has_value(); });
    };
    while (first < last && !complete(rows[first])) ++first;
    while (last > first && !complete(rows[last - 1])) --last;
    if (first == last) throw ValidationError(source + ": no year where every selected series is observed");
    for (std::size_t i = first; i < last; ++i) {
      for (std::size_t j = 0; j < selected.size(); ++j)
        if (!rows[i].cells[j])
          throw ParseError(source + ": row " + std::to_string(rows[i].line_no) + ", column '" + selected[j] +
                               "': missing value inside the common coverage window",
                           rows[i].line_no, selected[j]);
    }
  }

  const auto n = static_cast<Index>(last - first);
  Matrix values(n, static_cast<Index>(selected.size()));
  std::vector<long> years;
  for (Index i = 0; i < n; ++i) {
    const Row& r = rows[first + static_cast<std::size_t>(i)];
    years.push_back(r.year);
    for (std::size_t j = 0; j < selected.size(); ++j) values(i, static_cast<Index>(j)) = *r.cells[j];
  }
  return TimeSeriesPanel(std::move(values), selected, std::move(years));
}

TimeSeriesPanel load_panel(const std::filesystem::path& path, const std::vector<std::string>& columns,
                           const std::string& time_column, const LoadOptions& options) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open data file '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_panel_csv(ss.str(), columns, time_column, options, path.string());
}

TimeSeriesPanel demean(const TimeSeriesPanel& panel) {
  Matrix v = panel.values();
  v.rowwise() -= v.colwise().mean();
  return TimeSeriesPanel(std::move(v), panel.names(), panel.time_index(), panel.units());
}

TimeSeriesPanel difference(const TimeSeriesPanel& panel, const std::vector<int>& orders) {
  if (static_cast<Index>(orders.size()) != panel.K())
    throw ValidationError("difference: expected " + std::to_string(panel.K()) + " orders, got " +
                          std::to_string(orders.size()));
  int max_order = 0;
  for (std::size_t k = 0; k < orders.size(); ++k) {
    if (orders[k] < 0) throw ValidationError("difference: negative order for '" + panel.names()[k] + "'");
    if (orders[k] > panel.T() - 2)
      throw ValidationError("difference: order " + std::to_string(orders[k]) + " too large for '" +
                            panel.names()[k] + "' with T = " + std::to_string(panel.T()));
    max_order = std::max(max_order, orders[k]);
  }
  const Index T = panel.T();
  const Index n = T - max_order;
  Matrix out(n, panel.K());
  for (Index k = 0; k < panel.K(); ++k) {
    Vector x = panel.values().col(k);
    Index len = T;
    for (int r = 0; r < orders[static_cast<std::size_t>(k)]; ++r) {
      for (Index t = 0; t + 1 < len; ++t) x(t) = x(t + 1) - x(t);
      --len;
    }
    // x(0 .. len-1) now indexes times order_k .. T-1; keep the last n.
    out.col(k) = x.segment(len - n, n);
  }
  std::vector<long> years(panel.time_index().begin() + max_order, panel.time_index().end());
  return TimeSeriesPanel(std::move(out), panel.names(), std::move(years), panel.units());
}

TimeSeriesPanel difference(const TimeSeriesPanel& panel, const std::map<std::string, int>& orders) {
  std::vector<int> v(static_cast<std::size_t>(panel.K()), 0);
  for (const auto& [name, order] : orders) v[static_cast<std::size_t>(panel.index_of(name))] = order;
  return difference(panel, v);
}

}  // namespace hdgc
