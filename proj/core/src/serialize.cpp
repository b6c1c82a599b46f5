#include "hdgc/serialize.hpp"

#include "hdgc/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hdgc {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from_number_or_null(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number_or_null(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, Index n) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n) throw ValidationError("network json: bad matrix shape");
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw ValidationError("network json: bad matrix shape");
    for (Index c = 0; c < n; ++c) m(r, c) = from_number_or_null(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

json edges_json(const CausalNetwork& net) {
  json edges = json::array();
  for (const auto& [i, j] : net.edges) {
    edges.push_back({{"from", net.nodes[static_cast<std::size_t>(i)]},
                     {"to", net.nodes[static_cast<std::size_t>(j)]},
                     {"p_chi2", number_or_null(net.p_chi2(i, j))},
                     {"p_f", number_or_null(net.p_f(i, j))},
                     {"long_run", number_or_null(net.magnitude(i, j))}});
  }
  return edges;
}

std::string format_significant(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string result_to_json(const PdsLmResult& r, int indent) {
  json j;
  j["caused"] = r.caused;
  j["causing"] = r.causing;
  j["p"] = r.spec.p;
  j["d"] = r.spec.d;
  j["lm"] = r.lm_stat;
  j["df"] = r.df;
  j["p_chi2"] = r.p_chi2;
  j["p_f"] = r.p_f;
  j["s_hat"] = r.selection.size;
  if (r.long_run_effect.size() == 1)
    j["long_run_effect"] = r.long_run_effect.front();
  else
    j["long_run_effect"] = r.long_run_effect;
  j["reject"] = r.reject;
  j["alpha"] = r.alpha;
  j["statistic"] = to_string(r.statistic);
  j["f_stat"] = number_or_null(r.f_stat);
  j["f_df"] = {r.f_df1, r.f_df2};
  j["effective_T"] = r.effective_T;
  j["covariance_regularized"] = r.covariance_regularized;
  return j.dump(indent);
}

std::string network_to_json(const CausalNetwork& net, int indent) {
  json j;
  j["nodes"] = net.nodes;
  j["alpha"] = net.alpha;
  j["statistic"] = to_string(net.statistic);
  j["p"] = net.spec.p;
  j["d"] = net.spec.d;
  j["edges"] = edges_json(net);
  j["pvalue_matrix"] = matrix_json(net.p_chi2);
  j["pvalue_f_matrix"] = matrix_json(net.p_f);
  j["magnitude_matrix"] = matrix_json(net.magnitude);
  j["warnings"] = net.warnings;
  return j.dump(indent);
}

CausalNetwork network_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("network json: ") + e.what());
  }
  try {
    CausalNetwork net;
    net.nodes = j.at("nodes").get<std::vector<std::string>>();
    const auto n = static_cast<Index>(net.nodes.size());
    net.alpha = j.at("alpha").get<double>();
    net.statistic = parse_statistic(j.at("statistic").get<std::string>());
    net.spec.p = j.at("p").get<int>();
    net.spec.d = j.at("d").get<int>();
    net.p_chi2 = matrix_from_json(j.at("pvalue_matrix"), n);
    net.p_f = j.contains("pvalue_f_matrix") ? matrix_from_json(j.at("pvalue_f_matrix"), n) : net.p_chi2;
    net.magnitude = matrix_from_json(j.at("magnitude_matrix"), n);
    for (const auto& e : j.at("edges"))
      net.edges.emplace_back(net.index_of(e.at("from").get<std::string>()),
                             net.index_of(e.at("to").get<std::string>()));
    std::sort(net.edges.begin(), net.edges.end());
    if (j.contains("warnings")) net.warnings = j.at("warnings").get<std::vector<std::string>>();
    return net;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("network json: ") + e.what());
  }
}

std::string edges_to_json(const CausalNetwork& net, int indent) { return edges_json(net).dump(indent); }

std::string network_to_dot(const CausalNetwork& net) {
  std::ostringstream out;
  out << "digraph granger {\n";
  for (const auto& n : net.nodes) out << "  \"" << dot_escape(n) << "\";\n";
  const Matrix& pv = net.pvalue_matrix();
  for (const auto& [i, j] : net.edges) {
    out << "  \"" << dot_escape(net.nodes[static_cast<std::size_t>(i)]) << "\" -> \""
        << dot_escape(net.nodes[static_cast<std::size_t>(j)]) << "\" [label=\"" << format_significant(pv(i, j), 3)
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string format_raw(double value) {
  if (std::isnan(value)) return "NA";
  return format_significant(value, 17);
}

std::string format_rounded(double value, int decimals) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);  // "-0.0000"
  return s;
}

std::string pvalue_bin(double p) {
  if (std::isnan(p)) return "NA";
  if (p >= kHeatmapWhiteThreshold) return "white";
  if (p < 0.01) return "p<0.01";
  if (p < 0.05) return "p<0.05";
  if (p < 0.10) return "p<0.10";
  return "p<0.15";
}

std::string heatmap_csv(const Matrix& matrix, const std::vector<std::string>& labels,
                        std::string (*format)(double)) {
  if (matrix.rows() != matrix.cols()) throw ValidationError("heat map: matrix is not square");
  if (static_cast<Index>(labels.size()) != matrix.rows())
    throw ValidationError("heat map: label count does not match matrix size");
  std::ostringstream out;
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (Index i = 0; i < matrix.rows(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < matrix.cols(); ++j) out << ',' << format(matrix(i, j));
    out << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> emit_heatmap_data(const Matrix& matrix, const std::vector<std::string>& labels,
                                                     const std::filesystem::path& path) {
  const std::string display = heatmap_csv(matrix, labels, [](double v) { return format_rounded(v, 4); });
  const std::string raw = heatmap_csv(matrix, labels, format_raw);
  std::filesystem::path raw_path = path;
  raw_path.replace_filename(path.stem().string() + "_raw" + path.extension().string());
  std::vector<std::filesystem::path> written;
  for (const auto& [p, body] : {std::make_pair(path, display), std::make_pair(raw_path, raw)}) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + p.string() + "'");
    f << body;
    written.push_back(p);
  }
  return written;
}

}  // namespace hdgc
