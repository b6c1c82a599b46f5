#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace hdgc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Annual multivariate time series: T rows (years) by K named columns.
///
/// Construction validates the invariants every downstream routine relies on:
/// unique nonempty names, finite values and a strictly increasing, gap-free
/// time index. Instances are immutable and safe to share between threads.
class TimeSeriesPanel {
 public:
  TimeSeriesPanel(Matrix values, std::vector<std::string> names, std::vector<long> time_index,
                  std::vector<std::string> units = {});

  Index T() const noexcept { return values_.rows(); }
  Index K() const noexcept { return values_.cols(); }

  const Matrix& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<long>& time_index() const noexcept { return time_index_; }
  const std::vector<std::string>& units() const noexcept { return units_; }

  /// Column position of `name`; throws ValidationError when absent.
  Index index_of(const std::string& name) const;
  bool contains(const std::string& name) const;

  /// New panel restricted to `names`, in the order given.
  TimeSeriesPanel select(const std::vector<std::string>& names) const;

  /// Throws unless K >= 2 and T >= 2.
  void require_analysable() const;

 private:
  Matrix values_;
  std::vector<std::string> names_;
  std::vector<long> time_index_;
  std::vector<std::string> units_;
};

struct LoadOptions {
  /// Accept missing cells ("", "NA", "NaN") in leading/trailing rows and trim
  /// the panel to the years where every selected series is observed.
  bool trim_common = false;
};

/// Reads a UTF-8 CSV with a header row. `columns` empty means every column
/// except the time column, in file order.
TimeSeriesPanel load_panel(const std::filesystem::path& path, const std::vector<std::string>& columns,
                           const std::string& time_column, const LoadOptions& options = {});

/// Same as load_panel but from in-memory CSV text (`source` names it in errors).
TimeSeriesPanel parse_panel_csv(const std::string& text, const std::vector<std::string>& columns,
                                const std::string& time_column, const LoadOptions& options = {},
                                const std::string& source = "<csv>");

/// Subtracts each column's sample mean.
TimeSeriesPanel demean(const TimeSeriesPanel& panel);

/// Replaces series k by its orders[k]-th difference and truncates every
/// series to the common length T - max(orders).
TimeSeriesPanel difference(const TimeSeriesPanel& panel, const std::vector<int>& orders);

/// Named form of difference(); series missing from `orders` are left at order 0.
TimeSeriesPanel difference(const TimeSeriesPanel& panel, const std::map<std::string, int>& orders);

}  // namespace hdgc
