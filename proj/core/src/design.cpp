#include "hdgc/design.hpp"

#include "hdgc/error.hpp"

#include <algorithm>
#include <set>

namespace hdgc {

void LagSpec::validate() const {
  if (p < 1) throw ValidationError("lag length p must be >= 1, got " + std::to_string(p));
  if (d < 0) throw ValidationError("augmentation order d must be >= 0, got " + std::to_string(d));
}

Matrix lag_matrix(const Matrix& values, int p, Index first_row) {
  const Index rows = values.rows() - first_row;
  const Index K = values.cols();
  Matrix out(rows, K * p);
  for (Index k = 0; k < K; ++k)
    for (int l = 1; l <= p; ++l) out.col(k * p + (l - 1)) = values.col(k).segment(first_row - l, rows);
  return out;
}

namespace {

std::vector<Index> resolve(const TimeSeriesPanel& panel, const std::vector<std::string>& names, const char* what) {
  if (names.empty()) throw ValidationError(std::string("query: ") + what + " set is empty");
  std::vector<Index> out;
  std::set<Index> seen;
  for (const auto& n : names) {
    const Index k = panel.index_of(n);
    if (!seen.insert(k).second) throw ValidationError(std::string("query: '") + n + "' repeated in " + what + " set");
    out.push_back(k);
  }
  return out;
}

}  // namespace

DesignMatrices build_design(const TimeSeriesPanel& panel, const std::vector<std::string>& caused,
                            const std::vector<std::string>& causing, const LagSpec& spec) {
  spec.validate();
  DesignMatrices dm;
  dm.caused = resolve(panel, caused, "caused");
  dm.causing = resolve(panel, causing, "causing");
  for (Index i : dm.caused)
    if (std::find(dm.causing.begin(), dm.causing.end(), i) != dm.causing.end())
      throw ValidationError("query: series '" + panel.names()[static_cast<std::size_t>(i)] +
                            "' is both caused and causing");

  const Index T = panel.T();
  const Index start = spec.p + spec.d;
  if (T - start < 1)
    throw InfeasibleError("sample too short: T = " + std::to_string(T) + " leaves no rows after p + d = " +
                          std::to_string(start) + " lags");
  dm.effective_T = T - start;
  const Matrix& y = panel.values();
  const Index K = panel.K();
  const int p = spec.p;

  dm.response.resize(dm.effective_T, static_cast<Index>(dm.caused.size()));
  for (std::size_t i = 0; i < dm.caused.size(); ++i)
    dm.response.col(static_cast<Index>(i)) = y.col(dm.caused[i]).tail(dm.effective_T);

  dm.lagged = lag_matrix(y, p, start);
  for (Index k = 0; k < K; ++k)
    for (int l = 1; l <= p; ++l)
      dm.lagged_labels.push_back(panel.names()[static_cast<std::size_t>(k)] + ".l" + std::to_string(l));

  dm.augmentation.resize(dm.effective_T, static_cast<Index>(dm.causing.size()) * spec.d);
  Index c = 0;
  for (Index k : dm.causing)
    for (int l = p + 1; l <= p + spec.d; ++l, ++c) {
      dm.augmentation.col(c) = y.col(k).segment(start - l, dm.effective_T);
      dm.augmentation_labels.push_back(panel.names()[static_cast<std::size_t>(k)] + ".l" + std::to_string(l));
    }

  std::vector<Index> causing_sorted = dm.causing;
  std::sort(causing_sorted.begin(), causing_sorted.end());
  for (Index k : causing_sorted)
    for (int l = 0; l < p; ++l) dm.gc_columns.push_back(k * p + l);
  for (Index m = 0; m < K * p; ++m)
    if (!std::binary_search(dm.gc_columns.begin(), dm.gc_columns.end(), m)) dm.control_columns.push_back(m);
  return dm;
}

}  // namespace hdgc
