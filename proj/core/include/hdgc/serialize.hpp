#pragma once

#include "hdgc/network.hpp"
#include "hdgc/pdslm.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hdgc {

/// {caused, causing, p, d, lm, df, p_chi2, p_f, s_hat, long_run_effect, reject, ...}.
/// long_run_effect is a number for a single caused series, an array otherwise.
std::string result_to_json(const PdsLmResult& result, int indent = 2);

/// {nodes, alpha, statistic, p, d, edges: [{from, to, p_chi2, p_f, long_run}],
///  pvalue_matrix, pvalue_f_matrix, magnitude_matrix, warnings}. NaN cells are null.
std::string network_to_json(const CausalNetwork& network, int indent = 2);

/// Inverse of network_to_json (per-test selection details are not stored).
CausalNetwork network_from_json(const std::string& text);

/// Just the edge list, [{from, to, p_chi2, p_f, long_run}].
std::string edges_to_json(const CausalNetwork& network, int indent = 2);

/// Graphviz digraph; edge labels carry the thresholding p-value to 3 significant digits.
std::string network_to_dot(const CausalNetwork& network);

/// Formats with 17 significant digits (round-trip exact); NaN as "NA".
std::string format_raw(double value);

/// Fixed `decimals` places, e.g. 0.051234 -> "0.0512"; NaN as "NA".
std::string format_rounded(double value, int decimals = 4);

inline constexpr double kHeatmapWhiteThreshold = 0.15;

/// Heat-map bin of a p-value: "white" when p >= 0.15, otherwise one of
/// "p<0.01", "p<0.05", "p<0.10", "p<0.15"; "NA" for NaN.
std::string pvalue_bin(double p);

/// Square matrix as CSV with a header row and a leading label column.
std::string heatmap_csv(const Matrix& matrix, const std::vector<std::string>& labels,
                        std::string (*format)(double));

/// Writes `path` with values rounded to 4 decimals and `<stem>_raw.csv` with
/// 17-significant-digit values. Returns the paths written.
std::vector<std::filesystem::path> emit_heatmap_data(const Matrix& matrix, const std::vector<std::string>& labels,
                                                     const std::filesystem::path& path);

}  // namespace hdgc
