#pragma once

#include "hdgc/pdslm.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hdgc {

/// Directed Granger-causality network over the series of a panel.
///
/// Cell (i, j) of the matrices describes the pairwise test "series i causes
/// series j" conditional on every other series; the diagonal and failed
/// tests hold NaN.
struct CausalNetwork {
  std::vector<std::string> nodes;
  double alpha = 0.1;
  Statistic statistic = Statistic::chi_square;
  LagSpec spec{};
  Matrix p_chi2;
  Matrix p_f;
  Matrix magnitude;  ///< long-run effects
  std::vector<std::pair<Index, Index>> edges;  ///< (from, to), sorted
  std::map<std::pair<Index, Index>, PdsLmResult> tests;
  std::vector<std::string> warnings;

  /// p-values of the statistic used for thresholding.
  const Matrix& pvalue_matrix() const { return statistic == Statistic::chi_square ? p_chi2 : p_f; }
  Index index_of(const std::string& name) const;
  bool has_edge(Index from, Index to) const;
  Index size() const { return static_cast<Index>(nodes.size()); }

  /// Network with the given edges only; p-values 0 on edges and 1 elsewhere.
  /// Used for graph analytics on hand-specified graphs.
  static CausalNetwork from_edges(std::vector<std::string> nodes,
                                  const std::vector<std::pair<std::string, std::string>>& edges);
};

struct NetworkOptions {
  Statistic statistic = Statistic::chi_square;
  SelectionSettings selection{};
  bool df_augment_per_equation = false;
  bool chi2_df_includes_augmentation = false;
  unsigned threads = 1;
};

/// Runs the PDS-LM test for every ordered pair of series. A failing test is
/// recorded as NaN in the matrices plus a warning; the network is still returned.
CausalNetwork build_network(const TimeSeriesPanel& panel, const LagSpec& spec, double alpha,
                            const NetworkOptions& options = {});

/// One block test; singleton blocks reduce to the pairwise test.
PdsLmResult block_test(const TimeSeriesPanel& panel, const std::vector<std::string>& caused,
                       const std::vector<std::string>& causing, const LagSpec& spec, double alpha,
                       const NetworkOptions& options = {});

using Path = std::vector<std::string>;

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// Every directed simple path from `from` to `to`, sorted lexicographically by
/// node names. `max_edges` caps the path length. Throws ValidationError when
/// more than `cap` paths exist.
std::vector<Path> simple_paths(const CausalNetwork& network, const std::string& from, const std::string& to,
                               std::optional<std::size_t> max_edges = std::nullopt,
                               std::size_t cap = kDefaultPathCap);

/// Every simple directed cycle through `node`, each once, rotated to start at
/// its lexicographically smallest node name, and sorted. The closing node is
/// not repeated: a <-> b is reported as {a, b}.
std::vector<Path> cycles_through(const CausalNetwork& network, const std::string& node,
                                 std::size_t cap = kDefaultPathCap);

struct CommunityPartition {
  std::vector<int> assignment;  ///< node index -> community id (0-based, by first appearance)
  double modularity = 0.0;
  int communities() const;
};

/// Symmetric 0/1 adjacency with an edge wherever either direction is present.
Matrix undirected_adjacency(const CausalNetwork& network);

/// M = (1/2m) sum_vw [A_vw - k_v k_w / 2m] delta(c_v, c_w), summed per community;
/// zero for an edgeless graph.
double modularity(const Matrix& adjacency, const std::vector<int>& assignment);

/// Greedy agglomerative modularity maximization on the undirected projection.
/// Starting from singletons, repeatedly merges the connected pair of
/// communities with the largest modularity gain (ties: smallest pair of
/// community labels, a label being the community's smallest node index) and
/// returns the best partition seen along the way.
CommunityPartition greedy_modularity_clusters(const CausalNetwork& network);

}  // namespace hdgc
