#include "hdgc/network.hpp"

#include "hdgc/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace hdgc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

GcQuery make_query(const std::vector<std::string>& caused, const std::vector<std::string>& causing,
                   const LagSpec& spec, double alpha, const NetworkOptions& options) {
  GcQuery q;
  q.caused = caused;
  q.causing = causing;
  q.spec = spec;
  q.alpha = alpha;
  q.statistic = options.statistic;
  q.df_augment_per_equation = options.df_augment_per_equation;
  q.chi2_df_includes_augmentation = options.chi2_df_includes_augmentation;
  q.selection = options.selection;
  return q;
}

std::vector<std::vector<Index>> out_lists(const CausalNetwork& net) {
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(net.size()));
  for (const auto& [from, to] : net.edges) out[static_cast<std::size_t>(from)].push_back(to);
  for (auto& o : out) std::sort(o.begin(), o.end());
  return out;
}

std::vector<Path> sorted_by_name(const CausalNetwork& net, std::vector<std::vector<Index>> raw) {
  std::vector<Path> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    Path p;
    for (Index i : r) p.push_back(net.nodes[static_cast<std::size_t>(i)]);
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Index CausalNetwork::index_of(const std::string& name) const {
  auto it = std::find(nodes.begin(), nodes.end(), name);
  if (it == nodes.end()) throw ValidationError("unknown node '" + name + "'");
  return static_cast<Index>(it - nodes.begin());
}

bool CausalNetwork::has_edge(Index from, Index to) const {
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(from, to));
}

CausalNetwork CausalNetwork::from_edges(std::vector<std::string> nodes,
                                        const std::vector<std::pair<std::string, std::string>>& edges) {
  CausalNetwork net;
  net.nodes = std::move(nodes);
  const Index K = net.size();
  std::set<std::string> unique(net.nodes.begin(), net.nodes.end());
  if (static_cast<Index>(unique.size()) != K) throw ValidationError("network: duplicate node names");
  net.p_chi2 = Matrix::Ones(K, K);
  net.p_chi2.diagonal().setConstant(kNaN);
  net.magnitude = Matrix::Zero(K, K);
  net.magnitude.diagonal().setConstant(kNaN);
  for (const auto& [a, b] : edges) {
    const Index i = net.index_of(a);
    const Index j = net.index_of(b);
    if (i == j) throw ValidationError("network: self-loop on '" + a + "'");
    net.p_chi2(i, j) = 0.0;
    net.edges.emplace_back(i, j);
  }
  net.p_f = net.p_chi2;
  std::sort(net.edges.begin(), net.edges.end());
  net.edges.erase(std::unique(net.edges.begin(), net.edges.end()), net.edges.end());
  return net;
}

CausalNetwork build_network(const TimeSeriesPanel& panel, const LagSpec& spec, double alpha,
                            const NetworkOptions& options) {
  panel.require_analysable();
  spec.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("network: alpha must lie in (0, 1)");
  const Index K = panel.K();
  CausalNetwork net;
  net.nodes = panel.names();
  net.alpha = alpha;
  net.statistic = options.statistic;
  net.spec = spec;
  net.p_chi2 = Matrix::Constant(K, K, kNaN);
  net.p_f = Matrix::Constant(K, K, kNaN);
  net.magnitude = Matrix::Constant(K, K, kNaN);

  std::vector<std::pair<Index, Index>> cells;
  for (Index i = 0; i < K; ++i)
    for (Index j = 0; j < K; ++j)
      if (i != j) cells.emplace_back(i, j);

  std::vector<std::optional<PdsLmResult>> results(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const auto [i, j] = cells[c];
      try {
        results[c] = pds_lm_test(panel, make_query({panel.names()[static_cast<std::size_t>(j)]},
                                                   {panel.names()[static_cast<std::size_t>(i)]}, spec, alpha, options));
      } catch (const std::exception& e) {
        errors[c] = e.what();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto [i, j] = cells[c];
    if (!results[c]) {
      net.warnings.push_back(panel.names()[static_cast<std::size_t>(i)] + " -> " +
                             panel.names()[static_cast<std::size_t>(j)] + ": " + errors[c]);
      continue;
    }
    const PdsLmResult& r = *results[c];
    net.p_chi2(i, j) = r.p_chi2;
    net.p_f(i, j) = r.p_f;
    net.magnitude(i, j) = r.long_run();
    if (r.p_value() < alpha) net.edges.emplace_back(i, j);
    net.tests.emplace(cells[c], r);
  }
  std::sort(net.edges.begin(), net.edges.end());
  return net;
}

PdsLmResult block_test(const TimeSeriesPanel& panel, const std::vector<std::string>& caused,
                       const std::vector<std::string>& causing, const LagSpec& spec, double alpha,
                       const NetworkOptions& options) {
  return pds_lm_test(panel, make_query(caused, causing, spec, alpha, options));
}

std::vector<Path> simple_paths(const CausalNetwork& network, const std::string& from, const std::string& to,
                               std::optional<std::size_t> max_edges, std::size_t cap) {
  const Index s = network.index_of(from);
  const Index t = network.index_of(to);
  if (s == t) throw ValidationError("paths: source and target must differ");
  const auto out = out_lists(network);
  std::vector<std::vector<Index>> found;
  std::vector<Index> stack{s};
  std::vector<char> on_path(static_cast<std::size_t>(network.size()), 0);
  on_path[static_cast<std::size_t>(s)] = 1;

  auto dfs = [&](auto&& self, Index v) -> void {
    for (Index w : out[static_cast<std::size_t>(v)]) {
      if (on_path[static_cast<std::size_t>(w)]) continue;
      if (w == t) {
        if (found.size() >= cap)
          throw ValidationError("paths: more than " + std::to_string(cap) + " simple paths; raise the cap");
        found.push_back(stack);
        found.back().push_back(t);
        continue;
      }
      if (max_edges && stack.size() >= *max_edges) continue;  // a further hop would exceed the cap
      on_path[static_cast<std::size_t>(w)] = 1;
      stack.push_back(w);
      self(self, w);
      stack.pop_back();
      on_path[static_cast<std::size_t>(w)] = 0;
    }
  };
  if (!max_edges || *max_edges >= 1) dfs(dfs, s);
  return sorted_by_name(network, std::move(found));
}

std::vector<Path> cycles_through(const CausalNetwork& network, const std::string& node, std::size_t cap) {
  const Index s = network.index_of(node);
  const auto out = out_lists(network);
  std::vector<std::vector<Index>> found;
  std::vector<Index> stack{s};
  std::vector<char> on_path(static_cast<std::size_t>(network.size()), 0);
  on_path[static_cast<std::size_t>(s)] = 1;

  auto dfs = [&](auto&& self, Index v) -> void {
    for (Index w : out[static_cast<std::size_t>(v)]) {
      if (w == s) {
        if (found.size() >= cap)
          throw ValidationError("cycles: more than " + std::to_string(cap) + " cycles; raise the cap");
        found.push_back(stack);
        continue;
      }
      if (on_path[static_cast<std::size_t>(w)]) continue;
      on_path[static_cast<std::size_t>(w)] = 1;
      stack.push_back(w);
      self(self, w);
      stack.pop_back();
      on_path[static_cast<std::size_t>(w)] = 0;
    }
  };
  dfs(dfs, s);

  auto paths = sorted_by_name(network, std::move(found));
  for (auto& c : paths) std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
  std::sort(paths.begin(), paths.end());
  return paths;
}

int CommunityPartition::communities() const {
  return assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
}

Matrix undirected_adjacency(const CausalNetwork& network) {
  const Index K = network.size();
  Matrix A = Matrix::Zero(K, K);
  for (const auto& [i, j] : network.edges) {
    A(i, j) = 1.0;
    A(j, i) = 1.0;
  }
  return A;
}

double modularity(const Matrix& A, const std::vector<int>& assignment) {
  const Index n = A.rows();
  if (static_cast<Index>(assignment.size()) != n) throw ValidationError("modularity: assignment size mismatch");
  const double two_m = A.sum();
  if (two_m == 0.0) return 0.0;
  // Per community: internal edge ends and degree total, then sum L_c/2m - (D_c/2m)^2.
  std::map<int, std::pair<double, double>> totals;
  for (Index v = 0; v < n; ++v) {
    auto& [inner, degree] = totals[assignment[static_cast<std::size_t>(v)]];
    for (Index w = 0; w < n; ++w) {
      degree += A(v, w);
      if (assignment[static_cast<std::size_t>(v)] == assignment[static_cast<std::size_t>(w)]) inner += A(v, w);
    }
  }
  double q = 0.0;
  for (const auto& [c, t] : totals) {
    const double share = t.second / two_m;
    q += t.first / two_m - share * share;
  }
  return q;
}

namespace {

std::vector<int> relabel(const std::vector<Index>& community_of) {
  std::map<Index, int> ids;
  std::vector<int> out;
  for (Index c : community_of) {
    auto [it, inserted] = ids.emplace(c, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

CommunityPartition greedy_modularity_clusters(const CausalNetwork& network) {
  const Index n = network.size();
  if (n == 0) throw ValidationError("clustering: empty network");
  const Matrix A = undirected_adjacency(network);
  const double two_m = A.sum();

  // Communities are labelled by their smallest member; community_of[v] is that label.
  std::vector<Index> community_of(static_cast<std::size_t>(n));
  std::iota(community_of.begin(), community_of.end(), Index{0});
  CommunityPartition best{relabel(community_of), 0.0};
  if (two_m == 0.0) return best;

  // e(a, b): fraction of edge ends joining communities a and b; a(c): degree share.
  Matrix e = A / two_m;
  Vector a = A.rowwise().sum() / two_m;
  std::set<Index> alive;
  for (Index v = 0; v < n; ++v) alive.insert(v);

  double q = e.diagonal().sum() - a.squaredNorm();
  best.modularity = q;
  while (alive.size() > 1) {
    double gain = -std::numeric_limits<double>::infinity();
    std::pair<Index, Index> pick{-1, -1};
    for (Index i : alive)
      for (Index j : alive) {
        if (j <= i || e(i, j) == 0.0) continue;
        const double dq = 2.0 * (e(i, j) - a(i) * a(j));
        if (dq > gain + 1e-14) {
          gain = dq;
          pick = {i, j};
        }
      }
    if (pick.first < 0) break;  // no connected pair left
    const auto [i, j] = pick;   // i < j, merge j into i
    e.row(i) += e.row(j);
    e.col(i) += e.col(j);
    e.row(j).setZero();
    e.col(j).setZero();
    a(i) += a(j);
    a(j) = 0.0;
    alive.erase(j);
    for (auto& c : community_of)
      if (c == j) c = i;
    q += gain;
    if (q > best.modularity + 1e-14) best = {relabel(community_of), q};
  }
  best.modularity = modularity(A, best.assignment);
  return best;
}

}  // namespace hdgc
