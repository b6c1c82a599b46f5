#pragma once

// Reference implementations used only by the tests. Each one takes a
// different computational route from the library code it checks.

#include <Eigen/Dense>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using big = boost::multiprecision::cpp_bin_float_50;

// Classical system LM test without any selection. Each caused equation
// regresses on every lag 1..p of the non-causing series plus lags p+1..p+d of
// the causing series; the tested block adds lags 1..p of the causing series.
// Restricted model estimated by GLS with a Cholesky root of Sigma; the
// statistic is the score form u' Om^-1 X (X' Om^-1 X)^-1 X' Om^-1 u.
inline double textbook_lm(const Matrix& Y, const std::vector<int>& caused, const std::vector<int>& causing, int p,
                          int d) {
  const Index T_all = Y.rows();
  const int K = static_cast<int>(Y.cols());
  const Index first = p + d;
  const Index T = T_all - first;
  const auto n_i = static_cast<Index>(caused.size());

  std::vector<int> others;
  for (int k = 0; k < K; ++k)
    if (std::find(causing.begin(), causing.end(), k) == causing.end()) others.push_back(k);

  const Index n_r = static_cast<Index>(others.size()) * p + static_cast<Index>(causing.size()) * d;
  const Index n_g = static_cast<Index>(causing.size()) * p;
  Matrix R(T, n_r), G(T, n_g);
  for (Index r = 0; r < T; ++r) {
    const Index t = first + r;
    Index c = 0;
    for (int k : others)
      for (int l = 1; l <= p; ++l) R(r, c++) = Y(t - l, k);
    for (int k : causing)
      for (int l = p + 1; l <= p + d; ++l) R(r, c++) = Y(t - l, k);
    c = 0;
    for (int k : causing)
      for (int l = 1; l <= p; ++l) G(r, c++) = Y(t - l, k);
  }

  // Sigma from equation-wise OLS residuals of the restricted model.
  Matrix U(T, n_i);
  for (Index e = 0; e < n_i; ++e) {
    const Vector y = Y.col(caused[static_cast<std::size_t>(e)]).tail(T);
    U.col(e) = y - R * R.colPivHouseholderQr().solve(y);
  }
  const Matrix sigma = U.transpose() * U / static_cast<double>(T);
  const Matrix L = sigma.llt().matrixL();
  const Matrix Linv = L.triangularView<Eigen::Lower>().solve(Matrix::Identity(n_i, n_i));

  auto stack = [&](const Matrix& B) {
    Matrix S = Matrix::Zero(T * n_i, n_i * B.cols());
    for (Index e = 0; e < n_i; ++e)
      for (Index f = 0; f <= e; ++f) S.block(e * T, f * B.cols(), T, B.cols()) = Linv(e, f) * B;
    return S;
  };
  Vector ys(T * n_i);
  for (Index e = 0; e < n_i; ++e) {
    Vector acc = Vector::Zero(T);
    for (Index f = 0; f <= e; ++f) acc += Linv(e, f) * Y.col(caused[static_cast<std::size_t>(f)]).tail(T);
    ys.segment(e * T, T) = acc;
  }
  const Matrix Rs = stack(R);
  Matrix Xs(T * n_i, Rs.cols() + n_i * n_g);
  Xs << Rs, stack(G);

  const Vector u = ys - Rs * Rs.colPivHouseholderQr().solve(ys);
  const Vector g = Xs.transpose() * u;
  return g.dot((Xs.transpose() * Xs).ldlt().solve(g));
}

// Lasso minimiser by enumerating every sign pattern: for a fixed pattern the
// objective is a quadratic whose stationary point is available in closed form;
// the best sign-consistent candidate is the global minimum.
inline Vector brute_force_lasso(const Matrix& X, const Vector& y, const Vector& w, double lambda) {
  const Index N = X.cols();
  const double T = static_cast<double>(X.rows());
  const Vector s = (X.colwise().squaredNorm().transpose() / T).cwiseSqrt();
  auto objective = [&](const Vector& b) {
    return (y - X * b).squaredNorm() / T + lambda * (w.cwiseProduct(s).cwiseProduct(b.cwiseAbs())).sum();
  };
  Vector best = Vector::Zero(N);
  double best_obj = objective(best);
  std::vector<int> sign(static_cast<std::size_t>(N), 0);
  const auto total = static_cast<long>(std::pow(3.0, static_cast<double>(N)));
  for (long code = 1; code < total; ++code) {
    long c = code;
    std::vector<Index> act;
    for (Index m = 0; m < N; ++m) {
      sign[static_cast<std::size_t>(m)] = static_cast<int>(c % 3) - 1;
      c /= 3;
      if (sign[static_cast<std::size_t>(m)] != 0) act.push_back(m);
    }
    const auto a = static_cast<Index>(act.size());
    Matrix XA(X.rows(), a);
    Vector rhs(a);
    for (Index i = 0; i < a; ++i) {
      const Index m = act[static_cast<std::size_t>(i)];
      XA.col(i) = X.col(m);
    }
    rhs = XA.transpose() * y / T;
    for (Index i = 0; i < a; ++i) {
      const Index m = act[static_cast<std::size_t>(i)];
      rhs(i) -= 0.5 * lambda * w(m) * s(m) * sign[static_cast<std::size_t>(m)];
    }
    const Matrix G = XA.transpose() * XA / T;
    Eigen::FullPivLU<Matrix> lu(G);
    if (!lu.isInvertible()) continue;
    const Vector bA = lu.solve(rhs);
    bool consistent = true;
    for (Index i = 0; i < a; ++i)
      if (bA(i) * sign[static_cast<std::size_t>(act[static_cast<std::size_t>(i)])] <= 0.0) consistent = false;
    if (!consistent) continue;
    Vector b = Vector::Zero(N);
    for (Index i = 0; i < a; ++i) b(act[static_cast<std::size_t>(i)]) = bA(i);
    const double o = objective(b);
    if (o < best_obj) {
      best_obj = o;
      best = b;
    }
  }
  return best;
}

using Adjacency = std::vector<std::vector<bool>>;

inline Adjacency random_digraph(int n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  Adjacency a(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) a[i][j] = coin(rng);
  return a;
}

// Every simple path s -> t: for every subset of intermediate vertices try
// every ordering.
inline std::set<std::vector<int>> brute_force_paths(const Adjacency& a, int s, int t) {
  const int n = static_cast<int>(a.size());
  std::vector<int> middle;
  for (int v = 0; v < n; ++v)
    if (v != s && v != t) middle.push_back(v);
  std::set<std::vector<int>> out;
  const int m = static_cast<int>(middle.size());
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> chosen;
    for (int i = 0; i < m; ++i)
      if (mask & (1 << i)) chosen.push_back(middle[static_cast<std::size_t>(i)]);
    do {
      std::vector<int> path{s};
      path.insert(path.end(), chosen.begin(), chosen.end());
      path.push_back(t);
      bool ok = true;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) ok = ok && a[path[i]][path[i + 1]];
      if (ok) out.insert(path);
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return out;
}

// Every simple cycle through v, as the vertex sequence starting at v.
inline std::set<std::vector<int>> brute_force_cycles(const Adjacency& a, int v) {
  const int n = static_cast<int>(a.size());
  std::vector<int> rest;
  for (int u = 0; u < n; ++u)
    if (u != v) rest.push_back(u);
  std::set<std::vector<int>> out;
  const int m = static_cast<int>(rest.size());
  for (int mask = 1; mask < (1 << m); ++mask) {
    std::vector<int> chosen;
    for (int i = 0; i < m; ++i)
      if (mask & (1 << i)) chosen.push_back(rest[static_cast<std::size_t>(i)]);
    do {
      std::vector<int> cyc{v};
      cyc.insert(cyc.end(), chosen.begin(), chosen.end());
      bool ok = a[cyc.back()][v];
      for (std::size_t i = 0; i + 1 < cyc.size(); ++i) ok = ok && a[cyc[i]][cyc[i + 1]];
      if (ok) out.insert(cyc);
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return out;
}

// Modularity as sum over communities of L_c / m - (D_c / 2m)^2 on an
// undirected 0/1 adjacency.
inline double community_modularity(const Adjacency& und, const std::vector<int>& part) {
  const int n = static_cast<int>(und.size());
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m += und[i][j] ? 1.0 : 0.0;
  if (m == 0.0) return 0.0;
  const int nc = *std::max_element(part.begin(), part.end()) + 1;
  std::vector<double> inside(static_cast<std::size_t>(nc), 0.0), degree(static_cast<std::size_t>(nc), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!und[i][j]) continue;
      degree[static_cast<std::size_t>(part[i])] += 1.0;
      if (i < j && part[i] == part[j]) inside[static_cast<std::size_t>(part[i])] += 1.0;
    }
  double q = 0.0;
  for (int c = 0; c < nc; ++c)
    q += inside[static_cast<std::size_t>(c)] / m - std::pow(degree[static_cast<std::size_t>(c)] / (2.0 * m), 2);
  return q;
}

// Maximum modularity over every set partition (restricted growth strings).
inline double exhaustive_max_modularity(const Adjacency& und) {
  const int n = static_cast<int>(und.size());
  std::vector<int> part(static_cast<std::size_t>(n), 0);
  double best = -1.0;
  auto rec = [&](auto&& self, int i, int used) -> void {
    if (i == n) {
      best = std::max(best, community_modularity(und, part));
      return;
    }
    for (int c = 0; c <= used; ++c) {
      part[static_cast<std::size_t>(i)] = c;
      self(self, i + 1, std::max(used, c + 1));
    }
  };
  part[0] = 0;
  rec(rec, 1, 1);
  return best;
}

inline Adjacency undirected(const Adjacency& a) {
  Adjacency u = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) u[i][j] = a[i][j] || a[j][i];
  return u;
}

// Forcing formulas evaluated in 50-digit arithmetic.
inline big co2_forcing(big c, big c0 = 280) {
  auto f = [](big x) { return big(5.04) * log(x + big("0.0005") * x * x); };
  return f(c) - f(c0);
}

inline big overlap(big m, big n) { return big("0.5") * log(1 + big("0.00002") * pow(m * n, big("0.75"))); }

inline big ch4_forcing(big m, big m0 = 700, big n0 = 275) {
  return big("0.04") * (sqrt(m) - sqrt(m0)) - (overlap(m, n0) - overlap(m0, n0));
}

inline big n2o_forcing(big n, big m0 = 700, big n0 = 275) {
  return big("0.14") * (sqrt(n) - sqrt(n0)) - (overlap(m0, n) - overlap(m0, n0));
}

inline double chi2_quantile(double prob, double df) {
  boost::math::chi_squared_distribution<big> dist{big(df)};
  return static_cast<double>(boost::math::quantile(dist, big(prob)));
}

inline double chi2_sf(double x, double df) {
  boost::math::chi_squared_distribution<big> dist{big(df)};
  return static_cast<double>(boost::math::cdf(boost::math::complement(dist, big(x))));
}

inline double f_quantile(double prob, double d1, double d2) {
  boost::math::fisher_f_distribution<big> dist{big(d1), big(d2)};
  return static_cast<double>(boost::math::quantile(dist, big(prob)));
}

inline double f_sf(double x, double d1, double d2) {
  boost::math::fisher_f_distribution<big> dist{big(d1), big(d2)};
  return static_cast<double>(boost::math::cdf(boost::math::complement(dist, big(x))));
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

}  // namespace oracle
