#include "hdgc/distributions.hpp"

#include "hdgc/error.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace hdgc {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

// Series for P(a, x), valid and fast for x < a + 1.
double gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz), for x >= a + 1.
double gamma_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || std::isnan(v)) throw ValidationError(std::string(what) + " must be positive");
}

void require_prob(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("probability must lie in (0, 1), got " + std::to_string(p));
}

// Inverts a continuous increasing cdf on (0, inf). Works on whichever tail is
// smaller so that probabilities near 1 keep full relative accuracy.
double invert(double prob, const std::function<double(double)>& cdf, const std::function<double(double)>& sf,
              double guess) {
  const bool upper = prob > 0.5;
  const double target = upper ? 1.0 - prob : prob;
  // g(x) increasing in x, root at g = 0
  auto g = [&](double x) { return upper ? target - sf(x) : cdf(x) - target; };

  double lo = 0.0;
  double hi = guess > 0.0 ? guess : 1.0;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("quantile: failed to bracket root");
  }
  while (lo == 0.0 && hi > 1e-300) {
    const double half = 0.5 * hi;
    if (g(half) < 0.0)
      lo = half;
    else
      hi = half;
  }
  if (lo == 0.0) return hi;

  // Geometric bisection: the bracket spans a positive interval.
  for (int i = 0; i < 2000; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double gamma_p(double a, double x) {
  require_positive(a, "gamma_p: shape");
  if (x < 0.0 || std::isnan(x)) throw ValidationError("gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? gamma_series(a, x) : 1.0 - gamma_cf(a, x);
}

double gamma_q(double a, double x) {
  require_positive(a, "gamma_q: shape");
  if (x < 0.0 || std::isnan(x)) throw ValidationError("gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - gamma_series(a, x) : gamma_cf(a, x);
}

double beta_inc(double a, double b, double x) {
  require_positive(a, "beta_inc: a");
  require_positive(b, "beta_inc: b");
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("beta_inc: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double chi2_cdf(double x, double df) {
  require_positive(df, "chi2: degrees of freedom");
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double x, double df) {
  require_positive(df, "chi2: degrees of freedom");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * x);
}

double chi2_quantile(double prob, double df) {
  require_prob(prob);
  require_positive(df, "chi2: degrees of freedom");
  return invert(
      prob, [df](double x) { return chi2_cdf(x, df); }, [df](double x) { return chi2_sf(x, df); }, df);
}

double f_cdf(double x, double df1, double df2) {
  require_positive(df1, "F: df1");
  require_positive(df2, "F: df2");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return beta_inc(0.5 * df1, 0.5 * df2, df1 * x / (df1 * x + df2));
}

double f_sf(double x, double df1, double df2) {
  require_positive(df1, "F: df1");
  require_positive(df2, "F: df2");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return beta_inc(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * x));
}

double f_quantile(double prob, double df1, double df2) {
  require_prob(prob);
  require_positive(df1, "F: df1");
  require_positive(df2, "F: df2");
  return invert(
      prob, [=](double x) { return f_cdf(x, df1, df2); }, [=](double x) { return f_sf(x, df1, df2); }, 1.0);
}

}  // namespace hdgc
