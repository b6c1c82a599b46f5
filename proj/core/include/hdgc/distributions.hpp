#pragma once

namespace hdgc {

/// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

double chi2_cdf(double x, double df);
/// Upper tail 1 - cdf, computed without cancellation.
double chi2_sf(double x, double df);
double chi2_quantile(double prob, double df);

double f_cdf(double x, double df1, double df2);
double f_sf(double x, double df1, double df2);
double f_quantile(double prob, double df1, double df2);

}  // namespace hdgc
