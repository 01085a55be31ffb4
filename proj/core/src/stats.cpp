#include "cml/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cml/errors.hpp"

namespace cml::stats {

namespace {

long double sum_of(std::span<const double> xs) {
  long double s = 0.0L;
  for (double x : xs) s += x;
  return s;
}

}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) throw NumericError("mean of empty sample");
  return static_cast<double>(sum_of(xs) / static_cast<long double>(xs.size()));
}

double variance(std::span<const double> xs) { return moments(xs).variance; }

Moments moments(std::span<const double> xs) {
  if (xs.empty()) throw NumericError("moments of empty sample");
  const long double n = static_cast<long double>(xs.size());
  const long double m = sum_of(xs) / n;
  long double m2 = 0.0L, m4 = 0.0L;
  for (double x : xs) {
    const long double d = x - m;
    const long double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  Moments out;
  out.mean = static_cast<double>(m);
  out.variance = static_cast<double>(m2);
  out.excess_kurtosis =
      m2 > 0.0L ? static_cast<double>(m4 / (m2 * m2) - 3.0L) : 0.0;
  return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw NumericError("linear_fit needs two equally sized samples, n >= 2");
  const long double n = static_cast<long double>(x.size());
  const long double mx = sum_of(x) / n;
  const long double my = sum_of(y) / n;
  long double sxx = 0.0L, sxy = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double dx = x[i] - mx;
    const long double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0L) throw NumericError("linear_fit on degenerate x values");
  LinearFit fit;
  fit.slope = static_cast<double>(sxy / sxx);
  fit.intercept = static_cast<double>(my - (sxy / sxx) * mx);
  fit.r_squared =
      syy > 0.0L ? static_cast<double>((sxy * sxy) / (sxx * syy)) : 1.0;
  return fit;
}

namespace {

// Series and continued-fraction evaluation of the regularized incomplete
// gamma functions (Numerical Recipes style).
double gamma_p_series(double a, double x) {
  const int kMaxIter = 500;
  const double eps = std::numeric_limits<double>::epsilon();
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * eps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const int kMaxIter = 500;
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw NumericError("regularized_gamma_q domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double chi_squared_pvalue(double chi2, int dof) {
  if (dof < 1) throw NumericError("chi_squared_pvalue needs dof >= 1");
  if (chi2 <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * chi2);
}

double ks_uniform_pvalue(std::vector<double> samples) {
  if (samples.empty()) throw NumericError("ks test on empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, samples[i] - lo, hi - samples[i]});
  }
  const double sn = std::sqrt(n);
  const double t = (sn + 0.12 + 0.11 / sn) * d;
  // Kolmogorov tail sum 2 * sum (-1)^{k-1} exp(-2 k^2 t^2).
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    p += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * p, 0.0, 1.0);
}

double binomial_stderr(double p, std::int64_t n) {
  if (n <= 0) throw NumericError("binomial_stderr needs n >= 1");
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace cml::stats
