#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cml::stats {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population variance
  double excess_kurtosis = 0.0;
};

Moments moments(std::span<const double> xs);
double mean(std::span<const double> xs);
double variance(std::span<const double> xs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

/// Upper-tail p-value of a chi-squared statistic with `dof` degrees of freedom.
double chi_squared_pvalue(double chi2, int dof);

/// Kolmogorov-Smirnov uniformity test on samples expected ~ U[0,1).
/// Returns the asymptotic p-value (small sample correction applied).
double ks_uniform_pvalue(std::vector<double> samples);

/// Standard error of a binomial fraction estimate at probability p.
double binomial_stderr(double p, std::int64_t n);

}  // namespace cml::stats
