#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cml {

/// Probability distribution on a uniform grid: weight k sits at
/// origin + k * step. Weights are non-negative and renormalize to unit sum
/// on construction (and after every convolution, to absorb drift).
class GridDistribution {
 public:
  GridDistribution(double origin, double step, std::vector<double> weights);

  double origin() const { return origin_; }
  double step() const { return step_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double value_at(std::size_t k) const { return origin_ + step_ * k; }

  double mean() const;
  double variance() const;
  double excess_kurtosis() const;

  static GridDistribution point_mass(double x, double step);
  static GridDistribution gaussian(double mean, double stddev, double step,
                                   double half_width_sigmas = 8.0);
  static GridDistribution uniform(double a, double b, std::size_t points);

 private:
  double origin_;
  double step_;
  std::vector<double> weights_;
};

/// Discrete convolution; the grids must share the step size. Support length
/// is len1 + len2 - 1 and the result is renormalized. Mean and variance add.
GridDistribution convolve(const GridDistribution& d1,
                          const GridDistribution& d2);

/// n-fold self-convolution: the distribution of a sum of n independent
/// copies. Variance grows linearly and the excess kurtosis shrinks as 1/n.
GridDistribution clt_spread(const GridDistribution& d1, int n);

}  // namespace cml
