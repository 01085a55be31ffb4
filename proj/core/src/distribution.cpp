#include "cml/distribution.hpp"

#include <cmath>

#include "cml/errors.hpp"

namespace cml {

namespace {

void normalize(std::vector<double>& w) {
  long double sum = 0.0L;
  for (double x : w) {
    if (x < 0.0) throw NumericError("grid distribution weight is negative");
    sum += x;
  }
  if (!(sum > 0.0L)) throw NumericError("grid distribution has zero mass");
  const double inv = static_cast<double>(1.0L / sum);
  for (double& x : w) x *= inv;
}

}  // namespace

GridDistribution::GridDistribution(double origin, double step,
                                   std::vector<double> weights)
    : origin_(origin), step_(step), weights_(std::move(weights)) {
  if (step_ <= 0.0) throw NumericError("grid distribution step must be > 0");
  if (weights_.empty()) throw NumericError("grid distribution is empty");
  normalize(weights_);
}

double GridDistribution::mean() const {
  long double m = 0.0L;
  for (std::size_t k = 0; k < weights_.size(); ++k)
    m += static_cast<long double>(weights_[k]) * value_at(k);
  return static_cast<double>(m);
}

double GridDistribution::variance() const {
  const double m = mean();
  long double v = 0.0L;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const long double d = value_at(k) - m;
    v += static_cast<long double>(weights_[k]) * d * d;
  }
  return static_cast<double>(v);
}

double GridDistribution::excess_kurtosis() const {
  const double m = mean();
  long double m2 = 0.0L, m4 = 0.0L;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const long double d = value_at(k) - m;
    const long double d2 = d * d;
    m2 += static_cast<long double>(weights_[k]) * d2;
    m4 += static_cast<long double>(weights_[k]) * d2 * d2;
  }
  if (!(m2 > 0.0L)) return 0.0;
  return static_cast<double>(m4 / (m2 * m2) - 3.0L);
}

GridDistribution GridDistribution::point_mass(double x, double step) {
  return GridDistribution(x, step, {1.0});
}

GridDistribution GridDistribution::gaussian(double mean, double stddev,
                                            double step,
                                            double half_width_sigmas) {
  if (stddev <= 0.0) throw NumericError("gaussian grid needs stddev > 0");
  const double half = half_width_sigmas * stddev;
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * half / step)) + 1;
  std::vector<double> w(n);
  const double origin = mean - 0.5 * step * static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = (origin + step * k - mean) / stddev;
    w[k] = std::exp(-0.5 * z * z);
  }
  return GridDistribution(origin, step, std::move(w));
}

GridDistribution GridDistribution::uniform(double a, double b,
                                           std::size_t points) {
  if (points < 2 || b <= a) throw NumericError("uniform grid needs b > a");
  const double step = (b - a) / static_cast<double>(points - 1);
  return GridDistribution(a, step, std::vector<double>(points, 1.0));
}

GridDistribution convolve(const GridDistribution& d1,
                          const GridDistribution& d2) {
  const double rel = std::fabs(d1.step() - d2.step()) /
                     std::max(d1.step(), d2.step());
  if (rel > 1e-12)
    throw NumericError("convolve: mismatched grid steps");
  const auto w1 = d1.weights();
  const auto w2 = d2.weights();
  std::vector<double> out(w1.size() + w2.size() - 1, 0.0);
  for (std::size_t i = 0; i < w1.size(); ++i) {
    const double a = w1[i];
    if (a == 0.0) continue;
    for (std::size_t j = 0; j < w2.size(); ++j) out[i + j] += a * w2[j];
  }
  return GridDistribution(d1.origin() + d2.origin(), d1.step(),
                          std::move(out));
}

GridDistribution clt_spread(const GridDistribution& d1, int n) {
  if (n < 1) throw NumericError("clt_spread needs n >= 1");
  GridDistribution acc = d1;
  for (int k = 1; k < n; ++k) acc = convolve(acc, d1);
  return acc;
}

}  // namespace cml
