#include "cml/twoslit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cml/errors.hpp"
#include "cml/metric.hpp"
#include "cml/parallel.hpp"
#include "cml/rng.hpp"
#include "cml/stats.hpp"

namespace cml {

void SlitGeometry::validate() const {
  if (screen_distance <= 0.0 || slit_separation <= 0.0)
    throw NumericError("slit geometry needs D > 0 and d > 0");
  if (bins < 16) throw NumericError("slit geometry needs bins >= 16");
  if (lambda <= 0.0) throw NumericError("slit geometry needs lambda > 0");
  if (!(x_min < x_max)) throw NumericError("slit geometry needs x_min < x_max");
}

PathLengths path_lengths(const SlitGeometry& geom, double x) {
  PathLengths p;
  p.l1 = std::hypot(geom.screen_distance, x - geom.slit_separation / 2.0);
  p.l2 = std::hypot(geom.screen_distance, x + geom.slit_separation / 2.0);
  return p;
}

namespace {

double bin_center(const SlitGeometry& geom, int b) {
  const double step = (geom.x_max - geom.x_min) / geom.bins;
  return geom.x_min + (b + 0.5) * step;
}

std::vector<double> envelope_weights(const SlitGeometry& geom) {
  const double w = geom.envelope_w();
  std::vector<double> out(static_cast<std::size_t>(geom.bins));
  for (int b = 0; b < geom.bins; ++b) {
    const double x = bin_center(geom, b);
    const double za = (x - geom.slit_separation / 2.0) / w;
    const double zb = (x + geom.slit_separation / 2.0) / w;
    out[b] = std::exp(-0.5 * za * za) + std::exp(-0.5 * zb * zb);
  }
  return out;
}

std::vector<double> fringe_weights(const SlitGeometry& geom) {
  std::vector<double> out(static_cast<std::size_t>(geom.bins));
  for (int b = 0; b < geom.bins; ++b) {
    const PathLengths p = path_lengths(geom, bin_center(geom, b));
    const double alpha = 2.0 * std::numbers::pi * p.l1 / geom.lambda;
    const double beta = 2.0 * std::numbers::pi * p.l2 / geom.lambda;
    out[b] = interference_density(alpha, beta);
  }
  return out;
}

}  // namespace

GridDistribution envelope_density(const SlitGeometry& geom) {
  geom.validate();
  const double step = (geom.x_max - geom.x_min) / geom.bins;
  return GridDistribution(geom.x_min + 0.5 * step, step,
                          envelope_weights(geom));
}

GridDistribution two_slit_density(const SlitGeometry& geom) {
  geom.validate();
  const double step = (geom.x_max - geom.x_min) / geom.bins;
  return GridDistribution(
      geom.x_min + 0.5 * step, step,
      geom.detector_a_on ? envelope_weights(geom) : fringe_weights(geom));
}

double fringe_visibility(const std::vector<double>& observed,
                         const std::vector<double>& reference,
                         double reference_cut) {
  if (observed.size() != reference.size() || observed.empty())
    throw NumericError("fringe_visibility needs matching non-empty inputs");
  double ref_max = 0.0;
  for (double r : reference) ref_max = std::max(ref_max, r);
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t b = 0; b < observed.size(); ++b) {
    if (reference[b] < reference_cut * ref_max) continue;
    const double ratio = observed[b] / reference[b];
    if (first) {
      lo = hi = ratio;
      first = false;
    } else {
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  if (first || hi + lo <= 0.0) return 0.0;
  return (hi - lo) / (hi + lo);
}

TwoSlitReport two_slit_experiment(const SlitGeometry& geom, std::int64_t n,
                                  std::uint64_t seed) {
  geom.validate();
  if (n < 1) throw NumericError("two_slit_experiment needs n >= 1");

  GridDistribution density = two_slit_density(geom);
  const auto weights = density.weights();
  std::vector<double> cdf(weights.size());
  long double acc = 0.0L;
  for (std::size_t b = 0; b < weights.size(); ++b) {
    acc += weights[b];
    cdf[b] = static_cast<double>(acc);
  }
  cdf.back() = 1.0;

  const double w = geom.envelope_w();
  const auto slit_a_share = [&](double x) {
    const double za = (x - geom.slit_separation / 2.0) / w;
    const double zb = (x + geom.slit_separation / 2.0) / w;
    const double wa = std::exp(-0.5 * za * za);
    const double wb = std::exp(-0.5 * zb * zb);
    return wa + wb > 0.0 ? wa / (wa + wb) : 0.5;
  };

  const std::int64_t kChunk = 65536;
  const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;
  const std::size_t bins = weights.size();
  std::vector<std::int64_t> hist(n_chunks * bins, 0);
  std::vector<std::int64_t> slit_a(static_cast<std::size_t>(n_chunks), 0);

  par::parallel_chunks(n, kChunk, [&](std::int64_t bgn, std::int64_t end,
                                      std::int64_t chunk) {
    for (std::int64_t i = bgn; i < end; ++i) {
      const double u = u01(hash_all(seed, static_cast<std::uint64_t>(i), 1ull));
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const std::size_t b = std::min(
          bins - 1, static_cast<std::size_t>(it - cdf.begin()));
      ++hist[chunk * bins + b];
      const double u2 =
          u01(hash_all(seed, static_cast<std::uint64_t>(i), 2ull));
      if (u2 < slit_a_share(density.value_at(b))) ++slit_a[chunk];
    }
  });

  TwoSlitReport rep{std::move(density), {}, n, 0, 0, 0.0, 0, 0.0, 0.0};
  rep.counts.assign(bins, 0);
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    for (std::size_t b = 0; b < bins; ++b)
      rep.counts[b] += hist[c * bins + b];
    rep.slit_a += slit_a[c];
  }
  rep.slit_b = n - rep.slit_a;

  // Chi-square against the sampling density, adjacent bins merged until the
  // expected count reaches 5.
  double chi = 0.0;
  int cells = 0;
  double exp_acc = 0.0, obs_acc = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    exp_acc += weights[b] * static_cast<double>(n);
    obs_acc += static_cast<double>(rep.counts[b]);
    if (exp_acc >= 5.0) {
      const double d = obs_acc - exp_acc;
      chi += d * d / exp_acc;
      ++cells;
      exp_acc = 0.0;
      obs_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 && cells > 0) {
    // Fold the remainder into the last cell.
    const double d = obs_acc - exp_acc;
    chi += d * d / exp_acc;
  }
  rep.chi_square = chi;
  rep.chi_dof = std::max(1, cells - 1);
  rep.p_value = stats::chi_squared_pvalue(chi, rep.chi_dof);

  std::vector<double> observed(bins);
  for (std::size_t b = 0; b < bins; ++b)
    observed[b] = static_cast<double>(rep.counts[b]) / static_cast<double>(n);
  std::vector<double> reference(envelope_weights(geom));
  long double ref_sum = 0.0L;
  for (double r : reference) ref_sum += r;
  for (double& r : reference) r = static_cast<double>(r / ref_sum);
  rep.fringe_visibility = fringe_visibility(observed, reference);
  return rep;
}

}  // namespace cml
