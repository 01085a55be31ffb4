#include "cml/field.hpp"

#include <cmath>
#include <numbers>

#include "cml/errors.hpp"
#include "cml/parallel.hpp"

namespace cml {

void FluctuationModel::set_sigma(int i, int j, double v) {
  sigma_[i * 4 + j] = v;
  sigma_[j * 4 + i] = v;
}

void FluctuationModel::set_diagonal_sigma(double v) {
  for (int i = 0; i < 4; ++i) set_sigma(i, i, v);
}

void FluctuationModel::set_all_sigma(double v) {
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) set_sigma(i, j, v);
}

FluctuationModel FluctuationModel::defaults() {
  FluctuationModel m;
  m.set_diagonal_sigma(0.05);
  return m;
}

void FluctuationModel::validate() const {
  for (double s : sigma_)
    if (s < 0.0) throw ConfigError("fluctuation amplitudes must be >= 0");
  if (damping_radius <= 0.0)
    throw ConfigError("damping_radius must be positive");
  if (mode == FieldMode::crypto &&
      (frequency < 1e30 || frequency > 1e43))
    throw ConfigError("crypto frequency must lie in [1e30, 1e43] Hz");
}

double damping_factor(const FluctuationModel& model, const Venue& venue) {
  if (model.mass_positions.empty()) return 1.0;
  double min_d2 = -1.0;
  for (const Venue& m : model.mass_positions) {
    const double dx = static_cast<double>(venue.ix - m.ix);
    const double dy = static_cast<double>(venue.iy - m.iy);
    const double dz = static_cast<double>(venue.iz - m.iz);
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (min_d2 < 0.0 || d2 < min_d2) min_d2 = d2;
  }
  const double s = std::sqrt(min_d2) / model.damping_radius;
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * (3.0 - 2.0 * s);
}

double crypto_phase(const FluctuationModel& model, const Venue& venue, int i,
                    int j) {
  const std::uint64_t h =
      hash_all(model.phase_seed, venue.ix, venue.iy, venue.iz, venue.it,
               static_cast<std::uint64_t>(i * 4 + j));
  return 2.0 * std::numbers::pi * u01(h);
}

Metric4 sample_metric(const FluctuationModel& model, const Venue& venue,
                      double phase_time, RandomStream& draw) {
  const double d = damping_factor(model, venue);
  Metric4 g = minkowski();
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      double delta = 0.0;
      if (model.mode == FieldMode::stochastic) {
        // One deviate per component even when the amplitude is zero keeps
        // the draw order independent of the sigma configuration.
        const double z = draw.next_gaussian();
        delta = model.sigma(i, j) * d * z;
      } else {
        delta = model.sigma(i, j) * d *
                std::cos(2.0 * std::numbers::pi * model.frequency * phase_time +
                         crypto_phase(model, venue, i, j));
      }
      g.set(i, j, g(i, j) + delta);
    }
  return g;
}

Metric4 sample_metric(const FluctuationModel& model, const Venue& venue,
                      double phase_time) {
  RandomStream unused(0);
  return sample_metric(model, venue, phase_time, unused);
}

Metric4 region_average(const FluctuationModel& model,
                       const std::vector<Venue>& venues, double phase_time,
                       RandomStream& draw) {
  if (venues.empty()) throw NumericError("region_average over no venues");
  Metric4 acc;
  for (const Venue& v : venues) {
    const Metric4 g = sample_metric(model, v, phase_time, draw);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) acc.set(i, j, acc(i, j) + g(i, j));
  }
  const double inv = 1.0 / static_cast<double>(venues.size());
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) acc.set(i, j, acc(i, j) * inv);
  return acc;
}

VarianceScalingReport variance_scaling_experiment(
    const FluctuationModel& model, const std::vector<std::int64_t>& m_values,
    std::int64_t trials, std::uint64_t seed, std::array<int, 2> component) {
  if (trials < 2) throw NumericError("variance scaling needs trials >= 2");
  VarianceScalingReport rep;
  std::vector<double> log_m, log_var;
  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    const std::int64_t m = m_values[mi];
    if (m < 1) throw NumericError("variance scaling needs m >= 1");
    std::vector<Venue> venues(static_cast<std::size_t>(m));
    for (std::int64_t k = 0; k < m; ++k) venues[k].ix = k;

    std::vector<double> values(static_cast<std::size_t>(trials));
    par::parallel_chunks(trials, 64, [&](std::int64_t b, std::int64_t e,
                                         std::int64_t) {
      for (std::int64_t t = b; t < e; ++t) {
        RandomStream stream = RandomStream::from(seed, mi, t);
        double phase_time = 0.0;
        if (model.mode == FieldMode::crypto)
          phase_time = u01(hash_all(seed, mi, t)) / model.frequency;
        const Metric4 avg = region_average(model, venues, phase_time, stream);
        values[t] = avg(component[0], component[1]);
      }
    });
    const double var = stats::variance(values);
    rep.rows.push_back({m, var});
    if (var > 0.0) {
      log_m.push_back(std::log(static_cast<double>(m)));
      log_var.push_back(std::log(var));
    }
  }
  if (log_m.size() >= 2) rep.loglog = stats::linear_fit(log_m, log_var);
  return rep;
}

}  // namespace cml
