#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cml/metric.hpp"
#include "cml/rng.hpp"
#include "cml/stats.hpp"

namespace cml {

/// Discrete space-time point on a grainy lattice.
struct Venue {
  std::int64_t ix = 0, iy = 0, iz = 0, it = 0;
  double grain = 1.0;  // lattice spacing, > 0

  Vec4 position() const {
    return {ix * grain, iy * grain, iz * grain, it * grain};
  }
  friend bool operator==(const Venue& a, const Venue& b) {
    return a.ix == b.ix && a.iy == b.iy && a.iz == b.iz && a.it == b.it;
  }
};

enum class FieldMode { stochastic, crypto };

/// Describes how the metric deviates from flat space around venues.
///
/// stochastic mode: each of the 10 independent components gets an
/// independent Gaussian deviation with standard deviation sigma(i,j) scaled
/// by the mass damping factor.
///
/// crypto mode: the same amplitudes drive deterministic oscillations
/// sigma(i,j) * d * cos(2 pi frequency * t + phi_ij(venue)) whose per-venue
/// phase offsets are hashed from (phase_seed, venue, component). Nothing is
/// random; the frequency is merely too high to resolve.
class FluctuationModel {
 public:
  FieldMode mode = FieldMode::stochastic;
  double frequency = 1e36;  // Hz; admissible crypto band is [1e30, 1e43]
  std::uint64_t phase_seed = 0;
  std::vector<Venue> mass_positions;
  double damping_radius = 4.0;  // grains

  /// Component amplitudes. Defaults: 0.05 on the diagonal, 0 off-diagonal.
  /// The time-time amplitude is kept at the same level as the spatial ones
  /// so that a particle at rest still couples to the fluctuations.
  double sigma(int i, int j) const { return sigma_[i * 4 + j]; }
  void set_sigma(int i, int j, double v);
  void set_diagonal_sigma(double v);
  void set_all_sigma(double v);

  static FluctuationModel defaults();

  /// Throws ConfigError on negative amplitudes, non-positive damping radius,
  /// or a crypto frequency outside [1e30, 1e43] Hz.
  void validate() const;

 private:
  std::array<double, 16> sigma_{};
};

/// Mass damping factor in [0, 1]: exactly 0 at a mass position, smoothstep
/// in spatial lattice distance, exactly 1 at or beyond damping_radius.
double damping_factor(const FluctuationModel& model, const Venue& venue);

/// Deterministic per-venue, per-component phase offset in [0, 2 pi).
double crypto_phase(const FluctuationModel& model, const Venue& venue, int i,
                    int j);

/// One metric sample at a venue. Stochastic mode consumes exactly 10
/// Gaussian deviates from `draw` (one per independent component, in fixed
/// order); crypto mode consumes nothing and is a pure function of
/// (model, venue, phase_time).
Metric4 sample_metric(const FluctuationModel& model, const Venue& venue,
                      double phase_time, RandomStream& draw);

/// Crypto-mode convenience overload (no stream involved).
Metric4 sample_metric(const FluctuationModel& model, const Venue& venue,
                      double phase_time);

/// Entrywise mean of one sample per venue.
Metric4 region_average(const FluctuationModel& model,
                       const std::vector<Venue>& venues, double phase_time,
                       RandomStream& draw);

struct VarianceScalingRow {
  std::int64_t m = 0;     // venues averaged over (the one-dimensional volume)
  double variance = 0.0;  // across trials, of the averaged component
};

struct VarianceScalingReport {
  std::vector<VarianceScalingRow> rows;
  stats::LinearFit loglog;  // fit of log(var) against log(m)
};

/// Empirical variance of the volume-averaged component across `trials`
/// independent draws, for each m in m_values. In stochastic mode every trial
/// uses a fresh stream derived from (seed, m index, trial); in crypto mode
/// every trial uses a hashed phase_time inside one oscillation period.
/// component is the (row, col) pair observed, default the z-z entry.
VarianceScalingReport variance_scaling_experiment(
    const FluctuationModel& model, const std::vector<std::int64_t>& m_values,
    std::int64_t trials, std::uint64_t seed,
    std::array<int, 2> component = {2, 2});

}  // namespace cml
