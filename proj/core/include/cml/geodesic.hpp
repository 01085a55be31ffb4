#pragma once

#include <functional>
#include <vector>

#include "cml/field.hpp"
#include "cml/metric.hpp"

namespace cml {

struct ParticleState {
  Vec4 x{};  // coordinates, grain units
  Vec4 u{};  // dx/ds per unit geodesic parameter
};

/// Christoffel symbols of the second kind; symmetric in the lower indices.
struct ChristoffelSet {
  std::array<double, 64> g{};
  double& at(int i, int j, int k) { return g[(i * 4 + j) * 4 + k]; }
  double at(int i, int j, int k) const { return g[(i * 4 + j) * 4 + k]; }
};

/// A coherent metric sample over continuous coordinates: one "frozen draw"
/// of the field, smooth enough to differentiate through a stencil.
using MetricField = std::function<Metric4(const Vec4&)>;

/// Produces the frozen field used for one integration step. The field is
/// resampled between steps, never inside a stencil.
using FieldSampler = std::function<MetricField(int step)>;

FieldSampler constant_field(const Metric4& g);
FieldSampler analytic_field(MetricField f);

/// Frozen fluctuating field for one particle: positions are quantized to the
/// nearest lattice venue and the deviation of each component is keyed on
/// (seed, particle, step, venue, component). In crypto mode the oscillation
/// is evaluated at the particle's own unmeasurable phase offset plus the
/// coordinate time, with phase offsets hashed per venue as usual.
FieldSampler fluctuating_field(const FluctuationModel& model,
                               std::uint64_t seed, std::uint64_t particle,
                               double grain = 1.0);

/// Gamma^i_jk = g^il (d_j g_lk + d_k g_lj - d_l g_jk) / 2 with central
/// differences of step `spacing`. Throws NumericError when any stencil
/// metric is singular (|det| < kSingularTol).
ChristoffelSet christoffel(const MetricField& field, const Vec4& x,
                           double spacing);

/// Classic fourth-order integration of x'' + Gamma(x) x' x' = 0, returning
/// every intermediate state (steps + 1 entries including the start). Throws
/// NumericError when a coordinate magnitude passes 1e6 grains (divergence)
/// or when the field turns singular.
std::vector<ParticleState> integrate_geodesic(const FieldSampler& sampler,
                                              const ParticleState& start,
                                              int steps, double ds,
                                              double spacing = 0.5);

struct SpreadReport {
  /// Cross-particle variance of the z coordinate after each step.
  std::vector<double> variance_per_step;
  stats::LinearFit fit;           // variance against step count
  double excess_kurtosis = 0.0;   // of the final positions
  std::vector<double> final_positions;
};

/// Ensemble realization of free-particle spreading. Per step each particle
/// takes one geodesic interval through a freshly frozen field, restarting
/// from the reference velocity, so successive displacements are independent
/// and identically distributed and the ensemble position is their running
/// sum -- the convolution picture, with variance growing linearly in the
/// step count and a Gaussian limit shape.
SpreadReport free_particle_ensemble(const FluctuationModel& model,
                                    int n_particles, int steps, double ds,
                                    std::uint64_t seed, double spacing = 0.5);

}  // namespace cml
