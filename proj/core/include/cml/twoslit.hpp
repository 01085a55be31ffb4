#pragma once

#include <cstdint>
#include <vector>

#include "cml/distribution.hpp"

namespace cml {

/// Two-slit layout. Slits sit at x = +-d/2 in the slit plane, the screen a
/// distance D downstream, binned over [x_min, x_max]. With the slit detector
/// off, the landing density comes from the superposed phase metrics of the
/// two paths; switching the detector on latches the measurement and the
/// density drops to the sum of two single-slit envelopes. The flag is
/// immutable for the lifetime of a run: there is no way to un-measure.
struct SlitGeometry {
  double slit_separation = 10.0;  // d, grains
  double screen_distance = 100.0; // D, grains
  double x_min = -30.0;
  double x_max = 30.0;
  int bins = 64;
  double lambda = 1.0;            // de Broglie wavelength, grains
  bool detector_a_on = false;
  /// Single-slit envelope width; <= 0 selects the default d/4.
  double envelope_width = 0.0;

  double envelope_w() const {
    return envelope_width > 0.0 ? envelope_width : slit_separation / 4.0;
  }
  /// Throws NumericError when a constraint fails (D > 0, d > 0, bins >= 16,
  /// lambda > 0, x_min < x_max).
  void validate() const;
};

/// Slit-to-point path lengths (L1 from slit A at +d/2, L2 from slit B).
struct PathLengths {
  double l1 = 0.0;
  double l2 = 0.0;
};
PathLengths path_lengths(const SlitGeometry& geom, double x);

/// Landing density over the screen bins.
/// Detector off: per bin proportional to the superposed-phase-metric volume
/// element at phases 2 pi L_i / lambda, evaluated through the literal
/// determinant route (equivalently |cos(pi (L1 - L2) / lambda)|).
/// Detector on: two Gaussian single-slit envelopes, no cross term.
GridDistribution two_slit_density(const SlitGeometry& geom);

/// The no-interference envelope for the same geometry (used as the fringe
/// reference regardless of the detector flag).
GridDistribution envelope_density(const SlitGeometry& geom);

struct TwoSlitReport {
  GridDistribution expected;      // density the samples were drawn against
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;
  std::int64_t slit_a = 0;        // diagnostic labels; the particle takes one
  std::int64_t slit_b = 0;        // slit even though the density uses both
  double chi_square = 0.0;
  int chi_dof = 0;
  double p_value = 0.0;
  double fringe_visibility = 0.0;
};

/// Samples n landing positions one by one by inverse CDF over the binned
/// density; each hit also records a slit label drawn from the envelope
/// weights at the landed bin. Reports a chi-square fit of the counts against
/// the density and the fringe visibility of counts relative to the envelope.
TwoSlitReport two_slit_experiment(const SlitGeometry& geom, std::int64_t n,
                                  std::uint64_t seed);

/// Contrast (max - min) / (max + min) of observed/reference across bins
/// whose reference weight is at least `reference_cut` of its maximum.
double fringe_visibility(const std::vector<double>& observed,
                         const std::vector<double>& reference,
                         double reference_cut = 0.25);

}  // namespace cml
