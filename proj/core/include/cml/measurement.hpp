#pragma once

#include <vector>

#include "cml/metric.hpp"

namespace cml {

/// Outcome of integrating the covariant radial coordinate xi_1 = r/(1-2Gm/r)
/// from 0 to r_bar on uniformly refined grids. When the integrand has a pole
/// inside the range the partial sums grow without bound; we then report the
/// divergence instead of a number.
struct CovariantIntegration {
  bool diverged = false;
  /// Total variation of xi_1 over [0, r_bar] when the integral converges.
  double value = 0.0;
  /// Location of the non-integrable singularity (2*Gm), 0 when none.
  double singularity_r = 0.0;
  /// Per-level sums; with a pole these are the sums accumulated before
  /// reaching the singularity, and they grow monotonically with refinement.
  std::vector<double> partial_sums;
  /// Grid cells used at the finest level evaluated.
  long long finest_cells = 0;
};

struct SchwarzschildReport {
  double contravariant = 0.0;  // integral of d r_bar: just r_bar
  CovariantIntegration covariant;
};

/// Radial distance to a mass, measured both ways. The contravariant distance
/// is r_bar exactly; the covariant integrand diverges at r = 2*Gm, which the
/// refinement loop detects once the pre-singularity sums pass
/// `divergence_threshold`. gm == 0 reduces to flat space.
/// Throws NumericError when r_bar <= 0 or (gm > 0 and r_bar <= 2*gm).
SchwarzschildReport schwarzschild_distances(double r_bar, double gm,
                                            double divergence_threshold = 1e6);

/// Length measurement on a space-time diagram with oblique axes.
/// An object rests at diagram coordinates [x_b, x_f]; the (x, t) frame moves
/// with velocity v, so its t axis has direction (v, 1) and its x axis (1, v).
/// Photons leave both ends simultaneously in that frame (frame time t0) and
/// run at 45 degrees to the t axis. Contravariant components come from the
/// parallelogram rule on the oblique axes.
struct MeasurementReport {
  double t1 = 0.0, t2 = 0.0;  // photon interception times on the t axis
  double dt = 0.0;            // t2 - t1
  double x1 = 0.0, x2 = 0.0;  // contravariant x of the two emission events
  double dx = 0.0;            // x2 - x1
  double residual = 0.0;      // |dt - dx|
};

/// Throws NumericError if |v| >= 1, if the ends coincide, or if the computed
/// residual exceeds 1e-12 (which would mean the construction is broken).
MeasurementReport idealized_measurement(double v, double x_f, double x_b,
                                        double t0);

}  // namespace cml
