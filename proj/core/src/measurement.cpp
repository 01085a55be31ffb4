#include "cml/measurement.hpp"

#include <cmath>

namespace cml {

namespace {

// Covariant radial coordinate xi_1(r) = r / (1 - 2 gm / r) = r^2 / (r - 2 gm).
double xi1(double r, double gm) {
  if (gm == 0.0) return r;
  return r * r / (r - 2.0 * gm);
}

}  // namespace

SchwarzschildReport schwarzschild_distances(double r_bar, double gm,
                                            double divergence_threshold) {
  if (r_bar <= 0.0 || gm < 0.0)
    throw NumericError("schwarzschild_distances: need r_bar > 0 and gm >= 0");
  if (gm > 0.0 && r_bar <= 2.0 * gm)
    throw NumericError(
        "schwarzschild_distances: invalid geometry, r_bar inside the horizon");

  SchwarzschildReport rep;
  rep.contravariant = r_bar;  // integral of d r_bar from 0 to r_bar

  const double pole = 2.0 * gm;
  const bool has_pole = gm > 0.0;  // pole < r_bar is guaranteed above
  rep.covariant.singularity_r = has_pole ? pole : 0.0;

  const int kMaxLevels = 28;
  long long cells = 64;
  double prev_sum = -1.0;
  int stable_levels = 0;
  for (int level = 0; level < kMaxLevels; ++level, cells *= 2) {
    const double h = r_bar / static_cast<double>(cells);
    long double pre_pole = 0.0L;
    long double total = 0.0L;
    double r_prev = 0.0;
    double f_prev = xi1(0.0, gm);
    for (long long k = 1; k <= cells; ++k) {
      double r = static_cast<double>(k) * h;
      // Never evaluate exactly on the pole; nudge by a quarter cell.
      if (has_pole && std::fabs(r - pole) < 1e-12 * r_bar) r += 0.25 * h;
      const double f = xi1(r, gm);
      const double step = std::fabs(f - f_prev);
      total += step;
      if (has_pole && r < pole) pre_pole = total;
      r_prev = r;
      f_prev = f;
    }
    (void)r_prev;
    const double sum =
        has_pole ? static_cast<double>(pre_pole) : static_cast<double>(total);
    rep.covariant.partial_sums.push_back(sum);
    rep.covariant.finest_cells = cells;

    if (has_pole) {
      if (sum > divergence_threshold) {
        rep.covariant.diverged = true;
        return rep;
      }
    } else {
      if (prev_sum >= 0.0 &&
          std::fabs(sum - prev_sum) <= 1e-9 * std::max(1.0, std::fabs(sum))) {
        if (++stable_levels >= 2) {
          rep.covariant.value = sum;
          return rep;
        }
      } else {
        stable_levels = 0;
      }
      prev_sum = sum;
    }
  }
  // Pole present but threshold not reached within the level budget: still a
  // divergence candidate, reported honestly as not (yet) past the threshold.
  if (!has_pole) rep.covariant.value = rep.covariant.partial_sums.back();
  return rep;
}

MeasurementReport idealized_measurement(double v, double x_f, double x_b,
                                        double t0) {
  if (std::fabs(v) >= 1.0)
    throw NumericError("idealized_measurement: |v| must be below 1 (c = 1)");
  if (x_f == x_b)
    throw NumericError("idealized_measurement: object ends coincide");

  // Emission events: the intersection of the object end world lines (vertical
  // at x_b, x_f on the diagram) with the frame's t = t0 simultaneity line,
  // which passes through t0 * (v, 1) with direction (1, v).
  const auto emission_t = [&](double xe) {
    return t0 * (1.0 - v * v) + v * xe;
  };
  // A photon from (xe, te) running at 45 degrees towards the t axis X = v*T
  // meets it at diagram time (te + xe) / (1 + v) for xe right of the axis,
  // or (te - xe) / (1 - v) for xe left of it. The frame t coordinate of a
  // point on the t axis is its diagram T (the axis parameter itself).
  const auto intercept_t = [&](double xe) {
    const double te = emission_t(xe);
    if (xe >= v * te) return (te + xe) / (1.0 + v);
    return (te - xe) / (1.0 - v);
  };
  // Contravariant x by the parallelogram rule: E = a*(1, v) + b*(v, 1).
  const auto contra_x = [&](double xe) {
    const double te = emission_t(xe);
    return (xe - v * te) / (1.0 - v * v);
  };

  const double near_end = std::min(x_f, x_b);
  const double far_end = std::max(x_f, x_b);

  MeasurementReport rep;
  rep.t1 = intercept_t(near_end);
  rep.t2 = intercept_t(far_end);
  rep.dt = rep.t2 - rep.t1;
  rep.x1 = contra_x(near_end);
  rep.x2 = contra_x(far_end);
  rep.dx = rep.x2 - rep.x1;
  rep.residual = std::fabs(rep.dt - rep.dx);
  if (rep.residual > 1e-12)
    throw NumericError(
        "idealized_measurement: contravariant/time readings disagree");
  return rep;
}

}  // namespace cml
