#include "cml/geodesic.hpp"

#include <cmath>
#include <numbers>

#include "cml/errors.hpp"
#include "cml/parallel.hpp"

namespace cml {

FieldSampler constant_field(const Metric4& g) {
  return [g](int) { return MetricField([g](const Vec4&) { return g; }); };
}

FieldSampler analytic_field(MetricField f) {
  return [f = std::move(f)](int) { return f; };
}

namespace {

Venue quantize(const Vec4& x, double grain) {
  Venue v;
  v.ix = std::llround(x[0] / grain);
  v.iy = std::llround(x[1] / grain);
  v.iz = std::llround(x[2] / grain);
  v.it = std::llround(x[3] / grain);
  v.grain = grain;
  return v;
}

}  // namespace

FieldSampler fluctuating_field(const FluctuationModel& model,
                               std::uint64_t seed, std::uint64_t particle,
                               double grain) {
  // Crypto mode: each particle enters at its own (unresolvable) moment.
  const double period_offset =
      model.mode == FieldMode::crypto
          ? u01(hash_all(seed, particle, 0x0ffse7ull)) / model.frequency
          : 0.0;
  return [=](int step) {
    return MetricField([=](const Vec4& x) {
      const Venue v = quantize(x, grain);
      const double d = damping_factor(model, v);
      Metric4 g = minkowski();
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
          const double s = model.sigma(i, j) * d;
          double delta = 0.0;
          if (model.mode == FieldMode::stochastic) {
            delta = s * gaussian_from(hash_all(
                            seed, particle, static_cast<std::uint64_t>(step),
                            v.ix, v.iy, v.iz, v.it,
                            static_cast<std::uint64_t>(i * 4 + j)));
          } else {
            delta =
                s * std::cos(2.0 * std::numbers::pi * model.frequency *
                                 (period_offset + x[3] * grain) +
                             crypto_phase(model, v, i, j));
          }
          g.set(i, j, g(i, j) + delta);
        }
      return g;
    });
  };
}

namespace {

Metric4 checked_sample(const MetricField& field, const Vec4& x) {
  const Metric4 g = field(x);
  if (std::fabs(determinant(g)) < kSingularTol)
    throw NumericError("singular metric at a stencil point");
  return g;
}

}  // namespace

ChristoffelSet christoffel(const MetricField& field, const Vec4& x,
                           double spacing) {
  if (spacing <= 0.0) throw NumericError("christoffel needs spacing > 0");
  const Metric4 center = checked_sample(field, x);
  const Metric4 ginv = inverse(center);

  // dg[l](i,j) = d g_ij / d x^l by central differences.
  std::array<Metric4, 4> dg;
  for (int l = 0; l < 4; ++l) {
    Vec4 xp = x, xm = x;
    xp[l] += spacing;
    xm[l] -= spacing;
    const Metric4 gp = checked_sample(field, xp);
    const Metric4 gm = checked_sample(field, xm);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j)
        dg[l].set(i, j, (gp(i, j) - gm(i, j)) / (2.0 * spacing));
  }

  ChristoffelSet out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = j; k < 4; ++k) {
        double sum = 0.0;
        for (int l = 0; l < 4; ++l)
          sum += ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
        const double v = 0.5 * sum;
        out.at(i, j, k) = v;
        out.at(i, k, j) = v;
      }
  return out;
}

namespace {

struct Deriv {
  Vec4 dx;
  Vec4 du;
};

Deriv rhs(const MetricField& field, const ParticleState& s, double spacing) {
  const ChristoffelSet gamma = christoffel(field, s.x, spacing);
  Deriv d;
  d.dx = s.u;
  for (int i = 0; i < 4; ++i) {
    double a = 0.0;
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) a += gamma.at(i, j, k) * s.u[j] * s.u[k];
    d.du[i] = -a;
  }
  return d;
}

ParticleState advance(const ParticleState& s, const Deriv& d, double h) {
  ParticleState out;
  for (int i = 0; i < 4; ++i) {
    out.x[i] = s.x[i] + h * d.dx[i];
    out.u[i] = s.u[i] + h * d.du[i];
  }
  return out;
}

ParticleState rk4_step(const MetricField& field, const ParticleState& s,
                       double ds, double spacing) {
  const Deriv k1 = rhs(field, s, spacing);
  const Deriv k2 = rhs(field, advance(s, k1, 0.5 * ds), spacing);
  const Deriv k3 = rhs(field, advance(s, k2, 0.5 * ds), spacing);
  const Deriv k4 = rhs(field, advance(s, k3, ds), spacing);
  ParticleState out;
  for (int i = 0; i < 4; ++i) {
    out.x[i] = s.x[i] + ds / 6.0 *
                            (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] +
                             k4.dx[i]);
    out.u[i] = s.u[i] + ds / 6.0 *
                            (k1.du[i] + 2.0 * k2.du[i] + 2.0 * k3.du[i] +
                             k4.du[i]);
  }
  return out;
}

void check_bounds(const ParticleState& s) {
  for (int i = 0; i < 4; ++i)
    if (!std::isfinite(s.x[i]) || std::fabs(s.x[i]) > 1e6)
      throw NumericError("geodesic diverged past 1e6 grains");
}

}  // namespace

std::vector<ParticleState> integrate_geodesic(const FieldSampler& sampler,
                                              const ParticleState& start,
                                              int steps, double ds,
                                              double spacing) {
  if (steps < 1 || ds <= 0.0)
    throw NumericError("integrate_geodesic needs steps >= 1 and ds > 0");
  std::vector<ParticleState> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  path.push_back(start);
  ParticleState s = start;
  for (int k = 0; k < steps; ++k) {
    const MetricField field = sampler(k);
    s = rk4_step(field, s, ds, spacing);
    check_bounds(s);
    path.push_back(s);
  }
  return path;
}

SpreadReport free_particle_ensemble(const FluctuationModel& model,
                                    int n_particles, int steps, double ds,
                                    std::uint64_t seed, double spacing) {
  if (n_particles < 1 || steps < 1 || ds <= 0.0)
    throw NumericError("free_particle_ensemble parameter out of range");

  const std::int64_t kChunk = 256;
  const std::int64_t n_chunks =
      (static_cast<std::int64_t>(n_particles) + kChunk - 1) / kChunk;
  // Per (chunk, step) partial sums of z and z^2, reduced in chunk order
  // afterwards so the result is independent of the worker schedule.
  std::vector<double> sum_z(static_cast<std::size_t>(n_chunks * steps), 0.0);
  std::vector<double> sum_z2(static_cast<std::size_t>(n_chunks * steps), 0.0);
  std::vector<double> finals(static_cast<std::size_t>(n_particles), 0.0);

  const ParticleState at_rest{{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}};

  par::parallel_chunks(
      n_particles, kChunk,
      [&](std::int64_t begin, std::int64_t end, std::int64_t chunk) {
        for (std::int64_t p = begin; p < end; ++p) {
          const FieldSampler sampler =
              fluctuating_field(model, seed, static_cast<std::uint64_t>(p));
          ParticleState s = at_rest;
          for (int k = 0; k < steps; ++k) {
            const MetricField field = sampler(k);
            // One interval: a geodesic step through a fresh frozen field,
            // restarted from the reference velocity. Successive interval
            // displacements are therefore i.i.d. and the spread is their
            // running convolution.
            ParticleState interval{s.x, at_rest.u};
            interval = rk4_step(field, interval, ds, spacing);
            check_bounds(interval);
            s = interval;
            const double z = s.x[2];
            sum_z[chunk * steps + k] += z;
            sum_z2[chunk * steps + k] += z * z;
          }
          finals[p] = s.x[2];
        }
      });

  SpreadReport rep;
  rep.variance_per_step.resize(static_cast<std::size_t>(steps));
  std::vector<double> step_index(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    long double sz = 0.0L, sz2 = 0.0L;
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      sz += sum_z[c * steps + k];
      sz2 += sum_z2[c * steps + k];
    }
    const long double n = static_cast<long double>(n_particles);
    const long double m = sz / n;
    rep.variance_per_step[k] = static_cast<double>(sz2 / n - m * m);
    step_index[k] = static_cast<double>(k + 1);
  }
  rep.fit = stats::linear_fit(step_index, rep.variance_per_step);
  rep.excess_kurtosis = stats::moments(finals).excess_kurtosis;
  rep.final_positions = std::move(finals);
  return rep;
}

}  // namespace cml
