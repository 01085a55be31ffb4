#include "cml/polarization.hpp"

#include <cmath>
#include <numbers>

#include "cml/errors.hpp"
#include "cml/parallel.hpp"
#include "cml/rng.hpp"

namespace cml {

namespace {

constexpr std::uint64_t kSaltPol = 0x706f6cull;
constexpr std::uint64_t kSaltXy = 0x78ull;
constexpr std::uint64_t kSaltTz = 0x747aull;

}  // namespace

TorsionState torsion_angle(double amplitude, double omega, double phi,
                           double t) {
  TorsionState s;
  s.angle = amplitude * std::cos(omega * t + phi);
  s.angular_velocity = -amplitude * omega * std::sin(omega * t + phi);
  return s;
}

double fold_axis(double angle) {
  double r = std::fmod(angle, std::numbers::pi);
  if (r < 0.0) r += std::numbers::pi;
  return r;
}

double axis_delta(double a, double b) {
  const double d = fold_axis(a - b);
  return std::min(d, std::numbers::pi - d);
}

Photon make_photon(const PhotonSource& source, std::uint64_t seed,
                   std::uint64_t id) {
  Photon ph;
  ph.id = id;
  ph.key = hash_all(seed, id);
  ph.pol = source.kind == PhotonSource::Kind::fixed
               ? fold_axis(source.angle)
               : std::numbers::pi * u01(hash_combine(ph.key, kSaltPol));
  ph.phase_xy = u01(hash_combine(ph.key, kSaltXy));
  ph.phase_tz = u01(hash_combine(ph.key, kSaltTz));
  return ph;
}

std::vector<Photon> photon_source(const PhotonSource& source, std::int64_t n,
                                  std::uint64_t seed) {
  if (n < 1) throw NumericError("photon_source needs n >= 1");
  std::vector<Photon> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t id = 0; id < n; ++id)
    out.push_back(make_photon(source, seed, static_cast<std::uint64_t>(id)));
  return out;
}

PassResult polarizer_pass(const Photon& photon, const Polarizer& polarizer,
                          GateConfig gates) {
  if (!photon.alive)
    throw NumericError("polarizer_pass on an absorbed photon");
  const double delta = axis_delta(photon.pol, polarizer.axis);
  const double c = std::cos(delta);  // |cos| since delta <= pi/2

  const bool pass_xy = !gates.spatial || photon.phase_xy < c;
  const bool pass_tz = !gates.temporal || photon.phase_tz < c;

  PassResult r;
  r.out = photon;
  r.passed = pass_xy && pass_tz;
  if (r.passed) {
    // Prepared by the polarizer: the axis snaps, the oscillation restarts.
    r.out.pol = fold_axis(polarizer.axis);
    r.out.encounters = photon.encounters + 1;
    r.out.phase_xy =
        u01(hash_all(photon.key, r.out.encounters, kSaltXy));
    r.out.phase_tz =
        u01(hash_all(photon.key, r.out.encounters, kSaltTz));
  } else {
    r.out.alive = false;
  }
  return r;
}

MalusReport malus_experiment(const std::vector<double>& deltas, std::int64_t n,
                             std::uint64_t seed) {
  if (n < 1) throw NumericError("malus_experiment needs n >= 1");
  MalusReport rep;
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const double delta = deltas[di];
    const Polarizer analyzer{0.0};
    const PhotonSource source = PhotonSource::fixed(delta);

    const std::int64_t kChunk = 65536;
    const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::int64_t> passed(static_cast<std::size_t>(n_chunks), 0);
    par::parallel_chunks(n, kChunk, [&](std::int64_t b, std::int64_t e,
                                        std::int64_t chunk) {
      std::int64_t local = 0;
      for (std::int64_t i = b; i < e; ++i) {
        const Photon ph =
            make_photon(source, seed, static_cast<std::uint64_t>(i));
        if (polarizer_pass(ph, analyzer).passed) ++local;
      }
      passed[chunk] = local;
    });
    std::int64_t total = 0;
    for (std::int64_t c : passed) total += c;

    MalusRow row;
    row.delta = delta;
    row.n = n;
    row.passed = total;
    row.fraction = static_cast<double>(total) / static_cast<double>(n);
    const double cd = std::cos(axis_delta(delta, 0.0));
    row.expected = cd * cd;
    row.std_error = stats::binomial_stderr(row.expected, n);
    rep.rows.push_back(row);
  }
  return rep;
}

ChainReport polarizer_chain(const std::vector<double>& axes,
                            const PhotonSource& source, std::int64_t n,
                            std::uint64_t seed) {
  if (n < 1) throw NumericError("polarizer_chain needs n >= 1");
  if (axes.empty()) throw NumericError("polarizer_chain needs >= 1 polarizer");

  const std::int64_t kChunk = 65536;
  const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;
  const std::size_t stages = axes.size();
  // Per-chunk (entered, passed) counters per stage; integer merges are
  // schedule independent.
  std::vector<std::int64_t> entered(n_chunks * stages, 0);
  std::vector<std::int64_t> passed(n_chunks * stages, 0);

  par::parallel_chunks(n, kChunk, [&](std::int64_t b, std::int64_t e,
                                      std::int64_t chunk) {
    for (std::int64_t i = b; i < e; ++i) {
      Photon ph = make_photon(source, seed, static_cast<std::uint64_t>(i));
      for (std::size_t s = 0; s < stages; ++s) {
        ++entered[chunk * stages + s];
        const PassResult r = polarizer_pass(ph, Polarizer{axes[s]});
        if (!r.passed) break;
        ph = r.out;
        ++passed[chunk * stages + s];
      }
    }
  });

  ChainReport rep;
  rep.source_count = n;
  rep.stages.resize(stages);
  for (std::size_t s = 0; s < stages; ++s) {
    rep.stages[s].axis = fold_axis(axes[s]);
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      rep.stages[s].entered += entered[c * stages + s];
      rep.stages[s].passed += passed[c * stages + s];
    }
  }
  const std::int64_t final_passed = rep.stages.back().passed;
  const std::int64_t first_passed = rep.stages.front().passed;
  rep.final_fraction_of_source =
      static_cast<double>(final_passed) / static_cast<double>(n);
  rep.final_fraction_of_first =
      first_passed > 0
          ? static_cast<double>(final_passed) / static_cast<double>(first_passed)
          : 0.0;
  return rep;
}

}  // namespace cml
