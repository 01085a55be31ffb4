#pragma once

#include <cstdint>
#include <vector>

#include "cml/stats.hpp"

namespace cml {

/// Frictionless torsional spring: angle k cos(w t + phi) and its rate.
struct TorsionState {
  double angle = 0.0;
  double angular_velocity = 0.0;
};

TorsionState torsion_angle(double amplitude, double omega, double phi,
                           double t);

/// Normalizes a polarization angle to [0, pi) (axial, not directional).
double fold_axis(double angle);

/// Acute angle between two polarization axes, in [0, pi/2].
double axis_delta(double a, double b);

/// Photon with a polarization axis and two hidden oscillation phases:
/// one for the transverse (x-y) torsion, one for the longitudinal (t-z)
/// torsion. The phases are the "crypto" state: deterministic, but set by an
/// oscillation far too fast to resolve, so they are modeled as uniform.
struct Photon {
  double pol = 0.0;       // [0, pi)
  double phase_xy = 0.0;  // [0, 1)
  double phase_tz = 0.0;  // [0, 1)
  bool alive = true;
  std::uint64_t id = 0;          // counter within the source
  std::uint64_t key = 0;         // hash(seed, id); phase-refresh lineage
  std::uint32_t encounters = 0;  // polarizers met so far
};

struct Polarizer {
  double axis = 0.0;  // [0, pi)
};

struct PhotonSource {
  enum class Kind { fixed, unpolarized };
  Kind kind = Kind::unpolarized;
  double angle = 0.0;

  static PhotonSource fixed(double a) { return {Kind::fixed, a}; }
  static PhotonSource unpolarized() { return {Kind::unpolarized, 0.0}; }
};

/// Photon `id` of a deterministic stream: everything derives from (seed, id).
Photon make_photon(const PhotonSource& source, std::uint64_t seed,
                   std::uint64_t id);

std::vector<Photon> photon_source(const PhotonSource& source, std::int64_t n,
                                  std::uint64_t seed);

/// Gate toggles, for diagnostics: with only the spatial oscillation active
/// the transmission law is |cos delta|; the temporal gate squares it.
struct GateConfig {
  bool spatial = true;
  bool temporal = true;
};

struct PassResult {
  bool passed = false;
  Photon out;
};

/// Deterministic two-gate polarizer rule. With delta the acute angle between
/// photon axis and polarizer axis, each active gate passes iff its hidden
/// phase is below |cos delta|. A transmitted photon is prepared: its axis
/// snaps to the polarizer axis and both phases refresh from
/// (key, encounter index). A blocked photon is absorbed.
PassResult polarizer_pass(const Photon& photon, const Polarizer& polarizer,
                          GateConfig gates = {});

struct MalusRow {
  double delta = 0.0;
  std::int64_t n = 0;
  std::int64_t passed = 0;
  double fraction = 0.0;
  double expected = 0.0;  // cos^2 delta
  double std_error = 0.0;
};

struct MalusReport {
  std::vector<MalusRow> rows;
};

/// Transmission fractions for photons polarized at `delta` to the analyzer.
MalusReport malus_experiment(const std::vector<double>& deltas, std::int64_t n,
                             std::uint64_t seed);

struct ChainStage {
  double axis = 0.0;
  std::int64_t entered = 0;
  std::int64_t passed = 0;
};

struct ChainReport {
  std::vector<ChainStage> stages;
  std::int64_t source_count = 0;
  double final_fraction_of_source = 0.0;
  /// Relative to the survivors of the first polarizer.
  double final_fraction_of_first = 0.0;
};

/// Sends n photons through the polarizers in order, preparation applying at
/// each passage.
ChainReport polarizer_chain(const std::vector<double>& axes,
                            const PhotonSource& source, std::int64_t n,
                            std::uint64_t seed);

}  // namespace cml
