#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cml {

enum class LockMode { in_phase, pi_offset };

/// Pair of particles locked to the same oscillation (or pi radians apart)
/// from a common origin venue. The first measurement freezes the shared
/// oscillation; the partner is frozen to the same angle instantly.
struct EntangledPair {
  double shared_pol = 0.0;  // [0, pi)
  double phase_xy = 0.0;    // shared hidden phases, [0, 1)
  double phase_tz = 0.0;
  LockMode lock = LockMode::in_phase;
  std::optional<double> collapsed;  // frozen axis once measured
  std::uint64_t id = 0;
  std::uint64_t key = 0;

  /// Raw oscillation angle reported by a member (0 or 1); differs by pi in
  /// pi_offset mode, which is the same polarization axis.
  double reported_angle(int member) const;
};

EntangledPair make_entangled_pair(std::uint64_t seed, std::uint64_t id,
                                  LockMode lock);

std::vector<EntangledPair> entangled_pair_source(std::int64_t n,
                                                 std::uint64_t seed,
                                                 LockMode lock);

enum class MeasureOrder { first_member_first, second_member_first };

struct PairOutcome {
  int first = 0;   // +1 passed, -1 blocked, for the member measured first
  int second = 0;
};

/// Measures both members. The first measurement gates on the pair's shared
/// hidden phases at the angle_first analyzer (ensemble probability
/// cos^2 delta); a pass freezes both members at angle_first, a block at
/// angle_first + pi/2. The second member is then measured against its frozen
/// axis with a fresh hidden phase. Throws NumericError if the pair was
/// already measured.
PairOutcome measure_entangled(EntangledPair& pair, double angle_first,
                              double angle_second,
                              MeasureOrder order = MeasureOrder::first_member_first);

enum class ChshMode {
  collapse,   // the nonlocal freeze rule above
  classical,  // control: no collapse, outcomes from the pre-shared axis only
};

struct ChshReport {
  std::array<std::string, 4> setting_names;  // ab, ab', a'b, a'b'
  std::array<double, 4> correlations{};      // E per setting
  double s_value = 0.0;                      // |E1 - E2 + E3 + E4|
  std::int64_t n_per_setting = 0;
  /// Largest sampling standard error among the four correlations.
  double max_std_error = 0.0;
};

/// Runs the four-setting Bell test with fresh pairs per setting.
/// In classical mode each outcome is the deterministic local rule
/// "+1 iff the analyzer is within pi/4 of the shared axis", which no choice
/// of angles can push past S = 2.
ChshReport chsh_experiment(double a, double a_prime, double b, double b_prime,
                           std::int64_t n_per_setting, std::uint64_t seed,
                           ChshMode mode = ChshMode::collapse,
                           LockMode lock = LockMode::in_phase);

}  // namespace cml
