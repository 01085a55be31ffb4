#include "cml/entangle.hpp"

#include <cmath>
#include <numbers>

#include "cml/errors.hpp"
#include "cml/parallel.hpp"
#include "cml/polarization.hpp"
#include "cml/rng.hpp"
#include "cml/stats.hpp"

namespace cml {

namespace {

constexpr std::uint64_t kSaltPol = 0x7061697200ull;
constexpr std::uint64_t kSaltXy = 0x7061697278ull;
constexpr std::uint64_t kSaltTz = 0x70616972747aull;
constexpr std::uint64_t kSaltSecond = 0x7365636f6e64ull;

}  // namespace

double EntangledPair::reported_angle(int member) const {
  if (member == 0 || lock == LockMode::in_phase) return shared_pol;
  return shared_pol + std::numbers::pi;
}

EntangledPair make_entangled_pair(std::uint64_t seed, std::uint64_t id,
                                  LockMode lock) {
  EntangledPair p;
  p.id = id;
  p.key = hash_all(seed, id);
  p.shared_pol = std::numbers::pi * u01(hash_combine(p.key, kSaltPol));
  p.phase_xy = u01(hash_combine(p.key, kSaltXy));
  p.phase_tz = u01(hash_combine(p.key, kSaltTz));
  p.lock = lock;
  return p;
}

std::vector<EntangledPair> entangled_pair_source(std::int64_t n,
                                                 std::uint64_t seed,
                                                 LockMode lock) {
  if (n < 1) throw NumericError("entangled_pair_source needs n >= 1");
  std::vector<EntangledPair> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t id = 0; id < n; ++id)
    out.push_back(make_entangled_pair(seed, static_cast<std::uint64_t>(id), lock));
  return out;
}

PairOutcome measure_entangled(EntangledPair& pair, double angle_first,
                              double angle_second, MeasureOrder order) {
  if (pair.collapsed)
    throw NumericError("measure_entangled: pair already measured");

  const int first_member =
      order == MeasureOrder::first_member_first ? 0 : 1;

  // First measurement: the shared oscillation meets the analyzer. Reuse the
  // photon gate rule on the member's reported angle (same axis either way).
  Photon probe;
  probe.pol = fold_axis(pair.reported_angle(first_member));
  probe.phase_xy = pair.phase_xy;
  probe.phase_tz = pair.phase_tz;
  probe.key = pair.key;
  const bool first_passed =
      polarizer_pass(probe, Polarizer{angle_first}).passed;

  // Freeze: both members lock to the measured axis (pass) or its orthogonal
  // complement (block). The metric distortion linking them dissipates.
  const double frozen =
      fold_axis(first_passed ? angle_first
                             : angle_first + std::numbers::pi / 2.0);
  pair.collapsed = frozen;
  pair.shared_pol = frozen;

  // Second member: measured against its frozen axis with fresh phases.
  Photon partner;
  partner.pol = frozen;
  partner.phase_xy = u01(hash_all(pair.key, kSaltSecond, kSaltXy));
  partner.phase_tz = u01(hash_all(pair.key, kSaltSecond, kSaltTz));
  partner.key = hash_combine(pair.key, kSaltSecond);
  const bool second_passed =
      polarizer_pass(partner, Polarizer{angle_second}).passed;

  PairOutcome out;
  out.first = first_passed ? 1 : -1;
  out.second = second_passed ? 1 : -1;
  return out;
}

namespace {

int classical_sign(double analyzer, double shared_pol) {
  return axis_delta(analyzer, shared_pol) <= std::numbers::pi / 4.0 ? 1 : -1;
}

}  // namespace

ChshReport chsh_experiment(double a, double a_prime, double b, double b_prime,
                           std::int64_t n_per_setting, std::uint64_t seed,
                           ChshMode mode, LockMode lock) {
  if (n_per_setting < 1) throw NumericError("chsh needs n_per_setting >= 1");

  const std::array<std::pair<double, double>, 4> settings = {
      std::pair{a, b}, std::pair{a, b_prime}, std::pair{a_prime, b},
      std::pair{a_prime, b_prime}};

  ChshReport rep;
  rep.setting_names = {"ab", "abp", "apb", "apbp"};
  rep.n_per_setting = n_per_setting;

  for (std::size_t s = 0; s < settings.size(); ++s) {
    const auto [first_angle, second_angle] = settings[s];
    const std::int64_t kChunk = 65536;
    const std::int64_t n_chunks = (n_per_setting + kChunk - 1) / kChunk;
    std::vector<std::int64_t> prod(static_cast<std::size_t>(n_chunks), 0);

    par::parallel_chunks(
        n_per_setting, kChunk,
        [&](std::int64_t bgn, std::int64_t end, std::int64_t chunk) {
          std::int64_t local = 0;
          for (std::int64_t i = bgn; i < end; ++i) {
            EntangledPair pair = make_entangled_pair(
                hash_all(seed, s), static_cast<std::uint64_t>(i), lock);
            if (mode == ChshMode::collapse) {
              const PairOutcome o =
                  measure_entangled(pair, first_angle, second_angle);
              local += o.first * o.second;
            } else {
              local += classical_sign(first_angle, pair.shared_pol) *
                       classical_sign(second_angle, pair.shared_pol);
            }
          }
          prod[chunk] = local;
        });

    std::int64_t sum = 0;
    for (std::int64_t c : prod) sum += c;
    const double e =
        static_cast<double>(sum) / static_cast<double>(n_per_setting);
    rep.correlations[s] = e;
    rep.max_std_error = std::max(
        rep.max_std_error,
        std::sqrt(std::max(0.0, 1.0 - e * e) /
                  static_cast<double>(n_per_setting)));
  }

  rep.s_value = std::fabs(rep.correlations[0] - rep.correlations[1] +
                          rep.correlations[2] + rep.correlations[3]);
  return rep;
}

}  // namespace cml
