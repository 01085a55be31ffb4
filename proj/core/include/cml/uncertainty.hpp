#pragma once

#include <cstdint>
#include <vector>

#include "cml/field.hpp"
#include "cml/metric.hpp"

namespace cml {

/// Contravariant components p^j = g^{j nu} p_nu of a covariant vector.
/// Throws NumericError for a singular metric.
Vec4 raise_index(const Metric4& g, const Vec4& p_cov);

struct UncertaintyRow {
  std::int64_t m = 0;    // venues averaged over
  double dq = 0.0;       // m * grain: the one-dimensional volume
  double dp = 0.0;       // sum_nu |p_nu| Var(volume-averaged g^{nu 0})
  double product = 0.0;  // dq * dp
  // Companion standard-deviation reading, included for scrutiny: it grows
  // as sqrt(m) instead of staying flat.
  double dp_std = 0.0;
  double product_std = 0.0;
};

struct UncertaintyReport {
  std::vector<UncertaintyRow> rows;
  double product_max_min_ratio = 0.0;
};

/// The volume-scaling uncertainty product. For each m, dq is the
/// one-dimensional volume m * grain and dp contracts |p_nu| linearly with
/// the across-trial variances of the volume-averaged contravariant metric
/// column g^{nu 0} (the component paired with q^1). The covariant momentum
/// itself is noise-free, so all scatter comes from the metric: with zero
/// amplitudes dp is exactly zero.
UncertaintyReport uncertainty_product_experiment(
    const FluctuationModel& model, const std::vector<std::int64_t>& m_values,
    const Vec4& p_cov, std::int64_t trials, std::uint64_t seed,
    double grain = 1.0);

}  // namespace cml
