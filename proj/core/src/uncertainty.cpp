#include "cml/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include "cml/errors.hpp"
#include "cml/parallel.hpp"
#include "cml/rng.hpp"
#include "cml/stats.hpp"

namespace cml {

Vec4 raise_index(const Metric4& g, const Vec4& p_cov) {
  const Metric4 ginv = inverse(g);
  Vec4 out{};
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int nu = 0; nu < 4; ++nu) s += ginv(i, nu) * p_cov[nu];
    out[i] = s;
  }
  return out;
}

UncertaintyReport uncertainty_product_experiment(
    const FluctuationModel& model, const std::vector<std::int64_t>& m_values,
    const Vec4& p_cov, std::int64_t trials, std::uint64_t seed, double grain) {
  if (trials < 2) throw NumericError("uncertainty experiment needs trials >= 2");
  if (grain <= 0.0) throw NumericError("grain must be positive");

  UncertaintyReport rep;
  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    const std::int64_t m = m_values[mi];
    if (m < 1) throw NumericError("uncertainty experiment needs m >= 1");
    std::vector<Venue> venues(static_cast<std::size_t>(m));
    for (std::int64_t k = 0; k < m; ++k) {
      venues[k].ix = k;
      venues[k].grain = grain;
    }

    // Per trial: volume average of the inverse metric, column 0.
    std::array<std::vector<double>, 4> column;
    for (auto& c : column) c.resize(static_cast<std::size_t>(trials));
    std::vector<double> observable(static_cast<std::size_t>(trials));

    par::parallel_chunks(trials, 64, [&](std::int64_t b, std::int64_t e,
                                         std::int64_t) {
      for (std::int64_t t = b; t < e; ++t) {
        RandomStream stream = RandomStream::from(seed, mi, t);
        double phase_time = 0.0;
        if (model.mode == FieldMode::crypto)
          phase_time = u01(hash_all(seed, mi, t)) / model.frequency;
        Metric4 avg_inv;
        for (const Venue& v : venues) {
          const Metric4 ginv =
              inverse(sample_metric(model, v, phase_time, stream));
          for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
              avg_inv.set(i, j, avg_inv(i, j) + ginv(i, j));
        }
        const double inv_m = 1.0 / static_cast<double>(m);
        double contracted = 0.0;
        for (int nu = 0; nu < 4; ++nu) {
          const double a = avg_inv(nu, 0) * inv_m;
          column[nu][t] = a;
          contracted += p_cov[nu] * a;
        }
        observable[t] = contracted;
      }
    });

    UncertaintyRow row;
    row.m = m;
    row.dq = static_cast<double>(m) * grain;
    for (int nu = 0; nu < 4; ++nu)
      row.dp += std::fabs(p_cov[nu]) * stats::variance(column[nu]);
    row.product = row.dq * row.dp;
    row.dp_std = std::sqrt(stats::variance(observable));
    row.product_std = row.dq * row.dp_std;
    rep.rows.push_back(row);
  }

  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& r : rep.rows) {
    if (first) {
      lo = hi = r.product;
      first = false;
    } else {
      lo = std::min(lo, r.product);
      hi = std::max(hi, r.product);
    }
  }
  rep.product_max_min_ratio = lo > 0.0 ? hi / lo : 0.0;
  return rep;
}

}  // namespace cml
