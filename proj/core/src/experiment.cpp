#include "cml/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "cml/csv.hpp"
#include "cml/distribution.hpp"
#include "cml/entangle.hpp"
#include "cml/errors.hpp"
#include "cml/field.hpp"
#include "cml/geodesic.hpp"
#include "cml/measurement.hpp"
#include "cml/metric.hpp"
#include "cml/polarization.hpp"
#include "cml/stats.hpp"
#include "cml/twoslit.hpp"
#include "cml/uncertainty.hpp"

namespace cml {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ParamType { boolean, integer, real, text, real_list, int_list };

struct ParamDesc {
  const char* name;
  ParamType type;
  double min = -kInf;
  double max = kInf;
  std::vector<const char*> allowed;  // for text params
};

struct RunContext;

struct ExperimentDef {
  const char* name;
  bool stochastic;
  std::vector<ParamDesc> params;
  std::function<void(RunContext&)> run;
};

const std::vector<ExperimentDef>& registry();

const ExperimentDef& find_experiment(const std::string& name) {
  for (const auto& def : registry())
    if (name == def.name) return def;
  throw ConfigError("unknown experiment '" + name + "'");
}

// ---------------------------------------------------------------------------
// Typed parameter access over a validated spec.

struct RunContext {
  const ExperimentSpec& spec;
  const ExperimentDef& def;
  std::uint64_t seed = 0;
  ordered_json effective_params = ordered_json::object();
  ordered_json metrics = ordered_json::object();
  std::map<std::string, std::string> tables;
  std::map<std::string, double> scalar_metrics;

  const ParamValue* lookup(std::string_view name) const {
    const auto it = spec.params.find(name);
    return it == spec.params.end() ? nullptr : &it->second;
  }

  double real(const char* name, double fallback) {
    double v = fallback;
    if (const ParamValue* p = lookup(name)) {
      if (const auto* d = std::get_if<double>(p)) v = *d;
      else v = static_cast<double>(std::get<std::int64_t>(*p));
    }
    effective_params[name] = v;
    return v;
  }

  std::int64_t integer(const char* name, std::int64_t fallback) {
    std::int64_t v = fallback;
    if (const ParamValue* p = lookup(name)) v = std::get<std::int64_t>(*p);
    effective_params[name] = v;
    return v;
  }

  bool boolean(const char* name, bool fallback) {
    bool v = fallback;
    if (const ParamValue* p = lookup(name)) v = std::get<bool>(*p);
    effective_params[name] = v;
    return v;
  }

  std::string text(const char* name, std::string fallback) {
    std::string v = std::move(fallback);
    if (const ParamValue* p = lookup(name)) v = std::get<std::string>(*p);
    effective_params[name] = v;
    return v;
  }

  std::vector<double> reals(const char* name, std::vector<double> fallback) {
    std::vector<double> v = std::move(fallback);
    if (const ParamValue* p = lookup(name)) {
      if (const auto* d = std::get_if<std::vector<double>>(p)) {
        v = *d;
      } else {
        v.clear();
        for (std::int64_t x : std::get<std::vector<std::int64_t>>(*p))
          v.push_back(static_cast<double>(x));
      }
    }
    effective_params[name] = v;
    return v;
  }

  std::vector<std::int64_t> integers(const char* name,
                                     std::vector<std::int64_t> fallback) {
    std::vector<std::int64_t> v = std::move(fallback);
    if (const ParamValue* p = lookup(name))
      v = std::get<std::vector<std::int64_t>>(*p);
    effective_params[name] = v;
    return v;
  }

  void metric(const char* name, double v) {
    metrics[name] = v;
    scalar_metrics[name] = v;
  }
  void metric(const char* name, bool v) {
    metrics[name] = v;
    scalar_metrics[name] = v ? 1.0 : 0.0;
  }
  void metric(const char* name, std::int64_t v) {
    metrics[name] = v;
    scalar_metrics[name] = static_cast<double>(v);
  }
};

// ---------------------------------------------------------------------------
// Shared pieces.

FluctuationModel model_from(RunContext& ctx) {
  FluctuationModel model = FluctuationModel::defaults();
  const double sigma = ctx.real("sigma", 0.05);
  model.set_diagonal_sigma(sigma);
  const std::string mode = ctx.text("mode", "stochastic");
  model.mode = mode == "crypto" ? FieldMode::crypto : FieldMode::stochastic;
  model.frequency = ctx.real("frequency", 1e36);
  model.validate();
  return model;
}

std::vector<std::int64_t> default_m_values() {
  return {1, 2, 4, 8, 16, 32, 64, 128, 256};
}

// ---------------------------------------------------------------------------
// Experiment runners.

void run_interference_grid(RunContext& ctx) {
  const std::int64_t grid = ctx.integer("grid", 100);
  CsvBuilder csv({"alpha", "beta", "density", "closed_form", "abs_err"});
  double max_err = 0.0;
  for (std::int64_t i = 0; i < grid; ++i)
    for (std::int64_t j = 0; j < grid; ++j) {
      const double alpha = 2.0 * kPi * static_cast<double>(i) / grid;
      const double beta = 2.0 * kPi * static_cast<double>(j) / grid;
      const double density = interference_density(alpha, beta);
      const double closed = interference_closed_form(alpha, beta);
      const double err = std::fabs(density - closed);
      max_err = std::max(max_err, err);
      csv.cell(alpha).cell(beta).cell(density).cell(closed).cell(err);
      csv.end_row();
    }
  ctx.tables["interference_grid"] = csv.str();
  ctx.metric("max_abs_err", max_err);
}

void run_variance_scaling(RunContext& ctx) {
  const FluctuationModel model = model_from(ctx);
  const auto m_values = ctx.integers("m_values", default_m_values());
  const std::int64_t trials = ctx.integer("trials", 4000);
  const auto rep =
      variance_scaling_experiment(model, m_values, trials, ctx.seed);
  CsvBuilder csv({"m", "var"});
  for (const auto& row : rep.rows) {
    csv.cell(row.m).cell(row.variance);
    csv.end_row();
  }
  ctx.tables["variance"] = csv.str();
  ctx.metric("slope", rep.loglog.slope);
  ctx.metric("intercept", rep.loglog.intercept);
  ctx.metric("r_squared", rep.loglog.r_squared);
}

void run_spread(RunContext& ctx) {
  const FluctuationModel model = model_from(ctx);
  const std::int64_t particles = ctx.integer("particles", 10000);
  const std::int64_t steps = ctx.integer("steps", 200);
  const double ds = ctx.real("ds", 0.1);
  const double spacing = ctx.real("spacing", 0.5);
  const auto rep = free_particle_ensemble(model, static_cast<int>(particles),
                                          static_cast<int>(steps), ds,
                                          ctx.seed, spacing);
  CsvBuilder csv({"step", "variance"});
  for (std::size_t k = 0; k < rep.variance_per_step.size(); ++k) {
    csv.cell(static_cast<std::int64_t>(k + 1)).cell(rep.variance_per_step[k]);
    csv.end_row();
  }
  ctx.tables["spread"] = csv.str();

  // Final-position histogram over +-4 standard deviations.
  const auto mom = stats::moments(rep.final_positions);
  const double sd = std::sqrt(std::max(mom.variance, 1e-300));
  const int bins = 61;
  const double lo = mom.mean - 4.0 * sd;
  const double width = 8.0 * sd / bins;
  std::vector<std::int64_t> hist(bins, 0);
  for (double z : rep.final_positions) {
    int b = static_cast<int>(std::floor((z - lo) / width));
    b = std::clamp(b, 0, bins - 1);
    ++hist[b];
  }
  CsvBuilder hcsv({"bin_center", "count"});
  for (int b = 0; b < bins; ++b) {
    hcsv.cell(lo + (b + 0.5) * width).cell(hist[b]);
    hcsv.end_row();
  }
  ctx.tables["spread_hist"] = hcsv.str();

  ctx.metric("slope", rep.fit.slope);
  ctx.metric("r_squared", rep.fit.r_squared);
  ctx.metric("excess_kurtosis", rep.excess_kurtosis);
}

void run_uncertainty(RunContext& ctx) {
  const FluctuationModel model = model_from(ctx);
  const auto m_values = ctx.integers("m_values", default_m_values());
  const std::int64_t trials = ctx.integer("trials", 4000);
  const auto p = ctx.reals("p_cov", {1.0, 0.0, 0.0, 0.0});
  if (p.size() != 4) throw ConfigError("p_cov must have 4 components");
  const double grain = ctx.real("grain", 1.0);
  const auto rep = uncertainty_product_experiment(
      model, m_values, {p[0], p[1], p[2], p[3]}, trials, ctx.seed, grain);
  CsvBuilder csv({"m", "dq", "dp", "product", "dp_std", "product_std"});
  for (const auto& row : rep.rows) {
    csv.cell(row.m).cell(row.dq).cell(row.dp).cell(row.product)
        .cell(row.dp_std).cell(row.product_std);
    csv.end_row();
  }
  ctx.tables["uncertainty"] = csv.str();
  ctx.metric("product_max_min_ratio", rep.product_max_min_ratio);
}

void run_malus(RunContext& ctx) {
  const auto deltas =
      ctx.reals("deltas", {0.0, kPi / 6.0, kPi / 4.0, kPi / 3.0, kPi / 2.0});
  const std::int64_t n = ctx.integer("n", 1000000);
  const auto rep = malus_experiment(deltas, n, ctx.seed);
  CsvBuilder csv({"delta_rad", "n", "passed", "fraction", "expected"});
  double worst_sigmas = 0.0;
  double worst_exact = 0.0;
  for (const auto& row : rep.rows) {
    csv.cell(row.delta).cell(row.n).cell(row.passed).cell(row.fraction)
        .cell(row.expected);
    csv.end_row();
    const double dev = std::fabs(row.fraction - row.expected);
    if (row.std_error > 0.0)
      worst_sigmas = std::max(worst_sigmas, dev / row.std_error);
    else
      worst_exact = std::max(worst_exact, dev);
  }
  ctx.tables["malus"] = csv.str();
  ctx.metric("max_deviation_sigmas", worst_sigmas);
  ctx.metric("max_exact_deviation", worst_exact);
}

void run_chain(RunContext& ctx) {
  const auto axes = ctx.reals("axes", {0.0, kPi / 4.0, kPi / 2.0});
  const std::string kind = ctx.text("source", "fixed");
  const double angle = ctx.real("source_angle", 0.0);
  const std::int64_t n = ctx.integer("n", 1000000);
  const PhotonSource source = kind == "unpolarized"
                                  ? PhotonSource::unpolarized()
                                  : PhotonSource::fixed(angle);
  const auto rep = polarizer_chain(axes, source, n, ctx.seed);
  CsvBuilder csv({"stage", "axis_rad", "entered", "passed"});
  for (std::size_t s = 0; s < rep.stages.size(); ++s) {
    csv.cell(static_cast<std::int64_t>(s)).cell(rep.stages[s].axis)
        .cell(rep.stages[s].entered).cell(rep.stages[s].passed);
    csv.end_row();
  }
  ctx.tables["chain"] = csv.str();
  ctx.metric("final_fraction_of_source", rep.final_fraction_of_source);
  ctx.metric("final_fraction_of_first", rep.final_fraction_of_first);
}

void run_chsh(RunContext& ctx) {
  const double a = ctx.real("a", 0.0);
  const double ap = ctx.real("a_prime", kPi / 4.0);
  const double b = ctx.real("b", kPi / 8.0);
  const double bp = ctx.real("b_prime", 3.0 * kPi / 8.0);
  const std::int64_t n = ctx.integer("n", 1000000);
  const std::string mode = ctx.text("mode", "collapse");
  const std::string lock = ctx.text("lock", "in-phase");
  const auto rep = chsh_experiment(
      a, ap, b, bp, n, ctx.seed,
      mode == "classical" ? ChshMode::classical : ChshMode::collapse,
      lock == "pi-offset" ? LockMode::pi_offset : LockMode::in_phase);
  CsvBuilder csv({"pair", "E"});
  for (std::size_t s = 0; s < 4; ++s) {
    csv.cell(rep.setting_names[s]).cell(rep.correlations[s]);
    csv.end_row();
  }
  ctx.tables["chsh"] = csv.str();
  ctx.metric("S", rep.s_value);
  ctx.metric("max_std_error", rep.max_std_error);
}

SlitGeometry geometry_from(RunContext& ctx) {
  SlitGeometry geom;
  geom.slit_separation = ctx.real("slit_separation", 10.0);
  geom.screen_distance = ctx.real("screen_distance", 100.0);
  geom.lambda = ctx.real("lambda", 1.0);
  geom.x_min = ctx.real("x_min", -30.0);
  geom.x_max = ctx.real("x_max", 30.0);
  geom.bins = static_cast<int>(ctx.integer("bins", 64));
  geom.envelope_width = ctx.real("envelope_width", 0.0);
  geom.detector_a_on = ctx.boolean("detector_a_on", false);
  geom.validate();
  return geom;
}

void run_twoslit(RunContext& ctx) {
  const SlitGeometry geom = geometry_from(ctx);
  const std::int64_t n = ctx.integer("n", 1000000);
  const auto rep = two_slit_experiment(geom, n, ctx.seed);
  CsvBuilder csv({"bin_center", "count", "expected"});
  const auto w = rep.expected.weights();
  for (std::size_t b = 0; b < rep.counts.size(); ++b) {
    csv.cell(rep.expected.value_at(b)).cell(rep.counts[b])
        .cell(w[b] * static_cast<double>(n));
    csv.end_row();
  }
  ctx.tables["twoslit"] = csv.str();
  ctx.metric("chi_square", rep.chi_square);
  ctx.metric("chi_dof", static_cast<std::int64_t>(rep.chi_dof));
  ctx.metric("p_value", rep.p_value);
  ctx.metric("fringe_visibility", rep.fringe_visibility);
  ctx.metric("slit_a", rep.slit_a);
  ctx.metric("slit_b", rep.slit_b);
}

void run_schwarzschild(RunContext& ctx) {
  const double r_bar = ctx.real("r_bar", 10.0);
  const double gm = ctx.real("gm", 1.0);
  const double threshold = ctx.real("threshold", 1e6);
  const auto rep = schwarzschild_distances(r_bar, gm, threshold);
  CsvBuilder csv({"level", "partial_sum"});
  for (std::size_t l = 0; l < rep.covariant.partial_sums.size(); ++l) {
    csv.cell(static_cast<std::int64_t>(l)).cell(rep.covariant.partial_sums[l]);
    csv.end_row();
  }
  ctx.tables["schwarzschild"] = csv.str();
  ctx.metric("contravariant", rep.contravariant);
  ctx.metric("diverged", rep.covariant.diverged);
  ctx.metric("covariant_value",
             rep.covariant.diverged ? 0.0 : rep.covariant.value);
  ctx.metric("singularity_r", rep.covariant.singularity_r);
  ctx.metric("last_partial_sum", rep.covariant.partial_sums.empty()
                                     ? 0.0
                                     : rep.covariant.partial_sums.back());
}

void run_measurement_demo(RunContext& ctx) {
  const double v = ctx.real("v", 0.5);
  const double x_f = ctx.real("x_f", 2.0);
  const double x_b = ctx.real("x_b", 1.0);
  const double t0 = ctx.real("t0", 0.25);
  const std::int64_t random_trials = ctx.integer("random_trials", 0);

  CsvBuilder csv({"case", "v", "x_b", "x_f", "t0", "t1", "t2", "dt", "dx",
                  "residual"});
  double max_residual = 0.0;
  const auto emit = [&](const std::string& label, double vv, double xb,
                        double xf, double tt) {
    const MeasurementReport r = idealized_measurement(vv, xf, xb, tt);
    max_residual = std::max(max_residual, r.residual);
    csv.cell(label).cell(vv).cell(xb).cell(xf).cell(tt).cell(r.t1).cell(r.t2)
        .cell(r.dt).cell(r.dx).cell(r.residual);
    csv.end_row();
  };
  emit("configured", v, x_b, x_f, t0);
  RandomStream stream = RandomStream::from(ctx.seed, 0x6d65617375ull);
  for (std::int64_t i = 0; i < random_trials; ++i) {
    const double vv = 1.9 * stream.next_u01() - 0.95;
    const double xb = 0.5 + 4.0 * stream.next_u01();
    const double xf = xb + 0.1 + 4.0 * stream.next_u01();
    const double tt = stream.next_u01();
    emit("random", vv, xb, xf, tt);
  }
  ctx.tables["measurement"] = csv.str();
  ctx.metric("max_residual", max_residual);
}

// ---------------------------------------------------------------------------
// Registry.

const std::vector<ExperimentDef>& registry() {
  static const std::vector<ExperimentDef> defs = [] {
    std::vector<ExperimentDef> d;
    d.push_back({"interference-grid",
                 false,
                 {{"grid", ParamType::integer, 2, 2000}},
                 run_interference_grid});
    d.push_back({"variance-scaling",
                 true,
                 {{"m_values", ParamType::int_list, 1, 1e6},
                  {"trials", ParamType::integer, 1000, 1e7},
                  {"sigma", ParamType::real, 0, 10},
                  {"mode", ParamType::text, 0, 0, {"stochastic", "crypto"}},
                  {"frequency", ParamType::real, 1e30, 1e43}},
                 run_variance_scaling});
    d.push_back({"spread",
                 true,
                 {{"particles", ParamType::integer, 1000, 1e6},
                  {"steps", ParamType::integer, 1, 10000},
                  {"ds", ParamType::real, 1e-6, 10},
                  {"spacing", ParamType::real, 1e-6, 10},
                  {"sigma", ParamType::real, 0, 10},
                  {"mode", ParamType::text, 0, 0, {"stochastic", "crypto"}},
                  {"frequency", ParamType::real, 1e30, 1e43}},
                 run_spread});
    d.push_back({"uncertainty",
                 true,
                 {{"m_values", ParamType::int_list, 1, 1e6},
                  {"trials", ParamType::integer, 1000, 1e7},
                  {"p_cov", ParamType::real_list, -1e6, 1e6},
                  {"grain", ParamType::real, 1e-9, 1e9},
                  {"sigma", ParamType::real, 0, 10},
                  {"mode", ParamType::text, 0, 0, {"stochastic", "crypto"}},
                  {"frequency", ParamType::real, 1e30, 1e43}},
                 run_uncertainty});
    d.push_back({"malus",
                 true,
                 {{"deltas", ParamType::real_list, -100, 100},
                  {"n", ParamType::integer, 10000, 1e9}},
                 run_malus});
    d.push_back({"chain",
                 true,
                 {{"axes", ParamType::real_list, -100, 100},
                  {"source", ParamType::text, 0, 0, {"fixed", "unpolarized"}},
                  {"source_angle", ParamType::real, -100, 100},
                  {"n", ParamType::integer, 10000, 1e9}},
                 run_chain});
    d.push_back({"chsh",
                 true,
                 {{"a", ParamType::real, -100, 100},
                  {"a_prime", ParamType::real, -100, 100},
                  {"b", ParamType::real, -100, 100},
                  {"b_prime", ParamType::real, -100, 100},
                  {"n", ParamType::integer, 100000, 1e9},
                  {"mode", ParamType::text, 0, 0, {"collapse", "classical"}},
                  {"lock", ParamType::text, 0, 0, {"in-phase", "pi-offset"}}},
                 run_chsh});
    d.push_back({"twoslit",
                 true,
                 {{"slit_separation", ParamType::real, 1e-6, 1e6},
                  {"screen_distance", ParamType::real, 1e-6, 1e9},
                  {"lambda", ParamType::real, 1e-9, 1e6},
                  {"x_min", ParamType::real, -1e9, 1e9},
                  {"x_max", ParamType::real, -1e9, 1e9},
                  {"bins", ParamType::integer, 16, 4096},
                  {"envelope_width", ParamType::real, 0, 1e6},
                  {"detector_a_on", ParamType::boolean},
                  {"n", ParamType::integer, 10000, 1e9}},
                 run_twoslit});
    d.push_back({"schwarzschild-demo",
                 false,
                 {{"r_bar", ParamType::real, 1e-9, 1e12},
                  {"gm", ParamType::real, 0, 1e12},
                  {"threshold", ParamType::real, 1, 1e12}},
                 run_schwarzschild});
    d.push_back({"measurement-demo",
                 false,
                 {{"v", ParamType::real, -0.999999999, 0.999999999},
                  {"x_f", ParamType::real, 1e-9, 1e9},
                  {"x_b", ParamType::real, 1e-9, 1e9},
                  {"t0", ParamType::real, -1e9, 1e9},
                  {"random_trials", ParamType::integer, 0, 1e6}},
                 run_measurement_demo});
    return d;
  }();
  return defs;
}

// ---------------------------------------------------------------------------
// Validation.

void check_range(const ParamDesc& desc, double v) {
  if (v < desc.min || v > desc.max)
    throw ConfigError(std::string("param '") + desc.name +
                      "' out of range [" + format_double(desc.min) + ", " +
                      format_double(desc.max) + "]");
}

void validate_param(const ParamDesc& desc, const ParamValue& value) {
  const auto type_error = [&]() -> ConfigError {
    return ConfigError(std::string("param '") + desc.name +
                       "' has the wrong type");
  };
  switch (desc.type) {
    case ParamType::boolean:
      if (!std::holds_alternative<bool>(value)) throw type_error();
      break;
    case ParamType::integer: {
      const auto* i = std::get_if<std::int64_t>(&value);
      if (!i) throw type_error();
      check_range(desc, static_cast<double>(*i));
      break;
    }
    case ParamType::real: {
      if (const auto* d = std::get_if<double>(&value)) {
        check_range(desc, *d);
      } else if (const auto* i = std::get_if<std::int64_t>(&value)) {
        check_range(desc, static_cast<double>(*i));
      } else {
        throw type_error();
      }
      break;
    }
    case ParamType::text: {
      const auto* s = std::get_if<std::string>(&value);
      if (!s) throw type_error();
      if (!desc.allowed.empty()) {
        for (const char* a : desc.allowed)
          if (*s == a) return;
        throw ConfigError(std::string("param '") + desc.name +
                          "' has unsupported value '" + *s + "'");
      }
      break;
    }
    case ParamType::real_list: {
      if (const auto* d = std::get_if<std::vector<double>>(&value)) {
        for (double x : *d) check_range(desc, x);
      } else if (const auto* i = std::get_if<std::vector<std::int64_t>>(&value)) {
        for (std::int64_t x : *i) check_range(desc, static_cast<double>(x));
      } else {
        throw type_error();
      }
      break;
    }
    case ParamType::int_list: {
      const auto* i = std::get_if<std::vector<std::int64_t>>(&value);
      if (!i) throw type_error();
      for (std::int64_t x : *i) check_range(desc, static_cast<double>(x));
      break;
    }
  }
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& def : registry()) out.emplace_back(def.name);
    return out;
  }();
  return names;
}

void validate_spec(const ExperimentSpec& spec) {
  const ExperimentDef& def = find_experiment(spec.experiment);
  if (def.stochastic && !spec.seed)
    throw ConfigError("experiment '" + spec.experiment +
                      "' is stochastic and requires an explicit seed");
  for (const auto& [name, value] : spec.params) {
    const ParamDesc* desc = nullptr;
    for (const auto& d : def.params)
      if (name == d.name) {
        desc = &d;
        break;
      }
    if (!desc)
      throw ConfigError("unknown param '" + name + "' for experiment '" +
                        spec.experiment + "'");
    validate_param(*desc, value);
  }
  // Cross-field constraints that involve the seed.
  if (spec.experiment == "measurement-demo" && !spec.seed) {
    const auto it = spec.params.find("random_trials");
    if (it != spec.params.end() && std::get<std::int64_t>(it->second) > 0)
      throw ConfigError("measurement-demo with random_trials needs a seed");
  }
}

ExperimentSpec parse_spec_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentSpec spec;
  if (!root.contains("experiment") || !root["experiment"].is_string())
    throw ConfigError("config needs a string 'experiment' field");
  spec.experiment = root["experiment"].get<std::string>();

  if (root.contains("seed")) {
    const auto& s = root["seed"];
    if (!s.is_number_integer() && !s.is_number_unsigned())
      throw ConfigError("'seed' must be an integer");
    spec.seed = s.get<std::uint64_t>();
  }
  if (root.contains("output_dir")) {
    if (!root["output_dir"].is_string())
      throw ConfigError("'output_dir' must be a string");
    spec.output_dir = root["output_dir"].get<std::string>();
  }
  if (root.contains("params")) {
    const auto& p = root["params"];
    if (!p.is_object()) throw ConfigError("'params' must be an object");
    for (const auto& [key, value] : p.items()) {
      if (value.is_boolean()) {
        spec.params[key] = value.get<bool>();
      } else if (value.is_number_integer() || value.is_number_unsigned()) {
        spec.params[key] = value.get<std::int64_t>();
      } else if (value.is_number_float()) {
        spec.params[key] = value.get<double>();
      } else if (value.is_string()) {
        spec.params[key] = value.get<std::string>();
      } else if (value.is_array()) {
        bool all_int = true;
        for (const auto& e : value) {
          if (e.is_number_integer() || e.is_number_unsigned()) continue;
          if (e.is_number_float()) {
            all_int = false;
            continue;
          }
          throw ConfigError("param '" + key + "' array must be numeric");
        }
        if (all_int) {
          spec.params[key] = value.get<std::vector<std::int64_t>>();
        } else {
          spec.params[key] = value.get<std::vector<double>>();
        }
      } else {
        throw ConfigError("param '" + key + "' has an unsupported JSON type");
      }
    }
  }
  for (const auto& [key, value] : root.items()) {
    (void)value;
    if (key != "experiment" && key != "seed" && key != "params" &&
        key != "output_dir")
      throw ConfigError("unknown config field '" + key + "'");
  }
  return spec;
}

namespace {

ordered_json param_to_json(const ParamValue& v) {
  return std::visit([](const auto& x) { return ordered_json(x); }, v);
}

void write_outputs(const ExperimentSpec& spec, const ExperimentResult& result) {
  if (spec.output_dir.empty()) return;
  namespace fs = std::filesystem;
  fs::create_directories(spec.output_dir);
  {
    std::ofstream out(fs::path(spec.output_dir) / "summary.json",
                      std::ios::binary);
    out << result.summary_json;
  }
  for (const auto& [name, payload] : result.tables) {
    std::ofstream out(fs::path(spec.output_dir) / (name + ".csv"),
                      std::ios::binary);
    out << payload;
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  const ExperimentDef& def = find_experiment(spec.experiment);

  RunContext ctx{spec, def};
  ctx.seed = spec.seed.value_or(0);
  def.run(ctx);

  ordered_json summary = ordered_json::object();
  summary["experiment"] = spec.experiment;
  summary["version"] = std::string(kVersion);
  if (spec.seed)
    summary["seed"] = *spec.seed;
  else
    summary["seed"] = nullptr;
  // Effective parameters (defaults resolved), in the order they were read.
  summary["params"] = ctx.effective_params;
  // Raw overrides as supplied, for provenance.
  ordered_json overrides = ordered_json::object();
  for (const auto& [key, value] : spec.params)
    overrides[key] = param_to_json(value);
  summary["overrides"] = overrides;
  summary["output_dir"] = spec.output_dir;
  summary["metrics"] = ctx.metrics;

  ExperimentResult result;
  result.summary_json = summary.dump(2) + "\n";
  result.tables = std::move(ctx.tables);
  result.metrics = std::move(ctx.scalar_metrics);
  write_outputs(spec, result);
  return result;
}

}  // namespace cml
