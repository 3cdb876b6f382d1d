#include "mixlab/runner.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixlab/checks.hpp"
#include "mixlab/csv.hpp"
#include "mixlab/mixlab.hpp"
#include "mixlab/serialize.hpp"

namespace mixlab {

namespace {

// Output sink: a file when a path is given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::int64_t int_or(const nlohmann::json& j, const char* key, std::int64_t fallback) {
  return j.contains(key) ? j.at(key).get<std::int64_t>() : fallback;
}

double real_or(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

SubsetState subset_from_json(const nlohmann::json& j, Index n) {
  if (j.is_number_unsigned() || j.is_number_integer())
    return SubsetState(n, j.get<std::uint64_t>());
  if (j.is_array()) {
    std::uint64_t bits = 0;
    for (const auto& entry : j) {
      const Index x = entry.get<Index>();
      if (x < 0 || x >= n) throw std::invalid_argument("set: state out of range");
      bits |= std::uint64_t{1} << x;
    }
    return SubsetState(n, bits);
  }
  throw std::invalid_argument("set: expected bitmask or state list");
}

int cmd_target(const nlohmann::json& cfg, const RunConfig& rc) {
  const ChainSequence seq = chain_from_json(cfg, rc.seed);
  const std::int64_t t = int_or(cfg, "t", 0);
  const TargetResult res = target_distribution(seq, t, real_or(cfg, "tol", 1e-9),
                                               int_or(cfg, "max_lookback", 1 << 16));
  Sink sink(rc.out_path);
  sink.stream() << distribution_to_json(res.pi).dump(2) << '\n';
  std::cerr << "certified: contraction " << res.certificate.delta << " at lookback "
            << res.certificate.lookback << '\n';
  return 0;
}

int cmd_mix(const nlohmann::json& cfg, const RunConfig& rc) {
  const ChainSequence seq = chain_from_json(cfg, rc.seed);
  const std::int64_t s = int_or(cfg, "s", 0);
  const std::int64_t t_max = int_or(cfg, "t_max", 64);
  const double eps = real_or(cfg, "eps", 0.25);
  const TargetSeries targets(seq, s, s + t_max, real_or(cfg, "tol", 1e-9),
                             int_or(cfg, "max_lookback", 1 << 16));
  const std::vector<double> d = distance_trajectory(seq, targets, s, t_max);
  const std::optional<std::int64_t> t_mix = mixing_time(seq, targets, s, eps, t_max);
  Sink sink(rc.out_path);
  CsvWriter csv(sink.stream());
  csv.header({"t", "d", "t_mix_flag"});
  for (std::int64_t t = 0; t <= t_max; ++t)
    csv.row({t, d[static_cast<std::size_t>(t)],
             std::int64_t{t_mix && *t_mix == t ? 1 : 0}});
  if (t_mix)
    std::cerr << "mixed at t = " << *t_mix << '\n';
  else
    std::cerr << "not mixed within t_max = " << t_max << '\n';
  return 0;
}

int cmd_evolve(const nlohmann::json& cfg, const RunConfig& rc) {
  const ChainSequence seq = chain_from_json(cfg, rc.seed);
  const std::int64_t t0 = int_or(cfg, "t0", 0);
  const std::int64_t horizon = int_or(cfg, "horizon", 32);
  const SubsetState S0 = subset_from_json(cfg.at("set"), seq.size());
  const TargetSeries targets(seq, t0, t0 + horizon, real_or(cfg, "tol", 1e-9),
                             int_or(cfg, "max_lookback", 1 << 16));
  const EvolveTrace trace =
      simulate_trace(seq, targets, S0, t0, horizon, rc.seed,
                     static_cast<std::uint64_t>(int_or(cfg, "trial", 0)));
  Sink sink(rc.out_path);
  CsvWriter csv(sink.stream());
  csv.header({"k", "t", "set_bits", "set_size", "target_mass"});
  for (std::size_t k = 0; k < trace.states.size(); ++k) {
    const auto& S = trace.states[k];
    const std::int64_t t = t0 + static_cast<std::int64_t>(k);
    csv.row({static_cast<std::int64_t>(k), t, std::uint64_t{S.bits()},
             static_cast<std::int64_t>(S.count()), mass_of(targets.at(t), S)});
  }
  if (trace.absorption)
    std::cerr << "absorbed after " << *trace.absorption << " steps\n";
  return 0;
}

int cmd_bottleneck(const nlohmann::json& cfg, const RunConfig& rc) {
  const ChainSequence seq = chain_from_json(cfg, rc.seed);
  const std::int64_t t = int_or(cfg, "t", 1);
  const TargetSeries targets(seq, t - 1, t, real_or(cfg, "tol", 1e-9),
                             int_or(cfg, "max_lookback", 1 << 16));
  const bool exact = seq.size() <= 20;
  const double phi =
      exact ? bottleneck_ratio_exact(seq, targets, t)
            : bottleneck_ratio_sampled(seq, targets, t, int_or(cfg, "samples", 4096),
                                       rc.seed);
  if (!exact)
    std::cerr << "sampled estimate (n > 20): upper bound on the exact minimum\n";
  Sink sink(rc.out_path);
  CsvWriter csv(sink.stream());
  csv.header({"t", "phi_star", "exact"});
  csv.row({t, phi, std::int64_t{exact ? 1 : 0}});
  return 0;
}

int cmd_bound(const nlohmann::json& cfg, const RunConfig& rc) {
  const ChainSequence seq = chain_from_json(cfg, rc.seed);
  const std::int64_t s0 = int_or(cfg, "s0", 0);
  const std::int64_t t = int_or(cfg, "t", 8);
  const double eps = real_or(cfg, "eps", 0.25);
  const TargetSeries targets(seq, s0, t, real_or(cfg, "tol", 1e-9),
                             int_or(cfg, "max_lookback", 1 << 16));
  const BoundReport report = build_bound_report(seq, targets, s0, t);
  Sink sink(rc.out_path);
  CsvWriter csv(sink.stream());
  csv.header({"s", "g_s", "phi_star_s", "factor_s", "running_product", "theta_s"});
  double theta_running = std::numeric_limits<double>::infinity();
  for (const auto& step : report.steps) {
    const double half_g = 0.5 * step.drift_floor;
    const double c = half_g / (1.0 - half_g) * step.bottleneck_star;
    theta_running = std::min(theta_running, c * c);
    csv.row({step.s, step.drift_floor, step.bottleneck_star, step.factor,
             step.running_product, theta_running});
  }
  std::cerr << "condition met: " << (theorem_condition(report, eps) ? "yes" : "no") << '\n';
  if (const auto F = corollary_time_bound(report, eps))
    std::cerr << "sufficient elapsed time: " << *F << '\n';
  else
    std::cerr << "sufficient elapsed time: unbounded (coefficient is zero)\n";
  return 0;
}

int cmd_er_mix(const nlohmann::json& cfg, const RunConfig& rc) {
  const ExperimentConfig config = experiment_config_from_json(cfg, rc.seed, rc.threads);
  const std::vector<ExperimentResult> results = mixing_experiment(config);
  Sink sink(rc.out_path);
  CsvWriter csv(sink.stream());
  csv.header({"n", "seed", "t", "d_0_t", "t_mix_flag"});
  for (const auto& r : results)
    for (std::size_t t = 0; t < r.distances.size(); ++t)
      csv.row({static_cast<std::int64_t>(r.n), std::uint64_t{r.seed},
               static_cast<std::int64_t>(t), r.distances[t],
               std::int64_t{r.t_mix && *r.t_mix == static_cast<std::int64_t>(t) ? 1 : 0}});
  return 0;
}

int cmd_er_conc(const nlohmann::json& cfg, const RunConfig& rc) {
  const ExperimentConfig config = experiment_config_from_json(cfg, rc.seed, rc.threads);
  const std::vector<ExperimentResult> results = concentration_experiment(config);
  Sink sink(rc.out_path);
  CsvWriter csv(sink.stream());
  csv.header({"n", "seed", "t", "min_npi", "max_npi", "connected", "degree_event"});
  for (const auto& r : results)
    for (std::size_t t = 0; t < r.scaled_mass.size(); ++t)
      csv.row({static_cast<std::int64_t>(r.n), std::uint64_t{r.seed},
               static_cast<std::int64_t>(t), r.scaled_mass[t].first,
               r.scaled_mass[t].second, std::int64_t{r.connected[t]},
               std::int64_t{r.degrees_in_band[t]}});
  return 0;
}

int cmd_er_lower(const nlohmann::json& cfg, const RunConfig& rc) {
  const ExperimentConfig config = experiment_config_from_json(cfg, rc.seed, rc.threads);
  Sink sink(rc.out_path);
  CsvWriter csv(sink.stream());
  csv.header({"n", "seed", "k", "reach_size", "within_threshold", "certified_k",
              "formula_bound"});
  for (Index n : config.n_grid)
    for (int trial = 0; trial < config.seeds; ++trial) {
      const std::uint64_t seed = trial_seed(config.master_seed, n, trial);
      const ERParams params{n, config.eta, seed};
      const std::int64_t k_max =
          config.horizon > 0 ? config.horizon : default_mixing_horizon(n, config.eps);
      const ReachableGrowth growth = reachable_growth(params, 0, k_max);
      const double formula = reachable_formula_bound(n, config.eta);
      for (std::size_t k = 0; k < growth.sizes.size(); ++k)
        csv.row({static_cast<std::int64_t>(n), std::uint64_t{seed},
                 static_cast<std::int64_t>(k), static_cast<std::int64_t>(growth.sizes[k]),
                 std::int64_t{static_cast<double>(growth.sizes[k]) <= growth.mass_threshold
                                  ? 1
                                  : 0},
                 growth.certified_steps, formula});
    }
  return 0;
}

int cmd_er_theta(const nlohmann::json& cfg, const RunConfig& rc) {
  const ExperimentConfig config = experiment_config_from_json(cfg, rc.seed, rc.threads);
  const std::vector<ExperimentResult> results = coefficient_experiment(config);
  Sink sink(rc.out_path);
  CsvWriter csv(sink.stream());
  csv.header({"n", "seed", "t", "g_t", "phi_star_t", "theta_t", "connected"});
  for (const auto& r : results)
    for (std::size_t i = 0; i < r.thetas.size(); ++i)
      csv.row({static_cast<std::int64_t>(r.n), std::uint64_t{r.seed},
               static_cast<std::int64_t>(i + 1), r.drift_floors[i], r.bottleneck_stars[i],
               r.thetas[i], std::int64_t{r.connected[i]}});
  return 0;
}

int cmd_bounds(const nlohmann::json& cfg, const RunConfig& rc) {
  const Index n = cfg.at("n").get<Index>();
  const double eta = cfg.at("eta").get<double>();
  const TailBounds b = tail_bounds(n, eta);
  nlohmann::json out = {
      {"n", n},
      {"eta", eta},
      {"degree_upper_exponent", b.degree_upper_exponent},
      {"degree_upper", b.degree_upper},
      {"degree_lower_exponent", b.degree_lower_exponent},
      {"degree_lower", b.degree_lower},
      {"degree_band_union", b.degree_band_union},
      {"degree_band_union_exponent", b.degree_band_union_exponent},
      {"single_disconnect_exponent", b.single_disconnect_exponent},
      {"single_disconnect", b.single_disconnect},
      {"window_disconnect_exponent", b.window_disconnect_exponent},
      {"window_disconnect", b.window_disconnect},
  };
  Sink sink(rc.out_path);
  sink.stream() << out.dump(2) << '\n';
  return 0;
}

int cmd_check(const RunConfig& rc) {
  const std::vector<CheckResult> results = run_self_checks(rc.seed);
  int failures = 0;
  Sink sink(rc.out_path);
  for (const auto& r : results) {
    sink.stream() << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) sink.stream() << "  (" << r.detail << ")";
    sink.stream() << '\n';
    if (!r.pass) ++failures;
  }
  sink.stream() << results.size() - failures << "/" << results.size() << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run(const RunConfig& rc) {
  try {
    if (rc.subcommand == "check") return cmd_check(rc);
    const nlohmann::json cfg = load_json_file(rc.config_path);
    if (rc.subcommand == "target") return cmd_target(cfg, rc);
    if (rc.subcommand == "mix") return cmd_mix(cfg, rc);
    if (rc.subcommand == "evolve") return cmd_evolve(cfg, rc);
    if (rc.subcommand == "bottleneck") return cmd_bottleneck(cfg, rc);
    if (rc.subcommand == "bound") return cmd_bound(cfg, rc);
    if (rc.subcommand == "er-mix") return cmd_er_mix(cfg, rc);
    if (rc.subcommand == "er-conc") return cmd_er_conc(cfg, rc);
    if (rc.subcommand == "er-lower") return cmd_er_lower(cfg, rc);
    if (rc.subcommand == "er-theta") return cmd_er_theta(cfg, rc);
    if (rc.subcommand == "bounds") return cmd_bounds(cfg, rc);
    std::cerr << "unknown subcommand: " << rc.subcommand << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace mixlab
