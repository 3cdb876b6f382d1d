#include <string>

#include "CLI11.hpp"
#include "mixlab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quenched mixing toolkit for time-varying Markov chains"};
  app.require_subcommand(1);

  mixlab::RunConfig config;

  const auto add_common = [&config](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("-c,--config", config.config_path,
                                "JSON description of the chain or experiment");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", config.out_path,
                    "Output file (default: stdout)");
    sub->add_option("-s,--seed", config.seed, "Master seed")
        ->default_val(std::uint64_t{1});
    sub->add_option("-j,--threads", config.threads, "Worker threads")
        ->default_val(1)
        ->check(CLI::PositiveNumber);
  };

  struct Entry {
    const char* name;
    const char* help;
    bool needs_config;
  };
  const Entry entries[] = {
      {"target", "Certified time-dependent target distribution at one time", true},
      {"mix", "Worst-case distance trajectory and mixing time", true},
      {"evolve", "Simulated nested-set trajectories", true},
      {"bottleneck", "Per-step conductance profile", true},
      {"bound", "Certified mixing-time bound from per-step conductance", true},
      {"er-mix", "Mixing times on a resampled random-graph environment", true},
      {"er-conc", "Scaled target-mass concentration on random graphs", true},
      {"er-lower", "Support-growth certificate for the lower bound", true},
      {"er-theta", "Per-step bound coefficients on random graphs", true},
      {"bounds", "Closed-form tail exponents for one (n, eta) pair", true},
      {"check", "Built-in consistency checks", false},
  };
  for (const Entry& e : entries) add_common(app.add_subcommand(e.name, e.help), e.needs_config);

  CLI11_PARSE(app, argc, argv);

  config.subcommand = app.get_subcommands().front()->get_name();
  return mixlab::run(config);
}
