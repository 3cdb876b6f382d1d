#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mixlab/csv.hpp"
#include "mixlab/mixlab.hpp"
#include "mixlab/runner.hpp"
#include "mixlab/serialize.hpp"
#include "oracle.hpp"

using namespace mixlab;

namespace {

std::string write_file(const std::string& name, const std::string& content) {
  std::ofstream out(name);
  out << content;
  return name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

nlohmann::json explicit_chain_config() {
  nlohmann::json row_pair = {{0.7, 0.3}, {0.3, 0.7}};
  nlohmann::json matrices = nlohmann::json::array();
  for (int k = 0; k < 36; ++k) matrices.push_back(row_pair);
  return {{"n", 2},          {"source", "explicit"}, {"t0", 1},
          {"matrices", matrices}, {"t", 36},          {"s", 30},
          {"t_max", 6}};
}

}  // namespace

TEST_CASE("matrices and distributions round-trip through json") {
  CounterRng rng{61, 0};
  const StochasticMatrix P = fixture::random_stochastic(5, rng);
  const StochasticMatrix back = matrix_from_json(matrix_to_json(P));
  CHECK((P.entries() - back.entries()).cwiseAbs().maxCoeff() == 0.0);

  Vector mass(4);
  mass << 0.12, 0.38, 0.25, 0.25;
  const Distribution pi(mass);
  const Distribution pi_back = distribution_from_json(distribution_to_json(pi));
  CHECK((pi.mass() - pi_back.mass()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS((void)matrix_from_json(nlohmann::json{{"n", 2}}), std::invalid_argument);
  CHECK_THROWS_AS((void)distribution_from_json(nlohmann::json{{"mass", {0.5, 0.5}}}),
                  std::invalid_argument);
}

TEST_CASE("chain configs load explicit and sampled sources") {
  nlohmann::json j = {
      {"n", 2},
      {"source", "explicit"},
      {"t0", 2},
      {"matrices",
       {// Plain row arrays and full matrix objects may be mixed.
        {{0.6, 0.4}, {0.5, 0.5}},
        {{"n", 2}, {"rows", {{0.9, 0.1}, {0.2, 0.8}}}}}},
  };
  const ChainSequence seq = chain_from_json(j, 1);
  CHECK(seq.size() == 2);
  CHECK(seq.covers(2, 3));
  CHECK(!seq.covers(2, 4));
  CHECK(seq.matrix(2)(0, 1) == 0.4);
  CHECK(seq.matrix(3)(0, 0) == 0.9);

  nlohmann::json er = {{"n", 10}, {"source", "er"}, {"matrices", {{"eta", 2.0}, {"seed", 7}}}};
  const ChainSequence from_config = chain_from_json(er, 99);
  const ChainSequence direct = erdos_renyi_sequence(ERParams{10, 2.0, 7});
  CHECK((from_config.matrix(5).entries() - direct.matrix(5).entries()).cwiseAbs().maxCoeff() ==
        0.0);

  // Without an explicit seed the default one is used.
  nlohmann::json er_default = {{"n", 10}, {"source", "er"}, {"matrices", {{"eta", 2.0}}}};
  const ChainSequence defaulted = chain_from_json(er_default, 7);
  CHECK((defaulted.matrix(5).entries() - direct.matrix(5).entries()).cwiseAbs().maxCoeff() ==
        0.0);

  nlohmann::json bad = {{"n", 2}, {"source", "mystery"}, {"matrices", nlohmann::json::array()}};
  CHECK_THROWS_AS((void)chain_from_json(bad, 1), std::invalid_argument);
}

TEST_CASE("experiment configs apply defaults and reject unknown keys") {
  nlohmann::json j = {{"n_grid", {64, 128}}, {"eta", 50.0}, {"seeds", 3}};
  const ExperimentConfig config = experiment_config_from_json(j, 17, 4);
  CHECK(config.n_grid == std::vector<Index>{64, 128});
  CHECK(config.eta == 50.0);
  CHECK(config.seeds == 3);
  CHECK(config.eps == 0.25);
  CHECK(config.horizon == 0);
  CHECK(config.tol == 1e-6);
  CHECK(config.master_seed == 17);
  CHECK(config.threads == 4);

  nlohmann::json with_seed = {{"n_grid", {16}}, {"seed", 123}};
  CHECK(experiment_config_from_json(with_seed, 17, 1).master_seed == 123);

  nlohmann::json unknown = {{"n_grid", {16}}, {"mystery", 1}};
  CHECK_THROWS_AS((void)experiment_config_from_json(unknown, 1, 1), std::invalid_argument);
  nlohmann::json empty_grid = {{"n_grid", nlohmann::json::array()}};
  CHECK_THROWS_AS((void)experiment_config_from_json(empty_grid, 1, 1), std::invalid_argument);
}

TEST_CASE("csv rows are comma separated with minimal quoting") {
  std::stringstream out;
  CsvWriter csv(out);
  csv.header({"a", "b", "c"});
  csv.row({std::int64_t{-3}, 0.125, std::string{"plain"}});
  csv.row({std::uint64_t{7}, 0.1, std::string{"needs,quote"}});
  csv.row({std::int64_t{0}, 1.0, std::string{"has\"inner"}});
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "a,b,c");
  CHECK(lines[1] == "-3,0.125,plain");
  CHECK(lines[2] == "7,0.10000000000000001,\"needs,quote\"");
  CHECK(lines[3] == "0,1,\"has\"\"inner\"");

  // Doubles round-trip bit exactly through the printed form.
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, -7.25e-19}) {
    const std::string s = CsvWriter::format(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("the runner emits certified targets end to end") {
  const std::string cfg =
      write_file("harness_target_cfg.json", explicit_chain_config().dump());
  RunConfig rc;
  rc.subcommand = "target";
  rc.config_path = cfg;
  rc.out_path = "harness_target_out.json";
  REQUIRE(run(rc) == 0);
  const Distribution pi =
      distribution_from_json(nlohmann::json::parse(slurp(rc.out_path)));
  // The constant kernel's stationary law is the even split.
  CHECK(std::abs(pi(0) - 0.5) <= 1e-9);
  CHECK(std::abs(pi(1) - 0.5) <= 1e-9);
}

TEST_CASE("the runner emits distance trajectories end to end") {
  const std::string cfg = write_file("harness_mix_cfg.json", explicit_chain_config().dump());
  RunConfig rc;
  rc.subcommand = "mix";
  rc.config_path = cfg;
  rc.out_path = "harness_mix_out.csv";
  REQUIRE(run(rc) == 0);
  const auto lines = lines_of(slurp(rc.out_path));
  REQUIRE(lines.size() == 8);  // header plus t = 0..6
  CHECK(lines[0] == "t,d,t_mix_flag");
  double prev = 1.0;
  int flags = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = fields_of(lines[i]);
    REQUIRE(fields.size() == 3);
    CHECK(std::stoll(fields[0]) == static_cast<long long>(i) - 1);
    const double d = std::strtod(fields[1].c_str(), nullptr);
    CHECK(d <= prev + 1e-12);
    prev = d;
    flags += fields[2] == "1" ? 1 : 0;
  }
  CHECK(flags == 1);
}

TEST_CASE("the runner emits tail bounds end to end") {
  const std::string cfg =
      write_file("harness_bounds_cfg.json", nlohmann::json{{"n", 256}, {"eta", 60.0}}.dump());
  RunConfig rc;
  rc.subcommand = "bounds";
  rc.config_path = cfg;
  rc.out_path = "harness_bounds_out.json";
  REQUIRE(run(rc) == 0);
  const nlohmann::json out = nlohmann::json::parse(slurp(rc.out_path));
  const TailBounds b = tail_bounds(256, 60.0);
  CHECK(out.at("degree_upper_exponent").get<double>() == b.degree_upper_exponent);
  CHECK(out.at("window_disconnect_exponent").get<double>() == b.window_disconnect_exponent);
  CHECK(out.at("n").get<Index>() == 256);
}

TEST_CASE("the runner reports failures through its exit code") {
  RunConfig rc;
  rc.subcommand = "target";
  rc.config_path = "no_such_file.json";
  CHECK(run(rc) == 2);

  const std::string broken = write_file("harness_broken.json", "{ not json");
  rc.config_path = broken;
  CHECK(run(rc) == 2);

  const std::string cfg = write_file("harness_cfg.json", explicit_chain_config().dump());
  rc.subcommand = "no-such-command";
  rc.config_path = cfg;
  CHECK(run(rc) == 2);

  // A contraction tolerance no window can meet surfaces as a failure, not
  // a wrong answer.
  nlohmann::json impossible = explicit_chain_config();
  impossible["tol"] = 1e-30;
  const std::string hard = write_file("harness_hard.json", impossible.dump());
  rc.subcommand = "target";
  rc.config_path = hard;
  CHECK(run(rc) == 2);
}
