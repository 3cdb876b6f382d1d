#include "mixlab/serialize.hpp"

#include <fstream>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mixlab {

namespace {

Matrix rows_from_json(const nlohmann::json& rows, Index n) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != n)
    throw std::invalid_argument("matrix rows: expected " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (Index x = 0; x < n; ++x) {
    const auto& row = rows[static_cast<std::size_t>(x)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw std::invalid_argument("matrix rows: row " + std::to_string(x) +
                                  " has wrong length");
    for (Index y = 0; y < n; ++y) m(x, y) = row[static_cast<std::size_t>(y)].get<double>();
  }
  return m;
}

}  // namespace

nlohmann::json matrix_to_json(const StochasticMatrix& P) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index x = 0; x < P.size(); ++x) {
    nlohmann::json row = nlohmann::json::array();
    for (Index y = 0; y < P.size(); ++y) row.push_back(P(x, y));
    rows.push_back(std::move(row));
  }
  return {{"n", P.size()}, {"rows", std::move(rows)}};
}

StochasticMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.contains("n") || !j.contains("rows"))
    throw std::invalid_argument("matrix json: need keys n, rows");
  const Index n = j.at("n").get<Index>();
  return StochasticMatrix(rows_from_json(j.at("rows"), n));
}

nlohmann::json distribution_to_json(const Distribution& pi) {
  nlohmann::json mass = nlohmann::json::array();
  for (Index x = 0; x < pi.size(); ++x) mass.push_back(pi(x));
  return {{"n", pi.size()}, {"mass", std::move(mass)}};
}

Distribution distribution_from_json(const nlohmann::json& j) {
  if (!j.contains("n") || !j.contains("mass"))
    throw std::invalid_argument("distribution json: need keys n, mass");
  const Index n = j.at("n").get<Index>();
  const auto& mass = j.at("mass");
  if (!mass.is_array() || static_cast<Index>(mass.size()) != n)
    throw std::invalid_argument("distribution json: mass has wrong length");
  Vector v(n);
  for (Index x = 0; x < n; ++x) v(x) = mass[static_cast<std::size_t>(x)].get<double>();
  return Distribution(std::move(v));
}

ChainSequence chain_from_json(const nlohmann::json& j, std::uint64_t default_seed) {
  const Index n = j.at("n").get<Index>();
  const std::string source = j.at("source").get<std::string>();
  if (source == "er") {
    ERParams params;
    params.n = n;
    const auto& spec = j.at("matrices");
    params.eta = spec.at("eta").get<double>();
    params.seed = spec.contains("seed") ? spec.at("seed").get<std::uint64_t>() : default_seed;
    return erdos_renyi_sequence(params);
  }
  if (source == "explicit") {
    const auto& list = j.at("matrices");
    if (!list.is_array() || list.empty())
      throw std::invalid_argument("chain json: explicit source needs a matrix list");
    std::vector<StochasticMatrix> steps;
    steps.reserve(list.size());
    for (const auto& entry : list) {
      if (entry.is_object())
        steps.push_back(matrix_from_json(entry));
      else
        steps.push_back(StochasticMatrix(rows_from_json(entry, n)));
    }
    const std::int64_t t0 = j.contains("t0") ? j.at("t0").get<std::int64_t>() : 1;
    return ChainSequence::from_matrices(std::move(steps), t0);
  }
  throw std::invalid_argument("chain json: unknown source '" + source + "'");
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             std::uint64_t default_seed, int threads) {
  static const std::set<std::string> known = {"n_grid", "eta",  "eps",         "seeds",
                                              "horizon", "tol", "max_lookback", "seed"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key))
      throw std::invalid_argument("experiment config: unknown key '" + key + "'");
  }
  ExperimentConfig config;
  for (const auto& entry : j.at("n_grid")) config.n_grid.push_back(entry.get<Index>());
  if (config.n_grid.empty())
    throw std::invalid_argument("experiment config: empty n_grid");
  if (j.contains("eta")) config.eta = j.at("eta").get<double>();
  if (j.contains("eps")) config.eps = j.at("eps").get<double>();
  if (j.contains("seeds")) config.seeds = j.at("seeds").get<int>();
  if (j.contains("horizon")) config.horizon = j.at("horizon").get<std::int64_t>();
  if (j.contains("tol")) config.tol = j.at("tol").get<double>();
  if (j.contains("max_lookback")) config.max_lookback = j.at("max_lookback").get<std::int64_t>();
  config.master_seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : default_seed;
  config.threads = threads;
  return config;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace mixlab
