#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "mixlab/chain_sequence.hpp"
#include "mixlab/distribution.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/stochastic_matrix.hpp"

namespace mixlab {

// On-disk formats:
//   matrix        {"n": 3, "rows": [[...], [...], [...]]}
//   distribution  {"n": 3, "mass": [...]}
//   chain config  {"n": 3, "source": "explicit", "matrices": [rows, ...], "t0": 1}
//                 {"n": 3, "source": "er", "matrices": {"eta": 60.0, "seed": 7}}
// Explicit matrices may be given as plain row arrays or as matrix objects.

nlohmann::json matrix_to_json(const StochasticMatrix& P);
StochasticMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json distribution_to_json(const Distribution& pi);
Distribution distribution_from_json(const nlohmann::json& j);

// Builds the kernel sequence described by a chain config.  For the "er"
// source a missing seed falls back to `default_seed`.  `t0` shifts the
// first explicit matrix to time t0 (default 1, so products from time 0
// use the whole list).
ChainSequence chain_from_json(const nlohmann::json& j, std::uint64_t default_seed);

// Extracts the environment-experiment knobs; unknown keys are rejected so
// typos fail loudly.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             std::uint64_t default_seed, int threads);

nlohmann::json load_json_file(const std::string& path);

}  // namespace mixlab
