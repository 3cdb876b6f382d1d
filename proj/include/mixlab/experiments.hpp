#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "mixlab/bounds.hpp"
#include "mixlab/envelope.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/target.hpp"

namespace mixlab {

// Knobs shared by the environment experiments.  A horizon of zero lets each
// driver pick a default scaled to its n.
struct ExperimentConfig {
  std::vector<Index> n_grid;
  double eta = 60.0;
  double eps = 0.25;
  int seeds = 5;
  std::int64_t horizon = 0;
  double tol = 1e-6;
  std::int64_t max_lookback = std::int64_t(1) << 16;
  std::uint64_t master_seed = 1;
  int threads = 1;
};

// One (n, seed) run.  Only the fields the producing driver fills are
// meaningful; everything is value data so results can be emitted in a fixed
// order regardless of completion order.
struct ExperimentResult {
  Index n = 0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> t_mix;
  std::vector<double> distances;                        // d(0, t) per elapsed t
  std::vector<std::pair<double, double>> scaled_mass;   // per-t (min, max) of n*pi_t
  std::vector<char> connected;                          // per-t snapshot connectivity
  std::vector<char> degrees_in_band;                    // per-t degree-band event
  std::vector<double> drift_floors;                     // per-t g_t
  std::vector<double> bottleneck_stars;                 // per-t exact minima
  std::vector<double> thetas;                           // running min coefficient
  std::vector<Index> reach_sizes;                       // |T_x^k| per k
  std::int64_t certified_steps = -1;
  double formula_lower_bound = 0.0;
  bool window_connected = true;
};

// Runs jobs on up to `threads` workers.  Jobs only write their own slots,
// so outputs are identical for any worker count.
inline void run_jobs(std::vector<std::function<void()>>& jobs, int threads) {
  if (threads <= 1) {
    for (auto& job : jobs) job();
    return;
  }
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) break;
      jobs[i]();
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(threads, static_cast<int>(jobs.size()));
  pool.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline std::uint64_t trial_seed(std::uint64_t master, Index n, int trial) {
  return substream_key({master, stream_tag::kTrial, static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(trial)});
}

inline std::int64_t default_mixing_horizon(Index n, double eps) {
  const double t = 8.0 * (std::log(static_cast<double>(n)) + std::log(1.0 / eps));
  return static_cast<std::int64_t>(std::ceil(t)) + 4;
}

// Closed-form floor on the mixing time: as long as the reachable set grows
// by at most a factor 1 + 2 eta log n per step, fewer than this many steps
// cannot spread mass over half the plateau-weighted states.
inline double reachable_formula_bound(Index n, double eta) {
  const double nn = static_cast<double>(n);
  return std::log(nn / (2.0 * EnvelopeSchedule::kUpperPlateau)) /
         std::log(1.0 + 2.0 * eta * std::log(nn));
}

// Measures d(0, t) along the environment run for every grid point and
// seed.  Also keeps per-step snapshot events so disconnected runs can be
// excluded downstream.
inline std::vector<ExperimentResult> mixing_experiment(const ExperimentConfig& config) {
  std::vector<ExperimentResult> results;
  for (Index n : config.n_grid)
    for (int trial = 0; trial < config.seeds; ++trial) {
      ExperimentResult r;
      r.n = n;
      r.seed = trial_seed(config.master_seed, n, trial);
      results.push_back(std::move(r));
    }
  std::vector<std::function<void()>> jobs;
  jobs.reserve(results.size());
  for (auto& r : results)
    jobs.push_back([&r, &config] {
      const ERParams params{r.n, config.eta, r.seed};
      const ChainSequence seq = erdos_renyi_sequence(params);
      const std::int64_t horizon =
          config.horizon > 0 ? config.horizon : default_mixing_horizon(r.n, config.eps);
      const TargetSeries targets(seq, 0, horizon, config.tol, config.max_lookback);
      r.distances = distance_trajectory(seq, targets, 0, horizon);
      for (std::int64_t t = 0; t <= horizon; ++t) {
        if (!r.t_mix && r.distances[static_cast<std::size_t>(t)] <= config.eps) r.t_mix = t;
        const SnapshotEvents ev = snapshot_events(sample_snapshot(params, t), config.eta);
        r.connected.push_back(ev.connected ? 1 : 0);
        r.degrees_in_band.push_back(ev.degrees_in_band ? 1 : 0);
        if (!ev.connected) r.window_connected = false;
      }
      r.formula_lower_bound = reachable_formula_bound(r.n, config.eta);
    });
  run_jobs(jobs, config.threads);
  return results;
}

// Tracks the range of n * pi_t(x) along the run, plus per-snapshot events.
inline std::vector<ExperimentResult> concentration_experiment(const ExperimentConfig& config) {
  std::vector<ExperimentResult> results;
  for (Index n : config.n_grid)
    for (int trial = 0; trial < config.seeds; ++trial) {
      ExperimentResult r;
      r.n = n;
      r.seed = trial_seed(config.master_seed, n, trial);
      results.push_back(std::move(r));
    }
  std::vector<std::function<void()>> jobs;
  jobs.reserve(results.size());
  for (auto& r : results)
    jobs.push_back([&r, &config] {
      const ERParams params{r.n, config.eta, r.seed};
      const ChainSequence seq = erdos_renyi_sequence(params);
      const std::int64_t horizon = config.horizon > 0 ? config.horizon : 4 * r.n;
      const TargetSeries targets(seq, 0, horizon, config.tol, config.max_lookback);
      const double nn = static_cast<double>(r.n);
      for (std::int64_t t = 0; t <= horizon; ++t) {
        const Distribution& pi = targets.at(t);
        r.scaled_mass.emplace_back(nn * pi.min_mass(), nn * pi.mass().maxCoeff());
        const SnapshotEvents ev = snapshot_events(sample_snapshot(params, t), config.eta);
        r.connected.push_back(ev.connected ? 1 : 0);
        r.degrees_in_band.push_back(ev.degrees_in_band ? 1 : 0);
        if (!ev.connected) r.window_connected = false;
      }
    });
  run_jobs(jobs, config.threads);
  return results;
}

// Per-step drift floors, exact bottleneck minima and the running worst
// coefficient along environment runs at exhaustively enumerable n.
inline std::vector<ExperimentResult> coefficient_experiment(const ExperimentConfig& config) {
  std::vector<ExperimentResult> results;
  for (Index n : config.n_grid) {
    if (n > 16)
      throw std::invalid_argument("coefficient_experiment: exhaustive minima need n <= 16");
    for (int trial = 0; trial < config.seeds; ++trial) {
      ExperimentResult r;
      r.n = n;
      r.seed = trial_seed(config.master_seed, n, trial);
      results.push_back(std::move(r));
    }
  }
  std::vector<std::function<void()>> jobs;
  jobs.reserve(results.size());
  for (auto& r : results)
    jobs.push_back([&r, &config] {
      const ERParams params{r.n, config.eta, r.seed};
      const ChainSequence seq = erdos_renyi_sequence(params);
      const std::int64_t horizon = config.horizon > 0 ? config.horizon : 64;
      const TargetSeries targets(seq, 0, horizon, config.tol, config.max_lookback);
      double worst = std::numeric_limits<double>::infinity();
      for (std::int64_t t = 1; t <= horizon; ++t) {
        const double g = targets.drift_floor(t);
        const double phi = bottleneck_ratio_exact(seq, targets, t);
        const double half_g = 0.5 * g;
        const double c = half_g / (1.0 - half_g) * phi;
        worst = std::min(worst, c * c);
        r.drift_floors.push_back(g);
        r.bottleneck_stars.push_back(phi);
        r.thetas.push_back(worst);
        const SnapshotEvents ev = snapshot_events(sample_snapshot(params, t), config.eta);
        r.connected.push_back(ev.connected ? 1 : 0);
        r.degrees_in_band.push_back(ev.degrees_in_band ? 1 : 0);
        if (!ev.connected) r.window_connected = false;
      }
    });
  run_jobs(jobs, config.threads);
  return results;
}

struct ReachableGrowth {
  std::vector<Index> sizes;           // |T_x^k| for k = 0.. (sizes[0] = 1)
  std::int64_t certified_steps = -1;  // largest k with |T_x^k| <= n / (2 * upper plateau)
  double mass_threshold = 0.0;
};

// Grows the reachable set of a start vertex one snapshot at a time: T_0 is
// the start vertex, T_k adds every time-k neighbor of T_{k-1}.  While the
// reachable set holds at most n / (2 * upper plateau) states, the walk's
// law at that time puts at most half its mass anywhere, so the run cannot
// have mixed yet.
inline ReachableGrowth reachable_growth(const ERParams& params, Index x,
                                        std::int64_t k_max) {
  if (x < 0 || x >= params.n)
    throw std::out_of_range("reachable_growth: start vertex out of range");
  const Index words = (params.n + 63) / 64;
  std::vector<std::uint64_t> reach(static_cast<std::size_t>(words), 0);
  reach[static_cast<std::size_t>(x / 64)] |= std::uint64_t{1} << (x % 64);
  ReachableGrowth out;
  out.mass_threshold = static_cast<double>(params.n) / (2.0 * EnvelopeSchedule::kUpperPlateau);
  out.sizes.push_back(1);
  Index size = 1;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const GraphSnapshot g = sample_snapshot(params, k);
    std::vector<std::uint64_t> next = reach;
    for (Index v = 0; v < params.n; ++v) {
      if (!((reach[static_cast<std::size_t>(v / 64)] >> (v % 64)) & 1u)) continue;
      for (Index w = 0; w < words; ++w)
        next[static_cast<std::size_t>(w)] |= g.row_word(v, w);
    }
    reach = std::move(next);
    size = 0;
    for (Index w = 0; w < words; ++w)
      size += std::popcount(reach[static_cast<std::size_t>(w)]);
    out.sizes.push_back(size);
  }
  for (std::size_t k = 0; k < out.sizes.size(); ++k)
    if (static_cast<double>(out.sizes[k]) <= out.mass_threshold)
      out.certified_steps = static_cast<std::int64_t>(k);
  return out;
}

}  // namespace mixlab
