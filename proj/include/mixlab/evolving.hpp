#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mixlab/chain_sequence.hpp"
#include "mixlab/distribution.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/subset.hpp"
#include "mixlab/target.hpp"

namespace mixlab {

// Flow out of a source set under the target measure: for each state y,
// values(y) = sum_{x in S} pi_{t-1}(x) P_t(x, y).  Summing over y returns
// the source mass; replacing S by the full set returns pi_t pointwise.
struct FlowSlice {
  std::int64_t t;
  SubsetState source;
  Vector values;
  double source_mass;
};

inline FlowSlice stationary_flow(const ChainSequence& seq, const TargetSeries& targets,
                                 std::int64_t t, const SubsetState& S) {
  if (S.ground_size() != seq.size())
    throw std::invalid_argument("stationary_flow: subset size mismatch");
  const StochasticMatrix P = seq.matrix(t);
  if (!P.is_lazy())
    throw std::domain_error("stationary_flow: kernel at time " + std::to_string(t) +
                            " is not lazy");
  const Distribution& prev = targets.at(t - 1);
  Vector masked = Vector::Zero(prev.size());
  for (Index x = 0; x < prev.size(); ++x)
    if (S.contains(x)) masked(x) = prev(x);
  Vector values = P.entries().transpose() * masked;
  return FlowSlice{t, S, std::move(values), mass_of(prev, S)};
}

// One-step law of the set process started from a fixed source set.  With a
// single uniform threshold shared by all states, the only reachable
// successors are the superlevel sets of the ratio y -> flow(y) / pi_t(y):
// a nested family of at most n+1 sets hit with the gaps between consecutive
// distinct ratios.  The empty set absorbs the remaining probability.
class NestedKernel {
 public:
  struct Level {
    double threshold;      // distinct ratio value, in (0, 1]
    SubsetState set;       // all states with ratio >= threshold
    double probability;    // gap to the next smaller threshold (or to 0)
  };

  NestedKernel(std::int64_t t, SubsetState source, std::vector<Level> levels,
               double empty_probability)
      : t_(t),
        source_(std::move(source)),
        levels_(std::move(levels)),
        empty_probability_(empty_probability) {}

  std::int64_t t() const { return t_; }
  const SubsetState& source() const { return source_; }
  const std::vector<Level>& levels() const { return levels_; }
  double empty_probability() const { return empty_probability_; }

  // Successor for a given threshold value.  Thresholds tie toward
  // inclusion; a threshold of exactly zero selects the full support of the
  // ratio rather than the whole ground set (the distinction has probability
  // zero under a uniform draw).
  SubsetState successor(double u) const {
    if (u < 0.0 || u > 1.0)
      throw std::invalid_argument("NestedKernel: threshold outside [0, 1]");
    SubsetState out = SubsetState::empty_set(source_.ground_size());
    for (const Level& lv : levels_) {
      if (lv.threshold >= u) out = lv.set;  // levels are sorted by descending threshold
      else break;
    }
    return out;
  }

  // Expected target mass of the successor set.
  double expected_mass(const Distribution& pi_next) const {
    double m = 0.0;
    for (const Level& lv : levels_) m += lv.probability * mass_of(pi_next, lv.set);
    return m;
  }

 private:
  std::int64_t t_;
  SubsetState source_;
  std::vector<Level> levels_;
  double empty_probability_;
};

inline NestedKernel nested_kernel(const FlowSlice& flow, const Distribution& pi_next) {
  const Index n = pi_next.size();
  if (flow.values.size() != n)
    throw std::invalid_argument("nested_kernel: size mismatch");
  std::vector<std::pair<double, Index>> ratios;
  ratios.reserve(static_cast<std::size_t>(n));
  for (Index y = 0; y < n; ++y) {
    if (pi_next(y) <= 0.0)
      throw std::domain_error("nested_kernel: target mass vanishes at state " +
                              std::to_string(y));
    // The flow into y from S never exceeds the total flow pi_t(y); clamp the
    // round-off excess so thresholds stay in [0, 1].
    const double r = std::clamp(flow.values(y) / pi_next(y), 0.0, 1.0);
    if (r > 0.0) ratios.emplace_back(r, y);
  }
  std::sort(ratios.begin(), ratios.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });

  std::vector<NestedKernel::Level> levels;
  std::uint64_t bits = 0;
  std::size_t i = 0;
  while (i < ratios.size()) {
    const double r = ratios[i].first;
    while (i < ratios.size() && ratios[i].first == r) {
      bits |= std::uint64_t{1} << ratios[i].second;
      ++i;
    }
    const double next = i < ratios.size() ? ratios[i].first : 0.0;
    levels.push_back({r, SubsetState(n, bits), r - next});
  }
  const double empty_probability = levels.empty() ? 1.0 : 1.0 - levels.front().threshold;
  return NestedKernel(flow.t, flow.source, std::move(levels), empty_probability);
}

inline SubsetState evolve_step(const SubsetState& S, const NestedKernel& kernel,
                               double u) {
  if (!(kernel.source() == S))
    throw std::invalid_argument("evolve_step: kernel was built from a different set");
  return kernel.successor(u);
}

struct EvolveTrace {
  std::int64_t t0 = 0;
  std::vector<SubsetState> states;           // S_{t0}, S_{t0+1}, ...
  std::optional<std::int64_t> absorption;    // elapsed steps to empty/full, if reached
};

// Runs the set process from S0 at time t0 for up to `horizon` steps,
// stopping at absorption.  The threshold of step t comes from the
// substream (seed, evolve tag, t, trial), so traces are reproducible and
// independent across trials.
inline EvolveTrace simulate_trace(const ChainSequence& seq, const TargetSeries& targets,
                                  const SubsetState& S0, std::int64_t t0,
                                  std::int64_t horizon, std::uint64_t seed,
                                  std::uint64_t trial = 0) {
  EvolveTrace trace;
  trace.t0 = t0;
  trace.states.push_back(S0);
  if (S0.is_absorbing()) {
    trace.absorption = 0;
    return trace;
  }
  SubsetState S = S0;
  for (std::int64_t k = 1; k <= horizon; ++k) {
    const std::int64_t t = t0 + k;
    const FlowSlice flow = stationary_flow(seq, targets, t, S);
    const NestedKernel kernel = nested_kernel(flow, targets.at(t));
    CounterRng rng{seed, stream_tag::kEvolve, static_cast<std::uint64_t>(t), trial};
    S = kernel.successor(rng.next_unit());
    trace.states.push_back(S);
    if (S.is_absorbing()) {
      trace.absorption = k;
      break;
    }
  }
  return trace;
}

// Exact law of S_t started from S0 at time t0, as a map bitmask -> mass.
// Kept to small ground sets and short horizons; the support stays modest
// because each step only reaches nested families plus the absorbing pair.
inline std::map<std::uint64_t, double> exact_subset_distribution(
    const ChainSequence& seq, const TargetSeries& targets, const SubsetState& S0,
    std::int64_t t0, std::int64_t t) {
  const Index n = seq.size();
  if (n > 12 || t - t0 > 8)
    throw std::invalid_argument(
        "exact_subset_distribution: exact enumeration budget is n <= 12, t - t0 <= 8");
  if (t < t0) throw std::invalid_argument("exact_subset_distribution: t < t0");
  std::map<std::uint64_t, double> law{{S0.bits(), 1.0}};
  for (std::int64_t u = t0 + 1; u <= t; ++u) {
    std::map<std::uint64_t, double> next;
    for (const auto& [bits, p] : law) {
      const SubsetState S(n, bits);
      if (S.is_absorbing()) {
        next[bits] += p;
        continue;
      }
      const FlowSlice flow = stationary_flow(seq, targets, u, S);
      const NestedKernel kernel = nested_kernel(flow, targets.at(u));
      for (const auto& lv : kernel.levels()) next[lv.set.bits()] += p * lv.probability;
      if (kernel.empty_probability() > 0.0) next[0] += p * kernel.empty_probability();
    }
    law = std::move(next);
  }
  return law;
}

// The three one-step set statistics at time t:
//  - growth_gap: 1 - E[sqrt(pi_t(S_t) / pi_{t-1}(S))], the expected
//    root-mass growth deficit of one evolving-set step;
//  - overlap: normalized overlap of the flows out of S and its complement;
//  - bottleneck: normalized two-way boundary flow between S and its
//    complement.
struct SetFunctionals {
  double growth_gap;
  double overlap;
  double bottleneck;
};

inline SetFunctionals set_functionals(const ChainSequence& seq, const TargetSeries& targets,
                                      std::int64_t t, const SubsetState& S) {
  const Index n = seq.size();
  if (S.is_empty())
    throw std::domain_error("set_functionals: empty source set");
  if (n > 20)
    throw std::invalid_argument("set_functionals: exact evaluation capped at n <= 20");
  const FlowSlice out = stationary_flow(seq, targets, t, S);
  const FlowSlice in = stationary_flow(seq, targets, t, S.complement());
  const Distribution& pi_next = targets.at(t);

  double cross = 0.0;   // flow S -> S^c plus flow S^c -> S
  double shared = 0.0;  // sum_y min(flow_S(y), flow_{S^c}(y))
  for (Index y = 0; y < n; ++y) {
    if (!S.contains(y)) cross += out.values(y);
    else cross += in.values(y);
    shared += std::min(out.values(y), in.values(y));
  }
  const double denom = 2.0 * out.source_mass;

  const NestedKernel kernel = nested_kernel(out, pi_next);
  double expected_root = 0.0;
  for (const auto& lv : kernel.levels())
    expected_root += lv.probability * std::sqrt(mass_of(pi_next, lv.set));

  return SetFunctionals{1.0 - expected_root / std::sqrt(out.source_mass),
                        shared / denom, cross / denom};
}

}  // namespace mixlab
