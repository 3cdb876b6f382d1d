#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mixlab/chain_sequence.hpp"
#include "mixlab/evolving.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/subset.hpp"
#include "mixlab/target.hpp"

namespace mixlab {

// Sets of mass up to 1/2 qualify for the bottleneck minimum; the margin
// admits masses that equal 1/2 only up to round-off.
inline constexpr double kHalfMassSlack = 1e-12;

// Exact minimum of the bottleneck functional at time t over every nonempty
// set of previous-target mass at most 1/2.  Subsets are visited in Gray-code
// order so each step updates the boundary flow in O(n); exhaustive
// enumeration is capped at n <= 20.
inline double bottleneck_ratio_exact(const ChainSequence& seq, const TargetSeries& targets,
                                     std::int64_t t) {
  const Index n = seq.size();
  if (n > 20)
    throw std::invalid_argument("bottleneck_ratio_exact: exhaustive scan capped at n <= 20");
  const StochasticMatrix P = seq.matrix(t);
  if (!P.is_lazy())
    throw std::domain_error("bottleneck_ratio_exact: kernel is not lazy");
  const Distribution& prev = targets.at(t - 1);

  // Symmetrized one-step flow between states; the boundary flow of S is the
  // sum of C over pairs split by S.
  Matrix C(n, n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      C(x, y) = prev(x) * P(x, y) + prev(y) * P(y, x);

  double best = std::numeric_limits<double>::infinity();
  std::uint64_t bits = 0;
  double mass = 0.0;
  double cross = 0.0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < count; ++i) {
    const Index j = std::countr_zero(i);  // bit toggled between consecutive Gray codes
    bits ^= std::uint64_t{1} << j;
    const bool j_in = (bits >> j) & 1u;
    mass += j_in ? prev(j) : -prev(j);
    // Toggling j flips the boundary status of every pair (j, y): pairs that
    // are split afterwards gain their flow, pairs that are no longer split
    // lose it.
    for (Index y = 0; y < n; ++y)
      if (y != j) cross += (((bits >> y) & 1u) != j_in) ? C(j, y) : -C(j, y);
    if (bits != 0 && mass <= 0.5 + kHalfMassSlack) {
      const double phi = cross / (2.0 * mass);
      if (phi < best) best = phi;
    }
  }
  return best;
}

// Minimum over a random sample of admissible sets: an upper estimate of the
// exact minimum, for ground sets too large to enumerate.
inline double bottleneck_ratio_sampled(const ChainSequence& seq, const TargetSeries& targets,
                                       std::int64_t t, std::int64_t samples,
                                       std::uint64_t seed) {
  const Index n = seq.size();
  if (n > 64)
    throw std::invalid_argument("bottleneck_ratio_sampled: ground set capped at 64");
  const StochasticMatrix P = seq.matrix(t);
  if (!P.is_lazy())
    throw std::domain_error("bottleneck_ratio_sampled: kernel is not lazy");
  const Distribution& prev = targets.at(t - 1);
  CounterRng rng{seed, stream_tag::kEvolve, static_cast<std::uint64_t>(t)};

  auto ratio = [&](const SubsetState& S) {
    double cross = 0.0;
    for (Index x = 0; x < n; ++x) {
      const bool in = S.contains(x);
      for (Index y = 0; y < n; ++y)
        if (in != S.contains(y)) cross += prev(x) * P(x, y);
    }
    return cross / (2.0 * mass_of(prev, S));  // numerator covers both flow directions
  };

  double best = std::numeric_limits<double>::infinity();
  // Singletons seed the search; random masks below half mass refine it.
  for (Index x = 0; x < n; ++x) {
    const SubsetState s = SubsetState::singleton(n, x);
    if (mass_of(prev, s) <= 0.5 + kHalfMassSlack) best = std::min(best, ratio(s));
  }
  for (std::int64_t k = 0; k < samples; ++k) {
    std::uint64_t bits = rng.next_u64();
    if (n < 64) bits &= (std::uint64_t{1} << n) - 1;
    if (bits == 0) continue;
    SubsetState S(n, bits);
    if (mass_of(prev, S) > 0.5 + kHalfMassSlack) S = S.complement();
    if (S.is_empty() || mass_of(prev, S) > 0.5 + kHalfMassSlack) continue;
    best = std::min(best, ratio(S));
  }
  return best;
}

struct BoundStep {
  std::int64_t s = 0;
  double drift_floor = 1.0;       // min_z pi_{s-1}(z) / pi_s(z)
  double bottleneck_star = 0.0;   // exact bottleneck minimum at time s
  double factor = 1.0;            // per-step contraction of the certified product
  double running_product = 1.0;   // product of factors up to s
};

// Certified upper-bound data over the window (s0, t]: per-step drift floors
// and bottleneck minima, the contraction factors they imply, and the two
// extreme target masses entering the final comparison.
struct BoundReport {
  std::int64_t s0 = 0;
  std::int64_t t = 0;
  double pi_first_min = 0.0;  // min_x pi_{s0}(x)
  double pi_last_min = 0.0;   // min_x pi_t(x)
  std::vector<BoundStep> steps;

  // Smallest squared step coefficient over the window; zero when any
  // bottleneck vanishes.
  double theta() const {
    double th = std::numeric_limits<double>::infinity();
    for (const auto& st : steps) {
      const double half_g = 0.5 * st.drift_floor;
      const double c = half_g / (1.0 - half_g) * st.bottleneck_star;
      th = std::min(th, c * c);
    }
    return steps.empty() ? 0.0 : th;
  }

  double final_product() const {
    return steps.empty() ? 1.0 : steps.back().running_product;
  }
};

inline double bound_step_factor(double drift_floor, double bottleneck_star) {
  const double half_g = 0.5 * drift_floor;
  const double c = half_g / (1.0 - half_g) * bottleneck_star;
  return 1.0 - 0.5 * c * c;
}

inline BoundReport build_bound_report(const ChainSequence& seq, const TargetSeries& targets,
                                      std::int64_t s0, std::int64_t t) {
  if (s0 > t) throw std::invalid_argument("build_bound_report: need s0 <= t");
  BoundReport report;
  report.s0 = s0;
  report.t = t;
  report.pi_first_min = targets.min_mass(s0);
  report.pi_last_min = targets.min_mass(t);
  double running = 1.0;
  for (std::int64_t s = s0 + 1; s <= t; ++s) {
    BoundStep step;
    step.s = s;
    step.drift_floor = targets.drift_floor(s);
    step.bottleneck_star = bottleneck_ratio_exact(seq, targets, s);
    step.factor = bound_step_factor(step.drift_floor, step.bottleneck_star);
    running *= step.factor;
    step.running_product = running;
    report.steps.push_back(step);
  }
  return report;
}

// Sufficient condition for d(s0, t) <= eps: the certified product, scaled
// by the inverse root target masses at both ends, is at most 2 eps.
inline bool theorem_condition(const BoundReport& report, double eps) {
  const double scale = 1.0 / std::sqrt(report.pi_first_min * report.pi_last_min);
  return scale * report.final_product() <= 2.0 * eps;
}

// Time bound implied by the worst step coefficient: once the elapsed time
// reaches this value, the condition above holds.  Undefined (no finite
// bound) when the coefficient vanishes.
inline std::optional<double> corollary_time_bound(const BoundReport& report, double eps) {
  const double th = report.theta();
  if (!(th > 0.0)) return std::nullopt;
  const double mass_term =
      std::log(1.0 / (2.0 * std::sqrt(report.pi_first_min * report.pi_last_min)));
  return (2.0 / th) * (mass_term + std::log(1.0 / eps));
}

}  // namespace mixlab
