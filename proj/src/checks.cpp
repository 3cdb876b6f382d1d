#include "mixlab/checks.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "mixlab/mixlab.hpp"

namespace mixlab {

namespace {

StochasticMatrix random_stochastic(Index n, CounterRng& rng) {
  Matrix m(n, n);
  for (Index x = 0; x < n; ++x) {
    double sum = 0.0;
    for (Index y = 0; y < n; ++y) {
      m(x, y) = 0.05 + rng.next_unit();
      sum += m(x, y);
    }
    m.row(x) /= sum;
  }
  return StochasticMatrix(std::move(m));
}

StochasticMatrix random_lazy(Index n, CounterRng& rng) {
  const StochasticMatrix R = random_stochastic(n, rng);
  Matrix m = 0.5 * Matrix::Identity(n, n) + 0.5 * R.entries();
  return StochasticMatrix(std::move(m));
}

// Strictly positive lazy kernels, one per time index, reproducible and
// defined on the whole time axis.
ChainSequence lazy_environment(Index n, std::uint64_t seed) {
  return ChainSequence::from_sampler(n, [n, seed](std::int64_t t) {
    CounterRng rng{seed, stream_tag::kChain, static_cast<std::uint64_t>(t)};
    return random_lazy(n, rng);
  });
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

CheckResult product_contraction(std::uint64_t seed) {
  CounterRng rng{seed, 1};
  double worst = -1.0;
  for (int k = 0; k < 200; ++k) {
    const Index n = 2 + static_cast<Index>(rng.next_below(7));
    const StochasticMatrix P = random_stochastic(n, rng);
    const StochasticMatrix Q = random_stochastic(n, rng);
    const double excess = dobrushin_coefficient(P * Q) -
                          dobrushin_coefficient(P) * dobrushin_coefficient(Q);
    worst = std::max(worst, excess);
  }
  return {"product-contraction", worst <= kMassTol, "max excess " + fmt(worst)};
}

CheckResult window_composition(std::uint64_t seed) {
  const ChainSequence seq = lazy_environment(5, seed);
  double worst = 0.0;
  CounterRng rng{seed, 2};
  for (int k = 0; k < 30; ++k) {
    const std::int64_t s = static_cast<std::int64_t>(rng.next_below(20)) - 10;
    const std::int64_t u = s + static_cast<std::int64_t>(rng.next_below(6));
    const std::int64_t t = u + static_cast<std::int64_t>(rng.next_below(6));
    const Matrix lhs = window_product(seq, s, t).entries();
    const Matrix rhs =
        (window_product(seq, s, u) * window_product(seq, u, t)).entries();
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  const bool identity_ok =
      (window_product(seq, 3, 3).entries() - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0;
  return {"window-composition", identity_ok && worst <= kMassTol,
          "max composition gap " + fmt(worst)};
}

CheckResult target_invariance(std::uint64_t seed) {
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Index n = 2 + static_cast<Index>(k % 5);
    const ChainSequence seq = lazy_environment(n, seed + static_cast<std::uint64_t>(k));
    const TargetSeries targets(seq, 0, 12, 1e-13);
    // Independent re-anchoring at a later time must land on the pushed
    // forward anchor.
    const TargetResult fresh = target_distribution(seq, 9, 1e-13);
    worst = std::max(worst, (fresh.pi.mass() - targets.at(9).mass()).cwiseAbs().maxCoeff());
    worst = std::max(worst, targets.invariance_residual(seq, 2, 11));
  }
  return {"target-invariance", worst <= 1e-10, "max residual " + fmt(worst)};
}

CheckResult distance_monotone(std::uint64_t seed) {
  double worst = -1.0;
  for (int k = 0; k < 20; ++k) {
    const ChainSequence seq = lazy_environment(4, seed + 100 + static_cast<std::uint64_t>(k));
    const TargetSeries targets(seq, 0, 10, 1e-12);
    const std::vector<double> d = distance_trajectory(seq, targets, 0, 10);
    for (std::size_t t = 1; t < d.size(); ++t) worst = std::max(worst, d[t] - d[t - 1]);
  }
  return {"distance-monotone", worst <= kMassTol, "max increase " + fmt(worst)};
}

CheckResult distance_coefficient_sandwich(std::uint64_t seed) {
  double worst = -1.0;
  for (int k = 0; k < 20; ++k) {
    const ChainSequence seq = lazy_environment(5, seed + 200 + static_cast<std::uint64_t>(k));
    const TargetSeries targets(seq, 0, 8, 1e-13);
    for (std::int64_t t = 0; t <= 8; ++t) {
      const double d = distance_to_target(seq, 0, t, targets);
      const double delta = dobrushin_coefficient(window_product(seq, 0, t));
      worst = std::max(worst, d - delta);
      worst = std::max(worst, delta - 2.0 * d);
    }
  }
  return {"distance-coefficient-sandwich", worst <= kMassTol, "max violation " + fmt(worst)};
}

CheckResult target_half_bound(std::uint64_t seed) {
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const ChainSequence seq = lazy_environment(3 + (k % 4), seed + 300 + static_cast<std::uint64_t>(k));
    const TargetSeries targets(seq, 0, 16, 1e-10);
    for (std::int64_t t = 0; t <= 16; ++t)
      worst = std::max(worst, targets.at(t).mass().maxCoeff());
  }
  const ERParams params{24, 2.5, seed};
  const ChainSequence er = erdos_renyi_sequence(params);
  const TargetSeries targets(er, 0, 12, 1e-8);
  for (std::int64_t t = 0; t <= 12; ++t)
    worst = std::max(worst, targets.at(t).mass().maxCoeff());
  return {"target-half-bound", worst <= 0.5 + kMassTol, "max mass " + fmt(worst)};
}

CheckResult set_mass_martingale(std::uint64_t seed) {
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Index n = 3 + static_cast<Index>(k % 4);
    const ChainSequence seq = lazy_environment(n, seed + 400 + static_cast<std::uint64_t>(k));
    const TargetSeries targets(seq, 0, 5, 1e-12);
    for (std::int64_t t = 1; t <= 5; ++t)
      for (std::uint64_t bits = 1; bits + 1 < (std::uint64_t{1} << n); ++bits) {
        const SubsetState S(n, bits);
        const FlowSlice flow = stationary_flow(seq, targets, t, S);
        const NestedKernel kernel = nested_kernel(flow, targets.at(t));
        worst = std::max(worst,
                         std::abs(kernel.expected_mass(targets.at(t)) - flow.source_mass));
      }
  }
  return {"set-mass-martingale", worst <= kMassTol, "max drift " + fmt(worst)};
}

CheckResult set_complement_duality(std::uint64_t seed) {
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Index n = 3 + static_cast<Index>(k % 3);
    const ChainSequence seq = lazy_environment(n, seed + 500 + static_cast<std::uint64_t>(k));
    const TargetSeries targets(seq, 0, 4, 1e-12);
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t bits = 1; bits < full; ++bits) {
      const auto law = exact_subset_distribution(seq, targets, SubsetState(n, bits), 0, 3);
      const auto dual =
          exact_subset_distribution(seq, targets, SubsetState(n, bits ^ full), 0, 3);
      // Running the process from the complement mirrors every outcome.
      for (const auto& [set_bits, p] : law) {
        const auto it = dual.find(set_bits ^ full);
        const double q = it == dual.end() ? 0.0 : it->second;
        worst = std::max(worst, std::abs(p - q));
      }
    }
  }
  return {"set-complement-duality", worst <= 1e-10, "max probability gap " + fmt(worst)};
}

CheckResult growth_gap_inequalities(std::uint64_t seed) {
  double worst = -1.0;
  for (int k = 0; k < 8; ++k) {
    const Index n = 3 + static_cast<Index>(k % 3);
    const ChainSequence seq = lazy_environment(n, seed + 600 + static_cast<std::uint64_t>(k));
    const TargetSeries targets(seq, 0, 3, 1e-12);
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
      const SetFunctionals f = set_functionals(seq, targets, 2, SubsetState(n, bits));
      const double mid =
          0.5 * (std::sqrt(1.0 + 2.0 * f.overlap) + std::sqrt(1.0 - 2.0 * f.overlap));
      worst = std::max(worst, (1.0 - f.growth_gap) - mid);
      worst = std::max(worst, mid - (1.0 - 0.5 * f.overlap * f.overlap));
    }
  }
  return {"growth-gap-inequalities", worst <= kMassTol, "max violation " + fmt(worst)};
}

CheckResult growth_gap_bottleneck(std::uint64_t seed) {
  double worst = -1.0;
  for (int k = 0; k < 8; ++k) {
    const Index n = 3 + static_cast<Index>(k % 3);
    const ChainSequence seq = lazy_environment(n, seed + 700 + static_cast<std::uint64_t>(k));
    const TargetSeries targets(seq, 0, 3, 1e-12);
    const double g = targets.drift_floor(2);
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
      const SetFunctionals f = set_functionals(seq, targets, 2, SubsetState(n, bits));
      const double coeff = g / (1.0 - 0.5 * g);
      worst = std::max(worst,
                       0.125 * coeff * coeff * f.bottleneck * f.bottleneck - f.growth_gap);
    }
  }
  return {"growth-gap-bottleneck", worst <= kMassTol, "max violation " + fmt(worst)};
}

CheckResult lazy_flow_floor(std::uint64_t seed) {
  double worst = -1.0;
  for (int k = 0; k < 8; ++k) {
    const Index n = 3 + static_cast<Index>(k % 3);
    const ChainSequence seq = lazy_environment(n, seed + 800 + static_cast<std::uint64_t>(k));
    const TargetSeries targets(seq, 0, 3, 1e-12);
    const double g = targets.drift_floor(2);
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
      const SubsetState S(n, bits);
      const FlowSlice flow = stationary_flow(seq, targets, 2, S);
      for (Index y = 0; y < n; ++y)
        if (S.contains(y))
          worst = std::max(worst, 0.5 * g - flow.values(y) / targets.at(2)(y));
    }
  }
  return {"lazy-flow-floor", worst <= kMassTol, "max violation " + fmt(worst)};
}

CheckResult product_row_identity(std::uint64_t seed) {
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const Index n = 4 + static_cast<Index>(k % 3);
    const ChainSequence seq = lazy_environment(n, seed + 900 + static_cast<std::uint64_t>(k));
    const TargetSeries targets(seq, 0, 4, 1e-13);
    const std::int64_t t = 4;
    const StochasticMatrix M = window_product(seq, 0, t);
    for (Index x = 0; x < n; ++x) {
      const auto law = exact_subset_distribution(seq, targets, SubsetState::singleton(n, x), 0, t);
      Vector membership = Vector::Zero(n);
      for (const auto& [bits, p] : law)
        for (Index y = 0; y < n; ++y)
          if ((bits >> y) & 1u) membership(y) += p;
      for (Index y = 0; y < n; ++y) {
        const double rhs = targets.at(t)(y) / targets.at(0)(x) * membership(y);
        worst = std::max(worst, std::abs(M(x, y) - rhs));
      }
    }
  }
  return {"product-row-identity", worst <= 1e-10, "max gap " + fmt(worst)};
}

CheckResult certified_bound_implication(std::uint64_t seed) {
  double worst_d = 0.0;
  bool all_triggered = true;
  for (int k = 0; k < 3; ++k) {
    const Index n = 4 + static_cast<Index>(k);
    const ChainSequence seq = lazy_environment(n, seed + 1000 + static_cast<std::uint64_t>(k));
    const std::int64_t horizon = 4096;
    const TargetSeries targets(seq, 0, horizon, 1e-12);
    const double eps = 0.1;
    double running = 1.0;
    std::int64_t hit = -1;
    for (std::int64_t s = 1; s <= horizon; ++s) {
      running *= bound_step_factor(targets.drift_floor(s),
                                   bottleneck_ratio_exact(seq, targets, s));
      const double scale = 1.0 / std::sqrt(targets.min_mass(0) * targets.min_mass(s));
      if (scale * running <= 2.0 * eps) {
        hit = s;
        break;
      }
    }
    if (hit < 0) {
      all_triggered = false;
      continue;
    }
    worst_d = std::max(worst_d, distance_to_target(seq, 0, hit, targets));
  }
  return {"certified-bound-implication", all_triggered && worst_d <= 0.1,
          all_triggered ? "worst certified distance " + fmt(worst_d)
                        : "condition never met within horizon"};
}

CheckResult schedule_shape(std::uint64_t) {
  const EnvelopeSchedule sched(64, 60.0);
  bool ok = sched.upper(0) == 32.0 && sched.lower(0) == 0.0;
  ok = ok && sched.upper(sched.plateau_start()) == EnvelopeSchedule::kUpperPlateau;
  ok = ok && sched.lower(sched.plateau_start()) == EnvelopeSchedule::kLowerPlateau;
  double prev_up = sched.upper(0), prev_lo_log = sched.log_lower(0);
  for (std::int64_t t = 1; t <= sched.plateau_start() + 10 && ok; t += 97) {
    const double up = sched.upper(t), lo = sched.log_lower(t);
    ok = up <= prev_up + 1e-15 && lo >= prev_lo_log - 1e-12;
    prev_up = up;
    prev_lo_log = lo;
  }
  return {"schedule-shape", ok, ""};
}

CheckResult tail_arithmetic(std::uint64_t) {
  const TailBounds b = tail_bounds(256, 60.0);
  // Longhand recomputation with the logarithms expanded term by term.
  const double c1 = 11.0 * 60.0 / 21.0, c2 = 120.0;
  const double up = -60.0 + c2 - c2 * (std::log(c2) - std::log(60.0));
  const double lo = -60.0 + c1 + c1 * (std::log(60.0) - std::log(c1));
  const double rel1 = std::abs(up - b.degree_upper_exponent) / std::abs(up);
  const double rel2 = std::abs(lo - b.degree_lower_exponent) / std::abs(lo);
  const bool ok = rel1 <= 1e-12 && rel2 <= 1e-12 &&
                  b.window_disconnect_exponent == -26.0 &&
                  b.single_disconnect_exponent == -28.0;
  return {"tail-arithmetic", ok,
          "rel gaps " + fmt(rel1) + ", " + fmt(rel2)};
}

CheckResult environment_stationarity(std::uint64_t seed) {
  const Index n = 24;
  const double eta = 2.0;
  double mean_a = 0.0, mean_b = 0.0;
  const int draws = 200;
  for (int k = 0; k < draws; ++k) {
    const ERParams params{n, eta, seed + static_cast<std::uint64_t>(k)};
    const GraphSnapshot a = sample_snapshot(params, 3);
    const GraphSnapshot b = sample_snapshot(params, 7919);
    for (Index x = 0; x < n; ++x) {
      mean_a += static_cast<double>(a.degree(x));
      mean_b += static_cast<double>(b.degree(x));
    }
  }
  mean_a /= draws * n;
  mean_b /= draws * n;
  const double p = ERParams{n, eta, 0}.edge_probability();
  const double sd = std::sqrt(static_cast<double>(n - 1) * p * (1 - p) /
                              static_cast<double>(draws * n));
  const bool ok = std::abs(mean_a - mean_b) <= 6.0 * sd * std::sqrt(2.0);
  return {"environment-stationarity", ok,
          "means " + fmt(mean_a) + " vs " + fmt(mean_b)};
}

CheckResult snapshot_determinism(std::uint64_t seed) {
  const ERParams params{16, 2.0, seed};
  const GraphSnapshot a = sample_snapshot(params, 42);
  const GraphSnapshot b = sample_snapshot(params, 42);
  const GraphSnapshot c = sample_snapshot(params, 43);
  bool same = true, differs = false;
  for (Index x = 0; x < 16; ++x)
    for (Index y = x + 1; y < 16; ++y) {
      same = same && a.adjacent(x, y) == b.adjacent(x, y);
      differs = differs || a.adjacent(x, y) != c.adjacent(x, y);
    }
  return {"snapshot-determinism", same && differs, ""};
}

}  // namespace

std::vector<CheckResult> run_self_checks(std::uint64_t seed) {
  return {
      product_contraction(seed),
      window_composition(seed),
      target_invariance(seed),
      distance_monotone(seed),
      distance_coefficient_sandwich(seed),
      target_half_bound(seed),
      set_mass_martingale(seed),
      set_complement_duality(seed),
      growth_gap_inequalities(seed),
      growth_gap_bottleneck(seed),
      lazy_flow_floor(seed),
      product_row_identity(seed),
      certified_bound_implication(seed),
      schedule_shape(seed),
      tail_arithmetic(seed),
      environment_stationarity(seed),
      snapshot_determinism(seed),
  };
}

}  // namespace mixlab
