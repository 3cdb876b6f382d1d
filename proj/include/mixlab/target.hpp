#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mixlab/chain_sequence.hpp"
#include "mixlab/distribution.hpp"
#include "mixlab/stochastic_matrix.hpp"

namespace mixlab {

// Raised when no admissible lookback window contracts enough to certify a
// target distribution.
class NoContractionError : public std::runtime_error {
 public:
  NoContractionError(double achieved, std::int64_t lookback)
      : std::runtime_error(format_message(achieved, lookback)),
        achieved_(achieved),
        lookback_(lookback) {}
  double achieved() const { return achieved_; }
  std::int64_t lookback() const { return lookback_; }

 private:
  static std::string format_message(double achieved, std::int64_t lookback) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "target_distribution: contraction coefficient %.6g above tolerance "
                  "at lookback %lld",
                  achieved, static_cast<long long>(lookback));
    return buf;
  }

  double achieved_;
  std::int64_t lookback_;
};

struct TargetCertificate {
  double delta = 1.0;        // upper bound on the contraction of the window used
  std::int64_t lookback = 0; // length of that window
};

struct TargetResult {
  Distribution pi;
  TargetCertificate certificate;
};

// Backward-limit distribution at time t: the common row limit of products
// started ever further in the past.  The lookback doubles until the window
// product's rows agree within tol (measured by the Dobrushin coefficient,
// which bounds the distance of any row to the limit).  Row 0 of the
// certified product is returned.
inline TargetResult target_distribution(const ChainSequence& seq, std::int64_t t,
                                        double tol = 1e-9,
                                        std::int64_t max_lookback = std::int64_t(1) << 16) {
  if (tol <= 0.0) throw std::invalid_argument("target_distribution: tol must be positive");
  const std::int64_t deepest =
      std::min<std::int64_t>(max_lookback, t - seq.window_lo() + 1);
  if (deepest < 1)
    throw std::out_of_range("target_distribution: no history before time " +
                            std::to_string(t));
  std::int64_t lookback = 1;
  StochasticMatrix prod = seq.matrix(t);
  for (;;) {
    const double delta = dobrushin_coefficient(prod);
    if (delta <= tol) {
      Vector row = prod.row(0).transpose();
      row /= row.sum();
      return TargetResult{Distribution(std::move(row)), {delta, lookback}};
    }
    if (lookback >= deepest) throw NoContractionError(delta, lookback);
    const std::int64_t next = std::min(2 * lookback, deepest);
    prod = window_product(seq, t - next, t - lookback) * prod;
    lookback = next;
  }
}

// Targets over a contiguous window [first, last].  The first one is
// certified by backward contraction; later ones advance one kernel per step
// (the backward limit is invariant under that push-forward), inheriting the
// anchor's contraction bound over a window one step longer.
class TargetSeries {
 public:
  TargetSeries(const ChainSequence& seq, std::int64_t first, std::int64_t last,
               double tol = 1e-9, std::int64_t max_lookback = std::int64_t(1) << 16)
      : first_(first) {
    if (first > last) throw std::invalid_argument("TargetSeries: empty time window");
    TargetResult anchor = target_distribution(seq, first, tol, max_lookback);
    pis_.reserve(static_cast<std::size_t>(last - first + 1));
    certs_.reserve(static_cast<std::size_t>(last - first + 1));
    pis_.push_back(std::move(anchor.pi));
    certs_.push_back(anchor.certificate);
    for (std::int64_t u = first + 1; u <= last; ++u) {
      pis_.push_back(pis_.back().advanced_by(seq.matrix(u)));
      certs_.push_back({certs_.back().delta, certs_.back().lookback + 1});
    }
  }

  std::int64_t first_time() const { return first_; }
  std::int64_t last_time() const { return first_ + static_cast<std::int64_t>(pis_.size()) - 1; }

  const Distribution& at(std::int64_t t) const {
    return pis_.at(index_of(t));
  }

  const TargetCertificate& certificate(std::int64_t t) const {
    return certs_.at(index_of(t));
  }

  double min_mass(std::int64_t t) const { return at(t).min_mass(); }

  // Smallest ratio pi_{t-1}(z) / pi_t(z); both times must be in the window
  // and pi_t strictly positive.  Always <= 1 since both vectors sum to 1.
  double drift_floor(std::int64_t t) const {
    const Distribution& prev = at(t - 1);
    const Distribution& cur = at(t);
    double g = 1.0;
    for (Index z = 0; z < cur.size(); ++z) {
      if (cur(z) <= 0.0)
        throw std::domain_error("drift_floor: target mass vanishes at state " +
                                std::to_string(z));
      g = std::min(g, prev(z) / cur(z));
    }
    return g;
  }

  // Residual of the push-forward identity between two stored times.
  // Advancing keeps it near round-off; an independent recomputation of the
  // later target exposes genuine disagreement.
  double invariance_residual(const ChainSequence& seq, std::int64_t r,
                             std::int64_t t) const {
    if (r > t) throw std::invalid_argument("invariance_residual: need r <= t");
    Vector lhs = at(r).mass();
    for (std::int64_t u = r + 1; u <= t; ++u)
      lhs = seq.matrix(u).entries().transpose() * lhs;
    return (lhs - at(t).mass()).cwiseAbs().maxCoeff();
  }

 private:
  std::size_t index_of(std::int64_t t) const {
    if (t < first_ || t > last_time())
      throw std::out_of_range("TargetSeries: time " + std::to_string(t) +
                              " outside stored window");
    return static_cast<std::size_t>(t - first_);
  }

  std::int64_t first_;
  std::vector<Distribution> pis_;
  std::vector<TargetCertificate> certs_;
};

// Worst-case distance to the target after running from s to t.
inline double distance_to_target(const ChainSequence& seq, std::int64_t s,
                                 std::int64_t t, const TargetSeries& targets) {
  const StochasticMatrix M = window_product(seq, s, t);
  const Distribution& pi = targets.at(t);
  double worst = 0.0;
  for (Index x = 0; x < M.size(); ++x)
    worst = std::max(worst, total_variation(M.row(x).transpose(), pi.mass()));
  return worst;
}

// d(s, s+t) for t = 0..t_max, advancing the window product one kernel per
// step.
inline std::vector<double> distance_trajectory(const ChainSequence& seq,
                                               const TargetSeries& targets,
                                               std::int64_t s, std::int64_t t_max) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(t_max + 1));
  StochasticMatrix M = StochasticMatrix::identity(seq.size());
  for (std::int64_t t = 0; t <= t_max; ++t) {
    if (t > 0) M = M * seq.matrix(s + t);
    const Distribution& pi = targets.at(s + t);
    double worst = 0.0;
    for (Index x = 0; x < M.size(); ++x)
      worst = std::max(worst, total_variation(M.row(x).transpose(), pi.mass()));
    out.push_back(worst);
  }
  return out;
}

// First elapsed time with d(s, s+t) <= eps, or nullopt if none within
// t_max.  Once below the threshold the distance stays below it (it is
// non-increasing in elapsed time), and the scan verifies that on the rest
// of the horizon rather than trusting it.
inline std::optional<std::int64_t> mixing_time(const ChainSequence& seq,
                                               const TargetSeries& targets,
                                               std::int64_t s, double eps,
                                               std::int64_t t_max) {
  const std::vector<double> d = distance_trajectory(seq, targets, s, t_max);
  std::optional<std::int64_t> hit;
  for (std::int64_t t = 0; t <= t_max; ++t) {
    if (!hit && d[static_cast<std::size_t>(t)] <= eps) hit = t;
    if (hit && d[static_cast<std::size_t>(t)] > eps + kMassTol)
      throw std::logic_error("mixing_time: distance rose back above threshold");
  }
  return hit;
}

// Same scan with the Dobrushin coefficient of the window product in place
// of the distance to the target.  Needs no target distribution.
inline std::optional<std::int64_t> mixing_time_dobrushin(const ChainSequence& seq,
                                                         std::int64_t s, double eps,
                                                         std::int64_t t_max) {
  StochasticMatrix M = StochasticMatrix::identity(seq.size());
  std::optional<std::int64_t> hit;
  for (std::int64_t t = 0; t <= t_max; ++t) {
    if (t > 0) M = M * seq.matrix(s + t);
    const double delta = dobrushin_coefficient(M);
    if (!hit && delta <= eps) hit = t;
    if (hit && delta > eps + kMassTol)
      throw std::logic_error("mixing_time_dobrushin: coefficient rose back above threshold");
  }
  return hit;
}

// Number of single steps in [lo, hi] whose kernel contracts by at least
// eps.  One such step inside every fixed-length block keeps backward limits
// well defined over an infinite horizon.
inline std::int64_t count_contractive_steps(const ChainSequence& seq, std::int64_t lo,
                                            std::int64_t hi, double eps) {
  if (lo > hi) throw std::invalid_argument("count_contractive_steps: empty window");
  std::int64_t count = 0;
  for (std::int64_t t = lo; t <= hi; ++t)
    if (dobrushin_coefficient(seq.matrix(t)) <= 1.0 - eps) ++count;
  return count;
}

}  // namespace mixlab
