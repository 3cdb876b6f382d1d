#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mixlab/target.hpp"
#include "mixlab/types.hpp"

namespace mixlab {

// Piecewise envelopes bracketing n * pi_t(x) in the refreshing-graph
// environment.  The upper one starts at the trivial n/2 and decays
// geometrically to its plateau; the lower one switches on after an initial
// burn-in at an astronomically small seed value and grows geometrically to
// its plateau.  From time n^2 - n onward both sit at their plateau values,
// and that bracket is the one worth asserting numerically: the seed value
// n / (16 eta log n)^(n-1) underflows double precision long before the
// plateau, so the pre-plateau lower branch is carried in log form.
class EnvelopeSchedule {
 public:
  static constexpr double kProbabilityExponent = 0.3;  // exponent beta in 1 - n^-beta
  static constexpr double kLowerPlateau = 0.002;
  static constexpr double kUpperPlateau = 7.0;
  static constexpr double kRate = 1e-4;  // per-step geometric rate of both ramps

  EnvelopeSchedule(Index n, double eta) : n_(n), eta_(eta) {
    if (n < 2) throw std::invalid_argument("EnvelopeSchedule: need n >= 2");
    if (eta <= 0.0) throw std::invalid_argument("EnvelopeSchedule: need eta > 0");
    const double nn = static_cast<double>(n);
    burn_in_end_ = static_cast<std::int64_t>(std::floor(std::pow(nn, 1.1)));
    ramp_end_ = static_cast<std::int64_t>(std::floor(std::pow(nn, 1.2)));
    plateau_start_ = static_cast<std::int64_t>(n) * n - n;
    log_seed_ = std::log(nn) - (nn - 1.0) * std::log(16.0 * eta * std::log(nn));
  }

  Index n() const { return n_; }
  double eta() const { return eta_; }
  std::int64_t burn_in_end() const { return burn_in_end_; }
  std::int64_t ramp_end() const { return ramp_end_; }
  std::int64_t plateau_start() const { return plateau_start_; }

  // Upper envelope of n * pi_t(x); non-increasing in t.
  double upper(std::int64_t t) const {
    if (t < 0) throw std::invalid_argument("EnvelopeSchedule: negative time");
    const double start = static_cast<double>(n_) / 2.0;
    if (t <= burn_in_end_) return start;
    if (t <= ramp_end_) {
      const double v = start * std::pow(1.0 - kRate, static_cast<double>(t - burn_in_end_));
      return v >= kUpperPlateau ? v : kUpperPlateau;
    }
    return kUpperPlateau;
  }

  // Natural log of the lower envelope; -inf while it is zero.
  double log_lower(std::int64_t t) const {
    if (t < 0) throw std::invalid_argument("EnvelopeSchedule: negative time");
    if (t <= burn_in_end_) return -std::numeric_limits<double>::infinity();
    if (t <= ramp_end_) return log_seed_;
    const double log_plateau = std::log(kLowerPlateau);
    if (t < plateau_start_) {
      const double lg = log_seed_ + static_cast<double>(t - ramp_end_) * std::log1p(kRate);
      return lg <= log_plateau ? lg : log_plateau;
    }
    return log_plateau;
  }

  // Lower envelope of n * pi_t(x); non-decreasing in t.  Underflows to zero
  // where the true value is below the smallest double.  Once the log form
  // has clamped, the plateau constant is returned exactly rather than
  // through an exp/log round trip.
  double lower(std::int64_t t) const {
    const double lg = log_lower(t);
    if (std::isinf(lg)) return 0.0;
    return lg >= std::log(kLowerPlateau) ? kLowerPlateau : std::exp(lg);
  }

 private:
  Index n_;
  double eta_;
  std::int64_t burn_in_end_;
  std::int64_t ramp_end_;
  std::int64_t plateau_start_;
  double log_seed_;
};

struct EnvelopeViolation {
  std::int64_t t = 0;
  Index x = 0;
  double scaled_mass = 0.0;  // n * pi_t(x)
  double lower = 0.0;
  double upper = 0.0;
};

// Checks n * pi_t(x) against the schedule on [t_lo, t_hi] for every state,
// returning every violation found.
inline std::vector<EnvelopeViolation> envelope_check(const TargetSeries& targets,
                                                     const EnvelopeSchedule& schedule,
                                                     std::int64_t t_lo, std::int64_t t_hi) {
  std::vector<EnvelopeViolation> violations;
  const double nn = static_cast<double>(schedule.n());
  for (std::int64_t t = t_lo; t <= t_hi; ++t) {
    const Distribution& pi = targets.at(t);
    if (pi.size() != schedule.n())
      throw std::invalid_argument("envelope_check: size mismatch");
    const double lo = schedule.lower(t);
    const double hi = schedule.upper(t);
    for (Index x = 0; x < pi.size(); ++x) {
      const double v = nn * pi(x);
      if (v < lo || v > hi) violations.push_back({t, x, v, lo, hi});
    }
  }
  return violations;
}

}  // namespace mixlab
