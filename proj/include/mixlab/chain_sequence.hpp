#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mixlab/stochastic_matrix.hpp"
#include "mixlab/types.hpp"

namespace mixlab {

// Time-indexed family of one-step kernels P_t, t in a window of integers.
// Backed either by an explicit list or by a pure sampler t -> P_t; a sampler
// must be a deterministic function of t so that replays and parallel runs
// agree regardless of evaluation order.
class ChainSequence {
 public:
  using Sampler = std::function<StochasticMatrix(std::int64_t)>;

  static ChainSequence from_matrices(std::vector<StochasticMatrix> steps,
                                     std::int64_t first_time) {
    if (steps.empty())
      throw std::invalid_argument("ChainSequence: empty matrix list");
    const Index n = steps.front().size();
    for (const auto& P : steps)
      if (P.size() != n)
        throw std::invalid_argument("ChainSequence: mixed matrix sizes");
    ChainSequence seq;
    seq.n_ = n;
    seq.t_lo_ = first_time;
    seq.t_hi_ = first_time + static_cast<std::int64_t>(steps.size()) - 1;
    auto shared = std::make_shared<std::vector<StochasticMatrix>>(std::move(steps));
    seq.sample_ = [shared, first_time](std::int64_t t) {
      return (*shared)[static_cast<std::size_t>(t - first_time)];
    };
    return seq;
  }

  static ChainSequence from_sampler(Index n, Sampler sample) {
    if (n <= 0) throw std::invalid_argument("ChainSequence: n must be positive");
    ChainSequence seq;
    seq.n_ = n;
    seq.t_lo_ = std::numeric_limits<std::int64_t>::min() / 2;
    seq.t_hi_ = std::numeric_limits<std::int64_t>::max() / 2;
    seq.sample_ = std::move(sample);
    return seq;
  }

  Index size() const { return n_; }
  std::int64_t window_lo() const { return t_lo_; }
  std::int64_t window_hi() const { return t_hi_; }

  bool has_step(std::int64_t t) const { return t >= t_lo_ && t <= t_hi_; }

  // True when every step of the product over (s, t] is available.
  bool covers(std::int64_t s, std::int64_t t) const {
    return s <= t && (s == t || (has_step(s + 1) && has_step(t)));
  }

  StochasticMatrix matrix(std::int64_t t) const {
    if (!has_step(t))
      throw std::out_of_range("ChainSequence: time " + std::to_string(t) +
                              " outside window");
    StochasticMatrix P = sample_(t);
    if (P.size() != n_)
      throw std::invalid_argument("ChainSequence: sampler returned wrong size");
    return P;
  }

 private:
  ChainSequence() = default;
  Index n_ = 0;
  std::int64_t t_lo_ = 0;
  std::int64_t t_hi_ = 0;
  Sampler sample_;
};

// Product of the steps over (s, t]: rows give the law after running from
// time s to time t.  The empty window yields the identity.
inline StochasticMatrix window_product(const ChainSequence& seq, std::int64_t s,
                                       std::int64_t t) {
  if (s > t)
    throw std::invalid_argument("window_product: need s <= t");
  if (!seq.covers(s, t))
    throw std::out_of_range("window_product: window (s, t] not covered");
  StochasticMatrix acc = StochasticMatrix::identity(seq.size());
  for (std::int64_t u = s + 1; u <= t; ++u) acc = acc * seq.matrix(u);
  return acc;
}

}  // namespace mixlab
