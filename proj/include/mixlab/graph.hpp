#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mixlab/chain_sequence.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/stochastic_matrix.hpp"
#include "mixlab/types.hpp"

namespace mixlab {

// Parameters of the refreshing random-graph environment: at every integer
// time an independent graph is drawn with each edge present with
// probability eta * log(n) / (n - 1).  At small n that expression can
// exceed one, in which case the draw saturates and every snapshot is the
// complete graph.
struct ERParams {
  Index n = 0;
  double eta = 0.0;
  std::uint64_t seed = 0;

  double edge_probability() const {
    if (n < 2) throw std::invalid_argument("ERParams: need n >= 2");
    if (eta <= 0.0) throw std::invalid_argument("ERParams: need eta > 0");
    const double p = eta * std::log(static_cast<double>(n)) / static_cast<double>(n - 1);
    return p < 1.0 ? p : 1.0;
  }

  // Density regime in which the degree and connectivity guarantees below
  // carry useful exponents.
  bool dense_regime() const { return eta > 50.0; }
};

// Undirected simple graph stored as bit rows.
class GraphSnapshot {
 public:
  explicit GraphSnapshot(Index n)
      : n_(n), words_((n + 63) / 64), adj_(static_cast<std::size_t>(n) * words_, 0),
        deg_(static_cast<std::size_t>(n), 0) {
    if (n < 1) throw std::invalid_argument("GraphSnapshot: need n >= 1");
  }

  Index size() const { return n_; }
  Index degree(Index x) const { return deg_[static_cast<std::size_t>(x)]; }

  void add_edge(Index x, Index y) {
    if (x == y) throw std::invalid_argument("GraphSnapshot: no self loops");
    if (adjacent(x, y)) return;
    word(x, y / 64) |= std::uint64_t{1} << (y % 64);
    word(y, x / 64) |= std::uint64_t{1} << (x % 64);
    ++deg_[static_cast<std::size_t>(x)];
    ++deg_[static_cast<std::size_t>(y)];
  }

  bool adjacent(Index x, Index y) const {
    return (word(x, y / 64) >> (y % 64)) & 1u;
  }

  bool connected() const {
    if (n_ == 1) return true;
    std::vector<std::uint64_t> seen(words_, 0), frontier(words_, 0);
    seen[0] = frontier[0] = 1;  // start the sweep from vertex 0
    Index reached = 1;
    while (true) {
      std::vector<std::uint64_t> next(words_, 0);
      for (Index x = 0; x < n_; ++x) {
        if (!((frontier[static_cast<std::size_t>(x / 64)] >> (x % 64)) & 1u)) continue;
        for (Index w = 0; w < words_; ++w)
          next[static_cast<std::size_t>(w)] |= word(x, w);
      }
      bool grew = false;
      for (Index w = 0; w < words_; ++w) {
        const std::uint64_t fresh = next[static_cast<std::size_t>(w)] &
                                    ~seen[static_cast<std::size_t>(w)];
        if (fresh) {
          grew = true;
          reached += std::popcount(fresh);
          seen[static_cast<std::size_t>(w)] |= fresh;
        }
        frontier[static_cast<std::size_t>(w)] = fresh;
      }
      if (!grew) break;
    }
    return reached == n_;
  }

  Index words_per_row() const { return words_; }
  std::uint64_t row_word(Index x, Index w) const { return word(x, w); }

 private:
  std::uint64_t& word(Index x, Index w) {
    return adj_[static_cast<std::size_t>(x) * words_ + w];
  }
  std::uint64_t word(Index x, Index w) const {
    return adj_[static_cast<std::size_t>(x) * words_ + w];
  }

  Index n_;
  Index words_;
  std::vector<std::uint64_t> adj_;
  std::vector<Index> deg_;
};

// Snapshot at time t: every unordered pair is an independent Bernoulli draw
// from the substream (seed, graph tag, t), so the same (params, t) always
// yields the same graph no matter who asks.
inline GraphSnapshot sample_snapshot(const ERParams& params, std::int64_t t) {
  GraphSnapshot g(params.n);
  const double p = params.edge_probability();
  CounterRng rng{params.seed, stream_tag::kGraph, static_cast<std::uint64_t>(t)};
  for (Index x = 0; x < params.n; ++x)
    for (Index y = x + 1; y < params.n; ++y)
      if (rng.next_unit() < p) g.add_edge(x, y);
  return g;
}

// Lazy simple random walk on a snapshot: stay put with probability 1/2,
// otherwise move to a uniform neighbor; isolated vertices hold with
// probability one.
inline StochasticMatrix lazy_walk_matrix(const GraphSnapshot& g) {
  const Index n = g.size();
  Matrix P = Matrix::Zero(n, n);
  for (Index x = 0; x < n; ++x) {
    const Index d = g.degree(x);
    if (d == 0) {
      P(x, x) = 1.0;
      continue;
    }
    P(x, x) = 0.5;
    const double step = 0.5 / static_cast<double>(d);
    for (Index w = 0; w < g.words_per_row(); ++w) {
      std::uint64_t bits = g.row_word(x, w);
      while (bits) {
        const Index y = w * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        P(x, y) = step;
      }
    }
  }
  return StochasticMatrix(std::move(P));
}

// Degree band and connectivity status of one snapshot.  The band is
// [c1 log n, c2 log n] with c1 = (11/21) eta and c2 = 2 eta, the regime in
// which the walk's one-step flows are uniformly comparable.
struct SnapshotEvents {
  bool degrees_in_band = false;
  bool connected = false;
};

inline SnapshotEvents snapshot_events(const GraphSnapshot& g, double eta) {
  const double logn = std::log(static_cast<double>(g.size()));
  const double lo = (11.0 / 21.0) * eta * logn;
  const double hi = 2.0 * eta * logn;
  bool in_band = true;
  for (Index x = 0; x < g.size(); ++x) {
    const double d = static_cast<double>(g.degree(x));
    if (d < lo || d > hi) {
      in_band = false;
      break;
    }
  }
  return SnapshotEvents{in_band, g.connected()};
}

// The walk sequence driven by fresh snapshots.
inline ChainSequence erdos_renyi_sequence(const ERParams& params) {
  return ChainSequence::from_sampler(params.n, [params](std::int64_t t) {
    return lazy_walk_matrix(sample_snapshot(params, t));
  });
}

}  // namespace mixlab
