#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include "mixlab/distribution.hpp"
#include "mixlab/types.hpp"

namespace mixlab {

// Subset of {0, ..., n-1} as a bitmask; n is capped at 64.
class SubsetState {
 public:
  SubsetState(Index n, std::uint64_t bits) : n_(n), bits_(bits) {
    if (n < 1 || n > 64)
      throw std::invalid_argument("SubsetState: need 1 <= n <= 64");
    if (n < 64 && (bits >> n) != 0)
      throw std::invalid_argument("SubsetState: bits outside ground set");
  }

  static SubsetState empty_set(Index n) { return SubsetState(n, 0); }
  static SubsetState full_set(Index n) {
    return SubsetState(n, n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static SubsetState singleton(Index n, Index x) {
    if (x < 0 || x >= n) throw std::out_of_range("SubsetState: state out of range");
    return SubsetState(n, std::uint64_t{1} << x);
  }
  static SubsetState of(Index n, std::initializer_list<Index> xs) {
    std::uint64_t b = 0;
    for (Index x : xs) {
      if (x < 0 || x >= n) throw std::out_of_range("SubsetState: state out of range");
      b |= std::uint64_t{1} << x;
    }
    return SubsetState(n, b);
  }

  Index ground_size() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  bool contains(Index x) const { return (bits_ >> x) & 1u; }
  Index count() const { return std::popcount(bits_); }
  bool is_empty() const { return bits_ == 0; }
  bool is_full() const { return bits_ == full_set(n_).bits(); }
  bool is_absorbing() const { return is_empty() || is_full(); }

  SubsetState complement() const {
    return SubsetState(n_, bits_ ^ full_set(n_).bits());
  }

  bool operator==(const SubsetState& o) const {
    return n_ == o.n_ && bits_ == o.bits_;
  }

 private:
  Index n_;
  std::uint64_t bits_;
};

// Mass a distribution puts on a subset.
inline double mass_of(const Distribution& pi, const SubsetState& S) {
  if (pi.size() != S.ground_size())
    throw std::invalid_argument("mass_of: size mismatch");
  double m = 0.0;
  for (Index x = 0; x < pi.size(); ++x)
    if (S.contains(x)) m += pi(x);
  return m;
}

}  // namespace mixlab
