#pragma once

#include <cmath>
#include <stdexcept>

#include "mixlab/types.hpp"

namespace mixlab {

// Closed-form large-deviation bounds for the refreshing random-graph
// environment with mean degree eta log n.  All probabilities are reported
// as powers of n together with their exponents; the exponents are the
// quantities that stay meaningful when the powers underflow.
struct TailBounds {
  // One vertex's degree exceeds 2 eta log n.
  double degree_upper_exponent = 0.0;
  double degree_upper = 0.0;
  // One vertex's degree falls below (11/21) eta log n.
  double degree_lower_exponent = 0.0;
  double degree_lower = 0.0;
  // Union over all n vertices: some degree leaves the band.
  double degree_band_union = 0.0;
  double degree_band_union_exponent = 0.0;
  // One snapshot is disconnected.
  double single_disconnect_exponent = 0.0;
  double single_disconnect = 0.0;
  // Some snapshot among n^2 consecutive ones is disconnected.
  double window_disconnect_exponent = 0.0;
  double window_disconnect = 0.0;
};

inline TailBounds tail_bounds(Index n, double eta) {
  if (n < 2) throw std::invalid_argument("tail_bounds: need n >= 2");
  if (eta <= 0.0) throw std::invalid_argument("tail_bounds: need eta > 0");
  const double nn = static_cast<double>(n);
  const double c1 = (11.0 / 21.0) * eta;
  const double c2 = 2.0 * eta;

  TailBounds b;
  b.degree_upper_exponent = -eta + c2 * (1.0 - std::log(c2 / eta));
  b.degree_lower_exponent = -eta + c1 * (1.0 + std::log(eta / c1));
  b.single_disconnect_exponent = -eta / 2.0 + 2.0;
  b.window_disconnect_exponent = -eta / 2.0 + 4.0;

  b.degree_upper = std::pow(nn, b.degree_upper_exponent);
  b.degree_lower = std::pow(nn, b.degree_lower_exponent);
  b.single_disconnect = std::pow(nn, b.single_disconnect_exponent);
  b.window_disconnect = std::pow(nn, b.window_disconnect_exponent);

  b.degree_band_union = nn * (b.degree_upper + b.degree_lower);
  b.degree_band_union_exponent = std::log(b.degree_band_union) / std::log(nn);
  return b;
}

}  // namespace mixlab
