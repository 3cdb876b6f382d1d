#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "mixlab/stochastic_matrix.hpp"
#include "mixlab/types.hpp"

namespace mixlab {

// Probability distribution on {0, ..., n-1}: entries >= 0, total mass 1
// within 1e-12.
class Distribution {
 public:
  explicit Distribution(Vector mass) : p_(std::move(mass)) {
    if (p_.size() == 0)
      throw std::invalid_argument("Distribution: empty support");
    if ((p_.array() < -kMassTol).any())
      throw std::invalid_argument("Distribution: negative mass");
    const double s = p_.sum();
    if (std::abs(s - 1.0) > kMassTol)
      throw std::invalid_argument("Distribution: total mass " + std::to_string(s));
    p_ = p_.cwiseMax(0.0);
  }

  static Distribution uniform(Index n) {
    return Distribution(Vector::Constant(n, 1.0 / static_cast<double>(n)));
  }

  static Distribution point_mass(Index n, Index x) {
    Vector v = Vector::Zero(n);
    v(x) = 1.0;
    return Distribution(std::move(v));
  }

  Index size() const { return p_.size(); }
  double operator()(Index x) const { return p_(x); }
  const Vector& mass() const { return p_; }
  double min_mass() const { return p_.minCoeff(); }
  bool strictly_positive() const { return (p_.array() > 0.0).all(); }

  // Push-forward through one kernel: (mu P)(y) = sum_x mu(x) P(x, y).
  Distribution advanced_by(const StochasticMatrix& P) const {
    if (P.size() != p_.size())
      throw std::invalid_argument("Distribution::advanced_by: size mismatch");
    Vector next = P.entries().transpose() * p_;
    next /= next.sum();
    return Distribution(std::move(next));
  }

 private:
  Vector p_;
};

inline double total_variation(const Distribution& mu, const Distribution& nu) {
  return total_variation(mu.mass(), nu.mass());
}

}  // namespace mixlab
