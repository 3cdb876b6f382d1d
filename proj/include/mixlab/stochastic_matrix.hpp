#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "mixlab/types.hpp"

namespace mixlab {

// Total variation distance between two probability vectors, as expressions.
template <typename DerivedA, typename DerivedB>
double total_variation(const Eigen::MatrixBase<DerivedA>& mu,
                       const Eigen::MatrixBase<DerivedB>& nu) {
  if (mu.size() != nu.size())
    throw std::invalid_argument("total_variation: size mismatch");
  return 0.5 * (mu.derived().template cast<double>() -
                nu.derived().template cast<double>())
                   .cwiseAbs()
                   .sum();
}

// Worst-case total variation between two rows of a kernel.  Zero exactly
// when all rows agree (rank-one kernel); submultiplicative over products.
template <typename Derived>
double dobrushin_coefficient(const Eigen::MatrixBase<Derived>& P) {
  const Index n = P.rows();
  double worst = 0.0;
  for (Index x = 0; x < n; ++x)
    for (Index y = x + 1; y < n; ++y) {
      const double d = 0.5 * (P.row(x) - P.row(y)).cwiseAbs().sum();
      if (d > worst) worst = d;
    }
  return worst;
}

// Row-stochastic matrix: square, entries >= 0, every row sums to 1 within
// 1e-12.  "Lazy" means every diagonal entry is at least 1/2; several
// evolving-set operations refuse kernels without that property.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
      throw std::invalid_argument("StochasticMatrix: matrix must be square and nonempty");
    for (Index x = 0; x < m_.rows(); ++x) {
      if ((m_.row(x).array() < -kMassTol).any())
        throw std::invalid_argument("StochasticMatrix: negative entry in row " +
                                    std::to_string(x));
      const double s = m_.row(x).sum();
      if (std::abs(s - 1.0) > kMassTol)
        throw std::invalid_argument("StochasticMatrix: row " + std::to_string(x) +
                                    " sums to " + std::to_string(s));
    }
    // Round-off from upstream products may leave exact zeros slightly
    // negative; clamp inside the admitted tolerance.
    m_ = m_.cwiseMax(0.0);
    lazy_ = (m_.diagonal().array() >= 0.5 - kMassTol).all();
  }

  static StochasticMatrix identity(Index n) {
    return StochasticMatrix(Matrix::Identity(n, n));
  }

  Index size() const { return m_.rows(); }
  const Matrix& entries() const { return m_; }
  double operator()(Index x, Index y) const { return m_(x, y); }
  auto row(Index x) const { return m_.row(x); }
  bool is_lazy() const { return lazy_; }

 private:
  Matrix m_;
  bool lazy_;
};

inline double total_variation_rows(const StochasticMatrix& P, Index x, Index y) {
  return total_variation(P.row(x), P.row(y));
}

inline double dobrushin_coefficient(const StochasticMatrix& P) {
  return dobrushin_coefficient(P.entries());
}

// Product of kernels with per-row renormalization.  Long window products
// accumulate row-sum drift of order n*eps per factor; renormalizing keeps
// the row-sum invariant exact without disturbing the entries beyond
// round-off.
inline StochasticMatrix operator*(const StochasticMatrix& A, const StochasticMatrix& B) {
  if (A.size() != B.size())
    throw std::invalid_argument("StochasticMatrix product: size mismatch");
  Matrix m = A.entries() * B.entries();
  m.array().colwise() /= m.rowwise().sum().array();
  return StochasticMatrix(std::move(m));
}

}  // namespace mixlab
