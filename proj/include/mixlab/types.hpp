#pragma once

#include <Eigen/Dense>

namespace mixlab {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using RowVector = RowVectorX<double>;

// Comparison tolerances used across the library.  Row sums, probability
// masses and small-n identities are checked at 1e-12; quantities built from
// long products at larger n use 1e-9.
inline constexpr double kMassTol = 1e-12;
inline constexpr double kLooseTol = 1e-9;

// Cutoff between the two regimes above.
inline constexpr Index kSmallN = 16;

inline double comparison_tol(Index n) { return n <= kSmallN ? kMassTol : kLooseTol; }

}  // namespace mixlab
