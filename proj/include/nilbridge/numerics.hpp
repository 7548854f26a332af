// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra shared by every other module. All routines are
// pure functions of their arguments.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace nilbridge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Relative cutoffs used in place of exact-arithmetic tests.
class Tolerance {
 public:
  static constexpr double kDefaultRankRel = 1e-10;
  static constexpr double kDefaultResidualRel = 1e-9;

  Tolerance() = default;
  /// Throws ContractViolation unless both values lie in (0, 1).
  Tolerance(double rank_rel, double residual_rel);

  double rank_rel() const noexcept { return rank_rel_; }
  double residual_rel() const noexcept { return residual_rel_; }

 private:
  double rank_rel_ = kDefaultRankRel;
  double residual_rel_ = kDefaultResidualRel;
};

/// Which solution of a rank-deficient least-squares problem to return.
enum class LeastSquaresSolution {
  minimum_norm,  // complete orthogonal decomposition
  basic,         // leftmost independent columns of A, free variables zero
};

struct LeastSquaresResult {
  Matrix x;
  bool consistent = false;
  double residual = 0.0;  // Frobenius norm of A X - B
};

/// Minimises ||A X - B||_F. `consistent` holds iff the residual is at most
/// residual_rel * (1 + ||B||_F). A may have zero columns. Directions of A with
/// singular value at most rank_rel * max(sigma_max, scale) are dropped, so a
/// nonzero `scale` keeps rounding noise in A from being solved against.
LeastSquaresResult solve_least_squares(
    const Matrix& a, const Matrix& b, const Tolerance& tol = {},
    LeastSquaresSolution kind = LeastSquaresSolution::minimum_norm, double scale = 0.0);

/// Number of singular values strictly above rank_rel * sigma_max.
std::size_t numeric_rank(const Matrix& a, const Tolerance& tol = {});

/// Number of singular values strictly above rank_rel * max(sigma_max, scale).
/// Use when A is built from quantities of known size and may cancel to
/// rounding noise (an empty matrix has rank 0).
std::size_t numeric_rank(const Matrix& a, const Tolerance& tol, double scale);

std::vector<double> singular_values(const Matrix& a);

/// sigma_max / sigma_min; infinity when the matrix is singular.
double condition_number(const Matrix& a);

/// Spectral norm (largest singular value). Zero for empty matrices.
double operator_norm(const Matrix& a);

inline constexpr std::size_t kDefaultEigenCap = 64;

/// All eigenvalues with algebraic multiplicity, in solver order.
std::vector<Complex> eigenvalues(const Matrix& a,
                                 std::size_t cap = kDefaultEigenCap);

/// Two-sided inverse. Throws SingularMatrix when numeric_rank < dimension or
/// when max(||AX-I||, ||XA-I||) exceeds residual_rel * ||A|| * ||X||.
Matrix invert(const Matrix& a, const Tolerance& tol = {});

/// <x, y>, conjugate-linear in y.
inline Complex inner(const Vector& x, const Vector& y) { return y.dot(x); }

/// Throws ContractViolation if any entry is NaN or infinite.
void require_finite(const Matrix& a, const char* what);

}  // namespace nilbridge
