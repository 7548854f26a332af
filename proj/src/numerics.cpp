// SPDX-License-Identifier: Apache-2.0
#include "nilbridge/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nilbridge/errors.hpp"

namespace nilbridge {

Tolerance::Tolerance(double rank_rel, double residual_rel)
    : rank_rel_(rank_rel), residual_rel_(residual_rel) {
  auto valid = [](double v) { return v > 0.0 && v < 1.0; };
  if (!valid(rank_rel) || !valid(residual_rel)) {
    throw ContractViolation("tolerances must lie strictly between 0 and 1");
  }
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw ContractViolation(std::string(what) + ": matrix has NaN or Inf entries");
  }
}

LeastSquaresResult solve_least_squares(const Matrix& a, const Matrix& b,
                                       const Tolerance& tol,
                                       LeastSquaresSolution kind, double scale) {
  if (a.rows() != b.rows()) {
    throw ContractViolation("solve_least_squares: A and B row counts differ");
  }
  require_finite(a, "solve_least_squares");
  require_finite(b, "solve_least_squares");

  LeastSquaresResult out;
  const double b_norm = b.norm();
  const double a_norm = a.size() == 0 ? 0.0 : operator_norm(a);
  if (a.cols() == 0 || a.rows() == 0 || a_norm <= tol.rank_rel() * scale || a_norm == 0.0) {
    out.x = Matrix::Zero(a.cols(), b.cols());
    out.residual = b_norm;
  } else if (kind == LeastSquaresSolution::minimum_norm) {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(tol.rank_rel() * std::max(1.0, scale / a_norm));
    cod.compute(a);
    out.x = cod.solve(b);
    out.residual = (a * out.x - b).norm();
  } else {
    // Leftmost independent columns carry the solution; the rest stay zero.
    std::vector<Eigen::Index> basis;
    std::size_t rank = 0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      Matrix trial(a.rows(), static_cast<Eigen::Index>(basis.size()) + 1);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        trial.col(static_cast<Eigen::Index>(i)) = a.col(basis[i]);
      }
      trial.col(trial.cols() - 1) = a.col(c);
      if (numeric_rank(trial, tol, scale) > rank) {
        basis.push_back(c);
        ++rank;
      }
    }
    out.x = Matrix::Zero(a.cols(), b.cols());
    if (!basis.empty()) {
      Matrix sub(a.rows(), static_cast<Eigen::Index>(basis.size()));
      for (std::size_t i = 0; i < basis.size(); ++i) {
        sub.col(static_cast<Eigen::Index>(i)) = a.col(basis[i]);
      }
      const Matrix xs = sub.colPivHouseholderQr().solve(b);
      for (std::size_t i = 0; i < basis.size(); ++i) out.x.row(basis[i]) = xs.row(static_cast<Eigen::Index>(i));
    }
    out.residual = (a * out.x - b).norm();
  }
  out.consistent = out.residual <= tol.residual_rel() * (1.0 + b_norm);
  return out;
}

std::vector<double> singular_values(const Matrix& a) {
  if (a.size() == 0) return {};
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t numeric_rank(const Matrix& a, const Tolerance& tol) {
  if (a.size() == 0) {
    throw ContractViolation("numeric_rank: empty matrix");
  }
  require_finite(a, "numeric_rank");
  const auto s = singular_values(a);
  const double smax = s.front();
  if (smax == 0.0) return 0;
  const double cut = tol.rank_rel() * smax;
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [cut](double v) { return v > cut; }));
}

std::size_t numeric_rank(const Matrix& a, const Tolerance& tol, double scale) {
  if (a.size() == 0) return 0;
  require_finite(a, "numeric_rank");
  const auto s = singular_values(a);
  const double cut = tol.rank_rel() * std::max(s.front(), scale);
  if (s.front() == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [cut](double v) { return v > cut; }));
}

double condition_number(const Matrix& a) {
  const auto s = singular_values(a);
  if (s.empty()) return 1.0;
  if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

double operator_norm(const Matrix& a) {
  const auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

std::vector<Complex> eigenvalues(const Matrix& a, std::size_t cap) {
  if (a.rows() != a.cols()) {
    throw ContractViolation("eigenvalues: matrix is not square");
  }
  if (static_cast<std::size_t>(a.rows()) > cap) {
    throw UnsupportedSize("eigenvalues: dimension " + std::to_string(a.rows()) +
                          " exceeds cap " + std::to_string(cap));
  }
  require_finite(a, "eigenvalues");
  if (a.rows() == 0) return {};
  // Hessenberg reduction followed by shifted QR on the complex Schur form.
  Eigen::ComplexEigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error("eigenvalues: QR iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Matrix invert(const Matrix& a, const Tolerance& tol) {
  if (a.rows() != a.cols()) {
    throw ContractViolation("invert: matrix is not square");
  }
  const auto n = static_cast<std::size_t>(a.rows());
  if (n == 0) return Matrix(0, 0);
  const std::size_t rank = numeric_rank(a, tol);
  if (rank < n) {
    throw SingularMatrix("invert: numeric rank " + std::to_string(rank) +
                             " < dimension " + std::to_string(n),
                         rank);
  }
  Matrix x = a.fullPivLu().inverse();
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const double defect = std::max((a * x - id).norm(), (x * a - id).norm());
  if (defect > tol.residual_rel() * operator_norm(a) * operator_norm(x)) {
    throw SingularMatrix("invert: inverse residual too large", rank);
  }
  return x;
}

}  // namespace nilbridge
