// SPDX-License-Identifier: Apache-2.0
#include "nilbridge/inversion.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "nilbridge/errors.hpp"

namespace nilbridge {

TermLists precondition_terms(const Matrix& fs, const Matrix& gs, const Tolerance& tol) {
  if (fs.cols() != gs.cols() || fs.rows() != gs.rows()) {
    throw ContractViolation("precondition_terms: lists differ in length or dimension");
  }
  const Eigen::Index n = fs.rows();
  if (fs.cols() == 0) return {Matrix(n, 0), Matrix(n, 0)};

  const std::size_t rank = numeric_rank(fs, tol);
  if (rank == 0) return {Matrix(n, 0), Matrix(n, 0)};

  Eigen::ColPivHouseholderQR<Matrix> qr(fs);
  std::vector<Eigen::Index> keep(rank);
  const auto& perm = qr.colsPermutation().indices();
  for (std::size_t i = 0; i < rank; ++i) keep[i] = perm(static_cast<Eigen::Index>(i));
  std::sort(keep.begin(), keep.end());

  TermLists out{Matrix(n, static_cast<Eigen::Index>(rank)),
                Matrix(n, static_cast<Eigen::Index>(rank))};
  for (std::size_t i = 0; i < rank; ++i) {
    out.fs.col(static_cast<Eigen::Index>(i)) = fs.col(keep[i]);
    out.gs.col(static_cast<Eigen::Index>(i)) = gs.col(keep[i]);
  }
  for (Eigen::Index j = 0; j < fs.cols(); ++j) {
    if (std::binary_search(keep.begin(), keep.end(), j)) continue;
    const auto ls = solve_least_squares(out.fs, fs.col(j), tol);
    const Vector a = ls.x.col(0);
    out.gs += gs.col(j) * a.adjoint();
  }
  return out;
}

Matrix InverseForm::expand() const {
  const Eigen::Index n = terms_f.rows();
  return Matrix::Identity(n, n) + terms_f * coefficients * terms_g.adjoint();
}

Vector InverseForm::apply(const Vector& x) const {
  return x + terms_f * (coefficients * (terms_g.adjoint() * x));
}

InverseForm invert_partial_reconstruction(const DualFramePair& pair, const IndexSet& erased,
                                          const Tolerance& tol) {
  if (erased.universe() != pair.size()) {
    throw ContractViolation("invert_partial_reconstruction: index set universe mismatch");
  }
  auto terms = precondition_terms(select_columns(pair.synthesis(), erased),
                                  select_columns(pair.analysis(), erased), tol);
  InverseForm form;
  form.gram = cross_gram(terms.fs, terms.gs);
  const Eigen::Index l = form.gram.rows();
  const Matrix reduced = Matrix::Identity(l, l) - form.gram;
  auto refuse = [&](std::size_t rank) {
    return NotInvertible(
        "partial reconstruction operator is not invertible (I - M has rank " +
        std::to_string(rank) + " < " + std::to_string(l) +
        "); nilpotent bridging may still recover the erased coefficients");
  };
  if (l > 0) {
    // I - M may cancel to rounding noise, so measure it against 1 + ||M||
    // rather than against itself.
    const auto s = singular_values(reduced);
    const double cut = tol.rank_rel() * std::max(1.0, operator_norm(form.gram));
    const auto rank = static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [cut](double v) { return v > cut; }));
    if (rank < static_cast<std::size_t>(l)) throw refuse(rank);
  }
  try {
    form.coefficients = invert(reduced, tol);
  } catch (const SingularMatrix& e) {
    throw refuse(e.rank());
  }
  form.terms_f = std::move(terms.fs);
  form.terms_g = std::move(terms.gs);
  return form;
}

ReconstructionReport reconstruct_via_inverse(const DualFramePair& pair,
                                             const IndexSet& erased,
                                             const CoefficientMap& known,
                                             const Tolerance& tol) {
  const InverseForm form = invert_partial_reconstruction(pair, erased, tol);
  Vector alpha = Vector::Zero(static_cast<Eigen::Index>(pair.size()));
  for (std::size_t j = 0; j < pair.size(); ++j) {
    if (erased.contains(j)) continue;
    auto it = known.find(j);
    if (it == known.end()) {
      throw ContractViolation("missing known coefficient for index " +
                              std::to_string(j + 1));
    }
    alpha(static_cast<Eigen::Index>(j)) = it->second;
  }
  ReconstructionReport report;
  report.partial = pair.synthesis().matrix() * alpha;
  const Vector f = form.apply(report.partial);
  report.recovered_vector = f;
  report.recovered_coefficients = select_columns(pair.analysis(), erased).adjoint() * f;
  return report;
}

}  // namespace nilbridge
