// SPDX-License-Identifier: Apache-2.0
#include "nilbridge/frames.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nilbridge/combinatorics.hpp"
#include "nilbridge/errors.hpp"

namespace nilbridge {

Frame::Frame(Matrix vectors) : v_(std::move(vectors)) {
  if (v_.rows() < 1 || v_.cols() < 1) {
    throw ContractViolation("Frame: need at least one vector of dimension >= 1");
  }
  require_finite(v_, "Frame");
}

Frame Frame::from_vectors(const std::vector<Vector>& vectors) {
  if (vectors.empty()) {
    throw ContractViolation("Frame: empty vector list");
  }
  Matrix m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != m.rows()) {
      throw ContractViolation("Frame: vectors have different dimensions");
    }
    m.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return Frame(std::move(m));
}

IndexSet::IndexSet(std::size_t universe, std::vector<std::size_t> indices)
    : universe_(universe), idx_(std::move(indices)) {
  std::sort(idx_.begin(), idx_.end());
  if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end()) {
    throw ContractViolation("IndexSet: duplicate index");
  }
  if (!idx_.empty() && idx_.back() >= universe_) {
    throw ContractViolation("IndexSet: index " + std::to_string(idx_.back() + 1) +
                            " out of range 1.." + std::to_string(universe_));
  }
}

IndexSet IndexSet::from_one_based(std::size_t universe,
                                  const std::vector<std::size_t>& indices) {
  std::vector<std::size_t> zero_based;
  zero_based.reserve(indices.size());
  for (auto i : indices) {
    if (i == 0) throw ContractViolation("IndexSet: 1-based index 0");
    zero_based.push_back(i - 1);
  }
  return IndexSet(universe, std::move(zero_based));
}

IndexSet IndexSet::all(std::size_t universe) {
  std::vector<std::size_t> v(universe);
  for (std::size_t i = 0; i < universe; ++i) v[i] = i;
  return IndexSet(universe, std::move(v));
}

bool IndexSet::contains(std::size_t j) const {
  return std::binary_search(idx_.begin(), idx_.end(), j);
}

bool IndexSet::disjoint(const IndexSet& other) const {
  return std::none_of(idx_.begin(), idx_.end(),
                      [&](std::size_t j) { return other.contains(j); });
}

IndexSet IndexSet::complement() const {
  std::vector<std::size_t> rest;
  rest.reserve(universe_ - idx_.size());
  for (std::size_t j = 0; j < universe_; ++j) {
    if (!contains(j)) rest.push_back(j);
  }
  return IndexSet(universe_, std::move(rest));
}

std::vector<std::size_t> IndexSet::one_based() const {
  std::vector<std::size_t> out(idx_);
  for (auto& i : out) ++i;
  return out;
}

Matrix select_columns(const Matrix& m, const IndexSet& set) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(set.size()));
  for (std::size_t k = 0; k < set.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = m.col(static_cast<Eigen::Index>(set[k]));
  }
  return out;
}

Matrix select_columns(const Frame& f, const IndexSet& set) {
  if (set.universe() != f.size()) {
    throw ContractViolation("index set universe does not match frame size");
  }
  return select_columns(f.matrix(), set);
}

DualFramePair::DualFramePair(Frame synthesis, Frame analysis, const Tolerance& tol)
    : f_(std::move(synthesis)), g_(std::move(analysis)) {
  const auto check = verify_dual_pair(f_, g_, tol);
  if (!check.is_dual) {
    throw ContractViolation("DualFramePair: sum f_j (x) g_j differs from I by " +
                            std::to_string(check.residual));
  }
  residual_ = check.residual;
}

Vector analysis(const Frame& g, const Vector& f) {
  if (static_cast<std::size_t>(f.size()) != g.dim()) {
    throw ContractViolation("analysis: vector dimension mismatch");
  }
  return g.matrix().adjoint() * f;
}

Vector synthesis(const Frame& f, const Vector& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != f.size()) {
    throw ContractViolation("synthesis: coefficient count mismatch");
  }
  return f.matrix() * coeffs;
}

Matrix frame_operator(const Frame& f) {
  return f.matrix() * f.matrix().adjoint();
}

FrameBounds frame_bounds(const Frame& f, const Tolerance& tol) {
  const Matrix s = frame_operator(f);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  FrameBounds b;
  b.lower = std::max(0.0, ev.minCoeff());
  b.upper = ev.maxCoeff();
  b.is_frame = b.lower > tol.rank_rel() * b.upper;
  b.is_parseval = std::abs(b.lower - 1.0) <= tol.residual_rel() &&
                  std::abs(b.upper - 1.0) <= tol.residual_rel();
  return b;
}

DualFramePair canonical_dual(const Frame& f, const Tolerance& tol) {
  const auto bounds = frame_bounds(f, tol);
  if (!bounds.is_frame) {
    throw NotAFrame("canonical_dual: lower frame bound is zero");
  }
  const Matrix s = frame_operator(f);
  Matrix g = s.llt().solve(f.matrix());
  return DualFramePair(f, Frame(std::move(g)), tol);
}

DualityCheck verify_dual_pair(const Frame& f, const Frame& g, const Tolerance& tol) {
  if (f.dim() != g.dim() || f.size() != g.size()) {
    throw ContractViolation("verify_dual_pair: frames differ in shape");
  }
  const Matrix defect = f.matrix() * g.matrix().adjoint() -
                        Matrix::Identity(f.matrix().rows(), f.matrix().rows());
  DualityCheck out;
  out.residual = operator_norm(defect);
  out.is_dual = out.residual <= tol.residual_rel() * std::sqrt(double(f.dim()));
  return out;
}

Matrix cross_gram(const Matrix& fs, const Matrix& gs) {
  if (fs.cols() != gs.cols() || fs.rows() != gs.rows()) {
    throw ContractViolation("cross_gram: lists differ in length or dimension");
  }
  return gs.adjoint() * fs;
}

std::size_t span_dimension(const Matrix& vectors, const Tolerance& tol) {
  if (vectors.size() == 0) return 0;
  return numeric_rank(vectors, tol);
}

bool minimal_redundancy(const Frame& g, const IndexSet& erased, const Tolerance& tol) {
  const IndexSet kept = erased.complement();
  if (kept.empty()) return false;
  return span_dimension(select_columns(g, kept), tol) == g.dim();
}

std::size_t spark(const Frame& f, const Tolerance& tol, std::size_t cap) {
  const std::size_t n = f.dim();
  const std::size_t big_n = f.size();
  if (big_n > cap) {
    throw UnsupportedSize("spark: " + std::to_string(big_n) +
                          " vectors exceed brute-force cap " + std::to_string(cap));
  }
  const std::size_t top = std::min(n, big_n);
  const double scale = f.matrix().colwise().norm().maxCoeff();
  for (std::size_t k = 1; k <= top; ++k) {
    bool all_independent = true;
    for_each_subset(big_n, k, [&](const std::vector<std::size_t>& subset) {
      const Matrix cols = select_columns(f.matrix(), IndexSet(big_n, subset));
      if (numeric_rank(cols, tol, scale) < k) {
        all_independent = false;
        return false;
      }
      return true;
    });
    if (!all_independent) return k - 1;
  }
  return top;
}

}  // namespace nilbridge
