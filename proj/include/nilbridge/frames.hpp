// SPDX-License-Identifier: Apache-2.0
//
// Finite frames, dual frame pairs and the operators built from them.
//
// A frame is stored as an n x N coordinate table whose columns are the frame
// vectors. The elementary tensor f (x) g acts as x |-> <x, g> f, i.e. it is the
// matrix f g^*, so sum_j f_j (x) g_j is F G^*.
//
// Indices are 0-based throughout the library; file formats and the CLI use
// 1-based indices and convert at the boundary.
#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "nilbridge/numerics.hpp"

namespace nilbridge {

class Frame {
 public:
  /// Columns of `vectors` are the frame vectors. Requires n >= 1, N >= 1 and
  /// finite entries.
  explicit Frame(Matrix vectors);
  /// Builds a frame from a list of equally sized vectors.
  static Frame from_vectors(const std::vector<Vector>& vectors);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(v_.cols()); }

  const Matrix& matrix() const noexcept { return v_; }
  Vector vector(std::size_t j) const { return v_.col(static_cast<Eigen::Index>(j)); }

 private:
  Matrix v_;
};

/// Sorted, duplicate-free subset of {0, ..., universe - 1}.
class IndexSet {
 public:
  IndexSet() = default;
  /// Throws ContractViolation on duplicates or out-of-range entries.
  IndexSet(std::size_t universe, std::vector<std::size_t> indices);
  IndexSet(std::size_t universe, std::initializer_list<std::size_t> indices)
      : IndexSet(universe, std::vector<std::size_t>(indices)) {}
  /// Converts 1-based indices (the file and CLI convention).
  static IndexSet from_one_based(std::size_t universe,
                                 const std::vector<std::size_t>& indices);
  static IndexSet all(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  const std::vector<std::size_t>& indices() const noexcept { return idx_; }
  std::size_t operator[](std::size_t i) const { return idx_[i]; }
  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }

  bool contains(std::size_t j) const;
  bool disjoint(const IndexSet& other) const;
  IndexSet complement() const;
  std::vector<std::size_t> one_based() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::size_t> idx_;
};

/// Columns of `m` listed in `set`, in ascending order.
Matrix select_columns(const Matrix& m, const IndexSet& set);
Matrix select_columns(const Frame& f, const IndexSet& set);

class DualFramePair {
 public:
  /// Verifies sum_j f_j (x) g_j = I within residual_rel * sqrt(n) in the
  /// operator norm; throws ContractViolation on shape mismatch or failure.
  DualFramePair(Frame synthesis, Frame analysis, const Tolerance& tol = {});

  const Frame& synthesis() const noexcept { return f_; }
  const Frame& analysis() const noexcept { return g_; }
  std::size_t dim() const noexcept { return f_.dim(); }
  std::size_t size() const noexcept { return f_.size(); }
  double duality_residual() const noexcept { return residual_; }

 private:
  Frame f_;
  Frame g_;
  double residual_ = 0.0;
};

/// (<f, g_j>)_j.
Vector analysis(const Frame& g, const Vector& f);
/// sum_j c_j f_j.
Vector synthesis(const Frame& f, const Vector& coeffs);

/// S = sum_j f_j (x) f_j.
Matrix frame_operator(const Frame& f);

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool is_frame = false;
  bool is_parseval = false;
};

FrameBounds frame_bounds(const Frame& f, const Tolerance& tol = {});

/// g_j = S^{-1} f_j. Throws NotAFrame when the lower bound vanishes.
DualFramePair canonical_dual(const Frame& f, const Tolerance& tol = {});

struct DualityCheck {
  bool is_dual = false;
  double residual = 0.0;
};

DualityCheck verify_dual_pair(const Frame& f, const Frame& g,
                              const Tolerance& tol = {});

/// Entry (j, k) = <f_k, g_j>. Both inputs are n x L coordinate tables.
Matrix cross_gram(const Matrix& fs, const Matrix& gs);

/// Dimension of the span of the columns; zero for an empty selection.
std::size_t span_dimension(const Matrix& vectors, const Tolerance& tol = {});

/// True iff the vectors of `g` outside `erased` span the whole space.
bool minimal_redundancy(const Frame& g, const IndexSet& erased,
                        const Tolerance& tol = {});

inline constexpr std::size_t kDefaultSparkCap = 20;

/// Largest k such that every k vectors are linearly independent (at most n).
/// Throws UnsupportedSize when N exceeds `cap`.
std::size_t spark(const Frame& f, const Tolerance& tol = {},
                  std::size_t cap = kDefaultSparkCap);

}  // namespace nilbridge
