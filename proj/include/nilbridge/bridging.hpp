// SPDX-License-Identifier: Apache-2.0
//
// Nilpotent bridging: perfect reconstruction of a vector from the frame
// coefficients that survive an erasure.
//
// For an erasure set L and bridge set W (disjoint), each erased analysis
// vector g_k is replaced by g_k' = sum_{w in W} c_w^(k) g_w, chosen so that
// f_j is orthogonal to g_k - g_k' for all j, k in L. The reduced error
// operator E~ = sum_{j in L} f_j (x) (g_j - g_j') then squares to zero and
//
//     f = f~ + E~ f_R,     f~ = f_R + f_B,
//
// where f_R is the partial reconstruction from the surviving coefficients and
// f_B = sum_{j in L} <f, g_j'> f_j is computable from the bridge coefficients.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "nilbridge/frames.hpp"

namespace nilbridge {

/// Known coefficients keyed by 0-based frame index.
using CoefficientMap = std::map<std::size_t, Complex>;

struct BridgePlan {
  DualFramePair pair;
  IndexSet erased;
  IndexSet bridge;
  /// |bridge| x |erased|. Column k holds the conjugated weights of g'_{erased[k]}
  /// over the bridge vectors, so B(L, W) C = B(L, L) when robust.
  Matrix coefficients;
  /// n x |erased|; column k is g'_{erased[k]}.
  Matrix bridged_vectors;
  bool robust = false;
  /// Frobenius residual of the bridging equation.
  double residual = 0.0;
};

struct ReconstructionReport {
  /// Erased coefficients <f, g_j>, in ascending index order.
  Vector recovered_coefficients;
  std::optional<Vector> recovered_vector;
  Vector partial;                        // f_R
  std::optional<Vector> supplement;      // f_B
  std::optional<Vector> bridged;         // f~ = f_R + f_B
  std::optional<Vector> reduced_error;   // E~ f_R
  std::optional<double> max_abs_error;
};

/// R_L = sum_{j not in L} f_j (x) g_j.
Matrix partial_reconstruction_operator(const DualFramePair& pair, const IndexSet& erased);

/// E_L = sum_{j in L} f_j (x) g_j = I - R_L.
Matrix error_operator(const DualFramePair& pair, const IndexSet& erased);

/// Entry (j, k) = <f_{erased[j]}, g_{bridge[k]}>. Throws InvalidSpec when the
/// sets overlap or either is empty.
Matrix bridge_matrix(const DualFramePair& pair, const IndexSet& erased,
                     const IndexSet& bridge);

/// Solves B(L, W) C = B(L, L) by least squares; robust iff consistent.
/// An empty bridge set is accepted (robust iff B(L, L) vanishes).
BridgePlan solve_bridge(const DualFramePair& pair, const IndexSet& erased,
                        const IndexSet& bridge, const Tolerance& tol = {},
                        LeastSquaresSolution kind = LeastSquaresSolution::minimum_norm);

/// Builds a plan from caller-supplied coefficients (|bridge| x |erased|) and
/// checks them against the bridging equation.
BridgePlan plan_from_coefficients(const DualFramePair& pair, const IndexSet& erased,
                                  const IndexSet& bridge, Matrix coefficients,
                                  const Tolerance& tol = {});

/// Closed form for a single erasure k bridged by l:
/// g_k' = (<g_k, f_k> / <g_l, f_k>) g_l.
BridgePlan single_erasure_bridge(const DualFramePair& pair, std::size_t k,
                                 std::size_t l, const Tolerance& tol = {});

struct BridgeSearch {
  IndexSet bridge;
  BridgePlan plan;
};

/// Greedy bridge-set search over the complement in ascending order, adding an
/// index whenever it raises the rank of the bridge matrix, until the rank
/// equals dim span{f_j : j in L}. Falls back to exhaustive search over subsets
/// of size <= min(|L|, max_size). Throws NoRobustBridge when none exists.
BridgeSearch find_bridge_set(const DualFramePair& pair, const IndexSet& erased,
                             const Tolerance& tol = {},
                             std::size_t max_size = static_cast<std::size_t>(-1));

/// rank B(L, W) == dim span{f_j : j in L}. Sufficient for robustness; also
/// necessary when F is Parseval and G = F.
bool is_robust_by_rank(const DualFramePair& pair, const IndexSet& erased,
                       const IndexSet& bridge, const Tolerance& tol = {});

/// E~ = sum_{j in L} f_j (x) (g_j - g_j').
Matrix reduced_error_operator(const BridgePlan& plan);

/// B_L = sum_{j in L} f_j (x) g_j'.
Matrix bridging_supplement_operator(const BridgePlan& plan);

/// Recovers the erased coefficients from the known ones. `known` must hold
/// every index outside the erasure set; extra entries on the erasure set are
/// ignored. Throws InvalidSpec for a non-robust plan.
Vector recover_coefficients(const BridgePlan& plan, const CoefficientMap& known);

/// f = f~ + E~ f_R, with every intermediate reported.
ReconstructionReport reconstruct_vector(const BridgePlan& plan,
                                        const CoefficientMap& known);

/// Keeps the first `m` bridge indices (and the matching coefficient rows).
/// The resulting plan is generally not robust.
BridgePlan truncate_bridge(const BridgePlan& plan, std::size_t m,
                           const Tolerance& tol = {});

/// Eigenvalues of the |L| x |L| compression (G_L - G')^* F_L, which shares
/// the nonzero spectrum of E~.
std::vector<Complex> compressed_spectrum(const BridgePlan& plan);

/// Number of eigenvalues of E~ with |lambda| > rank_rel * max(1, ||E~||),
/// computed on the compression.
std::size_t nonzero_eigenvalue_count(const BridgePlan& plan, const Tolerance& tol = {});

/// Fills max_abs_error of `report` against a known reference vector.
void attach_reference(ReconstructionReport& report, const Vector& reference);

/// Coefficient map holding <f, g_j> for every j outside `erased`.
CoefficientMap known_coefficients(const DualFramePair& pair, const IndexSet& erased,
                                  const Vector& f);

}  // namespace nilbridge
