// SPDX-License-Identifier: Apache-2.0
//
// Closed-form inverse of R = I - sum_j f_j (x) g_j.
//
// With {f_j} linearly independent and M(j, k) = <f_k, g_j>, R is invertible
// iff I - M is, and then R^{-1} = I + sum_{j,k} c_jk f_j (x) g_k with
// C = (I - M)^{-1}. Dependent f_j are first folded into an independent subset.
#pragma once

#include "nilbridge/bridging.hpp"

namespace nilbridge {

struct TermLists {
  Matrix fs;  // n x L', columns linearly independent
  Matrix gs;  // n x L'
};

/// Rewrites sum_j f_j (x) g_j over a linearly independent subset of the f_j.
/// A dependent f_j = sum_i a_i f'_i contributes conj(a_i) g_j to g'_i.
/// The independent subset is chosen by column-pivoted QR and kept in its
/// original order.
TermLists precondition_terms(const Matrix& fs, const Matrix& gs, const Tolerance& tol = {});

struct InverseForm {
  Matrix terms_f;
  Matrix terms_g;
  Matrix gram;          // M
  Matrix coefficients;  // C = (I - M)^{-1}

  /// I + F C G^*.
  Matrix expand() const;
  /// R^{-1} x without forming the n x n inverse.
  Vector apply(const Vector& x) const;
};

/// InverseForm for R_L. Throws NotInvertible when I - M is singular.
InverseForm invert_partial_reconstruction(const DualFramePair& pair, const IndexSet& erased,
                                          const Tolerance& tol = {});

/// f = R_L^{-1} f_R from the coefficients outside the erasure set. Throws
/// NotInvertible (pointing at bridging) when R_L has no inverse.
ReconstructionReport reconstruct_via_inverse(const DualFramePair& pair,
                                             const IndexSet& erased,
                                             const CoefficientMap& known,
                                             const Tolerance& tol = {});

}  // namespace nilbridge
