// SPDX-License-Identifier: Apache-2.0
//
// Erasure recovery for sampling schemes. A scheme is described by its value
// table V(j, k) = f_j(t_k): the synthesis functions evaluated at the sample
// points. Bridge matrices are slices of V and never need the analysis side.
//
// Two concrete schemes are provided:
//  * trig: complex trigonometric polynomials of n consecutive frequencies
//    sampled at t_k = k / N. Point evaluation gives a tight frame, so recovery
//    is exact.
//  * truncated Shannon: indices -K..K of the band-limited scheme with spacing
//    p. Only an approximation of the infinite scheme.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nilbridge/bridging.hpp"

namespace nilbridge {

enum class SchemeKind { trig_poly, truncated_shannon, custom };

std::string to_string(SchemeKind kind);
/// Throws ContractViolation on unknown names.
SchemeKind scheme_kind_from_string(const std::string& name);

/// t = index * spacing, kept as the grid pair to avoid drift.
struct SamplePoint {
  long long index = 0;
  double spacing = 1.0;
  double value() const noexcept { return static_cast<double>(index) * spacing; }
};

struct SamplingScheme {
  SchemeKind kind = SchemeKind::custom;
  std::vector<SamplePoint> points;
  Matrix value_table;  // N x N, (j, k) = f_j(t_k)
  std::size_t space_dim = 0;
  /// Scale turning samples into frame coefficients: <f, g_j> = weight * f(t_j).
  /// 1 for trig and custom schemes, p for Shannon.
  double coefficient_weight = 1.0;
  /// n x N coordinates of the synthesis vectors, when the space is finite.
  std::optional<Matrix> synthesis_coordinates;
  /// n x N Riesz representers of point evaluation, paired with the above.
  std::optional<Matrix> analysis_coordinates;
  /// Lowest frequency of the trig basis e^{2 pi i m t}, m = first..first+n-1.
  long long first_frequency = 0;

  std::size_t size() const noexcept { return points.size(); }
};

/// Trig polynomials spanned by e^{2 pi i m t} for n consecutive m centred at
/// zero, sampled at t_k = k / N. Throws ContractViolation when N < n.
SamplingScheme build_trig_scheme(std::size_t n, std::size_t big_n);

/// Indices -K..K (stored at positions 0..2K), t_j = j p,
/// value_table(j, k) = sinc(pi (j - k) p), coefficient weight p.
SamplingScheme build_truncated_shannon(double p, std::size_t half_width);

/// sin(x) / x with sinc(0) = 1.
double sinc(double x);

/// Rows `erased`, columns `bridge` of the value table (positions are 0-based).
Matrix sampling_bridge_matrix(const SamplingScheme& scheme, const IndexSet& erased,
                              const IndexSet& bridge);

/// Recovers f(t_j) for j in `erased` from the samples on the complement.
/// Throws NoRobustBridge when the bridging equation is inconsistent.
Vector recover_samples(const SamplingScheme& scheme, const IndexSet& erased,
                       const IndexSet& bridge, const CoefficientMap& known_samples,
                       const Tolerance& tol = {});

/// Greedy bridge selection on the value table: adds complement positions that
/// raise the rank of the bridge matrix until it matches rank V(L, L^c).
IndexSet choose_sampling_bridge(const SamplingScheme& scheme, const IndexSet& erased,
                                const Tolerance& tol = {});

/// Dual pair induced by a scheme with synthesis coordinates:
/// F = synthesis coordinates, G = Riesz representers of point evaluation.
DualFramePair induced_pair(const SamplingScheme& scheme, const Tolerance& tol = {});

/// Value at t of the trig polynomial with coordinates `coords`.
Complex evaluate_trig(const SamplingScheme& scheme, const Vector& coords, double t);

/// Samples f(t_j) of a trig polynomial at every scheme point, using the exact
/// grid phase.
Vector sample_trig(const SamplingScheme& scheme, const Vector& coords);

}  // namespace nilbridge
