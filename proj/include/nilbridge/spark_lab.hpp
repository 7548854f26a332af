// SPDX-License-Identifier: Apache-2.0
//
// Dual-frame constructions and skew-spark audits.
//
// The audit and the genericity experiment are the expensive paths here; both
// come in a parallel (OpenMP) flavour and a serial reference that produce
// identical results.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nilbridge/fixtures.hpp"
#include "nilbridge/frames.hpp"

namespace nilbridge {

enum class Execution { serial, parallel };

/// min{n, N - n, floor(N / 2)}.
std::size_t erasure_size_bound(std::size_t n, std::size_t big_n);

/// A dual of `f` taking the prescribed values (columns of `prescribed`, in
/// ascending order of `erased`) on the erasure set. Throws InvalidSpec when the
/// erasure set fails minimal redundancy for `f`.
Frame extend_to_dual(const Frame& f, const IndexSet& erased, const Matrix& prescribed,
                     const Tolerance& tol = {});

/// Null-space element H (sum f_j (x) h_j = 0) with h_j = values on `erased`.
Matrix null_extension(const Frame& f, const IndexSet& erased, const Matrix& values,
                      const Tolerance& tol = {});

/// A dual G with B(F, G, erased, bridge) equal to the Gram matrix of
/// {f_j : j in erased}: g_{bridge[i]} = f_{erased[i]}, completed to a dual.
/// Requires F full spark, |erased| = |bridge| <= erasure_size_bound, disjoint.
DualFramePair designer_dual(const Frame& f, const IndexSet& erased, const IndexSet& bridge,
                            const Tolerance& tol = {});

struct DualPerturbation {
  Matrix base;                      // canonical dual G0
  std::vector<Matrix> null_vectors; // each H satisfies sum f_j (x) h_j = 0
  std::vector<double> weights;

  Matrix combined() const;
};

/// G0 plus random null-space directions, each rescaled to the Frobenius norm
/// of G0 before weighting. Deterministic per seed.
DualPerturbation random_dual_perturbation(const Frame& f, std::uint64_t seed,
                                          const Tolerance& tol = {});

/// Frame built from random_dual_perturbation(f, seed).combined().
Frame random_dual(const Frame& f, std::uint64_t seed, const Tolerance& tol = {});

inline constexpr double kAuditConditionCap = 1e12;
inline constexpr std::uint64_t kDefaultAuditBudget = 1'000'000;
inline constexpr std::size_t kMaxRecordedFailures = 1000;

struct AuditFailure {
  IndexSet erased;
  IndexSet bridge;
  std::size_t rank = 0;
  double condition = 0.0;
  /// Full rank but condition above kAuditConditionCap.
  bool near_singular = false;
};

struct SkewSparkReport {
  std::size_t k_requested = 0;
  std::size_t k_checked = 0;
  std::size_t bound = 0;       // erasure_size_bound(n, N)
  std::size_t skew_spark = 0;
  bool full = false;
  bool complete = true;        // false when the budget cut the audit short
  std::uint64_t matrices_checked = 0;
  std::uint64_t failure_count = 0;
  std::uint64_t near_singular_count = 0;
  double worst_condition = 1.0;  // over invertible matrices
  /// Lower bound on spark(F) and spark(G) implied by the skew spark.
  std::size_t spark_lower_bound = 0;
  /// First kMaxRecordedFailures failures ordered by (|L|, L, W).
  std::vector<AuditFailure> failures;
};

/// Checks every B(F, G, L, W) with |L| = |W| = k <= k_max for invertibility
/// (numeric_rank == k and condition <= kAuditConditionCap).
SkewSparkReport skew_spark_audit(const DualFramePair& pair, std::size_t k_max,
                                 const Tolerance& tol = {},
                                 std::uint64_t budget = kDefaultAuditBudget,
                                 Execution exec = Execution::parallel);

/// Number of (L, W) pairs audited at sizes 1..k_max.
std::uint64_t audit_cost(std::size_t big_n, std::size_t k_max);

struct TrialRow {
  std::size_t trial = 0;
  std::size_t n = 0;
  std::size_t big_n = 0;
  std::size_t k = 0;
  std::uint64_t failures = 0;
  double worst_condition = 1.0;
};

struct GenericityStats {
  std::vector<TrialRow> rows;
  std::size_t failed_trials = 0;
  double failure_frequency = 0.0;
  double worst_condition = 1.0;
};

/// Audits one pair up to size k and condenses the result into a row.
TrialRow audit_trial(const DualFramePair& pair, std::size_t k, std::size_t trial,
                     const Tolerance& tol = {});

/// Random full-spark Gaussian frames with random duals, audited to size k.
/// Trial t draws from make_rng(seed, t).
GenericityStats genericity_trial(std::size_t n, std::size_t big_n, std::size_t trials,
                                 std::size_t k, std::uint64_t seed,
                                 Field field = Field::real, const Tolerance& tol = {},
                                 Execution exec = Execution::parallel);

GenericityStats summarize(std::vector<TrialRow> rows);

}  // namespace nilbridge
