// SPDX-License-Identifier: Apache-2.0
#include "nilbridge/spark_lab.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <limits>
#include <numeric>
#include <string>

#include "nilbridge/combinatorics.hpp"
#include "nilbridge/errors.hpp"

namespace nilbridge {

std::size_t erasure_size_bound(std::size_t n, std::size_t big_n) {
  if (n < 1 || n > big_n) {
    throw ContractViolation("erasure_size_bound: need 1 <= n <= N");
  }
  return std::min({n, big_n - n, big_n / 2});
}

Matrix null_extension(const Frame& f, const IndexSet& erased, const Matrix& values,
                      const Tolerance& tol) {
  if (erased.universe() != f.size()) {
    throw ContractViolation("null_extension: index set universe mismatch");
  }
  if (values.rows() != f.matrix().rows() ||
      static_cast<std::size_t>(values.cols()) != erased.size()) {
    throw ContractViolation("null_extension: need one n-vector per erased index");
  }
  if (!minimal_redundancy(f, erased, tol)) {
    throw InvalidSpec("erasure set fails minimal redundancy for the frame");
  }
  const IndexSet kept = erased.complement();
  const Matrix f_kept = select_columns(f, kept);
  // Canonical dual of the reduced frame: k_j = S_c^{-1} f_j.
  const Matrix k_kept = (f_kept * f_kept.adjoint()).llt().solve(f_kept);
  const Matrix a = select_columns(f, erased) * values.adjoint();
  const Matrix h_kept = -a.adjoint() * k_kept;

  Matrix h(f.matrix().rows(), f.matrix().cols());
  for (std::size_t i = 0; i < erased.size(); ++i) {
    h.col(static_cast<Eigen::Index>(erased[i])) = values.col(static_cast<Eigen::Index>(i));
  }
  for (std::size_t i = 0; i < kept.size(); ++i) {
    h.col(static_cast<Eigen::Index>(kept[i])) = h_kept.col(static_cast<Eigen::Index>(i));
  }
  return h;
}

Frame extend_to_dual(const Frame& f, const IndexSet& erased, const Matrix& prescribed,
                     const Tolerance& tol) {
  const Matrix base = canonical_dual(f, tol).analysis().matrix();
  const Matrix delta = prescribed - select_columns(base, erased);
  Matrix g = base + null_extension(f, erased, delta, tol);
  for (std::size_t i = 0; i < erased.size(); ++i) {
    g.col(static_cast<Eigen::Index>(erased[i])) = prescribed.col(static_cast<Eigen::Index>(i));
  }
  return Frame(std::move(g));
}

DualFramePair designer_dual(const Frame& f, const IndexSet& erased, const IndexSet& bridge,
                            const Tolerance& tol) {
  if (erased.universe() != f.size() || bridge.universe() != f.size()) {
    throw ContractViolation("designer_dual: index set universe mismatch");
  }
  if (!erased.disjoint(bridge)) {
    throw InvalidSpec("designer_dual: erasure and bridge sets overlap");
  }
  if (erased.size() != bridge.size()) {
    throw InvalidSpec("designer_dual: erasure and bridge sets differ in size");
  }
  const std::size_t bound = erasure_size_bound(f.dim(), f.size());
  if (erased.size() > bound) {
    throw InvalidSpec("designer_dual: |erasure set| = " + std::to_string(erased.size()) +
                      " exceeds the bound min{n, N-n, N/2} = " + std::to_string(bound));
  }
  if (spark(f, tol) != f.dim()) {
    throw InvalidSpec("designer_dual: frame is not full spark");
  }
  // g_{bridge[i]} = f_{erased[i]} makes the bridge matrix a Gram matrix.
  Frame g = extend_to_dual(f, bridge, select_columns(f, erased), tol);
  return DualFramePair(f, std::move(g), tol);
}

Matrix DualPerturbation::combined() const {
  Matrix g = base;
  for (std::size_t i = 0; i < null_vectors.size(); ++i) g += weights[i] * null_vectors[i];
  return g;
}

DualPerturbation random_dual_perturbation(const Frame& f, std::uint64_t seed,
                                          const Tolerance& tol) {
  Rng rng = make_rng(seed, 0x5eed);
  DualPerturbation out;
  out.base = canonical_dual(f, tol).analysis().matrix();
  const std::size_t n = f.dim();
  const std::size_t big_n = f.size();
  if (big_n <= n) return out;  // a basis has exactly one dual

  const Field field = f.matrix().imag().norm() > 0.0 ? Field::complex : Field::real;
  std::normal_distribution<double> weight(0.0, 1.0);
  std::vector<std::size_t> order(big_n);
  constexpr int kDirections = 2;
  for (int d = 0; d < kDirections; ++d) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      const std::size_t size =
          std::uniform_int_distribution<std::size_t>(1, big_n - n)(rng);
      IndexSet erased(big_n,
                      std::vector<std::size_t>(order.begin(),
                                               order.begin() + static_cast<std::ptrdiff_t>(size)));
      if (!minimal_redundancy(f, erased, tol)) continue;
      Matrix values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(size));
      for (Eigen::Index j = 0; j < values.cols(); ++j) values.col(j) = random_vector(n, rng, field);
      Matrix h = null_extension(f, erased, values, tol);
      // Keep the perturbation on the scale of G0; an ill-conditioned extension
      // can otherwise swamp the dual and its rounding error.
      const double hn = h.norm();
      if (hn > 0.0) h *= out.base.norm() / hn;
      out.null_vectors.push_back(std::move(h));
      out.weights.push_back(weight(rng));
      break;
    }
  }
  return out;
}

Frame random_dual(const Frame& f, std::uint64_t seed, const Tolerance& tol) {
  return Frame(random_dual_perturbation(f, seed, tol).combined());
}

std::uint64_t audit_cost(std::size_t big_n, std::size_t k_max) {
  std::uint64_t total = 0;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t k = 1; k <= k_max && 2 * k <= big_n; ++k) {
    const std::uint64_t a = binomial(big_n, k);
    const std::uint64_t b = binomial(big_n - k, k);
    if (b != 0 && a > kMax / b) return kMax;
    if (total > kMax - a * b) return kMax;
    total += a * b;
  }
  return total;
}

namespace {

struct Verdict {
  std::size_t rank = 0;
  double condition = 1.0;
  bool invertible = false;
  bool near_singular = false;
};

// `scale` is the size B would have without cancellation.
Verdict judge(const Matrix& b, std::size_t k, double scale, const Tolerance& tol) {
  const auto s = singular_values(b);
  Verdict v;
  const double smax = s.front();
  if (smax > 0.0) {
    const double cut = tol.rank_rel() * std::max(smax, scale);
    v.rank = static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [cut](double x) { return x > cut; }));
  }
  v.condition = s.back() > 0.0 ? smax / s.back() : std::numeric_limits<double>::infinity();
  const bool full_rank = v.rank == k;
  v.invertible = full_rank && v.condition <= kAuditConditionCap;
  v.near_singular = full_rank && !v.invertible;
  return v;
}

double block_scale(const DualFramePair& pair, const std::vector<std::size_t>& rows,
                   const std::vector<std::size_t>& cols) {
  double fr = 0.0, gc = 0.0;
  for (std::size_t j : rows) fr += pair.synthesis().matrix().col(static_cast<Eigen::Index>(j)).squaredNorm();
  for (std::size_t k : cols) gc += pair.analysis().matrix().col(static_cast<Eigen::Index>(k)).squaredNorm();
  return std::sqrt(fr * gc);
}

Matrix block(const DualFramePair& pair, const std::vector<std::size_t>& rows,
             const std::vector<std::size_t>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  const Matrix& f = pair.synthesis().matrix();
  const Matrix& g = pair.analysis().matrix();
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          inner(f.col(static_cast<Eigen::Index>(rows[j])),
                g.col(static_cast<Eigen::Index>(cols[k])));
    }
  }
  return out;
}

std::vector<std::size_t> complement_of(std::size_t big_n, const std::vector<std::size_t>& s) {
  std::vector<std::size_t> rest;
  for (std::size_t j = 0; j < big_n; ++j) {
    if (!std::binary_search(s.begin(), s.end(), j)) rest.push_back(j);
  }
  return rest;
}

// Per-size tallies; merged in erasure-set order so the report does not depend
// on thread scheduling.
struct SizeTally {
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::uint64_t near_singular = 0;
  double worst_condition = 1.0;
  std::vector<AuditFailure> recorded;

  void add(const DualFramePair& pair, const std::vector<std::size_t>& erased,
           const std::vector<std::size_t>& bridge, const Verdict& v) {
    ++checked;
    if (v.invertible) {
      worst_condition = std::max(worst_condition, v.condition);
      return;
    }
    ++failures;
    if (v.near_singular) ++near_singular;
    if (recorded.size() < kMaxRecordedFailures) {
      recorded.push_back({IndexSet(pair.size(), erased), IndexSet(pair.size(), bridge),
                          v.rank, v.condition, v.near_singular});
    }
  }

  void merge(SizeTally&& other) {
    checked += other.checked;
    failures += other.failures;
    near_singular += other.near_singular;
    worst_condition = std::max(worst_condition, other.worst_condition);
    for (auto& f : other.recorded) {
      if (recorded.size() >= kMaxRecordedFailures) break;
      recorded.push_back(std::move(f));
    }
  }
};

SizeTally audit_size_serial(const DualFramePair& pair, std::size_t k, const Tolerance& tol) {
  SizeTally tally;
  const std::size_t big_n = pair.size();
  for_each_subset(big_n, k, [&](const std::vector<std::size_t>& erased) {
    const auto rest = complement_of(big_n, erased);
    for_each_subset_of(rest, k, [&](const std::vector<std::size_t>& bridge) {
      tally.add(pair, erased, bridge, judge(block(pair, erased, bridge), k, block_scale(pair, erased, bridge), tol));
      return true;
    });
    return true;
  });
  return tally;
}

SizeTally audit_size_parallel(const DualFramePair& pair, std::size_t k,
                              const Tolerance& tol) {
  const std::size_t big_n = pair.size();
  const auto erasures = all_subsets(big_n, k);
  std::vector<SizeTally> slots(erasures.size());
  const auto count = static_cast<std::ptrdiff_t>(erasures.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto& erased = erasures[static_cast<std::size_t>(i)];
    const auto rest = complement_of(big_n, erased);
    auto& slot = slots[static_cast<std::size_t>(i)];
    for_each_subset_of(rest, k, [&](const std::vector<std::size_t>& bridge) {
      slot.add(pair, erased, bridge, judge(block(pair, erased, bridge), k, block_scale(pair, erased, bridge), tol));
      return true;
    });
  }
  SizeTally total;
  for (auto& s : slots) total.merge(std::move(s));
  return total;
}

}  // namespace

SkewSparkReport skew_spark_audit(const DualFramePair& pair, std::size_t k_max,
                                 const Tolerance& tol, std::uint64_t budget,
                                 Execution exec) {
  const std::size_t big_n = pair.size();
  SkewSparkReport report;
  report.k_requested = k_max;
  report.bound = erasure_size_bound(pair.dim(), big_n);
  const std::size_t top = std::min(k_max, big_n / 2);

  std::uint64_t spent = 0;
  std::optional<std::size_t> first_failing;
  for (std::size_t k = 1; k <= top; ++k) {
    const std::uint64_t cost = binomial(big_n, k) * binomial(big_n - k, k);
    if (spent + cost > budget) {
      report.complete = false;
      break;
    }
    spent += cost;
    SizeTally tally = exec == Execution::parallel ? audit_size_parallel(pair, k, tol)
                                                  : audit_size_serial(pair, k, tol);
    report.k_checked = k;
    report.matrices_checked += tally.checked;
    report.failure_count += tally.failures;
    report.near_singular_count += tally.near_singular;
    report.worst_condition = std::max(report.worst_condition, tally.worst_condition);
    if (tally.failures > 0 && !first_failing) first_failing = k;
    for (auto& f : tally.recorded) {
      if (report.failures.size() >= kMaxRecordedFailures) break;
      report.failures.push_back(std::move(f));
    }
  }
  report.skew_spark = first_failing ? *first_failing - 1 : report.k_checked;
  report.full = report.skew_spark == report.bound;
  report.spark_lower_bound = report.skew_spark;
  return report;
}

TrialRow audit_trial(const DualFramePair& pair, std::size_t k, std::size_t trial,
                     const Tolerance& tol) {
  const auto report = skew_spark_audit(pair, k, tol, kDefaultAuditBudget, Execution::serial);
  return {trial, pair.dim(), pair.size(), k, report.failure_count, report.worst_condition};
}

GenericityStats summarize(std::vector<TrialRow> rows) {
  GenericityStats stats;
  for (const auto& r : rows) {
    if (r.failures > 0) ++stats.failed_trials;
    stats.worst_condition = std::max(stats.worst_condition, r.worst_condition);
  }
  if (!rows.empty()) {
    stats.failure_frequency =
        static_cast<double>(stats.failed_trials) / static_cast<double>(rows.size());
  }
  stats.rows = std::move(rows);
  return stats;
}

GenericityStats genericity_trial(std::size_t n, std::size_t big_n, std::size_t trials,
                                 std::size_t k, std::uint64_t seed, Field field,
                                 const Tolerance& tol, Execution exec) {
  if (k > erasure_size_bound(n, big_n)) {
    throw ContractViolation("genericity_trial: k exceeds min{n, N-n, N/2}");
  }
  auto run = [&](std::size_t t) {
    Rng rng = make_rng(seed, t);
    Frame f = random_full_spark_frame(n, big_n, rng, field, tol);
    const std::uint64_t dual_seed = rng();
    Frame g = random_dual(f, dual_seed, tol);
    return audit_trial(DualFramePair(std::move(f), std::move(g), tol), k, t, tol);
  };

  std::vector<TrialRow> rows(trials);
  if (exec == Execution::serial) {
    for (std::size_t t = 0; t < trials; ++t) rows[t] = run(t);
  } else {
    const auto count = static_cast<std::ptrdiff_t>(trials);
    std::vector<std::exception_ptr> errors(trials);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
      const auto i = static_cast<std::size_t>(t);
      try {
        rows[i] = run(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return summarize(std::move(rows));
}

}  // namespace nilbridge
