// SPDX-License-Identifier: Apache-2.0
#include "nilbridge/bridging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nilbridge/combinatorics.hpp"
#include "nilbridge/errors.hpp"

namespace nilbridge {

namespace {

void check_universe(const DualFramePair& pair, const IndexSet& set, const char* what) {
  if (set.universe() != pair.size()) {
    throw ContractViolation(std::string(what) +
                            ": index set universe does not match frame size");
  }
}

// (<f_{rows[j]}, g_{cols[k]}>)_{j,k}; no overlap checks.
Matrix inner_block(const DualFramePair& pair, const IndexSet& rows, const IndexSet& cols) {
  const Matrix fr = select_columns(pair.synthesis(), rows);
  const Matrix gc = select_columns(pair.analysis(), cols);
  return (gc.adjoint() * fr).transpose();
}

// Size the bridge matrix would have without cancellation.
double block_scale(const DualFramePair& pair, const IndexSet& rows, const IndexSet& cols) {
  return select_columns(pair.synthesis(), rows).norm() *
         select_columns(pair.analysis(), cols).norm();
}

BridgePlan assemble(const DualFramePair& pair, const IndexSet& erased,
                    const IndexSet& bridge, Matrix coefficients, const Tolerance& tol) {
  const Matrix rhs = inner_block(pair, erased, erased);
  const Matrix lhs = inner_block(pair, erased, bridge);
  BridgePlan plan{pair, erased, bridge, std::move(coefficients), Matrix(), false, 0.0};
  const Matrix g_bridge = select_columns(pair.analysis(), bridge);
  plan.bridged_vectors = g_bridge * plan.coefficients.conjugate();
  plan.residual = (lhs * plan.coefficients - rhs).norm();
  plan.robust = plan.residual <= tol.residual_rel() * (1.0 + rhs.norm());
  return plan;
}

Vector alpha_vector(const BridgePlan& plan, const CoefficientMap& known) {
  const std::size_t big_n = plan.pair.size();
  Vector alpha = Vector::Zero(static_cast<Eigen::Index>(big_n));
  for (std::size_t j = 0; j < big_n; ++j) {
    if (plan.erased.contains(j)) continue;
    auto it = known.find(j);
    if (it == known.end()) {
      throw ContractViolation("missing known coefficient for index " +
                              std::to_string(j + 1));
    }
    alpha(static_cast<Eigen::Index>(j)) = it->second;
  }
  return alpha;
}

void require_robust(const BridgePlan& plan) {
  if (!plan.robust) {
    throw InvalidSpec("bridge plan is not robust: the bridging equation has residual " +
                      std::to_string(plan.residual) +
                      "; choose another bridge set or check minimal redundancy");
  }
}

Vector gather(const Vector& v, const IndexSet& set) {
  Vector out(static_cast<Eigen::Index>(set.size()));
  for (std::size_t k = 0; k < set.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = v(static_cast<Eigen::Index>(set[k]));
  }
  return out;
}

}  // namespace

Matrix partial_reconstruction_operator(const DualFramePair& pair, const IndexSet& erased) {
  check_universe(pair, erased, "partial_reconstruction_operator");
  const IndexSet kept = erased.complement();
  return select_columns(pair.synthesis(), kept) *
         select_columns(pair.analysis(), kept).adjoint();
}

Matrix error_operator(const DualFramePair& pair, const IndexSet& erased) {
  check_universe(pair, erased, "error_operator");
  return select_columns(pair.synthesis(), erased) *
         select_columns(pair.analysis(), erased).adjoint();
}

Matrix bridge_matrix(const DualFramePair& pair, const IndexSet& erased,
                     const IndexSet& bridge) {
  check_universe(pair, erased, "bridge_matrix");
  check_universe(pair, bridge, "bridge_matrix");
  if (erased.empty() || bridge.empty()) {
    throw InvalidSpec("bridge_matrix: erasure and bridge sets must be nonempty");
  }
  if (!erased.disjoint(bridge)) {
    throw InvalidSpec("bridge_matrix: erasure and bridge sets overlap");
  }
  return inner_block(pair, erased, bridge);
}

BridgePlan solve_bridge(const DualFramePair& pair, const IndexSet& erased,
                        const IndexSet& bridge, const Tolerance& tol,
                        LeastSquaresSolution kind) {
  check_universe(pair, erased, "solve_bridge");
  check_universe(pair, bridge, "solve_bridge");
  if (!erased.disjoint(bridge)) {
    throw InvalidSpec("solve_bridge: erasure and bridge sets overlap");
  }
  const Matrix lhs = inner_block(pair, erased, bridge);
  const Matrix rhs = inner_block(pair, erased, erased);
  auto ls = solve_least_squares(lhs, rhs, tol, kind, block_scale(pair, erased, bridge));
  return assemble(pair, erased, bridge, std::move(ls.x), tol);
}

BridgePlan plan_from_coefficients(const DualFramePair& pair, const IndexSet& erased,
                                  const IndexSet& bridge, Matrix coefficients,
                                  const Tolerance& tol) {
  check_universe(pair, erased, "plan_from_coefficients");
  check_universe(pair, bridge, "plan_from_coefficients");
  if (!erased.disjoint(bridge)) {
    throw InvalidSpec("plan_from_coefficients: erasure and bridge sets overlap");
  }
  if (static_cast<std::size_t>(coefficients.rows()) != bridge.size() ||
      static_cast<std::size_t>(coefficients.cols()) != erased.size()) {
    throw ContractViolation("plan_from_coefficients: coefficient matrix must be "
                            "|bridge| x |erased|");
  }
  require_finite(coefficients, "plan_from_coefficients");
  return assemble(pair, erased, bridge, std::move(coefficients), tol);
}

BridgePlan single_erasure_bridge(const DualFramePair& pair, std::size_t k, std::size_t l,
                                 const Tolerance& tol) {
  if (k == l) throw InvalidSpec("single_erasure_bridge: k and l coincide");
  const std::size_t big_n = pair.size();
  if (k >= big_n || l >= big_n) {
    throw ContractViolation("single_erasure_bridge: index out of range");
  }
  const Vector fk = pair.synthesis().vector(k);
  const Vector gk = pair.analysis().vector(k);
  const Vector gl = pair.analysis().vector(l);
  const Complex denom = inner(fk, gl);
  const Complex numer = inner(fk, gk);
  Matrix c = Matrix::Zero(1, 1);
  // A vanishing <f_k, g_l> leaves c = 0, which is robust only if <f_k, g_k> = 0.
  if (std::abs(denom) > tol.rank_rel() * fk.norm() * gl.norm()) {
    c(0, 0) = numer / denom;
  }
  return assemble(pair, IndexSet(big_n, {k}), IndexSet(big_n, {l}), std::move(c), tol);
}

bool is_robust_by_rank(const DualFramePair& pair, const IndexSet& erased,
                       const IndexSet& bridge, const Tolerance& tol) {
  check_universe(pair, erased, "is_robust_by_rank");
  check_universe(pair, bridge, "is_robust_by_rank");
  if (!erased.disjoint(bridge)) {
    throw InvalidSpec("is_robust_by_rank: erasure and bridge sets overlap");
  }
  const std::size_t target = span_dimension(select_columns(pair.synthesis(), erased), tol);
  const std::size_t rank = (erased.empty() || bridge.empty())
                               ? 0
                               : numeric_rank(inner_block(pair, erased, bridge), tol,
                                              block_scale(pair, erased, bridge));
  return rank == target;
}

BridgeSearch find_bridge_set(const DualFramePair& pair, const IndexSet& erased,
                             const Tolerance& tol, std::size_t max_size) {
  check_universe(pair, erased, "find_bridge_set");
  const std::size_t big_n = pair.size();
  if (!minimal_redundancy(pair.analysis(), erased, tol)) {
    throw NoRobustBridge(
        "no robust bridge set: the erasure set fails minimal redundancy for the "
        "analysis frame (surviving analysis vectors do not span the space)",
        false);
  }
  if (erased.empty()) {
    IndexSet none(big_n, {});
    return {none, solve_bridge(pair, erased, none, tol)};
  }

  const IndexSet candidates = erased.complement();
  const std::size_t target =
      span_dimension(select_columns(pair.synthesis(), erased), tol);

  std::vector<std::size_t> chosen;
  std::size_t rank = 0;
  for (std::size_t j : candidates) {
    if (rank == target || chosen.size() >= max_size) break;
    std::vector<std::size_t> trial = chosen;
    trial.push_back(j);
    const IndexSet trial_set(big_n, trial);
    const std::size_t r = numeric_rank(inner_block(pair, erased, trial_set), tol,
                                       block_scale(pair, erased, trial_set));
    if (r > rank) {
      chosen = std::move(trial);
      rank = r;
    }
  }
  if (rank == target) {
    IndexSet bridge(big_n, chosen);
    BridgePlan plan = solve_bridge(pair, erased, bridge, tol);
    if (plan.robust) return {bridge, std::move(plan)};
  }

  const std::size_t cap =
      std::min({erased.size(), max_size, candidates.size()});
  for (std::size_t s = 0; s <= cap; ++s) {
    std::optional<BridgeSearch> found;
    for_each_subset_of(candidates.indices(), s, [&](const std::vector<std::size_t>& w) {
      IndexSet bridge(big_n, w);
      BridgePlan plan = solve_bridge(pair, erased, bridge, tol);
      if (!plan.robust) return true;
      found.emplace(BridgeSearch{bridge, std::move(plan)});
      return false;
    });
    if (found) return std::move(*found);
  }
  throw NoRobustBridge(
      "no robust bridge set within the size limit although minimal redundancy holds",
      true);
}

Matrix reduced_error_operator(const BridgePlan& plan) {
  const Matrix f_erased = select_columns(plan.pair.synthesis(), plan.erased);
  const Matrix g_erased = select_columns(plan.pair.analysis(), plan.erased);
  return f_erased * (g_erased - plan.bridged_vectors).adjoint();
}

Matrix bridging_supplement_operator(const BridgePlan& plan) {
  return select_columns(plan.pair.synthesis(), plan.erased) *
         plan.bridged_vectors.adjoint();
}

Vector recover_coefficients(const BridgePlan& plan, const CoefficientMap& known) {
  require_robust(plan);
  const Vector alpha = alpha_vector(plan, known);
  const Vector f_r = plan.pair.synthesis().matrix() * alpha;
  const Vector beta = plan.pair.analysis().matrix().adjoint() * f_r;
  return plan.coefficients.transpose() *
             (gather(alpha, plan.bridge) - gather(beta, plan.bridge)) +
         gather(beta, plan.erased);
}

ReconstructionReport reconstruct_vector(const BridgePlan& plan,
                                        const CoefficientMap& known) {
  require_robust(plan);
  const Vector alpha = alpha_vector(plan, known);
  const Matrix f_erased = select_columns(plan.pair.synthesis(), plan.erased);

  ReconstructionReport report;
  report.partial = plan.pair.synthesis().matrix() * alpha;
  // <f, g_j'> = sum_w C(w, j) alpha_w
  const Vector bridged_coeffs = plan.coefficients.transpose() * gather(alpha, plan.bridge);
  report.supplement = f_erased * bridged_coeffs;
  report.bridged = report.partial + *report.supplement;
  report.reduced_error = reduced_error_operator(plan) * report.partial;
  report.recovered_vector = *report.bridged + *report.reduced_error;
  report.recovered_coefficients = recover_coefficients(plan, known);
  return report;
}

BridgePlan truncate_bridge(const BridgePlan& plan, std::size_t m, const Tolerance& tol) {
  const std::size_t keep = std::min(m, plan.bridge.size());
  std::vector<std::size_t> kept(plan.bridge.begin(),
                                plan.bridge.begin() + static_cast<std::ptrdiff_t>(keep));
  Matrix c = plan.coefficients.topRows(static_cast<Eigen::Index>(keep));
  return plan_from_coefficients(plan.pair, plan.erased,
                                IndexSet(plan.pair.size(), std::move(kept)), std::move(c),
                                tol);
}

std::vector<Complex> compressed_spectrum(const BridgePlan& plan) {
  const Matrix phi = select_columns(plan.pair.synthesis(), plan.erased);
  const Matrix psi = select_columns(plan.pair.analysis(), plan.erased) - plan.bridged_vectors;
  return eigenvalues(psi.adjoint() * phi);
}

std::size_t nonzero_eigenvalue_count(const BridgePlan& plan, const Tolerance& tol) {
  const double scale = std::max(1.0, operator_norm(reduced_error_operator(plan)));
  const double cut = tol.rank_rel() * scale;
  const auto spectrum = compressed_spectrum(plan);
  return static_cast<std::size_t>(std::count_if(
      spectrum.begin(), spectrum.end(), [cut](Complex z) { return std::abs(z) > cut; }));
}

void attach_reference(ReconstructionReport& report, const Vector& reference) {
  if (report.recovered_vector) {
    report.max_abs_error = (*report.recovered_vector - reference).cwiseAbs().maxCoeff();
  }
}

CoefficientMap known_coefficients(const DualFramePair& pair, const IndexSet& erased,
                                  const Vector& f) {
  const Vector alpha = analysis(pair.analysis(), f);
  CoefficientMap known;
  for (std::size_t j = 0; j < pair.size(); ++j) {
    if (!erased.contains(j)) known.emplace(j, alpha(static_cast<Eigen::Index>(j)));
  }
  return known;
}

}  // namespace nilbridge
