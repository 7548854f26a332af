// SPDX-License-Identifier: Apache-2.0
#include "nilbridge/sampling.hpp"

#include <cmath>
#include <numbers>

#include "nilbridge/errors.hpp"

namespace nilbridge {

namespace {

// exp(2 pi i num / den) with the phase reduced exactly modulo den.
Complex unit_root(long long num, long long den) {
  const long long r = ((num % den) + den) % den;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) /
                             static_cast<double>(den));
}

void check_positions(const SamplingScheme& scheme, const IndexSet& set) {
  if (set.universe() != scheme.size()) {
    throw ContractViolation("sample index set universe does not match the scheme");
  }
}

Matrix table_block(const Matrix& table, const IndexSet& rows, const IndexSet& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          table(static_cast<Eigen::Index>(rows[j]), static_cast<Eigen::Index>(cols[k]));
    }
  }
  return out;
}

}  // namespace

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::trig_poly: return "trig_poly";
    case SchemeKind::truncated_shannon: return "truncated_shannon";
    case SchemeKind::custom: return "custom";
  }
  return "custom";
}

SchemeKind scheme_kind_from_string(const std::string& name) {
  if (name == "trig_poly") return SchemeKind::trig_poly;
  if (name == "truncated_shannon") return SchemeKind::truncated_shannon;
  if (name == "custom") return SchemeKind::custom;
  throw ContractViolation("unknown scheme kind '" + name + "'");
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

SamplingScheme build_trig_scheme(std::size_t n, std::size_t big_n) {
  if (n < 1 || big_n < n) {
    throw ContractViolation("build_trig_scheme: need 1 <= n <= N (underdetermined scheme)");
  }
  const auto nn = static_cast<long long>(n);
  const auto bn = static_cast<long long>(big_n);
  SamplingScheme s;
  s.kind = SchemeKind::trig_poly;
  s.space_dim = n;
  s.first_frequency = -((nn - 1) / 2);
  s.points.reserve(big_n);
  for (long long k = 0; k < bn; ++k) s.points.push_back({k, 1.0 / static_cast<double>(bn)});

  // g_k has coordinates e^{-2 pi i m k / N}; the frame {g_k} is tight with
  // bound N, so the canonical dual is f_j = g_j / N.
  Matrix g(nn, bn);
  for (long long k = 0; k < bn; ++k) {
    for (long long i = 0; i < nn; ++i) {
      g(i, k) = unit_root(-(s.first_frequency + i) * k, bn);
    }
  }
  Matrix f = g / static_cast<double>(bn);

  s.value_table.resize(bn, bn);
  for (long long j = 0; j < bn; ++j) {
    for (long long k = 0; k < bn; ++k) {
      Complex acc = 0.0;
      for (long long i = 0; i < nn; ++i) acc += unit_root((s.first_frequency + i) * (k - j), bn);
      s.value_table(j, k) = acc / static_cast<double>(bn);
    }
  }
  s.synthesis_coordinates = std::move(f);
  s.analysis_coordinates = std::move(g);
  return s;
}

SamplingScheme build_truncated_shannon(double p, std::size_t half_width) {
  if (!(p > 0.0 && p <= 1.0) || half_width < 1) {
    throw ContractViolation("build_truncated_shannon: need p in (0, 1] and K >= 1");
  }
  const auto k_max = static_cast<long long>(half_width);
  SamplingScheme s;
  s.kind = SchemeKind::truncated_shannon;
  s.space_dim = 0;  // the band-limited space is infinite dimensional
  s.coefficient_weight = p;
  for (long long j = -k_max; j <= k_max; ++j) s.points.push_back({j, p});
  const auto big_n = static_cast<Eigen::Index>(s.points.size());
  s.value_table.resize(big_n, big_n);
  for (Eigen::Index j = 0; j < big_n; ++j) {
    for (Eigen::Index k = 0; k < big_n; ++k) {
      s.value_table(j, k) = sinc(std::numbers::pi * static_cast<double>(j - k) * p);
    }
  }
  return s;
}

Matrix sampling_bridge_matrix(const SamplingScheme& scheme, const IndexSet& erased,
                              const IndexSet& bridge) {
  check_positions(scheme, erased);
  check_positions(scheme, bridge);
  if (!erased.disjoint(bridge)) {
    throw InvalidSpec("sampling_bridge_matrix: erasure and bridge sets overlap");
  }
  return table_block(scheme.value_table, erased, bridge);
}

IndexSet choose_sampling_bridge(const SamplingScheme& scheme, const IndexSet& erased,
                                const Tolerance& tol) {
  check_positions(scheme, erased);
  const IndexSet rest = erased.complement();
  const std::size_t big_n = scheme.size();
  if (erased.empty() || rest.empty()) return IndexSet(big_n, {});
  const double scale = scheme.value_table.cwiseAbs().maxCoeff();
  const std::size_t target =
      numeric_rank(table_block(scheme.value_table, erased, rest), tol, scale);
  std::vector<std::size_t> chosen;
  std::size_t rank = 0;
  for (std::size_t j : rest) {
    if (rank == target) break;
    std::vector<std::size_t> trial = chosen;
    trial.push_back(j);
    const std::size_t r =
        numeric_rank(table_block(scheme.value_table, erased, IndexSet(big_n, trial)), tol, scale);
    if (r > rank) {
      chosen = std::move(trial);
      rank = r;
    }
  }
  return IndexSet(big_n, std::move(chosen));
}

Vector recover_samples(const SamplingScheme& scheme, const IndexSet& erased,
                       const IndexSet& bridge, const CoefficientMap& known_samples,
                       const Tolerance& tol) {
  check_positions(scheme, erased);
  check_positions(scheme, bridge);
  if (!erased.disjoint(bridge)) {
    throw InvalidSpec("recover_samples: erasure and bridge sets overlap");
  }
  if (erased.empty()) return Vector(0);

  const std::size_t big_n = scheme.size();
  Vector samples = Vector::Zero(static_cast<Eigen::Index>(big_n));
  for (std::size_t j = 0; j < big_n; ++j) {
    if (erased.contains(j)) continue;
    auto it = known_samples.find(j);
    if (it == known_samples.end()) {
      throw ContractViolation("missing sample at position " + std::to_string(j + 1));
    }
    samples(static_cast<Eigen::Index>(j)) = it->second;
  }

  const auto ls = solve_least_squares(table_block(scheme.value_table, erased, bridge),
                                      table_block(scheme.value_table, erased, erased), tol,
                                      LeastSquaresSolution::minimum_norm,
                                      scheme.value_table.cwiseAbs().maxCoeff());
  if (!ls.consistent) {
    bool redundant = false;
    if (scheme.analysis_coordinates) {
      redundant = minimal_redundancy(Frame(*scheme.analysis_coordinates), erased, tol);
    }
    throw NoRobustBridge("recover_samples: bridging equation is inconsistent (residual " +
                             std::to_string(ls.residual) + ")",
                         redundant);
  }

  // f_R(t_k) = weight * sum_{i outside L} f(t_i) f_i(t_k)
  const Vector partial = scheme.coefficient_weight *
                         (scheme.value_table.transpose() * samples);
  auto gather = [](const Vector& v, const IndexSet& set) {
    Vector out(static_cast<Eigen::Index>(set.size()));
    for (std::size_t k = 0; k < set.size(); ++k) {
      out(static_cast<Eigen::Index>(k)) = v(static_cast<Eigen::Index>(set[k]));
    }
    return out;
  };
  return ls.x.transpose() * (gather(samples, bridge) - gather(partial, bridge)) +
         gather(partial, erased);
}

DualFramePair induced_pair(const SamplingScheme& scheme, const Tolerance& tol) {
  if (!scheme.synthesis_coordinates || !scheme.analysis_coordinates) {
    throw ContractViolation("induced_pair: scheme has no finite coordinates");
  }
  return DualFramePair(Frame(*scheme.synthesis_coordinates),
                       Frame(*scheme.analysis_coordinates), tol);
}

Complex evaluate_trig(const SamplingScheme& scheme, const Vector& coords, double t) {
  if (static_cast<std::size_t>(coords.size()) != scheme.space_dim) {
    throw ContractViolation("evaluate_trig: coordinate count mismatch");
  }
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    const double m = static_cast<double>(scheme.first_frequency + i);
    acc += coords(i) * std::polar(1.0, 2.0 * std::numbers::pi * m * t);
  }
  return acc;
}

Vector sample_trig(const SamplingScheme& scheme, const Vector& coords) {
  if (scheme.kind != SchemeKind::trig_poly) {
    throw ContractViolation("sample_trig: not a trig scheme");
  }
  if (static_cast<std::size_t>(coords.size()) != scheme.space_dim) {
    throw ContractViolation("sample_trig: coordinate count mismatch");
  }
  const auto bn = static_cast<long long>(scheme.size());
  Vector out(bn);
  for (long long k = 0; k < bn; ++k) {
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < coords.size(); ++i) {
      acc += coords(i) * unit_root((scheme.first_frequency + i) * k, bn);
    }
    out(k) = acc;
  }
  return out;
}

}  // namespace nilbridge
