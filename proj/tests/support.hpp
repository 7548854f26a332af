// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures for the unit and property tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "nilbridge/fixtures.hpp"
#include "nilbridge/frames.hpp"
#include "nilbridge/spark_lab.hpp"

namespace testkit {

using namespace nilbridge;

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index k = 0;
    for (double v : r) m(i, k++) = v;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random subset of {0..n-1} of the given size.
inline IndexSet random_subset(Rng& rng, std::size_t n, std::size_t size) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(size);
  return IndexSet(n, all);
}

struct RandomInstance {
  DualFramePair pair;
  IndexSet erased;
};

/// Gaussian frame with a random (non-canonical) dual and an erasure set that
/// satisfies minimal redundancy for the dual.
inline RandomInstance random_instance(Rng& rng, std::size_t max_n = 6, std::size_t max_big_n = 12) {
  const std::size_t n = uniform(rng, 1, max_n);
  const std::size_t big_n = uniform(rng, n + 1, std::max(n + 1, max_big_n));
  const Field field = uniform(rng, 0, 1) == 0 ? Field::real : Field::complex;
  const Frame f = random_gaussian_frame(n, big_n, rng, field);
  const Frame g = random_dual(f, rng());
  DualFramePair pair(f, g);
  for (;;) {
    const IndexSet lam = random_subset(rng, big_n, uniform(rng, 1, big_n - n));
    if (minimal_redundancy(g, lam)) return {pair, lam};
  }
}

}  // namespace testkit
