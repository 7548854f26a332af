// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nilbridge {

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// Visits every k-subset of `pool` in lexicographic order of positions. The
/// visitor returns false to stop early. Returns false iff it was stopped.
template <class Visitor>
bool for_each_subset_of(const std::vector<std::size_t>& pool, std::size_t k,
                        Visitor&& visit) {
  const std::size_t n = pool.size();
  if (k > n) return true;
  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) pos[i] = i;
  std::vector<std::size_t> subset(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = pool[pos[i]];
    if (!visit(subset)) return false;
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
}

/// Same as for_each_subset_of with pool {0, ..., n-1}.
template <class Visitor>
bool for_each_subset(std::size_t n, std::size_t k, Visitor&& visit) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  return for_each_subset_of(pool, k, visit);
}

/// All k-subsets of {0..n-1}, lexicographic.
std::vector<std::vector<std::size_t>> all_subsets(std::size_t n, std::size_t k);

}  // namespace nilbridge
