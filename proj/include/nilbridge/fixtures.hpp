// SPDX-License-Identifier: Apache-2.0
//
// Reference frames and random frame generators.
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "nilbridge/frames.hpp"

namespace nilbridge {

using Rng = std::mt19937_64;

/// Generator seeded from (seed, stream) so that per-trial streams do not
/// depend on scheduling.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// F = {(1,1), (-1,1), (-1,-1), (1,-1)}, G = {(1,0), (1/2,1/2), (1/2,-1/2), (1,0)}.
DualFramePair paper_2d_pair();

/// F = {e1, -e1, e1, e2}, G = {e2, e2, e1, e2}. E for erasure {e1} is nilpotent.
DualFramePair nilpotent_pair();

/// Three equiangular vectors in R^2 scaled to form a Parseval frame.
Frame mercedes_benz();

/// (F, G) -> (F F F, G -G G). Erasing the first block leaves R = 0.
DualFramePair triple_pair(const DualFramePair& base);

enum class Field { real, complex };

/// Entries i.i.d. standard Gaussian (real and imaginary parts independent).
Frame random_gaussian_frame(std::size_t n, std::size_t big_n, Rng& rng,
                            Field field = Field::real);

/// Resamples Gaussian frames until full spark; throws Error after
/// `max_retries` attempts.
Frame random_full_spark_frame(std::size_t n, std::size_t big_n, Rng& rng,
                              Field field = Field::real,
                              const Tolerance& tol = {},
                              std::size_t max_retries = 100);

/// S^{-1/2} applied to a Gaussian frame.
Frame random_parseval_frame(std::size_t n, std::size_t big_n, Rng& rng,
                            Field field = Field::real);

/// Random n-vector with i.i.d. Gaussian entries.
Vector random_vector(std::size_t n, Rng& rng, Field field = Field::real);

}  // namespace nilbridge
