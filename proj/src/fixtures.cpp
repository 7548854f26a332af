// SPDX-License-Identifier: Apache-2.0
#include "nilbridge/fixtures.hpp"

#include <cmath>
#include <numbers>

#include "nilbridge/errors.hpp"

namespace nilbridge {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

namespace {

Matrix real_table(std::initializer_list<std::initializer_list<double>> cols) {
  const auto n = static_cast<Eigen::Index>(cols.begin()->size());
  Matrix m(n, static_cast<Eigen::Index>(cols.size()));
  Eigen::Index j = 0;
  for (const auto& c : cols) {
    Eigen::Index i = 0;
    for (double v : c) m(i++, j) = v;
    ++j;
  }
  return m;
}

Complex gaussian(Rng& rng, Field field) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  const double im = field == Field::complex ? nd(rng) : 0.0;
  return {re, im};
}

}  // namespace

DualFramePair paper_2d_pair() {
  Frame f(real_table({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}));
  Frame g(real_table({{1, 0}, {0.5, 0.5}, {0.5, -0.5}, {1, 0}}));
  return DualFramePair(std::move(f), std::move(g));
}

DualFramePair nilpotent_pair() {
  Frame f(real_table({{1, 0}, {-1, 0}, {1, 0}, {0, 1}}));
  Frame g(real_table({{0, 1}, {0, 1}, {1, 0}, {0, 1}}));
  return DualFramePair(std::move(f), std::move(g));
}

Frame mercedes_benz() {
  const double scale = std::sqrt(2.0 / 3.0);
  Matrix m(2, 3);
  for (int k = 0; k < 3; ++k) {
    const double angle = std::numbers::pi / 2 + 2 * std::numbers::pi * k / 3;
    m(0, k) = scale * std::cos(angle);
    m(1, k) = scale * std::sin(angle);
  }
  return Frame(std::move(m));
}

DualFramePair triple_pair(const DualFramePair& base) {
  const Matrix& f = base.synthesis().matrix();
  const Matrix& g = base.analysis().matrix();
  Matrix f3(f.rows(), 3 * f.cols());
  Matrix g3(g.rows(), 3 * g.cols());
  f3 << f, f, f;
  g3 << g, -g, g;
  return DualFramePair(Frame(std::move(f3)), Frame(std::move(g3)));
}

Vector random_vector(std::size_t n, Rng& rng, Field field) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gaussian(rng, field);
  return v;
}

Frame random_gaussian_frame(std::size_t n, std::size_t big_n, Rng& rng, Field field) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(big_n));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = gaussian(rng, field);
  }
  return Frame(std::move(m));
}

Frame random_full_spark_frame(std::size_t n, std::size_t big_n, Rng& rng, Field field,
                              const Tolerance& tol, std::size_t max_retries) {
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    Frame f = random_gaussian_frame(n, big_n, rng, field);
    if (spark(f, tol) == std::min(n, big_n)) return f;
  }
  throw Error("random_full_spark_frame: no full-spark sample after retries");
}

Frame random_parseval_frame(std::size_t n, std::size_t big_n, Rng& rng, Field field) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Frame a = random_gaussian_frame(n, big_n, rng, field);
    if (!frame_bounds(a).is_frame) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(frame_operator(a));
    return Frame(eig.operatorInverseSqrt() * a.matrix());
  }
  throw Error("random_parseval_frame: Gaussian sample never spanned the space");
}

}  // namespace nilbridge
