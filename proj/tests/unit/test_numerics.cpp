// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "doctest.h"

#include "../oracles.hpp"
#include "../support.hpp"
#include "nilbridge/errors.hpp"
#include "nilbridge/numerics.hpp"

using namespace nilbridge;
using testkit::mat;

namespace {

std::vector<double> sorted_abs(const std::vector<Complex>& zs) {
  std::vector<double> out;
  for (auto z : zs) out.push_back(std::abs(z));
  std::sort(out.begin(), out.end());
  return out;
}

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> d;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = Complex(d(rng), d(rng));
  return m;
}

}  // namespace

TEST_CASE("tolerance validates its range") {
  CHECK_NOTHROW(Tolerance(1e-10, 1e-9));
  CHECK_THROWS_AS(Tolerance(0.0, 1e-9), ContractViolation);
  CHECK_THROWS_AS(Tolerance(1e-10, 1.0), ContractViolation);
  CHECK_THROWS_AS(Tolerance(-1.0, 0.5), ContractViolation);
}

TEST_CASE("least squares: identity") {
  const Matrix id = Matrix::Identity(2, 2);
  const auto r = solve_least_squares(id, id);
  CHECK(r.consistent);
  CHECK(r.residual == doctest::Approx(0.0));
  CHECK((r.x - id).norm() < 1e-15);
}

TEST_CASE("least squares: rank-one bridge system") {
  const Matrix a = mat({{-1, -1}, {1, 1}});
  const Matrix b = mat({{0, -1}, {0, 1}});
  const auto mn = solve_least_squares(a, b);
  CHECK(mn.consistent);
  CHECK((mn.x - mat({{0, 0.5}, {0, 0.5}})).norm() < 1e-14);
  CHECK((a * mn.x - b).norm() < 1e-14);

  const auto basic = solve_least_squares(a, b, {}, LeastSquaresSolution::basic);
  CHECK(basic.consistent);
  CHECK((a * basic.x - b).norm() < 1e-14);
  // The first column of A is the basis; the free variable is zero.
  CHECK((basic.x - mat({{0, 1}, {0, 0}})).norm() < 1e-14);
}

TEST_CASE("least squares: inconsistent scalar system") {
  const auto r = solve_least_squares(mat({{0}}), mat({{1}}));
  CHECK_FALSE(r.consistent);
  CHECK(r.residual == doctest::Approx(1.0));
}

TEST_CASE("least squares: zero-column system and shape errors") {
  const auto r = solve_least_squares(Matrix(2, 0), Matrix::Zero(2, 1));
  CHECK(r.consistent);
  CHECK(r.x.rows() == 0);
  CHECK_THROWS_AS(solve_least_squares(Matrix::Identity(2, 2), Matrix::Identity(3, 3)),
                  ContractViolation);
}

TEST_CASE("numeric rank examples") {
  CHECK(numeric_rank(Matrix::Identity(3, 3)) == 3);
  CHECK(numeric_rank(mat({{1, 1}, {1, 1}})) == 1);
  CHECK(numeric_rank(mat({{-1, -1}, {1, 1}})) == 1);
  CHECK(numeric_rank(Matrix::Zero(2, 3)) == 0);
  CHECK_THROWS_AS(numeric_rank(Matrix(0, 0)), ContractViolation);
}

TEST_CASE("non-finite input is rejected") {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::nan("");
  CHECK_THROWS_AS(numeric_rank(m), ContractViolation);
  m(0, 1) = INFINITY;
  CHECK_THROWS_AS(invert(m), ContractViolation);
}

TEST_CASE("eigenvalue examples") {
  auto ev = sorted_abs(eigenvalues(Matrix::Identity(2, 2)));
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(1.0));

  const auto idem = eigenvalues(mat({{1, 0}, {1, 0}}));
  ev = sorted_abs(idem);
  CHECK(ev[0] < 1e-14);
  CHECK(ev[1] == doctest::Approx(1.0));

  for (double v : sorted_abs(eigenvalues(mat({{0, 1}, {0, 0}})))) CHECK(v < 1e-14);

  CHECK_THROWS_AS(eigenvalues(Matrix::Identity(3, 3), 2), UnsupportedSize);
  CHECK_THROWS_AS(eigenvalues(Matrix::Zero(2, 3)), ContractViolation);
}

TEST_CASE("inverse examples") {
  CHECK((invert(Matrix::Identity(2, 2)) - Matrix::Identity(2, 2)).norm() < 1e-15);
  CHECK((invert(mat({{1}})) - mat({{1}})).norm() < 1e-15);
  try {
    invert(mat({{0}}));
    FAIL("expected SingularMatrix");
  } catch (const SingularMatrix& e) {
    CHECK(e.rank() == 0);
  }
  CHECK_THROWS_AS(invert(mat({{1, 1}, {1, 1}})), SingularMatrix);
}

TEST_CASE("norms and condition numbers") {
  CHECK(operator_norm(mat({{3, 0}, {0, 4}})) == doctest::Approx(4.0));
  CHECK(condition_number(mat({{3, 0}, {0, 4}})) == doctest::Approx(4.0 / 3.0));
  CHECK(std::isinf(condition_number(mat({{1, 1}, {1, 1}}))));
  CHECK(operator_norm(Matrix(0, 0)) == 0.0);
}

TEST_CASE("inner product is conjugate-linear in the second slot") {
  Vector x(1), y(1);
  x << Complex(0, 1);
  y << Complex(1, 0);
  CHECK(std::abs(inner(x, y) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(inner(y, x) - Complex(0, -1)) < 1e-15);
}

TEST_CASE("property: invert(A) A = I for well-conditioned A") {
  Rng rng = make_rng(101);
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<Eigen::Index>(testkit::uniform(rng, 1, 8));
    Matrix a = random_matrix(rng, n, n) + 4.0 * static_cast<double>(n) * Matrix::Identity(n, n);
    const Matrix x = invert(a);
    CHECK((x * a - Matrix::Identity(n, n)).norm() <= 1e-10 * std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("property: least squares is exact on the column space") {
  Rng rng = make_rng(102);
  for (int t = 0; t < 100; ++t) {
    const auto r = static_cast<Eigen::Index>(testkit::uniform(rng, 1, 7));
    const auto c = static_cast<Eigen::Index>(testkit::uniform(rng, 1, 7));
    const auto k = static_cast<Eigen::Index>(testkit::uniform(rng, 1, 3));
    const Matrix a = random_matrix(rng, r, c);
    const Matrix b = a * random_matrix(rng, c, k);
    for (auto kind : {LeastSquaresSolution::minimum_norm, LeastSquaresSolution::basic}) {
      const auto res = solve_least_squares(a, b, {}, kind);
      CHECK(res.consistent);
      CHECK(res.residual <= 1e-12 * (1.0 + b.norm()));
    }
  }
}

TEST_CASE("property: numeric rank is permutation invariant") {
  Rng rng = make_rng(103);
  for (int t = 0; t < 100; ++t) {
    const auto r = static_cast<Eigen::Index>(testkit::uniform(rng, 1, 6));
    const auto c = static_cast<Eigen::Index>(testkit::uniform(rng, 1, 6));
    const auto k = static_cast<Eigen::Index>(testkit::uniform(rng, 1, std::min(r, c)));
    const Matrix a = random_matrix(rng, r, k) * random_matrix(rng, k, c);
    Eigen::PermutationMatrix<Eigen::Dynamic> pr(r), pc(c);
    pr.setIdentity();
    pc.setIdentity();
    std::shuffle(pr.indices().data(), pr.indices().data() + r, rng);
    std::shuffle(pc.indices().data(), pc.indices().data() + c, rng);
    const Matrix b = pr * a * pc;
    CHECK(numeric_rank(a) == static_cast<std::size_t>(k));
    CHECK(numeric_rank(b) == numeric_rank(a));
    CHECK(numeric_rank(a) == oracle::lu_rank(a));
  }
}

TEST_CASE("property: eigenvalues of constructed nilpotent matrices vanish") {
  Rng rng = make_rng(104);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<Eigen::Index>(testkit::uniform(rng, 1, 8));
    Matrix strict = random_matrix(rng, n, n).triangularView<Eigen::StrictlyUpper>();
    for (double v : sorted_abs(eigenvalues(strict))) CHECK(v <= 1e-10);
    // u w^* with w orthogonal to u squares to zero. Its zero eigenvalue sits in
    // a 2x2 Jordan block, so rounding moves it by O(sqrt(eps) ||N||).
    Vector u = random_matrix(rng, n, 1);
    Vector w = random_matrix(rng, n, 1);
    w -= (u.dot(w) / u.squaredNorm()) * u;
    const Matrix rank_one = u * w.adjoint();
    for (double v : sorted_abs(eigenvalues(rank_one))) {
      CHECK(v <= 4.0 * std::sqrt(eps) * std::max(1.0, rank_one.norm()));
    }
  }
}

TEST_CASE("scaled rank ignores cancellation noise") {
  const Matrix noise = mat({{1e-17}});
  CHECK(numeric_rank(noise) == 1);
  CHECK(numeric_rank(noise, {}, 1.0) == 0);
  CHECK(numeric_rank(mat({{0.5}}), {}, 1.0) == 1);
  CHECK(numeric_rank(Matrix(0, 0), {}, 1.0) == 0);

  const auto r = solve_least_squares(noise, mat({{1}}), {}, LeastSquaresSolution::minimum_norm, 1.0);
  CHECK_FALSE(r.consistent);
  CHECK(r.x.norm() == 0.0);
  const auto b = solve_least_squares(noise, mat({{1}}), {}, LeastSquaresSolution::basic, 1.0);
  CHECK(b.x.norm() == 0.0);
}
