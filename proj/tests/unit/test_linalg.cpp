#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "cluster_bifurc/errors.hpp"
#include "cluster_bifurc/linalg.hpp"
#include "doctest.h"

using namespace cluster_bifurc;
using namespace cluster_bifurc::linalg;

namespace {

Matrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

// Roots of the characteristic cubic by the trigonometric formula.
std::array<double, 3> cubic_eigenvalues(const Matrix& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) + (a(2, 2) - q) * (a(2, 2) - q) + 2 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Matrix b = (1.0 / p) * (a - q * Matrix::identity(3));
  const double detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                      b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2 * p * std::cos(phi);
  const double e3 = q + 2 * p * std::cos(phi + 2 * std::numbers::pi / 3);
  const double e2 = 3 * q - e1 - e3;
  std::array<double, 3> out{e1, e2, e3};
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("eigenvalues of simple matrices") {
    const auto id = sym_eigen(Matrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i) CHECK(id.values[i] == doctest::Approx(1.0));
    const auto d = sym_eigen(Matrix{{2, 0}, {0, -1}});
    CHECK(d.values[0] == doctest::Approx(-1.0));
    CHECK(d.values[1] == doctest::Approx(2.0));
    CHECK(negative_count(d) == 1);
  }

  TEST_CASE("eigenvalues agree with the characteristic polynomial") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      const Matrix a = random_symmetric(rng, 3);
      const auto eig = sym_eigen(a);
      const auto want = cubic_eigenvalues(a);
      for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(eig.values[i] - want[i]) < 1e-10);
      // 2x2 leading block via the quadratic formula.
      Matrix b{{a(0, 0), a(0, 1)}, {a(1, 0), a(1, 1)}};
      const double tr = b(0, 0) + b(1, 1), det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
      const double disc = std::sqrt(tr * tr / 4 - det);
      const auto e2 = sym_eigen(b);
      CHECK(std::abs(e2.values[0] - (tr / 2 - disc)) < 1e-10);
      CHECK(std::abs(e2.values[1] - (tr / 2 + disc)) < 1e-10);
    }
  }

  TEST_CASE("eigenvectors are orthonormal and reproduce the matrix") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {4u, 7u, 8u}) {
      const Matrix a = random_symmetric(rng, n);
      const auto eig = sym_eigen(a);
      const Matrix v = eig.vectors;
      CHECK(max_abs(v.transpose() * v - Matrix::identity(n)) < 1e-12);
      CHECK(max_abs(v * Matrix::diagonal(eig.values) * v.transpose() - a) < 1e-11);
      for (std::size_t i = 1; i < n; ++i) CHECK(eig.values[i - 1] <= eig.values[i]);
    }
  }

  TEST_CASE("asymmetric input is refused") { CHECK_THROWS_AS(sym_eigen(Matrix{{1, 2}, {0, 1}}), UsageError); }

  TEST_CASE("LU solve and determinant sign") {
    const auto s = solve_bordered(Matrix::identity(3), Vector{1, 0, 0});
    CHECK(s.x == Vector{1, 0, 0});
    CHECK(s.det_sign == 1);
    CHECK(solve_bordered(Matrix{{1, 0}, {0, -1}}, Vector{3, 4}).det_sign == -1);
    CHECK(determinant(Matrix{{0, 1}, {1, 0}}) == doctest::Approx(-1.0));
    CHECK(determinant(Matrix{{0, 2, 0}, {3, 0, 0}, {0, 0, 5}}) == doctest::Approx(-30.0));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
      Matrix a(n, n);
      Vector b(n);
      for (std::size_t i = 0; i < n; ++i) {
        b[i] = u(rng);
        for (std::size_t j = 0; j < n; ++j) a(i, j) = u(rng) + (i == j ? 4.0 : 0.0);
      }
      const Vector x = lu_factor(a).solve(b);
      CHECK(norm(a * x - b) < 1e-12 * norm(b));
    }
  }

  TEST_CASE("singular systems raise with the pivot index") {
    try {
      lu_factor(Matrix{{1, 2}, {2, 4}});
      FAIL("expected SingularSystemError");
    } catch (const SingularSystemError& e) {
      CHECK(e.pivot_index() == 1);
    }
  }

  TEST_CASE("bordered solve equals the assembled system") {
    const Matrix j{{2, 1}, {1, 3}};
    const Border border{Vector{1, 0}, Vector{0, 1}, 0.5, 2.0};
    const auto s = solve_bordered(j, Vector{1, 1}, border);
    const Matrix big{{2, 1, 1}, {1, 3, 0}, {0, 1, 0.5}};
    CHECK(norm(big * s.x - Vector{1, 1, 2}) < 1e-14);
  }

  TEST_CASE("tangent basis is orthonormal and orthogonal to the normal") {
    const Vector n{0.3, -1.2, 2.0};
    const Matrix t = tangent_basis(n);
    CHECK(t.rows() == 3);
    CHECK(t.cols() == 2);
    CHECK(max_abs(t.transpose() * t - Matrix::identity(2)) < 1e-14);
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(dot(t.col(k), n)) < 1e-14);
    CHECK(tangent_basis(n) == t);
    CHECK_THROWS_AS(tangent_basis(Vector{0, 0, 0}), DegenerateConstraintError);
  }

  TEST_CASE("null vector of a wide matrix") {
    const Matrix a{{1, 0, 1}, {0, 1, 1}};
    const Vector v = null_vector(a);
    CHECK(norm(a * v) < 1e-14);
    CHECK(norm(v) == doctest::Approx(1.0));
  }

  TEST_CASE("bisection and log grid") {
    const double r = bisect([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-14);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    const auto g = log_grid(0.1, 1000.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == doctest::Approx(0.1));
    CHECK(g[2] == doctest::Approx(10.0));
    CHECK(g.back() == doctest::Approx(1000.0));
  }
}
