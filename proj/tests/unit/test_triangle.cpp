#include <cmath>
#include <numbers>
#include <random>

#include "cluster_bifurc/errors.hpp"
#include "cluster_bifurc/systems.hpp"
#include "cluster_bifurc/triangle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cluster_bifurc;
using namespace cluster_bifurc::linalg;

namespace {

// Squared area from the factored Heron formula.
double heron_factored(double a, double b, double c) {
  const double s = 0.5 * (a + b + c);
  return s * (s - a) * (s - b) * (s - c);
}

}  // namespace

TEST_SUITE("triangle") {
  TEST_CASE("squared area") {
    CHECK(heron(3, 4, 5) == doctest::Approx(36.0));
    CHECK(heron(1, 1, 1) == doctest::Approx(3.0 / 16.0));
    CHECK(std::abs(heron(1, 1, 2)) < 1e-15);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int k = 0; k < 200; ++k) {
      const double a = u(rng), b = u(rng), c = u(rng);
      CHECK(heron(a, b, c) == doctest::Approx(heron_factored(a, b, c)).epsilon(1e-10).scale(1.0));
      CHECK(std::abs(heron(a, b, c) - heron(c, a, b)) < 1e-14 * std::max(1.0, std::abs(heron(a, b, c))));
    }
  }

  TEST_CASE("gradient and Hessian against finite differences") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.8, 1.6);
    for (int k = 0; k < 50; ++k) {
      const Vector e{u(rng), u(rng), u(rng)};
      auto g = [](const Vector& v) { return Vector{heron(v[0], v[1], v[2])}; };
      auto dg = [](const Vector& v) { return heron_gradient(v[0], v[1], v[2]); };
      const Matrix fd = testing::fd_jacobian(g, e);
      CHECK(testing::rel_error(fd.transpose(), Matrix{{dg(e)[0]}, {dg(e)[1]}, {dg(e)[2]}}) < 1e-6);
      CHECK(testing::rel_error(testing::fd_jacobian(dg, e), heron_hessian(e[0], e[1], e[2])) < 1e-6);
    }
  }

  TEST_CASE("residual Jacobian against finite differences") {
    for (const auto& spec : testing::sample_potentials()) {
      const TriangleSystem sys(spec);
      for (double area : {0.3, 0.6, 2.0}) {
        Vector x = sys.trivial(area);
        x[1] *= 1.05;
        x[3] *= 0.97;
        x[0] *= 1.1;
        const Matrix fd = testing::fd_jacobian([&](const Vector& y) { return sys.residual(y, area); }, x);
        CHECK(testing::rel_error(sys.jacobian(x, area), fd) < 1e-6);
      }
    }
  }

  TEST_CASE("trivial state solves the system") {
    for (const auto& spec : testing::sample_potentials()) {
      for (double area : {0.2, 0.5877, 1.0, 10.0}) {
        const TriState s = trivial3(spec, area);
        CHECK(s.a == doctest::Approx(2.0 * std::sqrt(area) / std::pow(3.0, 0.25)));
        CHECK(s.a == s.b);
        CHECK(s.b == s.c);
        const Vector r = residual3(spec, s, area);
        CHECK(norm_inf(r) < 1e-10 * std::max(1.0, std::abs(eval_potential(spec, s.a, 1)) + area * area));
      }
    }
  }

  TEST_CASE("trivial spectrum for Hooke springs") {
    const PotentialSpec hooke{PolynomialSpring{1, 0}};
    for (double area : {0.1, 1.0, 7.0}) {
      const auto sp = trivial_spectrum3(hooke, area);
      CHECK(sp.alpha == doctest::Approx(2.0));
      CHECK(sp.beta == doctest::Approx(-2.0));
      CHECK(sp.mu == doctest::Approx(4.0));
      CHECK(mu3(hooke, area) == doctest::Approx(4.0));
    }
  }

  TEST_CASE("trivial spectrum matches the bordered Jacobian") {
    for (const auto& spec : testing::sample_potentials()) {
      for (double area : {0.3, 0.6, 3.0}) {
        const TriState s = trivial3(spec, area);
        const Matrix j = jacobian3(spec, s);
        const auto sp = trivial_spectrum3(spec, area);
        CHECK(sp.mu == doctest::Approx(mu3(spec, area)).epsilon(1e-9));
        CHECK(std::abs(sp.mu - stability_margin(spec, s.a, 3)) < 1e-9 * std::max(1.0, std::abs(sp.mu)));
        // Kernel-candidate eigenvectors of the double eigenvalue.
        for (const Vector& v : {Vector{0, -1, 1, 0}, Vector{0, -1, 0, 1}})
          CHECK(norm_inf(j * v - sp.mu * v) < 1e-9 * std::max(1.0, max_abs(j)));
        const auto eig = sym_eigen(j);
        std::vector<double> want{sp.mu, sp.mu, sp.simple_pair[0], sp.simple_pair[1]};
        std::sort(want.begin(), want.end());
        for (std::size_t i = 0; i < 4; ++i)
          CHECK(std::abs(eig.values[i] - want[i]) < 1e-9 * std::max(1.0, max_abs(j)));
        CHECK(sp.simple_pair[0] < 0.0);
        CHECK(sp.simple_pair[1] > 0.0);
      }
    }
  }

  TEST_CASE("trivial classification follows the sign of mu") {
    for (const auto& spec : testing::sample_potentials()) {
      for (double area : {0.2, 0.5, 0.7, 2.0, 20.0}) {
        const double mu = mu3(spec, area);
        if (std::abs(mu) < 1e-6) continue;
        const auto cls = classify_point3(spec, trivial3(spec, area), area);
        CHECK(cls.stability == (mu > 0 ? Stability::stable : Stability::unstable));
        CHECK(cls.shape == "equilateral");
      }
    }
  }

  TEST_CASE("stability boundaries") {
    const auto lj = stability_boundaries3(PotentialSpec(LennardJones{}), 0.1, 10.0, 400);
    REQUIRE(lj.size() == 1);
    CHECK(lj[0].parameter == doctest::Approx(std::sqrt(3.0) / 4.0 * std::pow(2.5, 1.0 / 3.0)).epsilon(1e-9));
    CHECK(lj[0].direction == -1);
    CHECK(lj[0].kernel_dim == 2);

    const auto bk = stability_boundaries3(PotentialSpec(Buckingham{1, 1, 1, 4}), 0.1, 1000.0, 2000);
    REQUIRE(bk.size() == 2);
    CHECK(std::abs(bk[0].parameter - 5.3154) < 1e-2);
    CHECK(std::abs(bk[1].parameter - 74.2253) < 1e-2);
    CHECK(bk[0].direction == +1);
    CHECK(bk[1].direction == -1);

    const auto soft = stability_boundaries3(PotentialSpec(PolynomialSpring{1, -0.1}), 0.1, 100.0, 400);
    REQUIRE(soft.size() == 1);
    CHECK(soft[0].parameter == doctest::Approx(2.88675).epsilon(1e-5));

    CHECK(stability_boundaries3(PotentialSpec(PolynomialSpring{1, 0}), 0.1, 100.0, 400).empty());
    CHECK_THROWS_AS(stability_boundaries3(PotentialSpec(LennardJones{}), 2.0, 1.0, 400), UsageError);
  }

  TEST_CASE("shape labels and domain errors") {
    CHECK(triangle_shape(1, 1, 1) == "equilateral");
    CHECK(triangle_shape(1, 1, 1.3) == "isosceles(a=b)");
    CHECK(triangle_shape(1, 1.3, 1) == "isosceles(a=c)");
    CHECK(triangle_shape(1.3, 1, 1) == "isosceles(b=c)");
    CHECK(triangle_shape(1, 1.2, 1.4) == "scalene");
    const PotentialSpec lj{LennardJones{}};
    CHECK_THROWS_AS(residual3(lj, TriState{0, -1, 1, 1}, 0.4), DomainError);
    CHECK(energy3(lj, TriState{0, 1, 1, 1}) == doctest::Approx(-3.0));
  }
}
