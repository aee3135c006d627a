#include <cmath>

#include "cluster_bifurc/continuation.hpp"
#include "cluster_bifurc/diagram.hpp"
#include "cluster_bifurc/errors.hpp"
#include "cluster_bifurc/symmetry.hpp"
#include "cluster_bifurc/systems.hpp"
#include "doctest.h"

using namespace cluster_bifurc;
using namespace cluster_bifurc::linalg;

namespace {

Vector up_direction(std::size_t dim) {
  Vector d(dim + 1);
  d[dim] = 1.0;
  return d;
}

const Diagram& lj_triangle() {
  static const Diagram d =
      build_diagram(ProblemKind::triangle, PotentialSpec(LennardJones{}), Window{0.3, 0.9}, ContinuationSettings{});
  return d;
}

const Diagram& buckingham_triangle() {
  static const Diagram d = build_diagram(ProblemKind::triangle, PotentialSpec(Buckingham{1, 1, 1, 4}),
                                         Window{1.0, 100.0}, ContinuationSettings{});
  return d;
}

std::vector<const BifurcationEvent*> events_of(const Diagram& d, EventKind kind) {
  std::vector<const BifurcationEvent*> out;
  for (const auto& ev : d.events)
    if (ev.kind == kind) out.push_back(&ev);
  return out;
}

// Energy of the isosceles (b = c) critical state with a > b at area A, from
// the one-dimensional reduction a(b) of the area constraint, minus the energy
// of the equilateral state. Golden-section search on b.
double isosceles_energy_gap(double area) {
  auto phi = [](double r) { return std::pow(r, -12) - 2 * std::pow(r, -6); };
  auto energy = [&](double b) {
    const double a = std::sqrt((4 * b * b - std::sqrt(16 * std::pow(b, 4) - 64 * area * area)) / 2);
    return phi(a) + 2 * phi(b);
  };
  // Bracket of the stable minimum for A in (0.5855, 0.5877).
  double lo = 1.125, hi = 1.1445;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int i = 0; i < 200; ++i) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (energy(m1) < energy(m2))
      hi = m2;
    else
      lo = m1;
  }
  const double edge = 2 * std::sqrt(area) / std::pow(3.0, 0.25);
  return energy(0.5 * (lo + hi)) - 3 * phi(edge);
}

}  // namespace

TEST_SUITE("continuation") {
  TEST_CASE("settings validation") {
    ContinuationSettings s;
    CHECK_NOTHROW(s.validate());
    s.h_min = 1.0;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = {};
    s.h_max = 1e-3;
    CHECK_THROWS_AS(s.validate(), UsageError);
  }

  TEST_CASE("Newton returns to the trivial state at fixed parameter") {
    const TriangleSystem sys(PotentialSpec(LennardJones{}));
    const Matrix id = Matrix::identity(4);
    Vector x = sys.trivial(0.7);
    const Vector exact = x;
    x[1] *= 1.01;
    x[2] *= 0.995;
    x[0] *= 0.9;
    const Corrected c = newton_correct(sys, id, x, 0.7, std::nullopt, ContinuationSettings{});
    CHECK(c.p == 0.7);
    CHECK(norm_inf(c.x - exact) < 1e-9);
    CHECK(residual_norm(sys, c.x, c.p) < 1e-10);
    CHECK(c.iterations <= 8);
  }

  TEST_CASE("Newton failures are reported") {
    const TriangleSystem sys(PotentialSpec(LennardJones{}));
    ContinuationSettings s;
    s.newton_max_iters = 1;
    Vector x = sys.trivial(0.7);
    x[1] *= 1.2;
    CHECK_THROWS_AS(newton_correct(sys, Matrix::identity(4), x, 0.7, std::nullopt, s), CorrectorFailure);
    CHECK_THROWS_AS(newton_correct(sys, Matrix::identity(4), Vector{0, -1, 1, 1}, 0.7, std::nullopt, {}), DomainExit);
  }

  TEST_CASE("tangent is a unit null vector") {
    const TriangleSystem sys(PotentialSpec(LennardJones{}));
    const Reduction full = full_symmetry_reduction(triangle_group());
    const Vector x = sys.trivial(0.7);
    const Vector t = branch_tangent(sys, full.projection, x, 0.7, up_direction(4));
    CHECK(norm(t) == doctest::Approx(1.0));
    CHECK(t[4] > 0.0);
    // Finite-difference direction of the trivial branch.
    const double h = 1e-6;
    Vector fd = sys.trivial(0.7 + h) - sys.trivial(0.7 - h);
    Vector fdy(5);
    for (std::size_t i = 0; i < 4; ++i) fdy[i] = fd[i];
    fdy[4] = 2 * h;
    CHECK(norm(t - normalized(fdy)) < 1e-6);
  }

  TEST_CASE("trivial trace of the Lennard-Jones triangle") {
    const TriangleSystem sys(PotentialSpec(LennardJones{}));
    const Reduction full = full_symmetry_reduction(triangle_group());
    const ContinuationSettings s;
    const TraceResult tr =
        trace_branch(sys, full.projection, sys.trivial(0.3), 0.3, up_direction(4), s, Window{0.3, 0.9}, EventKind::primary);
    CHECK(tr.stop_reason == "window");
    CHECK(tr.branch.points.back().parameter == doctest::Approx(0.9));
    int flips = 0;
    for (std::size_t k = 1; k < tr.branch.points.size(); ++k) {
      flips += tr.branch.points[k].stability != tr.branch.points[k - 1].stability;
      CHECK(tr.branch.points[k].s > tr.branch.points[k - 1].s);
    }
    CHECK(flips == 1);
    for (const auto& pt : tr.branch.points) CHECK(residual_norm(sys, pt.x, pt.parameter) < s.newton_tol * 10);
    REQUIRE(tr.events.size() == 1);
    CHECK(tr.events[0].kind == EventKind::primary);
    CHECK(std::abs(tr.events[0].parameter - std::sqrt(3.0) / 4.0 * std::pow(2.5, 1.0 / 3.0)) < 1e-6);
    CHECK(tr.events[0].kernel_dim == 2);
  }

  TEST_CASE("Hooke springs have no events") {
    for (ProblemKind kind : {ProblemKind::triangle, ProblemKind::tetrahedron}) {
      const Window w = kind == ProblemKind::triangle ? Window{0.1, 100.0} : Window{0.1, 50.0};
      const Diagram d = build_diagram(kind, PotentialSpec(PolynomialSpring{1, 0}), w, ContinuationSettings{});
      CHECK(d.events.empty());
      REQUIRE(d.branches.size() == 1);
      for (const auto& pt : d.branches[0].points) CHECK(pt.stability == Stability::stable);
    }
  }

  TEST_CASE("transcritical seeds lie on both sides") {
    const TriangleSystem sys(PotentialSpec(LennardJones{}));
    const auto& d = lj_triangle();
    const auto prim = events_of(d, EventKind::primary);
    REQUIRE(prim.size() == 1);
    const Vector v{0, -2, 1, 1};
    const SwitchResult sw =
        branch_switch(sys, *prim[0], v, triangle_group(), [&](double p) { return sys.trivial(p); }, ContinuationSettings{});
    REQUIRE(sw.ok);
    CHECK_FALSE(sw.data.pitchfork);
    REQUIRE(sw.seeds.size() == 2);
    const double d0 = dot(sw.seeds[0].x - prim[0]->x, v);
    const double d1 = dot(sw.seeds[1].x - prim[0]->x, v);
    CHECK(d0 * d1 < 0.0);
    CHECK((sw.seeds[0].p - prim[0]->parameter) * (sw.seeds[1].p - prim[0]->parameter) < 0.0);
    CHECK(std::abs(sw.data.b0) > 1e-8);
    CHECK(sw.data.m == doctest::Approx(-2 * sw.data.b0 / sw.data.a0));
    for (const auto& seed : sw.seeds) CHECK(residual_norm(sys, seed.x, seed.p) < 1e-9);
  }

  TEST_CASE("Lennard-Jones triangle diagram") {
    const auto& d = lj_triangle();
    const auto prim = events_of(d, EventKind::primary);
    REQUIRE(prim.size() == 1);
    CHECK(std::abs(prim[0]->parameter - 0.5877) < 1e-4);
    auto secondaries = events_of(d, EventKind::secondary);
    bool near_0625 = false, near_0667 = false;
    for (const auto* ev : secondaries) {
      near_0625 |= std::abs(ev->parameter - 0.6251) < 5e-3;
      near_0667 |= std::abs(ev->parameter - 0.6670) < 5e-3;
    }
    CHECK(near_0625);
    CHECK(near_0667);
    int isosceles_traced = 0;
    for (const auto& b : d.branches) isosceles_traced += b.kind == "primary";
    CHECK(isosceles_traced == 1);
    CHECK(d.diagnostics.empty());
  }

  TEST_CASE("every point solves the system") {
    for (const Diagram* d : {&lj_triangle(), &buckingham_triangle()}) {
      const auto sys = make_system(d->problem, d->potential);
      for (const auto& b : d->branches)
        for (const auto& pt : b.points) CHECK(residual_norm(*sys, pt.x, pt.parameter) < 1e-8);
    }
  }

  TEST_CASE("stability changes only across events") {
    for (const Diagram* d : {&lj_triangle(), &buckingham_triangle()}) {
      for (const auto& b : d->branches) {
        const int source = b.image_of >= 0 ? b.image_of : b.id;
        for (std::size_t k = 1; k < b.points.size(); ++k) {
          if (b.points[k].stability == b.points[k - 1].stability) continue;
          bool explained = false;
          // A segment ending on a bifurcation point, e.g. where a switched
          // branch starts, or its group image.
          for (const auto& ev : d->events)
            for (const auto* pt : {&b.points[k - 1], &b.points[k]})
              explained |= std::abs(pt->parameter - ev.parameter) < 1e-9 && norm(pt->x - ev.x) < 1e-6;
          const auto& group = group_for(d->problem);
          if (b.parent_event >= 0)
            for (const auto& g : group.elements())
              for (const auto* pt : {&b.points[k - 1], &b.points[k]}) {
                const auto& origin = d->events.at(static_cast<std::size_t>(b.parent_event));
                explained |= std::abs(pt->parameter - origin.parameter) < 1e-9 && norm(pt->x - g.apply(origin.x)) < 1e-6;
              }
          for (const auto& ev : d->events) {
            if (ev.source_branch != source) continue;
            // A marginal point is the event itself, up to localization accuracy.
            for (const auto* pt : {&b.points[k - 1], &b.points[k]})
              explained |= pt->stability == Stability::marginal && std::abs(pt->s - ev.s) < 1e-4;
            const double lo = std::min(b.points[k - 1].s, b.points[k].s), hi = std::max(b.points[k - 1].s, b.points[k].s);
            explained |= ev.s >= lo - 1e-9 && ev.s <= hi + 1e-9;
          }
          CHECK_MESSAGE(explained, "branch " << b.id << " segment " << k);
        }
      }
    }
  }

  TEST_CASE("Buckingham trivial branch stability window") {
    const auto& d = buckingham_triangle();
    const Branch& trivial = d.branches.at(0);
    for (const auto& pt : trivial.points) {
      if (pt.parameter > 5.3154 + 1e-2 && pt.parameter < 74.2253 - 1e-2) CHECK(pt.stability == Stability::stable);
      if (pt.parameter < 5.3154 - 1e-2 || pt.parameter > 74.2253 + 1e-2) CHECK(pt.stability == Stability::unstable);
    }
    CHECK(events_of(d, EventKind::primary).size() == 2);
    bool turning_near_46 = false;
    for (const auto* ev : events_of(d, EventKind::turning)) turning_near_46 |= std::abs(ev->parameter - 46.0) < 1.0;
    CHECK(turning_near_46);
    CHECK(d.branches.size() >= 7);
  }

  TEST_CASE("energies in the bistable window") {
    // The stable isosceles state undercuts the trivial one above A ~ 0.58590.
    const TriangleSystem sys(PotentialSpec(LennardJones{}));
    const auto& d = lj_triangle();
    const Branch* iso = nullptr;
    for (const auto& b : d.branches)
      if (b.kind == "primary") iso = &b;
    REQUIRE(iso != nullptr);
    for (double p : {0.5858, 0.5860, 0.5870}) {
      const double oracle = isosceles_energy_gap(p);
      bool matched = false;
      for (std::size_t k = 1; k < iso->points.size(); ++k) {
        const auto& a = iso->points[k - 1];
        const auto& b = iso->points[k];
        if ((a.parameter - p) * (b.parameter - p) > 0) continue;
        const double w = (p - a.parameter) / (b.parameter - a.parameter);
        const Corrected c =
            newton_correct(sys, Matrix::identity(4), a.x + w * (b.x - a.x), p, std::nullopt, ContinuationSettings{});
        if (make_point(sys, c.x, p).stability != Stability::stable || c.x[1] < c.x[2]) continue;
        CHECK(std::abs(sys.energy(c.x) - sys.energy(sys.trivial(p)) - oracle) < 1e-10);
        matched = true;
      }
      CHECK(matched);
    }
    CHECK(isosceles_energy_gap(0.5858) > 0.0);
    CHECK(isosceles_energy_gap(0.5860) < 0.0);
  }

  TEST_CASE("orbit images accompany every traced branch") {
    const auto& d = lj_triangle();
    for (const auto& b : d.branches) {
      if (b.kind != "primary") continue;
      int images = 0;
      for (const auto& c : d.branches) images += c.image_of == b.id;
      CHECK(images == 2);
    }
  }
}
