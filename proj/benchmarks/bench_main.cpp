#include <benchmark/benchmark.h>

#include "cluster_bifurc/continuation.hpp"
#include "cluster_bifurc/diagram.hpp"
#include "cluster_bifurc/symmetry.hpp"
#include "cluster_bifurc/systems.hpp"
#include "cluster_bifurc/tetrahedron.hpp"

using namespace cluster_bifurc;
using namespace cluster_bifurc::linalg;

namespace {

const PotentialSpec kLj{LennardJones{}};

void BM_SymEigen7(benchmark::State& state) {
  const Matrix j = jacobian4(kLj, trivial4(kLj, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(sym_eigen(j));
}
BENCHMARK(BM_SymEigen7);

void BM_LuSolve8(benchmark::State& state) {
  const Matrix j = jacobian4(kLj, trivial4(kLj, 0.3));
  const Border border{Vector{1, 0, 0, 0, 0, 0, 0}, Vector{0, 1, 1, 1, 1, 1, 1}, 0.0, 1.0};
  const Vector rhs{1, 2, 3, 4, 5, 6, 7};
  for (auto _ : state) benchmark::DoNotOptimize(solve_bordered(j, rhs, border));
}
BENCHMARK(BM_LuSolve8);

void BM_TetraJacobian(benchmark::State& state) {
  const TetraSystem sys(kLj);
  Vector x = sys.trivial(0.3);
  x[2] *= 1.01;
  for (auto _ : state) benchmark::DoNotOptimize(sys.jacobian(x, 0.3));
}
BENCHMARK(BM_TetraJacobian);

void BM_NewtonTriangle(benchmark::State& state) {
  const TriangleSystem sys(kLj);
  Vector x = sys.trivial(0.45);
  x[1] *= 1.01;
  for (auto _ : state)
    benchmark::DoNotOptimize(newton_correct(sys, Matrix::identity(4), x, 0.45, std::nullopt, ContinuationSettings{}));
}
BENCHMARK(BM_NewtonTriangle);

void BM_Orbit(benchmark::State& state) {
  Branch b;
  b.id = 0;
  for (int k = 0; k < 100; ++k) {
    BranchPoint p;
    p.x = Vector{-1, 1, 1, 1 + 0.01 * k, 1, 1, 1 - 0.005 * k};
    p.parameter = 1 + 0.01 * k;
    b.points.push_back(p);
  }
  const Group& g = group_for(ProblemKind::tetrahedron);
  for (auto _ : state) benchmark::DoNotOptimize(orbit(g, b));
}
BENCHMARK(BM_Orbit);

void BM_DiagramLjTriangle(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(build_diagram(ProblemKind::triangle, kLj, Window{0.3, 0.9}, ContinuationSettings{}));
}
BENCHMARK(BM_DiagramLjTriangle)->Unit(benchmark::kMillisecond);

void BM_DiagramSoftSpringTetra(benchmark::State& state) {
  const PotentialSpec soft{PolynomialSpring{1, -0.1}};
  for (auto _ : state)
    benchmark::DoNotOptimize(build_diagram(ProblemKind::tetrahedron, soft, Window{0.5, 4.0}, ContinuationSettings{}));
}
BENCHMARK(BM_DiagramSoftSpringTetra)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
