#include "cluster_bifurc/systems.hpp"

#include <cmath>

#include "cluster_bifurc/errors.hpp"
#include "cluster_bifurc/tetrahedron.hpp"

namespace cluster_bifurc {

namespace {

Edges6 edges_of(const linalg::Vector& x) { return {x[1], x[2], x[3], x[4], x[5], x[6]}; }

bool positive_edges(const linalg::Vector& x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > 0.0) || !std::isfinite(x[i])) return false;
  return std::isfinite(x[0]);
}

}  // namespace

linalg::Vector TriangleSystem::residual(const linalg::Vector& x, double p) const {
  return residual3(spec_, TriState::from_vector(x), p);
}

linalg::Matrix TriangleSystem::jacobian(const linalg::Vector& x, double /*p*/) const {
  return jacobian3(spec_, TriState::from_vector(x));
}

linalg::Vector TriangleSystem::residual_dp(double p) const { return {-2.0 * p, 0.0, 0.0, 0.0}; }

double TriangleSystem::constraint_scale(double p) const { return p * p; }

bool TriangleSystem::feasible(const linalg::Vector& x) const {
  return positive_edges(x) && heron(x[1], x[2], x[3]) > 0.0;
}

linalg::Vector TriangleSystem::trivial(double p) const { return trivial3(spec_, p).to_vector(); }

Classification TriangleSystem::classify(const linalg::Vector& x, double p) const {
  return classify_point3(spec_, TriState::from_vector(x), p);
}

double TriangleSystem::energy(const linalg::Vector& x) const { return energy3(spec_, TriState::from_vector(x)); }

std::vector<CriticalMode> TriangleSystem::critical_modes(double p) const {
  // Kernel vectors of the double eigenvalue with a nontrivial isotropy; the
  // other two isosceles families are group images of this one.
  return {{"mu", mu3(spec_, p), 2, {linalg::Vector{0, -2, 1, 1}}}};
}

linalg::Vector TetraSystem::residual(const linalg::Vector& x, double p) const {
  return residual4(spec_, TetState::from_vector(x), p);
}

linalg::Matrix TetraSystem::jacobian(const linalg::Vector& x, double /*p*/) const {
  return jacobian4(spec_, TetState::from_vector(x));
}

linalg::Vector TetraSystem::residual_dp(double p) const { return {-576.0 * p, 0, 0, 0, 0, 0, 0}; }

double TetraSystem::constraint_scale(double p) const { return 288.0 * p * p; }

bool TetraSystem::feasible(const linalg::Vector& x) const { return positive_edges(x) && is_tetrahedron(edges_of(x)); }

linalg::Vector TetraSystem::trivial(double p) const { return trivial4(spec_, p).to_vector(); }

Classification TetraSystem::classify(const linalg::Vector& x, double p) const {
  return classify_point4(spec_, TetState::from_vector(x), p);
}

double TetraSystem::energy(const linalg::Vector& x) const { return energy4(spec_, TetState::from_vector(x)); }

std::vector<CriticalMode> TetraSystem::critical_modes(double p) const {
  const auto mus = mu_tetra(spec_, p);
  return {{"mu1", mus.mu1, 3, {linalg::Vector{0, 0, 0, -1, 0, 0, 1}, linalg::Vector{0, -1, -1, -1, 1, 1, 1}}},
          {"mu2", mus.mu2, 2, {linalg::Vector{0, -2, 1, 1, -2, 1, 1}}}};
}

std::unique_ptr<System> make_system(ProblemKind kind, const PotentialSpec& spec) {
  if (kind == ProblemKind::triangle) return std::make_unique<TriangleSystem>(spec);
  return std::make_unique<TetraSystem>(spec);
}

}  // namespace cluster_bifurc
