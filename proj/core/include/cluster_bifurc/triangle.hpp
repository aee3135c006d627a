#pragma once

// Three particles at fixed area A. The unknowns are the multiplier and the
// three inter-particle distances, packed as (lambda, a, b, c).

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "cluster_bifurc/classify.hpp"
#include "cluster_bifurc/linalg.hpp"
#include "cluster_bifurc/potentials.hpp"

namespace cluster_bifurc {

struct TriState {
  double lambda = 0.0;
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;

  linalg::Vector to_vector() const { return {lambda, a, b, c}; }
  static TriState from_vector(const linalg::Vector& x) { return {x[0], x[1], x[2], x[3]}; }
  friend bool operator==(const TriState&, const TriState&) = default;
};

/// Squared area, written as the symmetric quartic
/// (a^2 b^2 + a^2 c^2 + b^2 c^2)/8 - (a^4 + b^4 + c^4)/16.
double heron(double a, double b, double c) noexcept;

/// Gradient and Hessian of heron with respect to (a, b, c).
linalg::Vector heron_gradient(double a, double b, double c);
linalg::Matrix heron_hessian(double a, double b, double c);

/// (heron - A^2, phi'(a) + lambda dg/da, ...). Throws DomainError on an edge <= 0.
linalg::Vector residual3(const PotentialSpec& spec, const TriState& s, double area);

/// Bordered Hessian [[0, grad g^t], [grad g, hess E + lambda hess g]].
linalg::Matrix jacobian3(const PotentialSpec& spec, const TriState& s);

/// The constrained Hessian block hess E + lambda hess g alone (3 x 3).
linalg::Matrix hessian_block3(const PotentialSpec& spec, const TriState& s);

/// Equilateral solution a = 2 sqrt(A) / 3^(1/4), lambda = -4 phi'(a) / a^3.
TriState trivial3(const PotentialSpec& spec, double area);
double trivial_edge3(double area);

struct TrivialSpectrum3 {
  double alpha = 0;  ///< diagonal of the Hessian block
  double beta = 0;   ///< off-diagonal of the Hessian block
  double gamma = 0;  ///< border entry
  double mu = 0;     ///< double eigenvalue alpha - beta
  std::array<double, 2> simple_pair{};  ///< ascending
};

TrivialSpectrum3 trivial_spectrum3(const PotentialSpec& spec, double area);

/// phi''(a_A) + 3 phi'(a_A) / a_A.
double mu3(const PotentialSpec& spec, double area);

std::vector<BoundaryRoot> stability_boundaries3(const PotentialSpec& spec, double a_min, double a_max,
                                                std::size_t grid_n);

struct Classification {
  Stability stability = Stability::marginal;
  std::string shape;
  ConstrainedSpectrum spectrum;
};

/// "equilateral", "isosceles(a=b)", "isosceles(a=c)", "isosceles(b=c)" or "scalene".
std::string triangle_shape(double a, double b, double c);

Classification classify_point3(const PotentialSpec& spec, const TriState& s, double area);

/// E = phi(a) + phi(b) + phi(c).
double energy3(const PotentialSpec& spec, const TriState& s);

}  // namespace cluster_bifurc
