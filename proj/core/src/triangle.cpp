#include "cluster_bifurc/triangle.hpp"

#include <cmath>

#include "cluster_bifurc/errors.hpp"

namespace cluster_bifurc {

namespace {

void require_edges(const TriState& s) {
  if (!(s.a > 0.0) || !(s.b > 0.0) || !(s.c > 0.0))
    throw DomainError("triangle edges must be positive");
}

bool same(double x, double y) { return std::abs(x - y) <= 1e-6 * std::max(std::abs(x), std::abs(y)); }

}  // namespace

double heron(double a, double b, double c) noexcept {
  const double a2 = a * a, b2 = b * b, c2 = c * c;
  return (a2 * b2 + a2 * c2 + b2 * c2) / 8.0 - (a2 * a2 + b2 * b2 + c2 * c2) / 16.0;
}

linalg::Vector heron_gradient(double a, double b, double c) {
  const double a2 = a * a, b2 = b * b, c2 = c * c;
  return {0.25 * a * (b2 + c2 - a2), 0.25 * b * (a2 + c2 - b2), 0.25 * c * (a2 + b2 - c2)};
}

linalg::Matrix heron_hessian(double a, double b, double c) {
  const double a2 = a * a, b2 = b * b, c2 = c * c;
  return {{0.25 * (b2 + c2 - 3.0 * a2), 0.5 * a * b, 0.5 * a * c},
          {0.5 * a * b, 0.25 * (a2 + c2 - 3.0 * b2), 0.5 * b * c},
          {0.5 * a * c, 0.5 * b * c, 0.25 * (a2 + b2 - 3.0 * c2)}};
}

linalg::Vector residual3(const PotentialSpec& spec, const TriState& s, double area) {
  require_edges(s);
  const auto g = heron_gradient(s.a, s.b, s.c);
  return {heron(s.a, s.b, s.c) - area * area, eval_potential(spec, s.a, 1) + s.lambda * g[0],
          eval_potential(spec, s.b, 1) + s.lambda * g[1], eval_potential(spec, s.c, 1) + s.lambda * g[2]};
}

linalg::Matrix hessian_block3(const PotentialSpec& spec, const TriState& s) {
  require_edges(s);
  linalg::Matrix h = s.lambda * heron_hessian(s.a, s.b, s.c);
  h(0, 0) += eval_potential(spec, s.a, 2);
  h(1, 1) += eval_potential(spec, s.b, 2);
  h(2, 2) += eval_potential(spec, s.c, 2);
  return h;
}

linalg::Matrix jacobian3(const PotentialSpec& spec, const TriState& s) {
  const auto block = hessian_block3(spec, s);
  const auto g = heron_gradient(s.a, s.b, s.c);
  linalg::Matrix j(4, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    j(0, i + 1) = j(i + 1, 0) = g[i];
    for (std::size_t k = 0; k < 3; ++k) j(i + 1, k + 1) = block(i, k);
  }
  return j;
}

double trivial_edge3(double area) {
  if (!(area > 0.0)) throw DomainError("area must be positive");
  return 2.0 * std::sqrt(area) / std::pow(3.0, 0.25);
}

TriState trivial3(const PotentialSpec& spec, double area) {
  const double a = trivial_edge3(area);
  return {-4.0 * eval_potential(spec, a, 1) / (a * a * a), a, a, a};
}

TrivialSpectrum3 trivial_spectrum3(const PotentialSpec& spec, double area) {
  const TriState s = trivial3(spec, area);
  const double a = s.a;
  TrivialSpectrum3 t;
  t.alpha = eval_potential(spec, a, 2) - s.lambda * a * a / 4.0;
  t.beta = s.lambda * a * a / 2.0;
  t.gamma = a * a * a / 4.0;
  t.mu = t.alpha - t.beta;
  const double m = t.alpha + 2.0 * t.beta;
  const double d = std::sqrt(m * m + 12.0 * t.gamma * t.gamma);
  t.simple_pair = {0.5 * (m - d), 0.5 * (m + d)};
  return t;
}

double mu3(const PotentialSpec& spec, double area) { return stability_margin(spec, trivial_edge3(area), 3.0); }

std::vector<BoundaryRoot> stability_boundaries3(const PotentialSpec& spec, double a_min, double a_max,
                                                std::size_t grid_n) {
  return scan_roots([&](double area) { return mu3(spec, area); }, a_min, a_max, grid_n, "mu", 2);
}

std::string triangle_shape(double a, double b, double c) {
  const bool ab = same(a, b), ac = same(a, c), bc = same(b, c);
  if (ab && ac && bc) return "equilateral";
  if (ab) return "isosceles(a=b)";
  if (ac) return "isosceles(a=c)";
  if (bc) return "isosceles(b=c)";
  return "scalene";
}

Classification classify_point3(const PotentialSpec& spec, const TriState& s, double /*area*/) {
  Classification out;
  out.spectrum = constrained_spectrum(hessian_block3(spec, s), heron_gradient(s.a, s.b, s.c));
  out.stability = out.spectrum.stability;
  out.shape = triangle_shape(s.a, s.b, s.c);
  return out;
}

double energy3(const PotentialSpec& spec, const TriState& s) {
  require_edges(s);
  return eval_potential(spec, s.a, 0) + eval_potential(spec, s.b, 0) + eval_potential(spec, s.c, 0);
}

}  // namespace cluster_bifurc
