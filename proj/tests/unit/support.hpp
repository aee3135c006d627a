#pragma once

// Helpers shared by the unit tests: finite differences and sample potentials.

#include <cmath>
#include <functional>
#include <vector>

#include "cluster_bifurc/linalg.hpp"
#include "cluster_bifurc/potentials.hpp"

namespace testing {

using cluster_bifurc::linalg::Matrix;
using cluster_bifurc::linalg::Vector;

/// Central-difference Jacobian of f at x.
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, double rel_h = 1e-6) {
  const Vector f0 = f(x);
  Matrix j(f0.size(), x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double h = rel_h * std::max(1.0, std::abs(x[k]));
    Vector xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const Vector d = (1.0 / (2.0 * h)) * (f(xp) - f(xm));
    for (std::size_t i = 0; i < f0.size(); ++i) j(i, k) = d[i];
  }
  return j;
}

/// max |a - b| / max(1, max |b|)
inline double rel_error(const Matrix& a, const Matrix& b) {
  return cluster_bifurc::linalg::max_abs(a - b) / std::max(1.0, cluster_bifurc::linalg::max_abs(b));
}

inline std::vector<cluster_bifurc::PotentialSpec> sample_potentials() {
  using namespace cluster_bifurc;
  return {PotentialSpec(LennardJones{}), PotentialSpec(Buckingham{}), PotentialSpec(NormalizedBuckingham{}),
          PotentialSpec(PolynomialSpring{1.0, 0.0}), PotentialSpec(PolynomialSpring{1.0, -0.1}),
          PotentialSpec(PolynomialSpring{2.0, 0.5})};
}

}  // namespace testing
