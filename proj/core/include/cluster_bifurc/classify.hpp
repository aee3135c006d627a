#pragma once

// Pieces shared by the triangle and tetrahedron problems: stability of a
// constrained critical point and scanning a scalar margin for sign changes.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cluster_bifurc/linalg.hpp"

namespace cluster_bifurc {

enum class Stability { stable, unstable, marginal };

std::string_view to_string(Stability s) noexcept;
Stability stability_from_string(std::string_view name);

struct ConstrainedSpectrum {
  linalg::Vector eigenvalues;  ///< of the Hessian block on {y : normal . y = 0}, ascending
  double tolerance = 0.0;      ///< 1e-8 * Frobenius norm of the projected block
  Stability stability = Stability::marginal;
};

/// Projects `block` onto the orthogonal complement of `normal` and classifies:
/// marginal if any |eig| <= tol, stable if all eig > tol, unstable otherwise.
ConstrainedSpectrum constrained_spectrum(const linalg::Matrix& block, const linalg::Vector& normal);

struct BoundaryRoot {
  std::string label;     ///< "mu", "mu1", "mu2"
  double parameter = 0;  ///< area or volume where the margin vanishes
  double slope = 0;      ///< d(margin)/d(parameter), central difference
  int direction = 0;     ///< sign of slope: +1 the margin becomes positive
  bool transversal = true;
  int kernel_dim = 0;
};

/// Sign changes of f on a log-spaced grid over [lo, hi], each refined by
/// bisection to 1e-12 relative. Throws UsageError on a bad interval.
std::vector<BoundaryRoot> scan_roots(const std::function<double(double)>& f, double lo, double hi,
                                     std::size_t grid_n, const std::string& label, int kernel_dim);

}  // namespace cluster_bifurc
