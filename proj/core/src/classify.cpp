#include "cluster_bifurc/classify.hpp"

#include <cmath>

#include "cluster_bifurc/errors.hpp"

namespace cluster_bifurc {

std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::stable:
      return "stable";
    case Stability::unstable:
      return "unstable";
    default:
      return "marginal";
  }
}

Stability stability_from_string(std::string_view name) {
  if (name == "stable") return Stability::stable;
  if (name == "unstable") return Stability::unstable;
  if (name == "marginal") return Stability::marginal;
  throw UsageError("unknown stability label '" + std::string(name) + "'");
}

ConstrainedSpectrum constrained_spectrum(const linalg::Matrix& block, const linalg::Vector& normal) {
  const linalg::Matrix z = linalg::tangent_basis(normal);
  linalg::Matrix proj = z.transpose() * block * z;
  // Symmetrize away the round-off of the triple product.
  for (std::size_t i = 0; i < proj.rows(); ++i)
    for (std::size_t j = i + 1; j < proj.cols(); ++j) proj(i, j) = proj(j, i) = 0.5 * (proj(i, j) + proj(j, i));

  ConstrainedSpectrum out;
  out.eigenvalues = linalg::sym_eigen(proj).values;
  out.tolerance = 1e-8 * linalg::frobenius_norm(proj);
  bool any_small = false;
  bool all_positive = true;
  for (double e : out.eigenvalues) {
    any_small = any_small || std::abs(e) <= out.tolerance;
    all_positive = all_positive && e > out.tolerance;
  }
  out.stability = any_small ? Stability::marginal : (all_positive ? Stability::stable : Stability::unstable);
  return out;
}

std::vector<BoundaryRoot> scan_roots(const std::function<double(double)>& f, double lo, double hi,
                                     std::size_t grid_n, const std::string& label, int kernel_dim) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw UsageError("stability scan needs 0 < lo < hi, got [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  if (grid_n < 2) throw UsageError("stability scan needs grid_n >= 2");

  const auto grid = linalg::log_grid(lo, hi, grid_n);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);

  std::vector<BoundaryRoot> roots;
  auto push = [&](double r) {
    if (!roots.empty() && std::abs(roots.back().parameter - r) <= 1e-10 * r) return;
    const double h = 1e-6 * r;
    const double slope = (f(r + h) - f(r - h)) / (2.0 * h);
    BoundaryRoot br;
    br.label = label;
    br.parameter = r;
    br.slope = slope;
    br.direction = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);
    br.transversal = std::abs(slope) >= 1e-8;
    br.kernel_dim = kernel_dim;
    roots.push_back(br);
  };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (values[i] == 0.0) {
      push(grid[i]);
      continue;
    }
    if (values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0))
      push(linalg::bisect(f, grid[i], grid[i + 1], 1e-12));
  }
  if (values.back() == 0.0) push(grid.back());
  return roots;
}

}  // namespace cluster_bifurc
