#include "selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "cluster_bifurc/symmetry.hpp"
#include "cluster_bifurc/tetrahedron.hpp"
#include "cluster_bifurc/triangle.hpp"

namespace cluster_bifurc::cli {

using linalg::Matrix;
using linalg::Vector;

namespace {

constexpr double kFdTol = 1e-6;
constexpr double kEquivTol = 1e-12;
constexpr double kSpectrumTol = 1e-9;

// Central-difference Jacobian of f at x.
template <class F>
Matrix fd_jacobian(const F& f, const Vector& x, std::size_t rows) {
  Matrix j(rows, x.size());
  for (std::size_t c = 0; c < x.size(); ++c) {
    const double h = 1e-5 * std::max(1.0, std::abs(x[c]));
    Vector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const Vector d = (1.0 / (2.0 * h)) * (f(xp) - f(xm));
    for (std::size_t r = 0; r < rows; ++r) j(r, c) = d[r];
  }
  return j;
}

double relative_gap(const Matrix& a, const Matrix& b) {
  return linalg::max_abs(a - b) / std::max(1e-300, linalg::max_abs(b));
}

double relative_gap(const Vector& a, const Vector& b) {
  return linalg::norm_inf(a - b) / std::max(1.0, linalg::norm_inf(b));
}

std::string label(const PotentialSpec& spec) {
  switch (spec.variant().index()) {
    case 0:
      return "lennard_jones";
    case 1:
      return "buckingham";
    case 2:
      return "normalized_buckingham";
    default:
      return "spring";
  }
}

}  // namespace

std::vector<Check> run_self_checks(const std::optional<PotentialSpec>& potential) {
  std::vector<Check> out;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);

  // Geometry of the constraints.
  {
    const double a = 1.1, b = 0.9, c = 1.3;
    const Vector x{a, b, c};
    const Matrix g_fd =
        fd_jacobian([](const Vector& v) { return Vector{heron(v[0], v[1], v[2])}; }, x, 1);
    const Vector g = heron_gradient(a, b, c);
    Matrix g_row(1, 3);
    for (std::size_t i = 0; i < 3; ++i) g_row(0, i) = g[i];
    out.push_back({"area constraint gradient vs finite differences", relative_gap(g_row, g_fd), kFdTol});
    const Matrix h_fd = fd_jacobian([](const Vector& v) { return heron_gradient(v[0], v[1], v[2]); }, x, 3);
    out.push_back({"area constraint Hessian vs finite differences", relative_gap(heron_hessian(a, b, c), h_fd), kFdTol});
  }
  Edges6 e{};
  for (auto& v : e) v = 1.0 + jitter(rng);
  {
    const Vector x(std::span<const double>(e.data(), 6));
    auto to_edges = [](const Vector& v) {
      Edges6 r{};
      for (std::size_t i = 0; i < 6; ++i) r[i] = v[i];
      return r;
    };
    const Matrix g_fd = fd_jacobian([&](const Vector& v) { return Vector{cayley_menger(to_edges(v))}; }, x, 1);
    const Vector g = grad_g4(e);
    Matrix g_row(1, 6);
    for (std::size_t i = 0; i < 6; ++i) g_row(0, i) = g[i];
    out.push_back({"volume constraint gradient vs finite differences", relative_gap(g_row, g_fd), kFdTol});
    const Matrix h_fd = fd_jacobian([&](const Vector& v) { return grad_g4(to_edges(v)); }, x, 6);
    out.push_back({"volume constraint Hessian vs finite differences", relative_gap(hess_g4(e), h_fd), kFdTol});
  }
  {
    double worst = 0.0;
    const double cm = cayley_menger(e);
    for (const auto& p : group_for(ProblemKind::tetrahedron).elements()) {
      Vector x(7);
      for (std::size_t i = 0; i < 6; ++i) x[i + 1] = e[i];
      const Vector y = p.apply(x);
      Edges6 f{};
      for (std::size_t i = 0; i < 6; ++i) f[i] = y[i + 1];
      worst = std::max(worst, std::abs(cayley_menger(f) - cm) / std::abs(cm));
    }
    out.push_back({"Cayley-Menger determinant invariant under all 24 relabelings", worst, kEquivTol});
    out.push_back({"Cayley-Menger determinant of the unit regular tetrahedron is 4",
                   std::abs(cayley_menger({1, 1, 1, 1, 1, 1}) - 4.0), 1e-12});
  }

  std::vector<PotentialSpec> specs;
  if (potential)
    specs.push_back(*potential);
  else
    specs = {PotentialSpec(LennardJones{}), PotentialSpec(Buckingham{}), PotentialSpec(PolynomialSpring{1.0, -0.1})};

  for (const auto& spec : specs) {
    const std::string tag = " [" + label(spec) + "]";
    // Scale the states to the potential's natural length.
    const double r0 = trivial_edge3(1.0) * (std::holds_alternative<Buckingham>(spec.variant()) ? 3.0 : 1.0);

    TriState s3{-0.7, r0 * (1.0 + jitter(rng)), r0 * (1.0 + jitter(rng)), r0 * (1.0 + jitter(rng))};
    const double area = 0.5;
    const Matrix j3 = jacobian3(spec, s3);
    const Matrix j3_fd = fd_jacobian(
        [&](const Vector& v) { return residual3(spec, TriState::from_vector(v), area); }, s3.to_vector(), 4);
    out.push_back({"triangle Jacobian vs finite differences" + tag, relative_gap(j3, j3_fd), kFdTol});

    TetState s4{-0.3, {}};
    for (auto& v : s4.edges) v = r0 * (1.0 + 0.5 * jitter(rng));
    const double volume = 0.2;
    const Matrix j4 = jacobian4(spec, s4);
    const Matrix j4_fd = fd_jacobian(
        [&](const Vector& v) { return residual4(spec, TetState::from_vector(v), volume); }, s4.to_vector(), 7);
    out.push_back({"tetrahedron Jacobian vs finite differences" + tag, relative_gap(j4, j4_fd), kFdTol});

    double worst = 0.0;
    const Vector x3 = s3.to_vector();
    const Vector f3 = residual3(spec, s3, area);
    for (const auto& p : group_for(ProblemKind::triangle).elements())
      worst = std::max(worst, relative_gap(residual3(spec, TriState::from_vector(p.apply(x3)), area), p.apply(f3)));
    out.push_back({"triangle residual equivariance" + tag, worst, kEquivTol});
    worst = 0.0;
    const Vector x4 = s4.to_vector();
    const Vector f4 = residual4(spec, s4, volume);
    for (const auto& p : group_for(ProblemKind::tetrahedron).elements())
      worst = std::max(worst, relative_gap(residual4(spec, TetState::from_vector(p.apply(x4)), volume), p.apply(f4)));
    out.push_back({"tetrahedron residual equivariance" + tag, worst, kEquivTol});

    // Symmetric states: numeric spectra against the closed forms.
    const double a_param = 0.6 * r0 * r0;
    const auto sp3 = trivial_spectrum3(spec, a_param);
    const auto eig3 = linalg::sym_eigen(jacobian3(spec, trivial3(spec, a_param))).values;
    std::vector<double> want3{sp3.mu, sp3.mu, sp3.simple_pair[0], sp3.simple_pair[1]};
    std::sort(want3.begin(), want3.end());
    double gap = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < 4; ++i) {
      gap = std::max(gap, std::abs(eig3[i] - want3[i]));
      scale = std::max(scale, std::abs(want3[i]));
    }
    out.push_back({"triangle symmetric-state spectrum matches closed form" + tag, gap / scale, kSpectrumTol});

    const double v_param = 0.12 * r0 * r0 * r0;
    const auto sp4 = trivial_spectrum4(spec, v_param);
    const Matrix m = sum_zero_basis4();
    const Matrix h = hessian_block4(spec, trivial4(spec, v_param));
    const auto eig4 = linalg::sym_eigen(m.transpose() * h * m).values;
    gap = 0.0;
    scale = 1.0;
    for (std::size_t i = 0; i < 5; ++i) {
      gap = std::max(gap, std::abs(eig4[i] - sp4.u_eigs[i]));
      scale = std::max(scale, std::abs(sp4.u_eigs[i]));
    }
    out.push_back({"tetrahedron symmetric-state spectrum matches closed form" + tag, gap / scale, kSpectrumTol});
  }
  return out;
}

}  // namespace cluster_bifurc::cli
