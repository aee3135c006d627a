#include "cluster_bifurc/tetrahedron.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cluster_bifurc/errors.hpp"

namespace cluster_bifurc {

namespace {

void require_edges(const Edges6& e) {
  for (double x : e)
    if (!(x > 0.0)) throw DomainError("tetrahedron edges must be positive");
}

// Each gradient component is 4 e_i P_i with P_i a quadratic in the squared
// edges x:  P_i = x_o (S - 2 x_i - x_o) + sign (x_p - x_q)(x_r - x_t),
// o opposite to i and S the sum of the remaining four squares.
struct GradTerm {
  std::size_t o, p, q, r, t;
  double sign;
};

constexpr std::array<GradTerm, 6> kTerms{{
    {3, 1, 2, 4, 5, +1.0},  // a: (b-c)(B-C)
    {4, 0, 2, 3, 5, +1.0},  // b: (a-c)(A-C)
    {5, 0, 1, 3, 4, +1.0},  // c: (a-b)(A-B)
    {0, 1, 5, 2, 4, -1.0},  // A: -(b-C)(c-B)
    {1, 0, 5, 2, 3, -1.0},  // B: -(a-C)(c-A)
    {2, 0, 4, 1, 3, -1.0},  // C: -(a-B)(b-A)
}};

std::array<double, 6> squares(const Edges6& e) {
  std::array<double, 6> x{};
  for (std::size_t i = 0; i < 6; ++i) x[i] = e[i] * e[i];
  return x;
}

double p_value(const std::array<double, 6>& x, std::size_t i, double total) {
  const auto& t = kTerms[i];
  const double rest = total - x[i] - x[t.o];
  return x[t.o] * (rest - 2.0 * x[i] - x[t.o]) + t.sign * (x[t.p] - x[t.q]) * (x[t.r] - x[t.t]);
}

// dP_i / dx_m
double p_deriv(const std::array<double, 6>& x, std::size_t i, std::size_t m, double total) {
  const auto& t = kTerms[i];
  if (m == i) return -2.0 * x[t.o];
  if (m == t.o) return total - x[i] - x[t.o] - 2.0 * x[i] - 2.0 * x[t.o];
  double cross = 0.0;
  if (m == t.p) cross = x[t.r] - x[t.t];
  if (m == t.q) cross = -(x[t.r] - x[t.t]);
  if (m == t.r) cross = x[t.p] - x[t.q];
  if (m == t.t) cross = -(x[t.p] - x[t.q]);
  return x[t.o] + t.sign * cross;
}

bool same(double x, double y) { return std::abs(x - y) <= 1e-6 * std::max(std::abs(x), std::abs(y)); }

}  // namespace

linalg::Vector TetState::to_vector() const {
  return {lambda, edges[0], edges[1], edges[2], edges[3], edges[4], edges[5]};
}

TetState TetState::from_vector(const linalg::Vector& x) {
  return {x[0], {x[1], x[2], x[3], x[4], x[5], x[6]}};
}

std::size_t edge_index(std::size_t i, std::size_t j) {
  if (i == j || i > 3 || j > 3) throw UsageError("edge_index needs two distinct vertices in 0..3");
  if (i > j) std::swap(i, j);
  // (0,1)=a (0,2)=b (0,3)=c (2,3)=A (1,3)=B (1,2)=C
  if (i == 0) return j - 1;
  if (i == 2) return 3;
  return j == 3 ? 4 : 5;
}

double cayley_menger(const Edges6& e) {
  const auto x = squares(e);
  const linalg::Matrix m{{0, x[0], x[1], x[2], 1},
                         {x[0], 0, x[5], x[4], 1},
                         {x[1], x[5], 0, x[3], 1},
                         {x[2], x[4], x[3], 0, 1},
                         {1, 1, 1, 1, 0}};
  return linalg::determinant(m);
}

bool is_tetrahedron(const Edges6& e) {
  require_edges(e);
  const double A = e[3], B = e[4], C = e[5];
  return cayley_menger(e) > 0.0 && A < B + C && B < A + C && C < A + B;
}

linalg::Vector grad_g4(const Edges6& e) {
  const auto x = squares(e);
  double total = 0.0;
  for (double v : x) total += v;
  linalg::Vector g(6);
  for (std::size_t i = 0; i < 6; ++i) g[i] = 4.0 * e[i] * p_value(x, i, total);
  return g;
}

linalg::Matrix hess_g4(const Edges6& e) {
  const auto x = squares(e);
  double total = 0.0;
  for (double v : x) total += v;
  linalg::Matrix h(6, 6);
  for (std::size_t i = 0; i < 6; ++i) {
    h(i, i) = 4.0 * p_value(x, i, total) + 8.0 * x[i] * p_deriv(x, i, i, total);
    for (std::size_t m = i + 1; m < 6; ++m) h(i, m) = h(m, i) = 8.0 * e[i] * e[m] * p_deriv(x, i, m, total);
  }
  return h;
}

linalg::Vector residual4(const PotentialSpec& spec, const TetState& s, double volume) {
  require_edges(s.edges);
  const auto g = grad_g4(s.edges);
  linalg::Vector r(7);
  r[0] = cayley_menger(s.edges) - 288.0 * volume * volume;
  for (std::size_t i = 0; i < 6; ++i) r[i + 1] = eval_potential(spec, s.edges[i], 1) + s.lambda * g[i];
  return r;
}

linalg::Matrix hessian_block4(const PotentialSpec& spec, const TetState& s) {
  require_edges(s.edges);
  linalg::Matrix h = s.lambda * hess_g4(s.edges);
  for (std::size_t i = 0; i < 6; ++i) h(i, i) += eval_potential(spec, s.edges[i], 2);
  return h;
}

linalg::Matrix jacobian4(const PotentialSpec& spec, const TetState& s) {
  const auto block = hessian_block4(spec, s);
  const auto g = grad_g4(s.edges);
  linalg::Matrix j(7, 7);
  for (std::size_t i = 0; i < 6; ++i) {
    j(0, i + 1) = j(i + 1, 0) = g[i];
    for (std::size_t k = 0; k < 6; ++k) j(i + 1, k + 1) = block(i, k);
  }
  return j;
}

double trivial_edge4(double volume) {
  if (!(volume > 0.0)) throw DomainError("volume must be positive");
  return std::cbrt(6.0 * std::numbers::sqrt2 * volume);
}

TetState trivial4(const PotentialSpec& spec, double volume) {
  const double a = trivial_edge4(volume);
  const double a5 = a * a * a * a * a;
  return {-eval_potential(spec, a, 1) / (4.0 * a5), {a, a, a, a, a, a}};
}

TrivialSpectrum4 trivial_spectrum4(const PotentialSpec& spec, double volume) {
  const double a = trivial_edge4(volume);
  const double d1 = eval_potential(spec, a, 1);
  const double d2 = eval_potential(spec, a, 2);
  TrivialSpectrum4 t;
  t.alpha = d2 + 3.0 * d1 / a;
  t.beta = -2.0 * d1 / a;
  t.mu1 = t.alpha;
  t.mu2 = t.alpha - 2.0 * t.beta;
  const double mid = 7.0 * t.alpha - 6.0 * t.beta;
  const double disc = std::sqrt(16.0 * t.alpha * t.alpha + 9.0 * t.mu2 * t.mu2);
  t.u_eigs = {t.alpha, t.alpha, t.mu2, 0.5 * (mid + disc), 0.5 * (mid - disc)};
  std::sort(t.u_eigs.begin(), t.u_eigs.end());
  return t;
}

linalg::Matrix sum_zero_basis4() {
  linalg::Matrix m(6, 5);
  for (std::size_t k = 0; k < 3; ++k) m(k, k) = 1.0;
  for (std::size_t k = 0; k < 5; ++k) m(3, k) = -1.0;
  m(4, 3) = 1.0;
  m(5, 4) = 1.0;
  return m;
}

TetraMus mu_tetra(const PotentialSpec& spec, double volume) {
  const double a = trivial_edge4(volume);
  return {stability_margin(spec, a, 3.0), stability_margin(spec, a, 7.0)};
}

std::vector<BoundaryRoot> stability_boundaries4(const PotentialSpec& spec, double v_min, double v_max,
                                                std::size_t grid_n) {
  auto roots = scan_roots([&](double v) { return mu_tetra(spec, v).mu1; }, v_min, v_max, grid_n, "mu1", 3);
  auto r2 = scan_roots([&](double v) { return mu_tetra(spec, v).mu2; }, v_min, v_max, grid_n, "mu2", 2);
  roots.insert(roots.end(), r2.begin(), r2.end());
  std::stable_sort(roots.begin(), roots.end(),
                   [](const BoundaryRoot& x, const BoundaryRoot& y) { return x.parameter < y.parameter; });
  return roots;
}

std::string tetra_shape(const Edges6& e) {
  // Union edges into equality classes.
  std::array<int, 6> cls{};
  int n = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    cls[i] = -1;
    for (std::size_t j = 0; j < i; ++j)
      if (same(e[i], e[j])) {
        cls[i] = cls[j];
        break;
      }
    if (cls[i] < 0) cls[i] = n++;
  }
  std::array<int, 6> size{};
  for (int c : cls) ++size[static_cast<std::size_t>(c)];
  auto members = [&](int c) {
    std::vector<std::size_t> m;
    for (std::size_t i = 0; i < 6; ++i)
      if (cls[i] == c) m.push_back(i);
    return m;
  };
  auto is_opposite_pair = [](const std::vector<std::size_t>& m) {
    return m.size() == 2 && opposite_edge(m[0]) == m[1];
  };
  // A star is the three edges at one vertex: no two of them are opposite and
  // they do not close a face.
  auto is_star = [](const std::vector<std::size_t>& m) {
    for (std::size_t v = 0; v < 4; ++v) {
      std::vector<std::size_t> star;
      for (std::size_t w = 0; w < 4; ++w)
        if (w != v) star.push_back(edge_index(v, w));
      std::sort(star.begin(), star.end());
      if (star == m) return true;
    }
    return false;
  };

  if (n == 1) return "regular";
  if (n == 3) {
    for (int c = 0; c < 3; ++c)
      if (size[static_cast<std::size_t>(c)] == 4) {
        std::vector<std::size_t> singles;
        for (int d = 0; d < 3; ++d)
          if (d != c) singles.push_back(members(d).front());
        std::sort(singles.begin(), singles.end());
        if (is_opposite_pair(singles)) return "aacaaC";
      }
  }
  if (n == 2) {
    const auto m0 = members(0);
    const auto m1 = members(1);
    if (m0.size() == 3 && (is_star(m0) || is_star(m1))) return "aaaAAA";
    if (is_opposite_pair(m0) || is_opposite_pair(m1)) return "abbabb";
  }
  return "other";
}

Classification classify_point4(const PotentialSpec& spec, const TetState& s, double /*volume*/) {
  Classification out;
  out.spectrum = constrained_spectrum(hessian_block4(spec, s), grad_g4(s.edges));
  out.stability = out.spectrum.stability;
  out.shape = tetra_shape(s.edges);
  return out;
}

double energy4(const PotentialSpec& spec, const TetState& s) {
  require_edges(s.edges);
  double e = 0.0;
  for (double x : s.edges) e += eval_potential(spec, x, 0);
  return e;
}

}  // namespace cluster_bifurc
