#include "cluster_bifurc/symmetry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <utility>

#include "cluster_bifurc/errors.hpp"
#include "cluster_bifurc/tetrahedron.hpp"
#include "cluster_bifurc/triangle.hpp"

namespace cluster_bifurc {

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t v : image_) {
    if (v >= image_.size() || seen[v]) throw ConstructionError("not a permutation");
    seen[v] = true;
  }
  if (image_.empty() || image_[0] != 0) throw ConstructionError("permutation must fix the multiplier slot");
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> im(n);
  std::iota(im.begin(), im.end(), std::size_t{0});
  return Permutation(std::move(im));
}

linalg::Vector Permutation::apply(const linalg::Vector& x) const {
  if (x.size() != image_.size()) throw UsageError("permutation and vector sizes differ");
  linalg::Vector y(x.size());
  for (std::size_t i = 0; i < image_.size(); ++i) y[i] = x[image_[i]];
  return y;
}

linalg::Matrix Permutation::matrix() const {
  linalg::Matrix m(image_.size(), image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) m(i, image_[i]) = 1.0;
  return m;
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < image_.size(); ++i)
    if (image_[i] != i) return false;
  return true;
}

std::string Permutation::describe(const std::vector<std::string>& names) const {
  std::string s = "(";
  for (std::size_t i = 1; i < image_.size(); ++i) {
    if (i > 1) s += ',';
    s += image_[i] - 1 < names.size() ? names[image_[i] - 1] : std::to_string(image_[i]);
  }
  return s + ")";
}

Permutation operator*(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw UsageError("permutation sizes differ");
  std::vector<std::size_t> im(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) im[i] = q[p[i]];
  return Permutation(std::move(im));
}

Group::Group(std::vector<Permutation> elements, std::vector<std::string> names)
    : elements_(std::move(elements)), names_(std::move(names)) {
  if (elements_.empty()) throw ConstructionError("empty group");
  const std::size_t n = elements_.front().size();
  for (const auto& p : elements_)
    if (p.size() != n) throw ConstructionError("group elements of different sizes");
  if (!contains(Permutation::identity(n))) throw ConstructionError("group lacks the identity");
  for (const auto& p : elements_) {
    if (!contains(p.inverse())) throw ConstructionError("group not closed under inverse");
    for (const auto& q : elements_)
      if (!contains(p * q)) throw ConstructionError("group not closed under composition");
  }
  auto sorted = elements_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConstructionError("duplicate group elements");
}

bool Group::contains(const Permutation& p) const {
  return std::find(elements_.begin(), elements_.end(), p) != elements_.end();
}

namespace {

const std::vector<std::string> kTriNames{"a", "b", "c"};
const std::vector<std::string> kTetNames{"a", "b", "c", "A", "B", "C"};

constexpr std::array<std::pair<std::size_t, std::size_t>, 6> kEdgeVertices{
    {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {1, 3}, {1, 2}}};

// Relabel vertices: the new edge (i, j) takes the old edge (sigma(i), sigma(j)).
Permutation from_vertex_map(const std::array<std::size_t, 4>& sigma) {
  std::vector<std::size_t> im(7);
  im[0] = 0;
  for (std::size_t e = 0; e < 6; ++e) {
    const auto [i, j] = kEdgeVertices[e];
    im[e + 1] = edge_index(sigma[i], sigma[j]) + 1;
  }
  return Permutation(std::move(im));
}

}  // namespace

Group triangle_group() {
  std::vector<Permutation> els;
  std::array<std::size_t, 3> p{1, 2, 3};
  do {
    els.emplace_back(std::vector<std::size_t>{0, p[0], p[1], p[2]});
  } while (std::next_permutation(p.begin(), p.end()));
  return Group(std::move(els), kTriNames);
}

Group tetra_group() {
  std::vector<Permutation> rs;
  std::array<std::size_t, 3> p{1, 2, 3};
  do {
    rs.push_back(from_vertex_map({0, p[0], p[1], p[2]}));
  } while (std::next_permutation(p.begin(), p.end()));
  // Apex choices. The last one gives (a,b,c,A,B,C) -> (c,A,B,C,a,b).
  const std::array<Permutation, 4> qs{from_vertex_map({0, 1, 2, 3}), from_vertex_map({1, 0, 2, 3}),
                                      from_vertex_map({2, 1, 0, 3}), from_vertex_map({3, 0, 2, 1})};
  std::vector<Permutation> els;
  for (const auto& r : rs)
    for (const auto& q : qs) els.push_back(r * q);
  Group g(std::move(els), kTetNames);
  if (g.order() != 24) throw ConstructionError("tetrahedral group does not have 24 elements");
  return g;
}

const Group& group_for(ProblemKind kind) {
  static const Group tri = triangle_group();
  static const Group tet = tetra_group();
  return kind == ProblemKind::triangle ? tri : tet;
}

namespace {

bool matches(const linalg::Vector& x, const linalg::Vector& y, double tol) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - y[i]) > tol) return false;
  return true;
}

}  // namespace

Group isotropy(const Group& g, const linalg::Vector& v, double rel_tol) {
  const double tol = rel_tol * std::max(linalg::norm_inf(v), 1e-300);
  std::vector<Permutation> h;
  for (const auto& p : g.elements())
    if (matches(p.apply(v), v, tol)) h.push_back(p);
  return Group(std::move(h), g.names());
}

std::optional<Permutation> negating_element(const Group& g, const linalg::Vector& v, double rel_tol) {
  const double tol = rel_tol * std::max(linalg::norm_inf(v), 1e-300);
  for (const auto& p : g.elements())
    if (matches(p.apply(v), -v, tol)) return p;
  return std::nullopt;
}

Fraction::Fraction(std::int64_t n, std::int64_t d) {
  if (d == 0) throw UsageError("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t k = std::gcd(n < 0 ? -n : n, d);
  num = k ? n / k : 0;
  den = k ? d / k : 1;
}

Fraction operator+(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Fraction>> rows)
    : n_(rows.size()), entries_(rows.size() * rows.size()) {
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != n_) throw UsageError("rational matrix must be square");
    std::size_t j = 0;
    for (const auto& f : r) (*this)(i, j++) = f;
    ++i;
  }
}

linalg::Matrix RationalMatrix::to_double() const {
  linalg::Matrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).value();
  return m;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::size_t RationalMatrix::trace_int() const {
  Fraction t;
  for (std::size_t i = 0; i < n_; ++i) t = t + (*this)(i, i);
  return static_cast<std::size_t>(t.num / t.den);
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      Fraction s;
      for (std::size_t k = 0; k < a.size(); ++k) s = s + a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

RationalMatrix fixed_projection(const Group& h) {
  const std::size_t n = h.dim();
  const auto order = static_cast<std::int64_t>(h.order());
  std::vector<std::int64_t> counts(n * n, 0);
  for (const auto& p : h.elements())
    for (std::size_t i = 0; i < n; ++i) ++counts[i * n + p[i]];
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Fraction(counts[i * n + j], order);
  return m;
}

Reduction make_reduction(const Group& g, const linalg::Vector& v) {
  Group h = isotropy(g, v);
  RationalMatrix p = fixed_projection(h);
  const std::size_t dim = p.trace_int();
  linalg::Matrix pd = p.to_double();
  return {std::move(h), std::move(p), pd, dim};
}

Reduction full_symmetry_reduction(const Group& g) {
  RationalMatrix p = fixed_projection(g);
  const std::size_t dim = p.trace_int();
  linalg::Matrix pd = p.to_double();
  return {g, std::move(p), pd, dim};
}

ReducedSystem reduced_system(const linalg::Matrix& projection,
                             std::function<linalg::Vector(const linalg::Vector&)> residual,
                             std::function<linalg::Matrix(const linalg::Vector&)> jacobian) {
  ReducedSystem r;
  r.residual = [projection, residual = std::move(residual)](const linalg::Vector& x) {
    return projection * residual(x);
  };
  r.jacobian = [projection, jacobian = std::move(jacobian)](const linalg::Vector& x) {
    return projection * jacobian(x) * projection;
  };
  return r;
}

namespace {

std::string shape_of(const linalg::Vector& x) {
  if (x.size() == 4) return triangle_shape(x[1], x[2], x[3]);
  if (x.size() == 7) return tetra_shape({x[1], x[2], x[3], x[4], x[5], x[6]});
  return "other";
}

double point_distance(const BranchPoint& p, const BranchPoint& q) {
  double d = (p.parameter - q.parameter) * (p.parameter - q.parameter);
  for (std::size_t i = 0; i < p.x.size(); ++i) d += (p.x[i] - q.x[i]) * (p.x[i] - q.x[i]);
  return std::sqrt(d);
}

bool points_close(const BranchPoint& p, const BranchPoint& q, double tol) {
  const double scale = std::max(1.0, std::abs(p.parameter));
  if (std::abs(p.parameter - q.parameter) > tol * scale) return false;
  for (std::size_t i = 0; i < p.x.size(); ++i)
    if (std::abs(p.x[i] - q.x[i]) > tol * std::max(1.0, std::abs(p.x[i]))) return false;
  return true;
}

bool sequence_match(const Branch& x, const Branch& y, double tol, std::size_t shift, bool reversed) {
  const std::size_t n = x.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = reversed ? (shift + n - i) % n : (shift + i) % n;
    if (!points_close(x.points[i], y.points[j], tol)) return false;
  }
  return true;
}

// Distance from p to the segment [a, b] in (x, parameter) space.
double segment_distance(const BranchPoint& p, const BranchPoint& a, const BranchPoint& b) {
  const std::size_t n = p.x.size();
  double ab2 = (b.parameter - a.parameter) * (b.parameter - a.parameter);
  double ap_ab = (p.parameter - a.parameter) * (b.parameter - a.parameter);
  for (std::size_t i = 0; i < n; ++i) {
    ab2 += (b.x[i] - a.x[i]) * (b.x[i] - a.x[i]);
    ap_ab += (p.x[i] - a.x[i]) * (b.x[i] - a.x[i]);
  }
  const double t = ab2 > 0.0 ? std::clamp(ap_ab / ab2, 0.0, 1.0) : 0.0;
  double d = 0.0;
  const double dp = p.parameter - (a.parameter + t * (b.parameter - a.parameter));
  d += dp * dp;
  for (std::size_t i = 0; i < n; ++i) {
    const double di = p.x[i] - (a.x[i] + t * (b.x[i] - a.x[i]));
    d += di * di;
  }
  return std::sqrt(d);
}

double max_segment(const Branch& b) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < b.points.size(); ++i)
    m = std::max(m, point_distance(b.points[i], b.points[i + 1]));
  return m;
}

// Every vertex of x lies within tol of the closed polyline y.
bool covered_by(const Branch& x, const Branch& y, double tol) {
  const std::size_t m = y.points.size();
  for (const auto& p : x.points) {
    double best = point_distance(p, y.points.front());
    for (std::size_t k = 0; k < m && best > tol; ++k)
      best = std::min(best, segment_distance(p, y.points[k], y.points[(k + 1) % m]));
    if (best > tol) return false;
  }
  return true;
}

}  // namespace

bool same_curve(const Branch& x, const Branch& y, double tol) {
  if (x.points.empty() || y.points.empty()) return x.points.empty() && y.points.empty();
  if (x.points.front().x.size() != y.points.front().x.size()) return false;
  const std::size_t n = x.points.size();
  if (n == y.points.size()) {
    if (sequence_match(x, y, tol, 0, false) || sequence_match(x, y, tol, n - 1, true)) return true;
    if (x.closed && y.closed) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!points_close(x.points[0], y.points[k], tol)) continue;
        if (sequence_match(x, y, tol, k, false) || sequence_match(x, y, tol, k, true)) return true;
      }
    }
  }
  if (x.closed && y.closed) {
    const double h = 0.5 * std::max(max_segment(x), max_segment(y)) + tol;
    return covered_by(x, y, h) && covered_by(y, x, h);
  }
  return false;
}

Branch apply(const Permutation& p, const Branch& b) {
  Branch out = b;
  for (auto& pt : out.points) {
    pt.x = p.apply(pt.x);
    pt.shape = shape_of(pt.x);
  }
  return out;
}

std::vector<Branch> orbit(const Group& g, const Branch& branch) {
  std::vector<Branch> out{branch};
  for (const auto& p : g.elements()) {
    if (p.is_identity()) continue;
    Branch img = apply(p, branch);
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Branch& b) { return same_curve(img, b); });
    if (dup) continue;
    img.image_of = branch.id;
    img.generator = p.describe(g.names());
    img.kind = "image";
    out.push_back(std::move(img));
  }
  return out;
}

}  // namespace cluster_bifurc
