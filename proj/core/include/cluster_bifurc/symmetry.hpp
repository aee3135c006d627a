#pragma once

// Permutation groups acting on (lambda, edges...) with lambda fixed, their
// isotropy subgroups, fixed-point projections and orbits of branches.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cluster_bifurc/branch.hpp"
#include "cluster_bifurc/linalg.hpp"
#include "cluster_bifurc/potentials.hpp"

namespace cluster_bifurc {

/// (P x)[i] = x[image[i]]; image[0] == 0 always.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> image);

  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator[](std::size_t i) const noexcept { return image_[i]; }
  const std::vector<std::size_t>& image() const noexcept { return image_; }

  linalg::Vector apply(const linalg::Vector& x) const;
  linalg::Matrix matrix() const;
  Permutation inverse() const;
  bool is_identity() const noexcept;

  /// Edge tuple the permutation produces, e.g. "(c,A,B,C,a,b)".
  std::string describe(const std::vector<std::string>& names) const;

  friend Permutation operator*(const Permutation& p, const Permutation& q);  // p after q
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

class Group {
 public:
  /// Checks identity, closure and inverses; throws ConstructionError otherwise.
  Group(std::vector<Permutation> elements, std::vector<std::string> names);

  std::size_t order() const noexcept { return elements_.size(); }
  std::size_t dim() const noexcept { return elements_.front().size(); }
  const std::vector<Permutation>& elements() const noexcept { return elements_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  bool contains(const Permutation& p) const;

 private:
  std::vector<Permutation> elements_;
  std::vector<std::string> names_;
};

Group triangle_group();
/// All products R Q: R the six same-permutations of (a,b,c) and (A,B,C),
/// Q the four choices of apex vertex.
Group tetra_group();
const Group& group_for(ProblemKind kind);

/// Elements with P v = v (componentwise, rel_tol relative to max |v_i|).
Group isotropy(const Group& g, const linalg::Vector& v, double rel_tol = 1e-12);

/// An element with P v = -v, if any.
std::optional<Permutation> negating_element(const Group& g, const linalg::Vector& v, double rel_tol = 1e-12);

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n, std::int64_t d = 1);
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend Fraction operator+(Fraction a, Fraction b);
  friend Fraction operator*(Fraction a, Fraction b);
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t n) : n_(n), entries_(n * n) {}
  RationalMatrix(std::initializer_list<std::initializer_list<Fraction>> rows);

  std::size_t size() const noexcept { return n_; }
  Fraction& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  const Fraction& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  linalg::Matrix to_double() const;
  RationalMatrix transpose() const;
  std::size_t trace_int() const;  ///< trace, which is an integer for projections

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Fraction> entries_;
};

/// (1/|H|) sum_{P in H} P, exact.
RationalMatrix fixed_projection(const Group& h);

struct Reduction {
  Group isotropy;
  RationalMatrix projection_exact;
  linalg::Matrix projection;
  std::size_t fixed_dim = 0;
};

Reduction make_reduction(const Group& g, const linalg::Vector& v);
Reduction full_symmetry_reduction(const Group& g);

struct ReducedSystem {
  std::function<linalg::Vector(const linalg::Vector&)> residual;  ///< P F(x)
  std::function<linalg::Matrix(const linalg::Vector&)> jacobian;  ///< P J(x) P
};

ReducedSystem reduced_system(const linalg::Matrix& projection,
                             std::function<linalg::Vector(const linalg::Vector&)> residual,
                             std::function<linalg::Matrix(const linalg::Vector&)> jacobian);

/// Group images of a branch, deduplicated. The input branch comes first;
/// each further entry has image_of and generator set. Pointwise comparison
/// at 1e-9 (forward, reversed, or cyclically shifted for closed branches);
/// closed branches also match when their polylines coincide to within the
/// discretization.
std::vector<Branch> orbit(const Group& g, const Branch& branch);

/// Transformed copy of a branch (points and stored states).
Branch apply(const Permutation& p, const Branch& b);

bool same_curve(const Branch& x, const Branch& y, double tol = 1e-9);

}  // namespace cluster_bifurc
