#pragma once

// Four particles at fixed volume V. Edges are ordered (a, b, c, A, B, C) with
// A opposite a, B opposite b and C opposite c; in vertex terms
// a = |01|, b = |02|, c = |03|, A = |23|, B = |13|, C = |12|.
// The unknowns are packed as (lambda, a, b, c, A, B, C).

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "cluster_bifurc/classify.hpp"
#include "cluster_bifurc/linalg.hpp"
#include "cluster_bifurc/potentials.hpp"
#include "cluster_bifurc/triangle.hpp"

namespace cluster_bifurc {

using Edges6 = std::array<double, 6>;

struct TetState {
  double lambda = 0.0;
  Edges6 edges{1, 1, 1, 1, 1, 1};

  linalg::Vector to_vector() const;
  static TetState from_vector(const linalg::Vector& x);
  friend bool operator==(const TetState&, const TetState&) = default;
};

/// Index of the edge opposite edge i.
constexpr std::size_t opposite_edge(std::size_t i) noexcept { return (i + 3) % 6; }

/// Edge index joining vertices i != j.
std::size_t edge_index(std::size_t i, std::size_t j);

/// 5x5 Cayley-Menger determinant; 288 V^2 for a realizable tetrahedron.
double cayley_menger(const Edges6& e);

/// cayley_menger > 0 and the base face (A, B, C) satisfies the strict
/// triangle inequalities. Throws DomainError on an edge <= 0.
bool is_tetrahedron(const Edges6& e);

linalg::Vector grad_g4(const Edges6& e);
linalg::Matrix hess_g4(const Edges6& e);

linalg::Vector residual4(const PotentialSpec& spec, const TetState& s, double volume);
linalg::Matrix jacobian4(const PotentialSpec& spec, const TetState& s);
linalg::Matrix hessian_block4(const PotentialSpec& spec, const TetState& s);

/// Regular tetrahedron a^3 = 6 sqrt(2) V, lambda = -phi'(a) / (4 a^5).
TetState trivial4(const PotentialSpec& spec, double volume);
double trivial_edge4(double volume);

struct TrivialSpectrum4 {
  double alpha = 0;  ///< phi'' + 3 phi'/a, also mu1
  double beta = 0;   ///< -2 phi'/a
  double mu1 = 0;
  double mu2 = 0;    ///< alpha - 2 beta = phi'' + 7 phi'/a
  std::array<double, 5> u_eigs{};  ///< closed forms, ascending
};

TrivialSpectrum4 trivial_spectrum4(const PotentialSpec& spec, double volume);

/// The 6x5 basis of {sum y = 0} that eliminates the fourth edge coordinate;
/// M^t H M is the restricted Hessian whose eigenvalues are u_eigs.
linalg::Matrix sum_zero_basis4();

struct TetraMus {
  double mu1 = 0;
  double mu2 = 0;
};

TetraMus mu_tetra(const PotentialSpec& spec, double volume);

/// Roots of mu1 (labelled "mu1", kernel dimension 3) and mu2 ("mu2", 2),
/// merged in increasing parameter order.
std::vector<BoundaryRoot> stability_boundaries4(const PotentialSpec& spec, double v_min, double v_max,
                                                std::size_t grid_n);

/// "regular", "aacaaC", "aaaAAA", "abbabb" or "other", from the equality
/// pattern of the edges (1e-6 relative). Group images share the label.
std::string tetra_shape(const Edges6& e);

Classification classify_point4(const PotentialSpec& spec, const TetState& s, double volume);

double energy4(const PotentialSpec& spec, const TetState& s);

}  // namespace cluster_bifurc
