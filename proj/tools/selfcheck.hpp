#pragma once
// Finite-difference, equivariance and closed-form self-checks behind
// `cluster-bifurc verify`.

#include <optional>
#include <string>
#include <vector>

#include "cluster_bifurc/potentials.hpp"

namespace cluster_bifurc::cli {

struct Check {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return error <= tolerance; }
};

/// Runs every check; potential-dependent ones use `potential` if given,
/// otherwise Lennard-Jones, Buckingham and a soft spring.
std::vector<Check> run_self_checks(const std::optional<PotentialSpec>& potential = std::nullopt);

}  // namespace cluster_bifurc::cli
