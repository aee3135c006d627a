#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cluster_bifurc/classify.hpp"
#include "cluster_bifurc/linalg.hpp"

namespace cluster_bifurc {

/// One converged point on a branch. x packs (lambda, edges...).
struct BranchPoint {
  linalg::Vector x;
  double parameter = 0.0;  ///< area A or volume V
  double s = 0.0;          ///< arclength from the branch start
  Stability stability = Stability::marginal;
  std::string shape;
  int det_sign = 1;        ///< sign of det of the full Jacobian
  int inertia = 0;         ///< negative eigenvalues of the full Jacobian

  friend bool operator==(const BranchPoint&, const BranchPoint&) = default;
};

enum class EventKind { primary, secondary, turning };

std::string_view to_string(EventKind k) noexcept;
EventKind event_kind_from_string(std::string_view name);

struct BifurcationEvent {
  int id = -1;
  EventKind kind = EventKind::primary;
  double parameter = 0.0;
  linalg::Vector x;                     ///< state at the localized point
  double s = 0.0;                       ///< arclength position on the source branch
  int source_branch = -1;
  int kernel_dim = 0;
  std::vector<linalg::Vector> kernel;   ///< orthonormal basis, x-space
  std::string label;                    ///< critical eigenvalue name, e.g. "mu1"
  bool reduced_precision = false;       ///< bracket lost while localizing

  friend bool operator==(const BifurcationEvent&, const BifurcationEvent&) = default;
};

struct Branch {
  int id = -1;
  std::string kind;          ///< "trivial", "primary", "secondary" or "image"
  int parent_event = -1;     ///< event the branch was switched from
  int image_of = -1;         ///< for group images: the traced branch
  std::string generator;     ///< for group images: the permutation applied
  bool closed = false;       ///< the trace returned to its start
  std::vector<BranchPoint> points;

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct BranchSwitchData {
  linalg::Vector v;       ///< kernel vector of the reduced Jacobian, unit length
  linalg::Vector v_star;  ///< left kernel vector, <v_star, v> = 1
  double a0 = 0.0;        ///< second-order coefficient along v
  double b0 = 0.0;        ///< parameter derivative of the critical eigenvalue
  double m = 0.0;         ///< slope -2 b0 / a0
  double epsilon = 0.0;
  bool pitchfork = false;

  friend bool operator==(const BranchSwitchData&, const BranchSwitchData&) = default;
};

}  // namespace cluster_bifurc
