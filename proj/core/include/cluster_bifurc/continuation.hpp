#pragma once

// Pseudo-arclength continuation inside a fixed-point subspace, bifurcation
// and fold detection, and switching onto bifurcating branches.
//
// All routines work with a projection P onto the fixed space of an isotropy
// subgroup. The Newton matrix is P J P + (I - P), so iterates never leave the
// subspace; the identity projection gives plain continuation.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cluster_bifurc/branch.hpp"
#include "cluster_bifurc/linalg.hpp"
#include "cluster_bifurc/symmetry.hpp"
#include "cluster_bifurc/systems.hpp"

namespace cluster_bifurc {

struct ContinuationSettings {
  double h0 = 1e-2;
  double h_min = 1e-6;
  double h_max = 0.5;
  double newton_tol = 1e-10;
  int newton_max_iters = 20;
  double growth = 1.5;
  double shrink = 0.5;
  int contraction_target = 4;
  bool detection = true;
  int max_points = 5000;

  /// Throws UsageError unless 0 < h_min <= h0 <= h_max and the rest is sane.
  void validate() const;
  friend bool operator==(const ContinuationSettings&, const ContinuationSettings&) = default;
};

struct Window {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double p) const noexcept { return p >= lo && p <= hi; }
  friend bool operator==(const Window&, const Window&) = default;
};

/// max(|F_0| / max(1, constraint scale), |F_1..n|). The constraint row is
/// scaled because A^2 or 288 V^2 carries round-off proportional to its size.
double residual_norm(const System& sys, const linalg::Vector& x, double p);

/// Where the corrector may move. Fixed keeps p; a chart adds the row
/// t . (y - y_ref) = h for y = (x, p).
struct Chart {
  linalg::Vector y_ref;
  linalg::Vector t;
  double h = 0.0;
};

struct Corrected {
  linalg::Vector x;
  double p = 0.0;
  int iterations = 0;
};

/// Newton iteration at fixed parameter (no chart) or on a chart. Throws
/// CorrectorFailure when the iteration budget runs out, DomainExit when an
/// iterate is infeasible and SingularSystemError on a singular step.
Corrected newton_correct(const System& sys, const linalg::Matrix& proj, linalg::Vector x, double p,
                         const std::optional<Chart>& chart, const ContinuationSettings& settings);

/// Unit null vector of [P J P + (I - P) | P F_p] at (x, p), oriented to have
/// a nonnegative inner product with `orient` (if given).
linalg::Vector branch_tangent(const System& sys, const linalg::Matrix& proj, const linalg::Vector& x, double p,
                              const std::optional<linalg::Vector>& orient = std::nullopt);

/// Classification, inertia and det sign of a converged point.
BranchPoint make_point(const System& sys, const linalg::Vector& x, double p, double s = 0.0);

struct TraceResult {
  Branch branch;
  std::vector<linalg::Vector> tangents;  ///< one per point, (x, p) space
  std::vector<BifurcationEvent> events;
  std::string stop_reason;               ///< "max_points", "window", "domain", "closed", "step"
};

/// Continues from a converged start in the direction whose (x, p) inner
/// product with `direction` is positive. Events are detected when
/// settings.detection is on; bifurcations get `bifurcation_kind`.
/// Throws TraceAbort if not even the first step succeeds.
TraceResult trace_branch(const System& sys, const linalg::Matrix& proj, const linalg::Vector& x0, double p0,
                         const linalg::Vector& direction, const ContinuationSettings& settings,
                         const Window& window, EventKind bifurcation_kind = EventKind::secondary);

/// Looks for an inertia change (bifurcation or fold) or a sign change of
/// the tangent's parameter component (fold) between two consecutive points,
/// and localizes it by secant/bisection along the chord of the first tangent.
std::optional<BifurcationEvent> detect_and_localize(const System& sys, const linalg::Matrix& proj,
                                                    const BranchPoint& a, const linalg::Vector& ta,
                                                    const BranchPoint& b, const linalg::Vector& tb,
                                                    const ContinuationSettings& settings,
                                                    EventKind bifurcation_kind = EventKind::secondary);

/// Runs detection over every segment of a traced branch.
std::vector<BifurcationEvent> detect_events(const System& sys, const linalg::Matrix& proj, const Branch& branch,
                                            const std::vector<linalg::Vector>& tangents,
                                            const ContinuationSettings& settings, EventKind bifurcation_kind);

/// Subgroup fixing both the bifurcation point and the kernel direction, and
/// its fixed-space projection.
Reduction switching_reduction(const Group& g, const linalg::Vector& x0, const linalg::Vector& v);

struct Seed {
  linalg::Vector x;
  double p = 0.0;
  linalg::Vector direction;  ///< (x, p) direction pointing away from the base branch
};

struct SwitchResult {
  bool ok = false;
  std::string message;                ///< why switching was refused
  BranchSwitchData data;
  std::vector<Seed> seeds;            ///< two for transcritical, one for pitchfork
  std::optional<Permutation> mirror;  ///< pitchfork: maps one half onto the other
};

/// Base branch through the bifurcation point as a function of the parameter.
using BaseCurve = std::function<linalg::Vector(double)>;

/// Seeds on the branch bifurcating along v from event.x, following the
/// two-term expansion x = g(p0 + e) + e m v for a transcritical crossing or a
/// pinned offset along v for a pitchfork. Refuses when |B0| <= 1e-8.
SwitchResult branch_switch(const System& sys, const BifurcationEvent& event, const linalg::Vector& v,
                           const Group& group, const BaseCurve& base, const ContinuationSettings& settings,
                           double epsilon = 1e-3);

}  // namespace cluster_bifurc
