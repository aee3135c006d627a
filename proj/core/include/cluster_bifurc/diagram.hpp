#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cluster_bifurc/branch.hpp"
#include "cluster_bifurc/continuation.hpp"
#include "cluster_bifurc/potentials.hpp"

namespace cluster_bifurc {

struct DiagramOptions {
  bool deep = false;   ///< switch beyond max_depth
  int max_depth = 2;   ///< 1 = primary branches only, 2 = also secondary
  int threads = 0;     ///< 0: CLUSTER_BIFURC_THREADS or one per task
  friend bool operator==(const DiagramOptions&, const DiagramOptions&) = default;
};

struct Diagram {
  ProblemKind problem = ProblemKind::triangle;
  PotentialSpec potential{LennardJones{}};
  Window window;
  ContinuationSettings settings;
  DiagramOptions options;
  std::vector<Branch> branches;
  std::vector<BifurcationEvent> events;
  std::vector<std::string> diagnostics;  ///< refused switches, aborted traces
  std::string version;

  const Branch* branch(int id) const;
  friend bool operator==(const Diagram&, const Diagram&) = default;
};

/// Trivial branch, primary events, switching and tracing of the bifurcating
/// families (secondary ones down to options.max_depth), then group images.
/// Branch and event ids are assigned deterministically.
Diagram build_diagram(ProblemKind problem, const PotentialSpec& potential, const Window& window,
                      const ContinuationSettings& settings, const DiagramOptions& options = {});

std::string export_json(const Diagram& d);
/// Throws ConfigError naming the offending key on malformed input.
Diagram import_json(std::string_view text);

/// Header: branch_id,s,parameter,lambda,<edges>,stable,shape
std::string export_csv(const Diagram& d);

/// Writes text to path; throws Error with the path on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

struct SvgProjection {
  enum class Kind { param_vs_component, abc_3d };
  Kind kind = Kind::param_vs_component;
  std::string component = "a";  ///< lambda, a, b, c (and A, B, C for tetrahedra)
  double yaw = 0.0;             ///< abc_3d view angles, radians
  double pitch = 0.0;

  static SvgProjection component_vs_parameter(std::string name);
  /// Trivial direction (1,1,1) pointing out of the page.
  static SvgProjection along_trivial_axis();
  static SvgProjection oblique();
};

/// Polylines per branch, split where the stability flag changes; green
/// #008000 for stable, red #c00000 otherwise; events drawn as markers.
/// Throws UsageError for an unknown component or a diagram with no points.
std::string render_svg(const Diagram& d, const SvgProjection& projection);

}  // namespace cluster_bifurc
