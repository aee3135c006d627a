#pragma once
// Run configuration of the command line tool: one JSON document plus
// `--set key=value` overrides addressed by dotted paths.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cluster_bifurc/continuation.hpp"
#include "cluster_bifurc/diagram.hpp"
#include "cluster_bifurc/potentials.hpp"

namespace cluster_bifurc::cli {

struct TraceConfig {
  double parameter = 0.0;
  std::optional<std::vector<double>> x;  ///< start guess; the trivial state if absent
  bool increasing = true;
  bool symmetric = false;  ///< stay in the fully symmetric subspace
};

struct OutputConfig {
  std::string dir = ".";
  std::string prefix;  ///< defaults to the subcommand name
  bool json = true;
  bool csv = true;
  std::vector<SvgProjection> svg;
};

struct RunConfig {
  ProblemKind problem = ProblemKind::triangle;
  PotentialSpec potential{LennardJones{}};
  Window window;
  bool has_window = false;
  ContinuationSettings settings;
  std::vector<double> trivial_parameters;
  std::size_t grid_n = 400;
  std::optional<TraceConfig> trace;
  DiagramOptions diagram;
  OutputConfig output;
  nlohmann::json document;  ///< effective document after overrides
};

/// Applies one `key=value` override. The value is read as JSON when it
/// parses, as a plain string otherwise; missing objects on the path are created.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates the document and fills a RunConfig. Unknown keys are rejected.
/// Throws ConfigError naming the key.
RunConfig parse_config(const nlohmann::json& doc);

nlohmann::json load_document(const std::string& path);

}  // namespace cluster_bifurc::cli
