#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "cluster_bifurc/continuation.hpp"
#include "cluster_bifurc/diagram.hpp"
#include "cluster_bifurc/errors.hpp"
#include "cluster_bifurc/symmetry.hpp"
#include "cluster_bifurc/tetrahedron.hpp"
#include "cluster_bifurc/triangle.hpp"
#include "cluster_bifurc/version.hpp"
#include "config.hpp"
#include "selfcheck.hpp"

namespace cluster_bifurc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Invocation {
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool deep = false;
};

const char* param_name(ProblemKind k) { return k == ProblemKind::triangle ? "A" : "V"; }

RunConfig load(const Invocation& inv) {
  if (inv.config_path.empty()) throw ConfigError("--config", "required for '" + inv.command + "'");
  json doc = load_document(inv.config_path);
  for (const auto& o : inv.overrides) apply_override(doc, o);
  RunConfig rc = parse_config(doc);
  if (!inv.out_dir.empty()) rc.output.dir = inv.out_dir;
  if (inv.deep) rc.diagram.deep = true;
  if (rc.output.prefix.empty()) rc.output.prefix = inv.command;
  return rc;
}

Window require_window(const RunConfig& rc, bool finite) {
  if (!rc.has_window) throw ConfigError("window", "missing");
  if (finite && !(rc.window.lo > 0.0)) throw ConfigError("window.lo", "must be positive");
  if (finite && !std::isfinite(rc.window.hi)) throw ConfigError("window.hi", "must be finite");
  return rc.window;
}

class Outputs {
 public:
  explicit Outputs(const RunConfig& rc) : rc_(rc) {}

  void write(const std::string& suffix, const std::string& text) {
    const fs::path dir(rc_.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    const fs::path path = dir / (rc_.output.prefix + suffix);
    write_text_file(path, text);
    files_.push_back(path.string());
  }

  void diagram(const Diagram& d) {
    if (rc_.output.json) write(".json", export_json(d));
    if (rc_.output.csv) write(".csv", export_csv(d));
    std::vector<SvgProjection> views = rc_.output.svg;
    if (views.empty()) views.push_back(SvgProjection::component_vs_parameter("a"));
    for (std::size_t i = 0; i < views.size(); ++i) {
      const auto& v = views[i];
      const std::string tag = v.kind == SvgProjection::Kind::param_vs_component
                                  ? v.component + "_vs_" + param_name(d.problem)
                                  : fmt::format("abc_{}", i);
      write("_" + tag + ".svg", render_svg(d, v));
    }
  }

  // Timestamps live only here, never in the data files.
  void meta(const Invocation& inv, double seconds) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    json m = {{"tool", "cluster-bifurc"},
              {"version", kVersion},
              {"command", inv.command},
              {"config_path", inv.config_path},
              {"overrides", inv.overrides},
              {"config", rc_.document},
              {"files", files_},
              {"wall_seconds", seconds},
              {"timestamp", fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now))}};
    write("_run_meta.json", m.dump(1) + "\n");
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  const RunConfig& rc_;
  std::vector<std::string> files_;
};

int cmd_trivial(const RunConfig& rc, std::ostream& out, Outputs* files) {
  if (rc.trivial_parameters.empty()) throw ConfigError("trivial.parameters", "missing or empty");
  json rows = json::array();
  const auto sys = make_system(rc.problem, rc.potential);
  for (double p : rc.trivial_parameters) {
    const linalg::Vector x = sys->trivial(p);
    const Classification cls = sys->classify(x, p);
    json row = {{"parameter", p}, {"lambda", x[0]}, {"edge", x[1]}, {"stability", to_string(cls.stability)}};
    if (rc.problem == ProblemKind::triangle) {
      const auto sp = trivial_spectrum3(rc.potential, p);
      out << fmt::format("A={:.10g} lambda={:.10g} a={:.10g} mu={:.10g} pair=({:.10g}, {:.10g}) {}\n", p, x[0], x[1],
                         sp.mu, sp.simple_pair[0], sp.simple_pair[1], to_string(cls.stability));
      row["mu"] = sp.mu;
      row["simple_pair"] = sp.simple_pair;
    } else {
      const auto sp = trivial_spectrum4(rc.potential, p);
      out << fmt::format("V={:.10g} lambda={:.10g} a={:.10g} mu1={:.10g} mu2={:.10g} {}\n", p, x[0], x[1], sp.mu1,
                         sp.mu2, to_string(cls.stability));
      row["mu1"] = sp.mu1;
      row["mu2"] = sp.mu2;
      row["u_eigs"] = sp.u_eigs;
    }
    rows.push_back(row);
  }
  if (files) files->write(".json", json{{"problem", to_string(rc.problem)}, {"trivial", rows}}.dump(1) + "\n");
  return kOk;
}

int cmd_stability(const RunConfig& rc, std::ostream& out, Outputs* files) {
  const Window w = require_window(rc, true);
  const auto roots = rc.problem == ProblemKind::triangle ? stability_boundaries3(rc.potential, w.lo, w.hi, rc.grid_n)
                                                          : stability_boundaries4(rc.potential, w.lo, w.hi, rc.grid_n);
  json j = {{"problem", to_string(rc.problem)}, {"window", {w.lo, w.hi}}, {"roots", json::array()},
            {"closed_form", json::array()}};
  out << fmt::format("{} stability boundaries on [{:.6g}, {:.6g}]: {}\n", to_string(rc.problem), w.lo, w.hi,
                     roots.size());
  for (const auto& r : roots) {
    out << fmt::format("  {}={:.10g} {} slope={:.6g} kernel_dim={} {}\n", param_name(rc.problem), r.parameter, r.label,
                       r.slope, r.kernel_dim, r.transversal ? "transversal" : "NOT transversal");
    j["roots"].push_back({{"label", r.label},
                          {"parameter", r.parameter},
                          {"slope", r.slope},
                          {"kernel_dim", r.kernel_dim},
                          {"transversal", r.transversal}});
  }
  for (const auto& c : closed_form_thresholds(rc.potential, rc.problem)) {
    const BoundaryRoot* near = nullptr;
    for (const auto& r : roots)
      if (!near || std::abs(r.parameter - c.value) < std::abs(near->parameter - c.value)) near = &r;
    if (near)
      out << fmt::format("  closed form {}={:.10g}, numeric {:.10g}, difference {:.3g}\n", c.label, c.value,
                         near->parameter, std::abs(near->parameter - c.value));
    else
      out << fmt::format("  closed form {}={:.10g} (outside the window)\n", c.label, c.value);
    j["closed_form"].push_back({{"label", c.label},
                                {"value", c.value},
                                {"numeric", near ? json(near->parameter) : json(nullptr)}});
  }
  if (files) files->write(".json", j.dump(1) + "\n");
  return kOk;
}

int cmd_trace(const RunConfig& rc, std::ostream& out, Outputs& files) {
  if (!rc.trace) throw ConfigError("trace", "missing");
  const Window w = require_window(rc, false);
  const auto sys = make_system(rc.problem, rc.potential);
  const TraceConfig& tc = *rc.trace;
  linalg::Vector x0 = sys->trivial(tc.parameter);
  if (tc.x) {
    if (tc.x->size() != sys->dim())
      throw ConfigError("trace.x", fmt::format("expected {} numbers (lambda and edges)", sys->dim()));
    x0 = linalg::Vector(std::span<const double>(*tc.x));
  }
  const linalg::Matrix proj = tc.symmetric ? full_symmetry_reduction(group_for(rc.problem)).projection
                                           : linalg::Matrix::identity(sys->dim());
  const Corrected start = newton_correct(*sys, proj, x0, tc.parameter, std::nullopt, rc.settings);
  linalg::Vector dir(sys->dim() + 1);
  dir[sys->dim()] = tc.increasing ? 1.0 : -1.0;
  TraceResult tr = trace_branch(*sys, proj, start.x, start.p, dir, rc.settings, w, EventKind::secondary);

  Diagram d;
  d.problem = rc.problem;
  d.potential = rc.potential;
  d.window = w;
  d.settings = rc.settings;
  d.version = kVersion;
  tr.branch.id = 0;
  tr.branch.kind = tc.symmetric ? "trivial" : "primary";
  d.branches.push_back(tr.branch);
  for (std::size_t i = 0; i < tr.events.size(); ++i) {
    tr.events[i].id = static_cast<int>(i);
    tr.events[i].source_branch = 0;
    d.events.push_back(tr.events[i]);
  }
  out << fmt::format("traced {} points, stop: {}\n", tr.branch.points.size(), tr.stop_reason);
  for (const auto& e : d.events)
    out << fmt::format("  event {} {} at {}={:.10g}\n", e.id, to_string(e.kind), param_name(rc.problem), e.parameter);
  files.diagram(d);
  return kOk;
}

int cmd_diagram(const RunConfig& rc, std::ostream& out, Outputs& files) {
  const Window w = require_window(rc, true);
  const Diagram d = build_diagram(rc.problem, rc.potential, w, rc.settings, rc.diagram);
  std::map<std::string, int> kinds;
  for (const auto& b : d.branches) ++kinds[b.kind];
  out << fmt::format("{} branches, {} events\n", d.branches.size(), d.events.size());
  for (const auto& [k, n] : kinds) out << fmt::format("  {} {}\n", n, k);
  for (const auto& e : d.events)
    out << fmt::format("  event {} {} on branch {} at {}={:.10g}{}\n", e.id, to_string(e.kind), e.source_branch,
                       param_name(rc.problem), e.parameter, e.label.empty() ? "" : " (" + e.label + ")");
  for (const auto& m : d.diagnostics) out << "  note: " << m << "\n";
  files.diagram(d);
  return kOk;
}

int cmd_verify(const std::optional<RunConfig>& rc, std::ostream& out) {
  const auto checks = run_self_checks(rc ? std::optional<PotentialSpec>(rc->potential) : std::nullopt);
  int failed = 0;
  for (const auto& c : checks) {
    out << fmt::format("{} {} (error {:.3g}, tolerance {:.1g})\n", c.pass() ? "PASS" : "FAIL", c.name, c.error,
                       c.tolerance);
    failed += !c.pass();
  }
  out << fmt::format("{} of {} checks passed\n", checks.size() - static_cast<std::size_t>(failed), checks.size());
  return failed ? kVerifyFailed : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bifurcation diagrams of constrained three- and four-particle clusters", "cluster-bifurc"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Invocation inv;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"trivial", "Symmetric state and its spectrum at given parameter values"},
      {"stability", "Stability boundaries of the symmetric state and closed-form cross-checks"},
      {"trace", "Continue a single branch from a given start"},
      {"diagram", "Full bifurcation diagram with JSON, CSV and SVG export"},
      {"verify", "Finite-difference, equivariance and closed-form self-checks"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", inv.config_path, "JSON run configuration");
    sub->add_option("--set", inv.overrides, "Override a config value, e.g. --set window.hi=0.9")->allow_extra_args(false);
    sub->add_option("--out", inv.out_dir, "Output directory");
    if (std::string(name) == "diagram") sub->add_flag("--deep", inv.deep, "Switch at events beyond the depth limit");
    sub->callback([&inv, n = std::string(name)] { inv.command = n; });
  }

  std::ostringstream cli_out, cli_err;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? kOk : kConfigError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (inv.command == "verify") {
      std::optional<RunConfig> rc;
      if (!inv.config_path.empty()) rc = load(inv);
      return cmd_verify(rc, out);
    }
    const RunConfig rc = load(inv);
    Outputs files(rc);
    int code = kOk;
    const bool write_summary = !inv.out_dir.empty();
    if (inv.command == "trivial") code = cmd_trivial(rc, out, write_summary ? &files : nullptr);
    if (inv.command == "stability") code = cmd_stability(rc, out, write_summary ? &files : nullptr);
    if (inv.command == "trace") code = cmd_trace(rc, out, files);
    if (inv.command == "diagram") code = cmd_diagram(rc, out, files);
    if (!files.files().empty()) {
      files.meta(inv, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      for (const auto& f : files.files()) out << "wrote " << f << "\n";
    }
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const DomainError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace cluster_bifurc::cli
