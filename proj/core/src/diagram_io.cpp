#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "cluster_bifurc/diagram.hpp"
#include "cluster_bifurc/errors.hpp"
#include "json_detail.hpp"

namespace cluster_bifurc {

using nlohmann::json;

namespace {

json vec(const linalg::Vector& v) { return json(v.to_std()); }

json point_json(const BranchPoint& p) {
  return {{"x", vec(p.x)},           {"parameter", p.parameter}, {"s", p.s},
          {"stability", std::string(to_string(p.stability))}, {"shape", p.shape},
          {"det_sign", p.det_sign}, {"inertia", p.inertia}};
}

json branch_json(const Branch& b) {
  json pts = json::array();
  for (const auto& p : b.points) pts.push_back(point_json(p));
  return {{"id", b.id},           {"kind", b.kind},     {"parent_event", b.parent_event}, {"image_of", b.image_of},
          {"generator", b.generator}, {"closed", b.closed}, {"points", std::move(pts)}};
}

json event_json(const BifurcationEvent& e) {
  json kernel = json::array();
  for (const auto& k : e.kernel) kernel.push_back(vec(k));
  return {{"id", e.id},
          {"kind", std::string(to_string(e.kind))},
          {"parameter", e.parameter},
          {"x", vec(e.x)},
          {"s", e.s},
          {"source_branch", e.source_branch},
          {"kernel_dim", e.kernel_dim},
          {"kernel", std::move(kernel)},
          {"label", e.label},
          {"reduced_precision", e.reduced_precision}};
}

json settings_json(const ContinuationSettings& s) {
  return {{"h0", s.h0},
          {"h_min", s.h_min},
          {"h_max", s.h_max},
          {"newton_tol", s.newton_tol},
          {"newton_max_iters", s.newton_max_iters},
          {"growth", s.growth},
          {"shrink", s.shrink},
          {"contraction_target", s.contraction_target},
          {"detection", s.detection},
          {"max_points", s.max_points}};
}

// Typed access that reports the JSON path of whatever is wrong.
template <class T>
T get(const json& j, const char* key, const std::string& path) {
  const std::string where = path.empty() ? key : path + "." + key;
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where, e.what());
  }
}

linalg::Vector get_vec(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() > linalg::kMaxDim) throw ConfigError(where, "expected a short array of numbers");
  std::vector<double> v;
  try {
    v = j.get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ConfigError(where, e.what());
  }
  return linalg::Vector(std::span<const double>(v));
}

double get_number_or_inf(const json& j, const char* key, const std::string& path) {
  if (j.contains(key) && j.at(key).is_null()) return std::numeric_limits<double>::infinity();
  return get<double>(j, key, path);
}

}  // namespace

std::string export_json(const Diagram& d) {
  json branches = json::array();
  for (const auto& b : d.branches) branches.push_back(branch_json(b));
  json events = json::array();
  for (const auto& e : d.events) events.push_back(event_json(e));
  json window = {{"lo", d.window.lo}, {"hi", std::isfinite(d.window.hi) ? json(d.window.hi) : json(nullptr)}};
  json j = {{"format", "cluster-bifurc-diagram"},
            {"version", d.version},
            {"problem", std::string(to_string(d.problem))},
            {"potential", detail::potential_to_object(d.potential)},
            {"window", window},
            {"settings", settings_json(d.settings)},
            {"options", {{"deep", d.options.deep}, {"max_depth", d.options.max_depth}, {"threads", d.options.threads}}},
            {"branches", std::move(branches)},
            {"events", std::move(events)},
            {"diagnostics", d.diagnostics}};
  return j.dump(1) + "\n";
}

Diagram import_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  Diagram d;
  d.version = get<std::string>(j, "version", "");
  d.problem = problem_kind_from_string(get<std::string>(j, "problem", ""));
  if (!j.contains("potential")) throw ConfigError("potential", "missing");
  d.potential = detail::potential_from_object(j.at("potential"), "potential");
  const json& w = j.contains("window") ? j.at("window") : json::object();
  d.window.lo = get<double>(w, "lo", "window");
  d.window.hi = get_number_or_inf(w, "hi", "window");

  const json& s = j.contains("settings") ? j.at("settings") : json::object();
  d.settings.h0 = get<double>(s, "h0", "settings");
  d.settings.h_min = get<double>(s, "h_min", "settings");
  d.settings.h_max = get<double>(s, "h_max", "settings");
  d.settings.newton_tol = get<double>(s, "newton_tol", "settings");
  d.settings.newton_max_iters = get<int>(s, "newton_max_iters", "settings");
  d.settings.growth = get<double>(s, "growth", "settings");
  d.settings.shrink = get<double>(s, "shrink", "settings");
  d.settings.contraction_target = get<int>(s, "contraction_target", "settings");
  d.settings.detection = get<bool>(s, "detection", "settings");
  d.settings.max_points = get<int>(s, "max_points", "settings");

  const json& o = j.contains("options") ? j.at("options") : json::object();
  d.options.deep = get<bool>(o, "deep", "options");
  d.options.max_depth = get<int>(o, "max_depth", "options");
  d.options.threads = get<int>(o, "threads", "options");

  if (!j.contains("branches") || !j.at("branches").is_array()) throw ConfigError("branches", "expected an array");
  for (std::size_t bi = 0; bi < j.at("branches").size(); ++bi) {
    const json& jb = j.at("branches")[bi];
    const std::string path = "branches[" + std::to_string(bi) + "]";
    Branch b;
    b.id = get<int>(jb, "id", path);
    b.kind = get<std::string>(jb, "kind", path);
    b.parent_event = get<int>(jb, "parent_event", path);
    b.image_of = get<int>(jb, "image_of", path);
    b.generator = get<std::string>(jb, "generator", path);
    b.closed = get<bool>(jb, "closed", path);
    if (!jb.contains("points") || !jb.at("points").is_array()) throw ConfigError(path + ".points", "expected an array");
    for (std::size_t pi = 0; pi < jb.at("points").size(); ++pi) {
      const json& jp = jb.at("points")[pi];
      const std::string pp = path + ".points[" + std::to_string(pi) + "]";
      BranchPoint p;
      if (!jp.contains("x")) throw ConfigError(pp + ".x", "missing");
      p.x = get_vec(jp.at("x"), pp + ".x");
      p.parameter = get<double>(jp, "parameter", pp);
      p.s = get<double>(jp, "s", pp);
      try {
        p.stability = stability_from_string(get<std::string>(jp, "stability", pp));
      } catch (const UsageError& e) {
        throw ConfigError(pp + ".stability", e.what());
      }
      p.shape = get<std::string>(jp, "shape", pp);
      p.det_sign = get<int>(jp, "det_sign", pp);
      p.inertia = get<int>(jp, "inertia", pp);
      b.points.push_back(std::move(p));
    }
    d.branches.push_back(std::move(b));
  }

  if (!j.contains("events") || !j.at("events").is_array()) throw ConfigError("events", "expected an array");
  for (std::size_t ei = 0; ei < j.at("events").size(); ++ei) {
    const json& je = j.at("events")[ei];
    const std::string path = "events[" + std::to_string(ei) + "]";
    BifurcationEvent e;
    e.id = get<int>(je, "id", path);
    try {
      e.kind = event_kind_from_string(get<std::string>(je, "kind", path));
    } catch (const UsageError& ex) {
      throw ConfigError(path + ".kind", ex.what());
    }
    e.parameter = get<double>(je, "parameter", path);
    if (!je.contains("x")) throw ConfigError(path + ".x", "missing");
    e.x = get_vec(je.at("x"), path + ".x");
    e.s = get<double>(je, "s", path);
    e.source_branch = get<int>(je, "source_branch", path);
    e.kernel_dim = get<int>(je, "kernel_dim", path);
    if (!je.contains("kernel") || !je.at("kernel").is_array()) throw ConfigError(path + ".kernel", "expected an array");
    for (const auto& k : je.at("kernel")) e.kernel.push_back(get_vec(k, path + ".kernel"));
    e.label = get<std::string>(je, "label", path);
    e.reduced_precision = get<bool>(je, "reduced_precision", path);
    d.events.push_back(std::move(e));
  }
  if (j.contains("diagnostics")) d.diagnostics = get<std::vector<std::string>>(j, "diagnostics", "");
  for (const auto& e : d.events)
    if (e.source_branch >= 0 && d.branch(e.source_branch) == nullptr)
      throw ConfigError("events", "event " + std::to_string(e.id) + " refers to missing branch " +
                                      std::to_string(e.source_branch));
  return d;
}

std::string export_csv(const Diagram& d) {
  std::string out = "branch_id,s,parameter,lambda,";
  out += d.problem == ProblemKind::triangle ? "a,b,c" : "a,b,c,A,B,C";
  out += ",stable,shape\n";
  for (const auto& b : d.branches) {
    for (const auto& p : b.points) {
      out += fmt::format("{},{:.17g},{:.17g}", b.id, p.s, p.parameter);
      for (double v : p.x) out += fmt::format(",{:.17g}", v);
      out += fmt::format(",{},{}\n", p.stability == Stability::stable ? 1 : 0, p.shape);
    }
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace cluster_bifurc
