#include "config.hpp"

#include <cmath>
#include <set>

#include "cluster_bifurc/errors.hpp"

namespace cluster_bifurc::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& path) {
  for (const auto& [key, value] : obj.items())
    if (!known.contains(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
}

const json& object_at(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_object()) throw ConfigError(key, "expected an object");
  return v;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path + "." + key, "expected a finite number");
  return d;
}

int integer(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
  return v.get<int>();
}

bool boolean(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(path + "." + key, "expected true or false");
  return v.get<bool>();
}

std::string string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

ContinuationSettings parse_settings(const json& c) {
  reject_unknown(c,
                 {"h0", "h_min", "h_max", "newton_tol", "newton_max_iters", "growth", "shrink", "contraction_target",
                  "detection", "max_points"},
                 "continuation");
  ContinuationSettings s;
  const std::string p = "continuation";
  if (c.contains("h0")) s.h0 = number(c, "h0", p);
  if (c.contains("h_min")) s.h_min = number(c, "h_min", p);
  if (c.contains("h_max")) s.h_max = number(c, "h_max", p);
  if (c.contains("newton_tol")) s.newton_tol = number(c, "newton_tol", p);
  if (c.contains("newton_max_iters")) s.newton_max_iters = integer(c, "newton_max_iters", p);
  if (c.contains("growth")) s.growth = number(c, "growth", p);
  if (c.contains("shrink")) s.shrink = number(c, "shrink", p);
  if (c.contains("contraction_target")) s.contraction_target = integer(c, "contraction_target", p);
  if (c.contains("detection")) s.detection = boolean(c, "detection", p);
  if (c.contains("max_points")) s.max_points = integer(c, "max_points", p);
  try {
    s.validate();
  } catch (const UsageError& e) {
    throw ConfigError("continuation", e.what());
  }
  return s;
}

SvgProjection parse_svg(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(v, {"component", "view", "yaw", "pitch"}, path);
  if (v.contains("component")) {
    if (v.contains("view")) throw ConfigError(path, "give either component or view");
    return SvgProjection::component_vs_parameter(string(v, "component", path));
  }
  const std::string view = v.contains("view") ? string(v, "view", path) : "trivial_axis";
  SvgProjection p;
  if (view == "trivial_axis")
    p = SvgProjection::along_trivial_axis();
  else if (view == "oblique")
    p = SvgProjection::oblique();
  else if (view == "custom")
    p.kind = SvgProjection::Kind::abc_3d;
  else
    throw ConfigError(path + ".view", "unknown view '" + view + "' (trivial_axis, oblique, custom)");
  if (v.contains("yaw")) p.yaw = number(v, "yaw", path);
  if (v.contains("pitch")) p.pitch = number(v, "pitch", path);
  return p;
}

}  // namespace

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "--set expects key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty path component");
    if (!node->is_object()) throw ConfigError(key.substr(0, start ? start - 1 : 0), "not an object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    if (!node->contains(part)) (*node)[part] = json::object();
    node = &(*node)[part];
    start = dot + 1;
  }
}

json load_document(const std::string& path) {
  const std::string text = read_text_file(path);
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("<document>", "'" + path + "' is not valid JSON");
  if (!doc.is_object()) throw ConfigError("<document>", "top level must be an object");
  return doc;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("<document>", "top level must be an object");
  reject_unknown(doc, {"problem", "potential", "window", "continuation", "trivial", "stability", "trace", "diagram", "output"},
                 "");
  RunConfig rc;
  rc.document = doc;

  if (!doc.contains("problem")) throw ConfigError("problem", "missing (triangle or tetrahedron)");
  if (!doc.at("problem").is_string()) throw ConfigError("problem", "expected a string");
  try {
    rc.problem = problem_kind_from_string(doc.at("problem").get<std::string>());
  } catch (const Error& e) {
    throw ConfigError("problem", e.what());
  }

  if (!doc.contains("potential")) throw ConfigError("potential", "missing");
  rc.potential = potential_from_json(doc.at("potential").dump());

  if (doc.contains("window")) {
    const json& w = object_at(doc, "window");
    reject_unknown(w, {"lo", "hi"}, "window");
    if (w.contains("lo")) rc.window.lo = number(w, "lo", "window");
    if (w.contains("hi") && !w.at("hi").is_null()) rc.window.hi = number(w, "hi", "window");
    if (!(rc.window.lo >= 0.0)) throw ConfigError("window.lo", "must be non-negative");
    if (!(rc.window.lo < rc.window.hi)) throw ConfigError("window", "needs lo < hi");
    rc.has_window = true;
  }

  if (doc.contains("continuation")) rc.settings = parse_settings(object_at(doc, "continuation"));

  if (doc.contains("trivial")) {
    const json& t = object_at(doc, "trivial");
    reject_unknown(t, {"parameters"}, "trivial");
    if (t.contains("parameters")) rc.trivial_parameters = numbers(t.at("parameters"), "trivial.parameters");
    for (std::size_t i = 0; i < rc.trivial_parameters.size(); ++i)
      if (!(rc.trivial_parameters[i] > 0.0))
        throw ConfigError("trivial.parameters[" + std::to_string(i) + "]", "must be positive");
  }

  if (doc.contains("stability")) {
    const json& s = object_at(doc, "stability");
    reject_unknown(s, {"grid_n"}, "stability");
    if (s.contains("grid_n")) {
      const int n = integer(s, "grid_n", "stability");
      if (n < 2) throw ConfigError("stability.grid_n", "must be at least 2");
      rc.grid_n = static_cast<std::size_t>(n);
    }
  }

  if (doc.contains("trace")) {
    const json& t = object_at(doc, "trace");
    reject_unknown(t, {"parameter", "x", "direction", "symmetric"}, "trace");
    TraceConfig tc;
    if (!t.contains("parameter")) throw ConfigError("trace.parameter", "missing");
    tc.parameter = number(t, "parameter", "trace");
    if (!(tc.parameter > 0.0)) throw ConfigError("trace.parameter", "must be positive");
    if (t.contains("x")) tc.x = numbers(t.at("x"), "trace.x");
    if (t.contains("direction")) {
      const std::string d = string(t, "direction", "trace");
      if (d != "increasing" && d != "decreasing")
        throw ConfigError("trace.direction", "expected increasing or decreasing");
      tc.increasing = d == "increasing";
    }
    if (t.contains("symmetric")) tc.symmetric = boolean(t, "symmetric", "trace");
    rc.trace = tc;
  }

  if (doc.contains("diagram")) {
    const json& d = object_at(doc, "diagram");
    reject_unknown(d, {"max_depth", "deep", "threads"}, "diagram");
    if (d.contains("max_depth")) rc.diagram.max_depth = integer(d, "max_depth", "diagram");
    if (d.contains("deep")) rc.diagram.deep = boolean(d, "deep", "diagram");
    if (d.contains("threads")) rc.diagram.threads = integer(d, "threads", "diagram");
    if (rc.diagram.max_depth < 1) throw ConfigError("diagram.max_depth", "must be at least 1");
    if (rc.diagram.threads < 0) throw ConfigError("diagram.threads", "must be non-negative");
  }

  if (doc.contains("output")) {
    const json& o = object_at(doc, "output");
    reject_unknown(o, {"dir", "prefix", "json", "csv", "svg"}, "output");
    if (o.contains("dir")) rc.output.dir = string(o, "dir", "output");
    if (o.contains("prefix")) rc.output.prefix = string(o, "prefix", "output");
    if (o.contains("json")) rc.output.json = boolean(o, "json", "output");
    if (o.contains("csv")) rc.output.csv = boolean(o, "csv", "output");
    if (o.contains("svg")) {
      const json& s = o.at("svg");
      if (!s.is_array()) throw ConfigError("output.svg", "expected an array");
      for (std::size_t i = 0; i < s.size(); ++i)
        rc.output.svg.push_back(parse_svg(s[i], "output.svg[" + std::to_string(i) + "]"));
    }
  }
  return rc;
}

}  // namespace cluster_bifurc::cli
