#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "cluster_bifurc/diagram.hpp"
#include "cluster_bifurc/errors.hpp"

namespace cluster_bifurc {

SvgProjection SvgProjection::component_vs_parameter(std::string name) {
  SvgProjection p;
  p.kind = Kind::param_vs_component;
  p.component = std::move(name);
  return p;
}

SvgProjection SvgProjection::along_trivial_axis() {
  SvgProjection p;
  p.kind = Kind::abc_3d;
  p.yaw = std::numbers::pi / 4.0;
  p.pitch = std::atan(std::numbers::sqrt2);
  return p;
}

SvgProjection SvgProjection::oblique() {
  SvgProjection p;
  p.kind = Kind::abc_3d;
  p.yaw = std::numbers::pi / 6.0;
  p.pitch = 1.1;
  return p;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 70.0;
constexpr const char* kStable = "#008000";
constexpr const char* kUnstable = "#c00000";

struct P2 {
  double x, y;
};

std::size_t component_index(ProblemKind problem, const std::string& name) {
  static const std::array<const char*, 7> names{"lambda", "a", "b", "c", "A", "B", "C"};
  const std::size_t limit = problem == ProblemKind::triangle ? 4 : 7;
  for (std::size_t i = 0; i < limit; ++i)
    if (name == names[i]) return i;
  throw UsageError("unknown component '" + name + "' for a " + std::string(to_string(problem)) + " diagram");
}

class Projector {
 public:
  Projector(const Diagram& d, const SvgProjection& proj) : proj_(proj) {
    if (proj.kind == SvgProjection::Kind::param_vs_component) index_ = component_index(d.problem, proj.component);
  }

  P2 operator()(const linalg::Vector& x, double p) const {
    if (proj_.kind == SvgProjection::Kind::param_vs_component) return {p, x[index_]};
    // Rotate (a, b, c) about z by yaw, then about x by pitch; keep (x, y).
    const double cy = std::cos(proj_.yaw), sy = std::sin(proj_.yaw);
    const double cp = std::cos(proj_.pitch), sp = std::sin(proj_.pitch);
    const double x1 = x[1] * cy - x[2] * sy;
    const double y1 = x[1] * sy + x[2] * cy;
    const double z1 = x[3];
    return {x1, y1 * cp - z1 * sp};
  }

 private:
  SvgProjection proj_;
  std::size_t index_ = 1;
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Run {
  bool stable;
  std::vector<P2> pts;
};

}  // namespace

std::string render_svg(const Diagram& d, const SvgProjection& projection) {
  const Projector project(d, projection);

  // Split every branch into single-colour runs; a colour change happens at
  // the recorded event between the two points, or midway if none is found.
  std::vector<Run> runs;
  for (const auto& b : d.branches) {
    if (b.points.empty()) continue;
    std::vector<const BifurcationEvent*> evs;
    for (const auto& e : d.events)
      if (e.source_branch == b.id) evs.push_back(&e);
    std::vector<BranchPoint> pts = b.points;
    if (b.closed) pts.push_back(pts.front());
    auto stable = [](const BranchPoint& p) { return p.stability == Stability::stable; };
    Run cur{stable(pts[0]), {project(pts[0].x, pts[0].parameter)}};
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const P2 q = project(pts[i].x, pts[i].parameter);
      if (stable(pts[i]) == cur.stable) {
        cur.pts.push_back(q);
        continue;
      }
      P2 split{0.5 * (cur.pts.back().x + q.x), 0.5 * (cur.pts.back().y + q.y)};
      const double s0 = pts[i - 1].s, s1 = pts[i].s;
      for (const auto* e : evs)
        if (e->s >= std::min(s0, s1) - 1e-12 && e->s <= std::max(s0, s1) + 1e-12) {
          split = project(e->x, e->parameter);
          break;
        }
      cur.pts.push_back(split);
      runs.push_back(std::move(cur));
      cur = Run{stable(pts[i]), {split, q}};
    }
    runs.push_back(std::move(cur));
  }
  if (runs.empty()) throw UsageError("nothing to render: the diagram has no branch points");

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& r : runs)
    for (const auto& p : r.pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  auto pad = [](double& lo, double& hi) {
    const double span = hi - lo;
    const double extra = span > 0.0 ? 0.04 * span : std::max(1e-3, 0.05 * std::abs(lo));
    lo -= extra;
    hi += extra;
  };
  pad(xmin, xmax);
  pad(ymin, ymax);
  if (projection.kind == SvgProjection::Kind::abc_3d) {
    // Equal scale on both axes so the view is not distorted.
    const double sx = (xmax - xmin) / (kWidth - 2 * kMargin);
    const double sy = (ymax - ymin) / (kHeight - 2 * kMargin);
    const double s = std::max(sx, sy);
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    xmin = cx - 0.5 * s * (kWidth - 2 * kMargin);
    xmax = cx + 0.5 * s * (kWidth - 2 * kMargin);
    ymin = cy - 0.5 * s * (kHeight - 2 * kMargin);
    ymax = cy + 0.5 * s * (kHeight - 2 * kMargin);
  }
  auto sx = [&](double x) { return kMargin + (x - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin); };
  auto sy = [&](double y) { return kHeight - kMargin - (y - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin); };

  std::string svg;
  svg += fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);
  const std::string title =
      projection.kind == SvgProjection::Kind::param_vs_component
          ? projection.component + " vs " + (d.problem == ProblemKind::triangle ? "A" : "V")
          : fmt::format("abc projection (yaw {:.4f}, pitch {:.4f})", projection.yaw, projection.pitch);
  svg += fmt::format("<title>{}</title>\n", escape(title));
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);

  // Axes with five ticks each.
  svg += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", kMargin, kHeight - kMargin,
                     kWidth - kMargin, kHeight - kMargin);
  svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", kMargin, kMargin, kMargin,
                     kHeight - kMargin);
  for (int k = 0; k <= 4; ++k) {
    auto snap = [](double v, double span) { return std::abs(v) < 1e-9 * span ? 0.0 : v; };
    const double xv = snap(xmin + (xmax - xmin) * k / 4.0, xmax - xmin);
    const double yv = snap(ymin + (ymax - ymin) * k / 4.0, ymax - ymin);
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\"/>\n", sx(xv),
                       kHeight - kMargin, kHeight - kMargin + 5);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" stroke=\"none\">{:.4g}</text>\n", sx(xv),
                       kHeight - kMargin + 20, xv);
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>\n", kMargin - 5, sy(yv),
                       kMargin);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" stroke=\"none\">{:.4g}</text>\n",
                       kMargin - 8, sy(yv) + 4, yv);
  }
  std::string xlabel = d.problem == ProblemKind::triangle ? "A" : "V";
  std::string ylabel = projection.component;
  if (projection.kind == SvgProjection::Kind::abc_3d) {
    xlabel = "screen x";
    ylabel = "screen y";
  }
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" stroke=\"none\">{}</text>\n",
                     0.5 * kWidth, kHeight - 20.0, escape(xlabel));
  svg += fmt::format(
      "<text x=\"20\" y=\"{:.2f}\" text-anchor=\"middle\" stroke=\"none\" transform=\"rotate(-90 20 {:.2f})\">{}</text>\n",
      0.5 * kHeight, 0.5 * kHeight, escape(ylabel));
  svg += "</g>\n";

  if (projection.kind == SvgProjection::Kind::abc_3d) {
    // Screen images of the a, b, c unit directions.
    svg += "<g class=\"triad\" stroke=\"#555555\" font-family=\"sans-serif\" font-size=\"12\">\n";
    const std::array<const char*, 3> names{"a", "b", "c"};
    for (std::size_t i = 0; i < 3; ++i) {
      linalg::Vector e(d.problem == ProblemKind::triangle ? 4 : 7);
      e[i + 1] = 1.0;
      const P2 q = project(e, 0.0);
      const double ox = kWidth - kMargin - 50, oy = kMargin + 50;
      svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", ox, oy, ox + 35 * q.x,
                         oy - 35 * q.y);
      svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" stroke=\"none\">{}</text>\n", ox + 42 * q.x, oy - 42 * q.y,
                         names[i]);
    }
    svg += "</g>\n";
  }

  svg += "<g class=\"branches\" fill=\"none\" stroke-width=\"1.5\">\n";
  for (const auto& r : runs) {
    svg += fmt::format("<polyline class=\"{}\" stroke=\"{}\" points=\"", r.stable ? "stable" : "unstable",
                       r.stable ? kStable : kUnstable);
    for (std::size_t i = 0; i < r.pts.size(); ++i)
      svg += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", sx(r.pts[i].x), sy(r.pts[i].y));
    svg += "\"/>\n";
  }
  svg += "</g>\n";

  svg += "<g class=\"events\" stroke=\"black\" stroke-width=\"1\">\n";
  for (const auto& e : d.events) {
    const P2 q = project(e.x, e.parameter);
    if (e.kind == EventKind::turning)
      svg += fmt::format("<rect class=\"turning\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"7\" height=\"7\" fill=\"#1f4fbf\"/>\n",
                         sx(q.x) - 3.5, sy(q.y) - 3.5);
    else
      svg += fmt::format("<circle class=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"white\"/>\n",
                         to_string(e.kind), sx(q.x), sy(q.y));
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace cluster_bifurc
