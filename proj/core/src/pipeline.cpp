#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

#include "cluster_bifurc/diagram.hpp"
#include "cluster_bifurc/errors.hpp"
#include "cluster_bifurc/symmetry.hpp"
#include "cluster_bifurc/version.hpp"

namespace cluster_bifurc {

using linalg::Matrix;
using linalg::Vector;

const Branch* Diagram::branch(int id) const {
  for (const auto& b : branches)
    if (b.id == id) return &b;
  return nullptr;
}

namespace {

Vector extend(const Vector& x, double p) {
  Vector y(x.size() + 1);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i];
  y[x.size()] = p;
  return y;
}

Vector head(const Vector& y) {
  Vector x(y.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i];
  return x;
}

std::size_t thread_count(const DiagramOptions& opt, std::size_t tasks) {
  std::size_t n = tasks;
  if (opt.threads > 0) {
    n = static_cast<std::size_t>(opt.threads);
  } else if (const char* env = std::getenv("CLUSTER_BIFURC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(n, tasks));
}

// Runs jobs[i]() for all i on a small pool; rethrows the first non-numerical
// failure after all threads are joined.
void run_parallel(const std::vector<std::function<void()>>& jobs, std::size_t threads) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        jobs[i]();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

struct Traced {
  Branch branch;
  std::vector<Vector> tangents;
  Matrix projection;
  std::vector<BifurcationEvent> events;
};

struct Task {
  int event_id = -1;
  Vector direction;
  BaseCurve base;
  int depth = 1;
  std::string kind;
};

struct TaskResult {
  std::optional<Traced> traced;
  std::string diagnostic;
};

void recompute_arclength(Branch& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    if (i > 0)
      s += linalg::norm(extend(b.points[i].x, b.points[i].parameter) -
                        extend(b.points[i - 1].x, b.points[i - 1].parameter));
    b.points[i].s = s;
  }
}

// Reverses a traced half (and its tangents) so it runs towards the start.
void append_reversed(Branch& out, std::vector<Vector>& tangents, const TraceResult& half,
                     const std::optional<Permutation>& mirror) {
  for (std::size_t k = half.branch.points.size(); k-- > 0;) {
    BranchPoint pt = half.branch.points[k];
    Vector t = -half.tangents[k];
    if (mirror) {
      pt.x = mirror->apply(pt.x);
      const Vector tx = mirror->apply(head(t));
      t = extend(tx, t[t.size() - 1]);
    }
    out.points.push_back(std::move(pt));
    tangents.push_back(t);
  }
}

bool near_event(const BifurcationEvent& ev, const BifurcationEvent& origin) {
  const double scale = std::max(1.0, std::abs(origin.parameter));
  return std::abs(ev.parameter - origin.parameter) <= 1e-5 * scale &&
         linalg::norm(ev.x - origin.x) <= 1e-4 * std::max(1.0, linalg::norm(origin.x));
}

TaskResult run_task(const System& sys, const Group& g, const Task& task, const BifurcationEvent& event,
                    const ContinuationSettings& settings, const Window& window) {
  TaskResult r;
  const SwitchResult sw = branch_switch(sys, event, task.direction, g, task.base, settings);
  if (!sw.ok) {
    r.diagnostic = "event " + std::to_string(event.id) + ": " + sw.message;
    return r;
  }
  const Reduction red = switching_reduction(g, event.x, task.direction);
  ContinuationSettings quiet = settings;
  quiet.detection = false;

  std::vector<TraceResult> halves;
  for (const auto& seed : sw.seeds) {
    try {
      halves.push_back(trace_branch(sys, red.projection, seed.x, seed.p, seed.direction, quiet, window));
    } catch (const TraceAbort& e) {
      r.diagnostic = "event " + std::to_string(event.id) + ": " + e.what();
    }
    if (!halves.empty() && halves.back().branch.closed) break;
  }
  if (halves.empty()) return r;

  Traced t;
  t.projection = red.projection;
  t.branch.kind = task.kind;
  t.branch.parent_event = event.id;
  const Vector y0 = extend(event.x, event.parameter);
  if (halves.front().branch.closed) {
    t.branch.points = halves.front().branch.points;
    t.tangents = halves.front().tangents;
    t.branch.closed = true;
  } else {
    // Other half: second seed, or the mirror image of the first.
    if (halves.size() > 1)
      append_reversed(t.branch, t.tangents, halves[1], std::nullopt);
    else if (sw.mirror)
      append_reversed(t.branch, t.tangents, halves[0], sw.mirror);
    const bool two_sided = !t.branch.points.empty();
    if (two_sided) {
      const Vector prev = extend(t.branch.points.back().x, t.branch.points.back().parameter);
      const Vector next = extend(halves[0].branch.points.front().x, halves[0].branch.points.front().parameter);
      t.branch.points.push_back(make_point(sys, event.x, event.parameter));
      t.tangents.push_back(linalg::normalized(next - prev));
    } else {
      t.branch.points.push_back(make_point(sys, event.x, event.parameter));
      t.tangents.push_back(linalg::normalized(
          extend(halves[0].branch.points.front().x, halves[0].branch.points.front().parameter) - y0));
    }
    for (std::size_t k = 0; k < halves[0].branch.points.size(); ++k) {
      t.branch.points.push_back(halves[0].branch.points[k]);
      t.tangents.push_back(halves[0].tangents[k]);
    }
  }
  recompute_arclength(t.branch);
  if (settings.detection) {
    for (auto& ev : detect_events(sys, t.projection, t.branch, t.tangents, settings, EventKind::secondary))
      if (!near_event(ev, event)) t.events.push_back(std::move(ev));
  }
  r.traced = std::move(t);
  return r;
}

double max_segment(const Branch& b) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < b.points.size(); ++i)
    m = std::max(m, linalg::norm(extend(b.points[i + 1].x, b.points[i + 1].parameter) -
                                 extend(b.points[i].x, b.points[i].parameter)));
  return m;
}

double distance_to_polyline(const Vector& y, const Branch& b) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = b.points.size();
  const std::size_t segs = b.closed ? n : (n > 0 ? n - 1 : 0);
  if (n == 1) return linalg::norm(y - extend(b.points[0].x, b.points[0].parameter));
  for (std::size_t k = 0; k < segs; ++k) {
    const Vector a = extend(b.points[k].x, b.points[k].parameter);
    const Vector c = extend(b.points[(k + 1) % n].x, b.points[(k + 1) % n].parameter);
    const Vector seg = c - a;
    const double len2 = linalg::dot(seg, seg);
    const double tau = len2 > 0.0 ? std::clamp(linalg::dot(y - a, seg) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, linalg::norm(y - a - tau * seg));
  }
  return best;
}

// Every point of `x` (or of a group image of it) lies on an accepted branch.
bool already_known(const Group& g, const Branch& x, const std::vector<Branch>& accepted) {
  for (const auto& p : g.elements()) {
    for (const auto& b : accepted) {
      if (b.kind == "trivial") continue;
      const double tol = 0.5 * max_segment(b) + 1e-9;
      bool all = true;
      for (const auto& pt : x.points) {
        if (distance_to_polyline(extend(p.apply(pt.x), pt.parameter), b) > tol) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
  }
  return false;
}

BifurcationEvent map_event(const Permutation& p, const BifurcationEvent& ev, int branch_id) {
  BifurcationEvent m = ev;
  m.x = p.apply(ev.x);
  for (auto& k : m.kernel) k = p.apply(k);
  m.source_branch = branch_id;
  return m;
}

}  // namespace

Diagram build_diagram(ProblemKind problem, const PotentialSpec& potential, const Window& window,
                      const ContinuationSettings& settings, const DiagramOptions& options) {
  settings.validate();
  if (!(window.lo > 0.0) || !(window.hi > window.lo) || !std::isfinite(window.hi))
    throw UsageError("diagram window needs 0 < lo < hi < inf");
  if (options.max_depth < 1) throw UsageError("diagram max_depth must be >= 1");

  Diagram d;
  d.problem = problem;
  d.potential = potential;
  d.window = window;
  d.settings = settings;
  d.options = options;
  d.version = kVersion;

  const auto sys = make_system(problem, potential);
  const Group& g = group_for(problem);
  const Reduction full = full_symmetry_reduction(g);
  std::vector<Matrix> projections;  // per branch id

  auto add_events = [&](std::vector<BifurcationEvent>& evs, int branch_id) {
    for (auto& ev : evs) {
      ev.id = static_cast<int>(d.events.size());
      ev.source_branch = branch_id;
      d.events.push_back(ev);
    }
  };

  // Trivial branch.
  {
    Vector dir(sys->dim() + 1);
    dir[sys->dim()] = 1.0;
    TraceResult tr =
        trace_branch(*sys, full.projection, sys->trivial(window.lo), window.lo, dir, settings, window, EventKind::primary);
    tr.branch.id = 0;
    tr.branch.kind = "trivial";
    for (auto& ev : tr.events) {
      if (ev.kind == EventKind::turning) continue;
      const auto modes = sys->critical_modes(ev.parameter);
      const auto it = std::min_element(modes.begin(), modes.end(), [](const CriticalMode& a, const CriticalMode& b) {
        return std::abs(a.value) < std::abs(b.value);
      });
      ev.label = it->label;
    }
    d.branches.push_back(std::move(tr.branch));
    projections.push_back(full.projection);
    add_events(tr.events, 0);
  }

  // Switching, one depth level at a time.
  const int depth_limit = options.deep ? std::max(options.max_depth, 8) : options.max_depth;
  std::vector<Task> tasks;
  for (const auto& ev : d.events) {
    if (ev.kind != EventKind::primary) continue;
    for (const auto& mode : sys->critical_modes(ev.parameter)) {
      if (mode.label != ev.label) continue;
      for (const auto& v : mode.axial) {
        const System* s = sys.get();
        tasks.push_back({ev.id, v, [s](double p) { return s->trivial(p); }, 1, "primary"});
      }
    }
  }

  for (int depth = 1; depth <= depth_limit && !tasks.empty(); ++depth) {
    std::vector<TaskResult> results(tasks.size());
    std::vector<std::function<void()>> jobs;
    const std::vector<BifurcationEvent> events = d.events;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      jobs.emplace_back([&, i] {
        results[i] = run_task(*sys, g, tasks[i], events[static_cast<std::size_t>(tasks[i].event_id)], settings, window);
      });
    run_parallel(jobs, thread_count(options, jobs.size()));

    std::vector<int> new_ids;
    for (auto& r : results) {
      if (!r.diagnostic.empty()) d.diagnostics.push_back(r.diagnostic);
      if (!r.traced) continue;
      if (already_known(g, r.traced->branch, d.branches)) continue;
      const int id = static_cast<int>(d.branches.size());
      r.traced->branch.id = id;
      d.branches.push_back(r.traced->branch);
      projections.push_back(r.traced->projection);
      add_events(r.traced->events, id);
      new_ids.push_back(id);
    }

    // Secondary switching from bifurcations on the new branches.
    std::vector<Task> next;
    for (int id : new_ids) {
      const Matrix proj = projections[static_cast<std::size_t>(id)];
      for (const auto& ev : d.events) {
        if (ev.source_branch != id || ev.kind != EventKind::secondary) continue;
        // A point that already lies on another traced branch is a crossing,
        // not a new family.
        bool on_other = false;
        for (const auto& other : d.branches) {
          if (other.id == id || other.kind == "trivial") continue;
          for (const auto& p : g.elements())
            if (distance_to_polyline(extend(p.apply(ev.x), ev.parameter), other) <= 0.5 * max_segment(other) + 1e-9)
              on_other = true;
        }
        if (on_other) continue;
        const Vector t = branch_tangent(*sys, proj, ev.x, ev.parameter);
        const std::size_t n = ev.x.size();
        const Vector tx = head(t);
        const double tp = t[n];
        const Vector x_e = ev.x;
        const double p_e = ev.parameter;
        BaseCurve base = [x_e, p_e, tx, tp](double p) {
          if (std::abs(tp) < 1e-8) return x_e;
          return x_e + ((p - p_e) / tp) * tx;
        };
        for (const auto& k : ev.kernel) next.push_back({ev.id, k, base, depth + 1, "secondary"});
      }
    }
    if (depth + 1 > depth_limit) break;
    tasks = std::move(next);
  }

  // Group images of every traced family.
  const std::size_t traced = d.branches.size();
  for (std::size_t i = 1; i < traced; ++i) {
    const Branch src = d.branches[i];
    const auto images = orbit(g, src);
    for (std::size_t k = 1; k < images.size(); ++k) {
      bool dup = false;
      for (const auto& b : d.branches)
        if (same_curve(images[k], b)) dup = true;
      if (dup) continue;
      Branch img = images[k];
      img.id = static_cast<int>(d.branches.size());
      // Recover the permutation from its description to carry the events.
      std::optional<Permutation> perm;
      for (const auto& p : g.elements())
        if (p.describe(g.names()) == img.generator) perm = p;
      std::vector<BifurcationEvent> mapped;
      for (const auto& ev : d.events)
        if (ev.source_branch == src.id) mapped.push_back(map_event(*perm, ev, img.id));
      d.branches.push_back(img);
      add_events(mapped, img.id);
    }
  }
  return d;
}

}  // namespace cluster_bifurc
