#include "cluster_bifurc/continuation.hpp"

#include <algorithm>
#include <cmath>

#include "cluster_bifurc/errors.hpp"

namespace cluster_bifurc {

using linalg::Matrix;
using linalg::Vector;

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

// Order of the subgroup fixing x up to a loose tolerance; used to notice a
// step that jumped onto a more symmetric branch.
std::size_t symmetry_order(const System& sys, const Vector& x) {
  return isotropy(group_for(sys.kind()), x, 1e-7).order();
}

// Sign of det [K; t^T] for the extended Jacobian K. With a continuously
// oriented tangent it flips at branch points inside the subspace, not at folds.
int bordered_sign(const System& sys, const Matrix& proj, const Vector& x, double p, const Vector& t);

Matrix complement(const Matrix& proj) { return Matrix::identity(proj.rows()) - proj; }

// [P J P + (I - P) | P F_p], n x (n+1)
Matrix extended_jacobian(const System& sys, const Matrix& proj, const Vector& x, double p) {
  const std::size_t n = x.size();
  const Matrix m = proj * sys.jacobian(x, p) * proj + complement(proj);
  const Vector fp = proj * sys.residual_dp(p);
  Matrix k(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k(i, j) = m(i, j);
    k(i, n) = fp[i];
  }
  return k;
}

bool is_numerical(const std::exception& e) {
  return dynamic_cast<const NumericalError*>(&e) != nullptr || dynamic_cast<const DomainError*>(&e) != nullptr;
}

int bordered_sign(const System& sys, const Matrix& proj, const Vector& x, double p, const Vector& t) {
  const std::size_t n = x.size();
  const Matrix k = extended_jacobian(sys, proj, x, p);
  Matrix m(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= n; ++j) m(i, j) = k(i, j);
  for (std::size_t j = 0; j <= n; ++j) m(n, j) = t[j];
  return linalg::determinant(m) < 0.0 ? -1 : 1;
}

}  // namespace

void ContinuationSettings::validate() const {
  if (!(h_min > 0.0) || !(h_min <= h0) || !(h0 <= h_max))
    throw UsageError("continuation: need 0 < h_min <= h0 <= h_max");
  if (!(newton_tol > 0.0)) throw UsageError("continuation: newton_tol must be positive");
  if (newton_max_iters < 1) throw UsageError("continuation: newton_max_iters must be >= 1");
  if (!(growth >= 1.0)) throw UsageError("continuation: growth must be >= 1");
  if (!(shrink > 0.0 && shrink < 1.0)) throw UsageError("continuation: shrink must lie in (0, 1)");
  if (contraction_target < 1) throw UsageError("continuation: contraction_target must be >= 1");
  if (max_points < 2) throw UsageError("continuation: max_points must be >= 2");
}

double residual_norm(const System& sys, const Vector& x, double p) {
  const Vector f = sys.residual(x, p);
  double r = std::abs(f[0]) / std::max(1.0, sys.constraint_scale(p));
  for (std::size_t i = 1; i < f.size(); ++i) r = std::max(r, std::abs(f[i]));
  return r;
}

Corrected newton_correct(const System& sys, const Matrix& proj, Vector x, double p, const std::optional<Chart>& chart,
                         const ContinuationSettings& settings) {
  const std::size_t n = x.size();
  const Matrix comp = complement(proj);
  for (int it = 0;; ++it) {
    if (!sys.feasible(x) || !(p > 0.0)) throw DomainExit("corrector left the feasible set");
    const Vector f = sys.residual(x, p);
    const double res = residual_norm(sys, x, p);
    const double chart_res = chart ? linalg::dot(chart->t, extend(x, p) - chart->y_ref) - chart->h : 0.0;
    if (!std::isfinite(res) || !std::isfinite(chart_res)) throw CorrectorFailure("corrector produced non-finite values");
    if (res <= settings.newton_tol && std::abs(chart_res) <= settings.newton_tol) return {x, p, it};
    if (it >= settings.newton_max_iters)
      throw CorrectorFailure("corrector did not converge in " + std::to_string(settings.newton_max_iters) +
                             " iterations (residual " + std::to_string(res) + ")");

    const Vector rhs = -(proj * f);
    if (chart) {
      const Matrix k = extended_jacobian(sys, proj, x, p);
      Matrix big(n + 1, n + 1);
      Vector b(n + 1);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) big(i, j) = k(i, j);
        b[i] = rhs[i];
      }
      for (std::size_t j = 0; j <= n; ++j) big(n, j) = chart->t[j];
      b[n] = -chart_res;
      const Vector dy = linalg::lu_factor(big).solve(b);
      x += head(dy);
      p += dy[n];
    } else {
      const Matrix m = proj * sys.jacobian(x, p) * proj + comp;
      x += linalg::lu_factor(m).solve(rhs);
    }
    x = proj * x;
  }
}

Vector branch_tangent(const System& sys, const Matrix& proj, const Vector& x, double p,
                      const std::optional<Vector>& orient) {
  Vector t = linalg::null_vector(extended_jacobian(sys, proj, x, p));
  if (orient && linalg::dot(t, *orient) < 0.0) t = -t;
  return t;
}

BranchPoint make_point(const System& sys, const Vector& x, double p, double s) {
  BranchPoint pt;
  pt.x = x;
  pt.parameter = p;
  pt.s = s;
  const Classification c = sys.classify(x, p);
  pt.stability = c.stability;
  pt.shape = c.shape;
  const auto eig = linalg::sym_eigen(sys.jacobian(x, p));
  pt.inertia = static_cast<int>(linalg::negative_count(eig));
  pt.det_sign = pt.inertia % 2 == 0 ? 1 : -1;
  return pt;
}

namespace {

// Distance from y0 to the segment [a, b], relative to the segment length.
double relative_segment_distance(const Vector& y0, const Vector& a, const Vector& b) {
  const Vector seg = b - a;
  const double len2 = linalg::dot(seg, seg);
  if (len2 == 0.0) return std::numeric_limits<double>::infinity();
  const double tau = linalg::dot(y0 - a, seg) / len2;
  if (tau < 0.0 || tau > 1.0) return std::numeric_limits<double>::infinity();
  return linalg::norm(y0 - a - tau * seg) / std::sqrt(len2);
}

constexpr double kMaxTurnCos = 0.94;  // about 20 degrees between consecutive tangents

}  // namespace

TraceResult trace_branch(const System& sys, const Matrix& proj, const Vector& x0, double p0, const Vector& direction,
                         const ContinuationSettings& settings, const Window& window, EventKind bifurcation_kind) {
  settings.validate();
  TraceResult out;
  out.branch.points.push_back(make_point(sys, x0, p0, 0.0));
  Vector y = extend(x0, p0);
  Vector t = branch_tangent(sys, proj, x0, p0, direction);
  out.tangents.push_back(t);
  const Vector y_start = y;
  const Vector t_start = t;
  double h = settings.h0;
  double s = 0.0;
  const std::size_t n = x0.size();
  std::size_t order = symmetry_order(sys, x0);

  while (true) {
    if (static_cast<int>(out.branch.points.size()) >= settings.max_points) {
      out.stop_reason = "max_points";
      break;
    }
    const Vector y_pred = y + h * t;
    const bool at_floor = h <= settings.h_min * (1.0 + 1e-12);
    Corrected c;
    try {
      c = newton_correct(sys, proj, head(y_pred), y_pred[n], Chart{y, t, h}, settings);
    } catch (const std::exception& e) {
      if (!is_numerical(e)) throw;
      if (at_floor) {
        if (out.branch.points.size() == 1)
          throw TraceAbort(std::string("first continuation step failed at minimum step: ") + e.what());
        out.stop_reason = dynamic_cast<const DomainExit*>(&e) ? "domain" : "step";
        break;
      }
      h = std::max(h * settings.shrink, settings.h_min);
      continue;
    }
    Vector y_new = extend(c.x, c.p);
    Vector t_new;
    try {
      t_new = branch_tangent(sys, proj, c.x, c.p, t);
    } catch (const std::exception& e) {
      if (!is_numerical(e)) throw;
      if (at_floor) {
        out.stop_reason = "step";
        break;
      }
      h = std::max(h * settings.shrink, settings.h_min);
      continue;
    }
    const bool drifted = linalg::norm(y_new - y_pred) > 0.5 * h;
    const bool turned = linalg::dot(t_new, t) < kMaxTurnCos;
    const std::size_t order_new = symmetry_order(sys, c.x);
    const bool jumped = order_new > order;
    if ((drifted || turned || jumped) && !at_floor) {
      h = std::max(h * settings.shrink, settings.h_min);
      continue;
    }

    if (!window.contains(c.p)) {
      // Land exactly on the window edge when the branch crosses it.
      const double edge = c.p > window.hi ? window.hi : window.lo;
      if (std::abs(t[n]) > 1e-3) {
        try {
          const double step = (edge - y[n]) / t[n];
          Vector guess = head(y + step * t);
          const Corrected e = newton_correct(sys, proj, guess, edge, std::nullopt, settings);
          const Vector y_edge = extend(e.x, e.p);
          if (linalg::norm(y_edge - y) <= 2.0 * h) {
            s += linalg::norm(y_edge - y);
            out.branch.points.push_back(make_point(sys, e.x, e.p, s));
            out.tangents.push_back(branch_tangent(sys, proj, e.x, e.p, t));
          }
        } catch (const std::exception& ex) {
          if (!is_numerical(ex)) throw;
        }
      }
      out.stop_reason = "window";
      break;
    }

    // Back at the start: the branch is a closed curve.
    if (out.branch.points.size() >= 8 && s > 2.0 * h &&
        relative_segment_distance(y_start, y, y_new) <= 0.25 && std::abs(linalg::dot(t_start, t_new)) > 0.9) {
      out.branch.closed = true;
      out.stop_reason = "closed";
      break;
    }

    s += linalg::norm(y_new - y);
    out.branch.points.push_back(make_point(sys, c.x, c.p, s));
    out.tangents.push_back(t_new);
    y = y_new;
    t = t_new;
    order = order_new;
    if (c.iterations < settings.contraction_target)
      h = std::min(h * settings.growth, settings.h_max);
    else if (c.iterations > settings.contraction_target)
      h = std::max(h * settings.shrink, settings.h_min);
  }

  if (settings.detection)
    out.events = detect_events(sys, proj, out.branch, out.tangents, settings, bifurcation_kind);
  return out;
}

std::optional<BifurcationEvent> detect_and_localize(const System& sys, const Matrix& proj, const BranchPoint& a,
                                                    const Vector& ta, const BranchPoint& b, const Vector& tb,
                                                    const ContinuationSettings& settings, EventKind bifurcation_kind) {
  const std::size_t n = a.x.size();
  const bool turning = ta[n] * tb[n] < 0.0;
  if (!turning && a.inertia == b.inertia) return std::nullopt;

  const Vector ya = extend(a.x, a.parameter);
  const Vector yb = extend(b.x, b.parameter);
  double span = linalg::dot(ta, yb - ya);
  if (!(span > 0.0)) span = linalg::norm(yb - ya);
  const std::size_t k = static_cast<std::size_t>(std::min(a.inertia, b.inertia));

  BifurcationEvent ev;
  auto point_at = [&](double sigma) {
    const Vector guess = ya + (sigma / span) * (yb - ya);
    return newton_correct(sys, proj, head(guess), guess[n], Chart{ya, ta, sigma}, settings);
  };
  auto monitor = [&](const Corrected& c) {
    if (turning) return branch_tangent(sys, proj, c.x, c.p, ta)[n];
    return linalg::sym_eigen(sys.jacobian(c.x, c.p)).values[k];
  };

  Corrected lo_pt{a.x, a.parameter, 0};
  Corrected hi_pt{b.x, b.parameter, 0};
  double lo = 0.0, hi = span;
  double flo = turning ? ta[n] : linalg::sym_eigen(sys.jacobian(a.x, a.parameter)).values[k];
  double fhi = turning ? tb[n] : linalg::sym_eigen(sys.jacobian(b.x, b.parameter)).values[k];
  Corrected best = std::abs(flo) < std::abs(fhi) ? lo_pt : hi_pt;
  double best_sigma = std::abs(flo) < std::abs(fhi) ? lo : hi;

  if ((flo < 0.0) == (fhi < 0.0)) {
    // The monitored quantity did not change sign (e.g. an inertia change by
    // an eigenvalue other than the tracked one); keep the better endpoint.
    ev.reduced_precision = true;
  } else {
    // Illinois-modified regula falsi: secant steps that stay bracketed.
    int side = 0;
    for (int it = 0; it < 200; ++it) {
      const double width = hi - lo;
      const double p_scale = std::max(std::abs(best.p), 1e-300);
      if (width <= 1e-10 * p_scale) break;
      double sigma = (lo * fhi - hi * flo) / (fhi - flo);
      if (!(sigma > lo && sigma < hi)) sigma = 0.5 * (lo + hi);
      Corrected c;
      try {
        c = point_at(sigma);
      } catch (const std::exception& e) {
        if (!is_numerical(e)) throw;
        ev.reduced_precision = true;
        break;
      }
      const double f = monitor(c);
      best = c;
      best_sigma = sigma;
      if (f == 0.0) break;
      if ((f < 0.0) == (flo < 0.0)) {
        lo = sigma;
        flo = f;
        if (side == -1) fhi *= 0.5;
        side = -1;
      } else {
        hi = sigma;
        fhi = f;
        if (side == 1) flo *= 0.5;
        side = 1;
      }
    }
  }

  // A fold where another branch crosses (e.g. a loop touching a more
  // symmetric branch at its extreme parameter) is reported as a bifurcation.
  const bool crossing = turning && bordered_sign(sys, proj, a.x, a.parameter, ta) !=
                                       bordered_sign(sys, proj, b.x, b.parameter, tb);
  const bool fold = turning && !crossing;
  ev.kind = fold ? EventKind::turning : bifurcation_kind;
  ev.parameter = best.p;
  ev.x = best.x;
  ev.s = a.s + best_sigma;
  ev.label = fold ? "fold" : "";
  const auto eig = linalg::sym_eigen(sys.jacobian(best.x, best.p));
  const std::size_t k0 = k;
  const std::size_t k1 = std::max<std::size_t>(k0 + 1, static_cast<std::size_t>(std::max(a.inertia, b.inertia)));
  for (std::size_t i = k0; i < k1 && i < n; ++i) ev.kernel.push_back(eig.vectors.col(i));
  ev.kernel_dim = static_cast<int>(ev.kernel.size());
  return ev;
}

std::vector<BifurcationEvent> detect_events(const System& sys, const Matrix& proj, const Branch& branch,
                                            const std::vector<Vector>& tangents, const ContinuationSettings& settings,
                                            EventKind bifurcation_kind) {
  std::vector<BifurcationEvent> events;
  for (std::size_t i = 0; i + 1 < branch.points.size(); ++i) {
    auto ev = detect_and_localize(sys, proj, branch.points[i], tangents[i], branch.points[i + 1], tangents[i + 1],
                                  settings, bifurcation_kind);
    if (!ev) continue;
    ev->source_branch = branch.id;
    // Merge duplicates found on adjacent segments.
    if (!events.empty() &&
        std::abs(events.back().parameter - ev->parameter) <= 1e-6 * std::abs(ev->parameter) &&
        linalg::norm(events.back().x - ev->x) <= 1e-4 * std::max(1.0, linalg::norm(ev->x))) {
      // Same point seen from both sides; a bifurcation outranks a fold.
      if (events.back().kind == EventKind::turning && ev->kind != EventKind::turning) {
        ev->id = events.back().id;
        events.back() = std::move(*ev);
      }
      continue;
    }
    events.push_back(std::move(*ev));
  }
  return events;
}

namespace {

// Symmetrize a numerically computed kernel vector under the elements that map
// it to +-itself, so that exact isotropy tests apply.
Vector clean_direction(const Group& stabilizer, const Vector& v) {
  const Vector u = linalg::normalized(v);
  Vector acc(u.size());
  int count = 0;
  for (const auto& p : stabilizer.elements()) {
    const Vector pu = p.apply(u);
    if (linalg::norm_inf(pu - u) <= 1e-6) {
      acc += pu;
      ++count;
    } else if (linalg::norm_inf(pu + u) <= 1e-6) {
      acc -= pu;
      ++count;
    }
  }
  if (count == 0) return u;
  return linalg::normalized((1.0 / count) * acc);
}

constexpr double kSymTol = 1e-9;

}  // namespace

Reduction switching_reduction(const Group& g, const Vector& x0, const Vector& v) {
  const Group h0 = isotropy(g, x0, kSymTol);
  const Vector u = clean_direction(h0, v);
  Group h = isotropy(h0, u, kSymTol);
  RationalMatrix p = fixed_projection(h);
  const std::size_t dim = p.trace_int();
  Matrix pd = p.to_double();
  return {std::move(h), std::move(p), pd, dim};
}

SwitchResult branch_switch(const System& sys, const BifurcationEvent& event, const Vector& v, const Group& group,
                           const BaseCurve& base, const ContinuationSettings& settings, double epsilon) {
  SwitchResult out;
  const Vector& x0 = event.x;
  const double p0 = event.parameter;
  const std::size_t n = x0.size();
  const Group h0 = isotropy(group, x0, kSymTol);
  const Reduction red = switching_reduction(group, x0, v);
  const Matrix& proj = red.projection;
  const Vector u = linalg::normalized(proj * clean_direction(h0, v));
  out.mirror = negating_element(h0, u, kSymTol);

  auto reduced = [&](const Vector& x) { return proj * sys.residual(x, p0); };
  const double tau = 1e-4;
  const Vector second = reduced(x0 + tau * u) - 2.0 * reduced(x0) + reduced(x0 - tau * u);
  const double a0 = linalg::dot(u, second) / (tau * tau);
  const double tau_p = 1e-4 * std::max(1.0, std::abs(p0));
  const Matrix lp = proj * sys.jacobian(base(p0 + tau_p), p0 + tau_p) * proj;
  const Matrix lm = proj * sys.jacobian(base(p0 - tau_p), p0 - tau_p) * proj;
  const double b0 = linalg::dot(u, (lp - lm) * u) / (2.0 * tau_p);

  out.data.v = u;
  out.data.v_star = u;  // the Jacobian is symmetric
  out.data.a0 = a0;
  out.data.b0 = b0;
  out.data.epsilon = epsilon;
  if (!(std::abs(b0) > 1e-8)) {
    out.message = "transversality fails: critical eigenvalue derivative " + std::to_string(b0);
    return out;
  }

  const Vector y0 = extend(x0, p0);
  auto direction = [&](const Corrected& c) { return linalg::normalized(extend(c.x, c.p) - y0); };
  auto pinned = [&](double offset, const Vector& guess, double p_guess) {
    Vector t(n + 1);
    for (std::size_t i = 0; i < n; ++i) t[i] = u[i];
    return newton_correct(sys, proj, guess, p_guess, Chart{y0, t, offset}, settings);
  };

  out.data.pitchfork = out.mirror.has_value() || std::abs(a0) < 1e-8;
  if (out.data.pitchfork) {
    try {
      const Corrected c = pinned(epsilon, x0 + epsilon * u, p0);
      out.seeds.push_back({c.x, c.p, direction(c)});
    } catch (const std::exception& e) {
      if (!is_numerical(e)) throw;
      out.message = std::string("pitchfork seed failed: ") + e.what();
      return out;
    }
  } else {
    const double m = -2.0 * b0 / a0;
    out.data.m = m;
    double e = epsilon;
    if (std::abs(e * m) > 1e-2) e = 1e-2 / std::abs(m);
    out.data.epsilon = e;
    for (double sgn : {1.0, -1.0}) {
      const double es = sgn * e;
      const double p = p0 + es;
      const Vector g = base(p);
      const Vector guess = g + (es * m) * u;
      std::optional<Corrected> c;
      try {
        c = newton_correct(sys, proj, guess, p, std::nullopt, settings);
        // Collapsed back onto the base branch?
        if (std::abs(linalg::dot(u, c->x - g)) < 0.1 * std::abs(es * m)) c.reset();
      } catch (const std::exception& ex) {
        if (!is_numerical(ex)) throw;
      }
      if (!c) {
        try {
          c = pinned(es * m, guess, p);
        } catch (const std::exception& ex) {
          if (!is_numerical(ex)) throw;
        }
      }
      if (c) out.seeds.push_back({c->x, c->p, direction(*c)});
    }
    if (out.seeds.empty()) {
      out.message = "no transcritical seed converged";
      return out;
    }
  }
  out.ok = true;
  return out;
}

}  // namespace cluster_bifurc
