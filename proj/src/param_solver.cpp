#include "csf/param_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace csf {

void StepController::validate() const {
  require(dt_max > 0.0, ErrorCode::InvalidConfig, "dt_max must be positive");
  require(cfl > 0.0 && cfl <= 0.5, ErrorCode::InvalidConfig, "cfl must lie in (0, 0.5]");
  require(remesh_ratio >= 2.0, ErrorCode::InvalidConfig, "remesh_ratio must be >= 2");
  require(target_edge >= 0.0, ErrorCode::InvalidConfig, "target_edge must be non-negative");
  require(omega >= 0.0 && omega <= 1.0, ErrorCode::InvalidConfig, "omega must lie in [0, 1]");
  require(relax_ratio >= 1.0, ErrorCode::InvalidConfig, "relax_ratio must be >= 1");
}

namespace {

struct Neighbours {
  std::optional<Vec2> prev;
  std::optional<Vec2> next;
};

Neighbours neighbours(std::span<const Vec2> v, bool closed, EndKind front, EndKind back, std::size_t i) {
  const std::size_t n = v.size();
  Neighbours nb;
  if (closed) {
    nb.prev = v[(i + n - 1) % n];
    nb.next = v[(i + 1) % n];
    return nb;
  }
  if (i > 0) nb.prev = v[i - 1];
  else if (front == EndKind::AxisMirror) nb.prev = mirror(v[1]);
  if (i + 1 < n) nb.next = v[i + 1];
  else if (back == EndKind::AxisMirror) nb.next = mirror(v[n - 2]);
  return nb;
}

Neighbours neighbours(const PolyCurve& c, std::size_t i) {
  return neighbours(c.vertices(), c.closed(), c.front(), c.back(), i);
}

// Unit tangents from length-weighted neighbouring edge directions.
std::vector<Vec2> tangents(std::span<const Vec2> v, bool closed, EndKind front, EndKind back) {
  std::vector<Vec2> t(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto nb = neighbours(v, closed, front, back, i);
    Vec2 d;
    if (nb.prev && nb.next) {
      const Vec2 e1 = v[i] - *nb.prev, e2 = *nb.next - v[i];
      const double l1 = norm(e1), l2 = norm(e2);
      d = e1 * (l2 / l1) + e2 * (l1 / l2);
    } else {
      d = nb.next ? *nb.next - v[i] : v[i] - *nb.prev;
    }
    const double len = norm(d);
    t[i] = len > 0.0 ? d * (1.0 / len) : Vec2{1.0, 0.0};
  }
  return t;
}

Vec2 hermite(Vec2 p0, Vec2 t0, Vec2 p1, Vec2 t1, double u) {
  const double len = norm(p1 - p0);
  const double u2 = u * u, u3 = u2 * u;
  return p0 * (2 * u3 - 3 * u2 + 1) + t0 * (len * (u3 - 2 * u2 + u)) + p1 * (-2 * u3 + 3 * u2) +
         t1 * (len * (u3 - u2));
}

// Solves a (possibly cyclic) tridiagonal system in place of rhs.
void solve_tridiagonal(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                       std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    require(std::abs(diag[i - 1]) >= 1e-14, ErrorCode::SolverSingular, "tridiagonal pivot vanished");
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  require(std::abs(diag[n - 1]) >= 1e-14, ErrorCode::SolverSingular, "tridiagonal pivot vanished");
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

// Cyclic system with corner entries alpha = A[n-1][0] and beta = A[0][n-1],
// by Sherman-Morrison.
void solve_cyclic(const std::vector<double>& sub, const std::vector<double>& diag, const std::vector<double>& sup,
                  double alpha, double beta, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  const double gamma = -diag[0];
  std::vector<double> d = diag;
  d[0] -= gamma;
  d[n - 1] -= alpha * beta / gamma;
  std::vector<double> x = rhs;
  solve_tridiagonal(sub, d, sup, x);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  solve_tridiagonal(sub, d, sup, u);
  const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + u[0] + beta * u[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = x[i] - fact * u[i];
}

std::vector<Vec2> implicit_solve(const PolyCurve& c, double dt) {
  const auto v = c.vertices();
  const std::size_t n = v.size();
  std::vector<double> len(c.edge_count());
  for (std::size_t i = 0; i < len.size(); ++i) len[i] = norm(c.edge(i));

  std::vector<double> sub(n, 0.0), diag(n, 1.0), sup(n, 0.0), rx(n), ry(n);
  std::vector<double> sub_x, diag_x, sup_x;
  for (std::size_t i = 0; i < n; ++i) {
    rx[i] = v[i].x;
    ry[i] = v[i].y;
    double lm, lp;
    if (c.closed()) {
      lm = len[(i + n - 1) % n];
      lp = len[i];
    } else if (i == 0 || i + 1 == n) {
      continue;
    } else {
      lm = len[i - 1];
      lp = len[i];
    }
    const double m = 0.5 * (lm + lp);
    sub[i] = -dt / lm;
    sup[i] = -dt / lp;
    diag[i] = m + dt / lm + dt / lp;
    rx[i] *= m;
    ry[i] *= m;
  }
  if (c.closed()) {
    const double alpha = sup[n - 1], beta = sub[0];
    auto s = sub, p = sup;
    s[0] = 0.0;
    p[n - 1] = 0.0;
    solve_cyclic(s, diag, p, alpha, beta, rx);
    solve_cyclic(s, diag, p, alpha, beta, ry);
  } else {
    // x rows of mirror ends stay on the axis; y rows see the ghost vertex.
    sub_x = sub;
    diag_x = diag;
    sup_x = sup;
    if (c.front() == EndKind::AxisMirror) {
      rx[0] = 0.0;
      const double l = len[0];
      diag[0] = l + 2.0 * dt / l;
      sup[0] = -2.0 * dt / l;
      ry[0] *= l;
    }
    if (c.back() == EndKind::AxisMirror) {
      rx[n - 1] = 0.0;
      const double l = len[n - 2];
      diag[n - 1] = l + 2.0 * dt / l;
      sub[n - 1] = -2.0 * dt / l;
      ry[n - 1] *= l;
    }
    solve_tridiagonal(sub_x, diag_x, sup_x, rx);
    solve_tridiagonal(sub, diag, sup, ry);
  }
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {rx[i], ry[i]};
  return out;
}

PolyCurve rebuild(const PolyCurve& like, std::vector<Vec2> v) {
  return like.closed() ? PolyCurve::closed_curve(std::move(v))
                       : PolyCurve::open_curve(std::move(v), like.front(), like.back());
}

bool movable(const PolyCurve& c, std::size_t i) { return c.closed() || (i > 0 && i + 1 < c.size()); }

std::vector<Vec2> relax(const PolyCurve& c, double omega, double ratio) {
  const auto v = c.vertices();
  const std::size_t n = v.size();
  const auto t = tangents(v, c.closed(), c.front(), c.back());
  std::vector<Vec2> out(v.begin(), v.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (!movable(c, i)) continue;
    const std::size_t ip = (i + n - 1) % n, in = (i + 1) % n;
    const double lm = norm(v[i] - v[ip]), lp = norm(v[in] - v[i]);
    if (std::max(lm, lp) < ratio * std::min(lm, lp)) continue;
    const double d = 0.5 * omega * (lp - lm);
    if (d > 0.0) out[i] = hermite(v[i], t[i], v[in], t[in], d / lp);
    else if (d < 0.0) out[i] = hermite(v[ip], t[ip], v[i], t[i], 1.0 + d / lm);
  }
  return out;
}

// Collapses runs of short edges and splits long edges at Hermite points.
// Both rules depend only on edge lengths, so a mirror-symmetric polygon stays
// symmetric.
std::vector<Vec2> adapt(const PolyCurve& c, double h) {
  const auto v = c.vertices();
  const std::size_t n = v.size();
  const auto t = tangents(v, c.closed(), c.front(), c.back());
  const bool closed = c.closed();
  const std::size_t ne = closed ? n : n - 1;
  std::vector<double> len(ne);
  for (std::size_t e = 0; e < ne; ++e) len[e] = norm(v[(e + 1) % n] - v[e]);
  // lengths within a relative 1e-9 tie, so mirrored edges decide alike
  auto shorter = [](double a, double b) { return a < b * (1.0 - 1e-9); };
  std::vector<char> sel(ne, 0);
  std::size_t nsel = 0;
  for (std::size_t e = 0; e < ne; ++e) {
    if (len[e] >= 0.4 * h) continue;
    const bool has_prev = closed || e > 0, has_next = closed || e + 1 < ne;
    if (has_prev && shorter(len[(e + ne - 1) % ne], len[e])) continue;
    if (has_next && shorter(len[(e + 1) % ne], len[e])) continue;
    sel[e] = 1;
    ++nsel;
  }

  std::vector<Vec2> out, tan;
  out.reserve(n + 16);
  tan.reserve(n + 16);
  if (nsel == 0 || nsel == ne || n < 4) {
    out.assign(v.begin(), v.end());
    tan = t;
  } else {
    // walk vertices from the start of an unselected edge so no run wraps
    std::size_t start = 0;
    if (closed)
      while (sel[(start + ne - 1) % ne]) ++start;
    std::size_t k = 0;
    while (k < n) {
      const std::size_t i = (start + k) % n;
      std::size_t j = k;  // run of selected edges from vertex k to vertex j
      while (j < (closed ? n : ne) && sel[(start + j) % ne]) ++j;
      if (j == k) {
        out.push_back(v[i]);
        tan.push_back(t[i]);
        ++k;
        continue;
      }
      const std::size_t first = (start + k) % n, last = (start + j) % n;
      if (!closed && first == 0) {
        out.push_back(v[0]);
        tan.push_back(t[0]);
        if (last == n - 1) {
          out.push_back(v[n - 1]);
          tan.push_back(t[n - 1]);
        }
      } else if (!closed && last == n - 1) {
        out.push_back(v[n - 1]);
        tan.push_back(t[n - 1]);
      } else if ((j - k) % 2 == 0) {
        const std::size_t mid = (start + k + (j - k) / 2) % n;
        out.push_back(v[mid]);
        tan.push_back(t[mid]);
      } else {
        const std::size_t a = (start + k + (j - k) / 2) % n, b = (a + 1) % n;
        out.push_back(hermite(v[a], t[a], v[b], t[b], 0.5));
        const Vec2 m = t[a] + t[b];
        const double lm = norm(m);
        tan.push_back(lm > 0.0 ? m * (1.0 / lm) : t[a]);
      }
      k = j + 1;
    }
  }

  std::vector<Vec2> res;
  res.reserve(out.size() + 16);
  const std::size_t m = out.size();
  for (std::size_t k = 0; k < m; ++k) {
    res.push_back(out[k]);
    if (!closed && k + 1 == m) break;
    const std::size_t k1 = (k + 1) % m;
    const double l = norm(out[k1] - out[k]);
    if (l <= 1.6 * h) continue;
    const int pieces = static_cast<int>(std::ceil(l / h));
    for (int q = 1; q < pieces; ++q) res.push_back(hermite(out[k], tan[k], out[k1], tan[k1], static_cast<double>(q) / pieces));
  }
  return res;
}

// Uniform arclength resampling along the Hermite interpolant.
std::vector<Vec2> global_remesh(const PolyCurve& c, double h, std::size_t min_vertices) {
  const auto v = c.vertices();
  const auto t = tangents(v, c.closed(), c.front(), c.back());
  const auto s = cumulative_length(c);
  const double total = s.back();
  const std::size_t edges = std::max<std::size_t>(min_vertices, static_cast<std::size_t>(std::ceil(total / h)));
  const std::size_t n = v.size();
  std::vector<Vec2> out;
  std::size_t seg = 0;
  const std::size_t count = c.closed() ? edges : edges + 1;
  for (std::size_t k = 0; k < count; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(edges);
    while (seg + 2 < s.size() && s[seg + 1] <= target) ++seg;
    const double u = std::clamp((target - s[seg]) / (s[seg + 1] - s[seg]), 0.0, 1.0);
    out.push_back(hermite(v[seg % n], t[seg % n], v[(seg + 1) % n], t[(seg + 1) % n], u));
  }
  if (!c.closed()) {
    out.front() = v.front();
    out.back() = v.back();
  }
  return out;
}

double mean_edge(const PolyCurve& c) { return c.length() / static_cast<double>(c.edge_count()); }

}  // namespace

std::vector<CurvatureSample> discrete_curvature(const PolyCurve& c) {
  const std::size_t n = c.size();
  std::vector<CurvatureSample> out(n);
  std::vector<bool> has(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = neighbours(c, i);
    if (!nb.prev || !nb.next) continue;
    const Vec2 e1 = c[i] - *nb.prev, e2 = *nb.next - c[i], span = *nb.next - *nb.prev;
    const double ls = norm(span);
    require(ls > PolyCurve::kMinEdge, ErrorCode::DegenerateCurve, "vertex triple has zero span");
    out[i].kappa = 2.0 * cross(e1, e2) / (norm(e1) * norm(e2) * ls);
    out[i].normal = perp_left(span * (1.0 / ls));
    has[i] = true;
  }
  if (!c.closed() && n >= 2) {
    if (!has[0]) out[0] = n > 2 ? out[1] : CurvatureSample{0.0, perp_left((c[1] - c[0]) * (1.0 / norm(c[1] - c[0])))};
    if (!has[n - 1]) out[n - 1] = n > 2 ? out[n - 2] : out[0];
  }
  return out;
}

double max_abs_curvature(const PolyCurve& c) {
  double m = 0.0;
  for (const auto& s : discrete_curvature(c)) m = std::max(m, std::abs(s.kappa));
  return m;
}

double flow_area(const PolyCurve& c) {
  const auto v = c.vertices();
  double acc = 0.0;
  if (c.closed()) {
    for (std::size_t i = 0; i < v.size(); ++i) acc += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * acc;
  }
  if (c.front() != EndKind::AxisMirror || c.back() != EndKind::AxisMirror) return 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) acc += cross(v[i], v[i + 1]);
  return acc;
}

PolyCurve implicit_curvature_step(const PolyCurve& curve, double dt) {
  require(dt > 0.0, ErrorCode::InvalidInput, "dt must be positive");
  return rebuild(curve, implicit_solve(curve, dt));
}

PolyCurve step_param(const PolyCurve& curve, double dt, const StepController& ctrl) {
  ctrl.validate();
  const double kmax = max_abs_curvature(curve);
  require(dt * kmax * kmax <= ctrl.cfl * (1.0 + 1e-9), ErrorCode::StepTooLarge, "dt exceeds cfl / kappa_max^2");
  const double h = ctrl.target_edge > 0.0 ? ctrl.target_edge : mean_edge(curve);

  std::vector<Vec2> moved;
  if (ctrl.richardson) {
    const auto full = implicit_solve(curve, dt);
    const auto half = implicit_solve(rebuild(curve, implicit_solve(curve, 0.5 * dt)), 0.5 * dt);
    moved.resize(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) moved[i] = half[i] * 2.0 - full[i];
  } else {
    moved = implicit_solve(curve, dt);
  }
  PolyCurve next = rebuild(curve, std::move(moved));
  for (std::size_t i = 0; i < next.edge_count(); ++i) {
    require(norm(next.edge(i)) >= 1e-3 * h, ErrorCode::DegenerateCurve, "edge collapsed during the step");
  }
  if (ctrl.omega > 0.0) next = rebuild(next, relax(next, ctrl.omega, ctrl.relax_ratio));
  next = rebuild(next, adapt(next, h));
  return next;
}

ParamRun evolve_param(const PolyCurve& curve, double t0, double t1, const StepController& ctrl) {
  ctrl.validate();
  require(t0 < t1, ErrorCode::InvalidInput, "evolve_param needs t0 < t1");
  StepController c = ctrl;
  if (c.target_edge <= 0.0) c.target_edge = mean_edge(curve);
  const double h = c.target_edge;

  ParamRun run;
  PolyCurve cur = curve;
  double t = t0;
  auto record = [&](const StepStats& st) {
    run.traj.push(t, cur, st);
    return !c.on_frame || c.on_frame(t, cur);
  };
  if (!record({})) {
    run.verdict = FlowVerdict::Stopped;
    run.end_time = t;
    return run;
  }
  const bool has_area = cur.closed() || (cur.front() == EndKind::AxisMirror && cur.back() == EndKind::AxisMirror);
  std::size_t frame = 1;
  auto frame_time = [&](std::size_t k) {
    return c.snapshot_dt > 0.0 ? std::min(t1, t0 + c.snapshot_dt * static_cast<double>(k)) : t1;
  };

  while (t < t1) {
    const double kmax = max_abs_curvature(cur);
    run.max_kappa_seen = std::max(run.max_kappa_seen, kmax);
    if (c.singular_kappa > 0.0 && t - t0 >= c.singular_after && kmax > c.singular_kappa) {
      run.verdict = FlowVerdict::Singular;
      if (run.traj.times.back() < t) record({0.0, kmax, false});
      break;
    }
    double dt = c.dt_max;
    if (kmax > 0.0) dt = std::min(dt, c.cfl / (kmax * kmax));
    require(dt >= 1e-12, ErrorCode::NonConvergent, "time step underflow at t = " + std::to_string(t));
    const double t_next_frame = frame_time(frame);
    bool at_frame = false;
    if (t + dt >= t_next_frame - 1e-12) {
      dt = t_next_frame - t;
      at_frame = true;
    }
    const std::size_t before = cur.size();
    cur = step_param(cur, dt, c);
    ++run.steps;
    t = at_frame ? t_next_frame : t + dt;

    // Fall back to a global remesh when local operations cannot keep up.
    double lmin = std::numeric_limits<double>::infinity(), lmax = 0.0;
    for (std::size_t i = 0; i < cur.edge_count(); ++i) {
      const double l = norm(cur.edge(i));
      lmin = std::min(lmin, l);
      lmax = std::max(lmax, l);
    }
    bool remeshed = false;
    if (lmax > c.remesh_ratio * lmin) {
      cur = rebuild(cur, global_remesh(cur, h, 3));
      remeshed = true;
    }
    const StepStats st{dt, kmax, remeshed || cur.size() != before};

    const double area = has_area ? std::abs(flow_area(cur)) : std::numeric_limits<double>::infinity();
    if ((has_area && area < 8.0 * std::numbers::pi * c.dt_max) || cur.size() < c.min_vertices) {
      run.verdict = FlowVerdict::Extinct;
      run.extinction_time = t + (has_area ? area / (2.0 * std::numbers::pi) : 0.0);
      record(st);
      break;
    }
    if (at_frame) {
      ++frame;
      if (!record(st)) {
        run.verdict = FlowVerdict::Stopped;
        break;
      }
    }
  }
  run.end_time = t;
  return run;
}

}  // namespace csf
