#include "csf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "csf/param_solver.hpp"

namespace csf {

double signed_area_between(const SampledGraph& f1, const SampledGraph& f2) {
  const double tol = 1e-12 * std::max(1.0, std::max(std::abs(f2.y_lo()), std::abs(f2.y_hi())));
  require(f1.y_lo() >= f2.y_lo() - tol && f1.y_hi() <= f2.y_hi() + tol, ErrorCode::DomainMismatch,
          "domain of f1 must lie inside the domain of f2");
  auto diff = [&](std::size_t i) {
    const double y = f2.y_at(i);
    const double v1 = f1.contains(y, 0.0) ? f1.evaluate(y) : 0.0;
    return f2[i] - v1;
  };
  const std::size_t n = f2.size();
  double acc = 0.5 * (diff(0) + diff(n - 1));
  for (std::size_t i = 1; i + 1 < n; ++i) acc += diff(i);
  return acc * f2.dy();
}

double enclosed_area(const PolyCurve& c) {
  require(c.closed(), ErrorCode::NotClosed, "enclosed_area needs a closed curve");
  return flow_area(c);
}

double x_dy_integral(const PolyCurve& c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < c.edge_count(); ++i) {
    const Vec2 a = c[i], b = c[(i + 1) % c.size()];
    acc += 0.5 * (a.x + b.x) * (b.y - a.y);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Intersections

namespace {

constexpr double kMerge = 1e-9;

struct Seg {
  Vec2 p, q;
  std::size_t id;
  double xmin, xmax, ymin, ymax;
};

std::vector<Seg> segments(std::span<const Vec2> v, bool closed) {
  std::vector<Seg> s;
  const std::size_t m = closed ? v.size() : v.size() - 1;
  s.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 p = v[i], q = v[(i + 1) % v.size()];
    s.push_back({p, q, i, std::min(p.x, q.x), std::max(p.x, q.x), std::min(p.y, q.y), std::max(p.y, q.y)});
  }
  return s;
}

enum class HitKind { None, Proper, Touch, Overlap };
struct Hit {
  HitKind kind = HitKind::None;
  Vec2 point;
};

Hit intersect(const Seg& a, const Seg& b) {
  const Vec2 r = a.q - a.p, s = b.q - b.p;
  const double lr = norm(r), ls = norm(s);
  const double denom = cross(r, s);
  const Vec2 d = b.p - a.p;
  if (std::abs(denom) > 1e-14 * lr * ls) {
    const double tp = cross(d, s) / denom;
    const double tq = cross(d, r) / denom;
    const double ep = kMerge / lr, eq = kMerge / ls;
    if (tp < -ep || tp > 1 + ep || tq < -eq || tq > 1 + eq) return {};
    const Vec2 pt = a.p + r * std::clamp(tp, 0.0, 1.0);
    if (tp > ep && tp < 1 - ep && tq > eq && tq < 1 - eq) return {HitKind::Proper, pt};
    return {HitKind::Touch, pt};
  }
  if (std::abs(cross(d, r)) > kMerge * lr) return {};
  // Collinear: overlap of the projections onto r.
  const double t0 = dot(b.p - a.p, r) / (lr * lr), t1 = dot(b.q - a.p, r) / (lr * lr);
  const double lo = std::max(0.0, std::min(t0, t1)), hi = std::min(1.0, std::max(t0, t1));
  if (hi < lo - kMerge / lr) return {};
  if (hi - lo <= kMerge / lr) return {HitKind::Touch, a.p + r * (0.5 * (lo + hi))};
  return {HitKind::Overlap, a.p + r * (0.5 * (lo + hi))};
}

// Calls f on every pair (a in A, b in B) with overlapping bounding boxes.
void sweep_pairs(const std::vector<Seg>& A, const std::vector<Seg>& B, bool same,
                 const std::function<void(const Seg&, const Seg&)>& f) {
  std::vector<const Seg*> all;
  all.reserve(A.size() + B.size());
  for (const Seg& s : A) all.push_back(&s);
  if (!same)
    for (const Seg& s : B) all.push_back(&s);
  const Seg* b_begin = same ? nullptr : B.data();
  const Seg* b_end = same ? nullptr : B.data() + B.size();
  auto in_b = [&](const Seg* s) { return !same && s >= b_begin && s < b_end; };
  std::sort(all.begin(), all.end(), [](const Seg* x, const Seg* y) { return x->xmin < y->xmin; });
  std::vector<const Seg*> active;
  for (const Seg* s : all) {
    std::erase_if(active, [&](const Seg* a) { return a->xmax < s->xmin - kMerge; });
    for (const Seg* a : active) {
      if (a->ymax < s->ymin - kMerge || s->ymax < a->ymin - kMerge) continue;
      if (same) {
        f(*a, *s);
      } else if (in_b(a) != in_b(s)) {
        in_b(a) ? f(*s, *a) : f(*a, *s);
      }
    }
    active.push_back(s);
  }
}

double ray_angle(Vec2 from, Vec2 to) {
  double a = std::atan2(cross(from, to), dot(from, to));
  if (a < 0) a += 2.0 * kPi;
  return a;
}

// Rays of two passes through a point interleave when exactly one ray of the
// second pass lies in the counterclockwise sector between the rays of the first.
bool interleaved(Vec2 a1, Vec2 a2, Vec2 b1, Vec2 b2) {
  const double sector = ray_angle(a1, a2);
  const bool in1 = ray_angle(a1, b1) < sector;
  const bool in2 = ray_angle(a1, b2) < sector;
  return in1 != in2;
}

struct Pass {
  std::optional<Vec2> in, out;
  std::size_t seg;
};

}  // namespace

std::vector<Intersection> self_intersections(const PolyCurve& c) {
  const auto v = c.vertices();
  const std::size_t n = v.size();
  const auto segs = segments(v, c.closed());
  const std::size_t m = segs.size();
  auto adjacent = [&](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return j - i == 1 || (c.closed() && i == 0 && j == m - 1);
  };

  std::vector<Intersection> out;
  std::vector<Vec2> touches;
  sweep_pairs(segs, segs, true, [&](const Seg& a, const Seg& b) {
    if (a.id == b.id || adjacent(a.id, b.id)) return;
    const Hit h = intersect(a, b);
    if (h.kind == HitKind::Proper) out.push_back({h.point, std::min(a.id, b.id), std::max(a.id, b.id), false});
    else if (h.kind == HitKind::Overlap) out.push_back({h.point, std::min(a.id, b.id), std::max(a.id, b.id), true});
    else if (h.kind == HitKind::Touch) touches.push_back(h.point);
  });

  // Merge duplicate proper hits.
  std::vector<Intersection> merged;
  for (const auto& h : out) {
    const bool dup = std::any_of(merged.begin(), merged.end(), [&](const Intersection& g) {
      return norm(g.point - h.point) <= kMerge;
    });
    if (!dup) merged.push_back(h);
  }

  // Resolve touch clusters by the geometry of the passes through them.
  std::vector<Vec2> centers;
  for (const Vec2& p : touches) {
    if (std::none_of(centers.begin(), centers.end(), [&](Vec2 q) { return norm(p - q) <= 10 * kMerge; }))
      centers.push_back(p);
  }
  for (const Vec2& P : centers) {
    std::vector<Pass> passes;
    std::vector<bool> vertex_used(n, false);
    for (std::size_t k = 0; k < n; ++k) {
      if (norm(v[k] - P) > 10 * kMerge) continue;
      vertex_used[k] = true;
      Pass ps;
      ps.seg = k;
      if (c.closed() || k > 0) ps.in = v[(k + n - 1) % n] - P;
      if (c.closed() || k + 1 < n) ps.out = v[(k + 1) % n] - P;
      passes.push_back(ps);
    }
    for (const Seg& s : segs) {
      if (vertex_used[s.id] || vertex_used[(s.id + 1) % n]) continue;
      const Vec2 r = s.q - s.p;
      const double t = std::clamp(dot(P - s.p, r) / dot(r, r), 0.0, 1.0);
      if (norm(s.p + r * t - P) > 10 * kMerge) continue;
      passes.push_back({s.p - P, s.q - P, s.id});
    }
    for (std::size_t i = 0; i < passes.size(); ++i) {
      for (std::size_t j = i + 1; j < passes.size(); ++j) {
        const Pass& a = passes[i];
        const Pass& b = passes[j];
        const bool full = a.in && a.out && b.in && b.out;
        const bool cross = full && interleaved(*a.in, *a.out, *b.in, *b.out);
        merged.push_back({P, std::min(a.seg, b.seg), std::max(a.seg, b.seg), !cross});
      }
    }
  }
  return merged;
}

std::size_t transversal_count(const std::vector<Intersection>& hits) {
  return static_cast<std::size_t>(std::count_if(hits.begin(), hits.end(), [](const Intersection& h) { return !h.grazing; }));
}

SymmetricCrossings symmetric_crossings(const PolyCurve& half, double y_min) {
  SymmetricCrossings sc;
  const auto v = half.vertices();
  const std::size_t n = v.size();
  double scale = 1.0;
  for (const Vec2& p : v) scale = std::max(scale, std::abs(p.x));
  const double zero = 1e-12 * scale;
  int last_sign = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const int s = v[i].x > zero ? 1 : (v[i].x < -zero ? -1 : 0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign && v[i].y >= y_min) ++sc.axis;
    last_sign = s;
  }
  for (const auto& h : self_intersections(PolyCurve::open_curve({v.begin(), v.end()}, EndKind::Fixed, EndKind::Fixed))) {
    if (!h.grazing && h.point.y >= y_min) ++sc.self;
  }
  std::vector<Vec2> mv(v.begin(), v.end());
  for (Vec2& p : mv) p = mirror(p);
  const auto A = segments(v, false);
  const auto B = segments(mv, false);
  std::vector<Vec2> found;
  sweep_pairs(A, B, false, [&](const Seg& a, const Seg& b) {
    const Hit h = intersect(a, b);
    if (h.kind != HitKind::Proper || h.point.x <= kMerge || h.point.y < y_min) return;
    if (std::none_of(found.begin(), found.end(), [&](Vec2 q) { return norm(q - h.point) <= kMerge; }))
      found.push_back(h.point);
  });
  sc.mirror = found.size();
  return sc;
}

std::size_t crossing_count(const PolyCurve& curve, double y_min) {
  if (curve.is_half_curve()) return symmetric_crossings(curve, y_min).total();
  std::size_t count = 0;
  for (const auto& h : self_intersections(curve))
    if (!h.grazing && h.point.y >= y_min) ++count;
  return count;
}

// ---------------------------------------------------------------------------
// Graph features

std::vector<double> axis_crossings(const SampledGraph& g) {
  constexpr double zero = 1e-9;
  const std::size_t n = g.size();
  std::vector<double> out;
  if (std::abs(g[0]) <= zero) out.push_back(g.y_lo());
  // Interior: sign changes of the interpolant, zero runs counted once.
  int last_sign = 0;
  std::size_t last_idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int s = g[i] > zero ? 1 : (g[i] < -zero ? -1 : 0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      if (i == last_idx + 1) {
        const double f = g[last_idx] / (g[last_idx] - g[i]);
        out.push_back(g.y_at(last_idx) + f * (g.y_at(i) - g.y_at(last_idx)));
      } else {
        out.push_back(0.5 * (g.y_at(last_idx + 1) + g.y_at(i - 1)));
      }
    }
    last_sign = s;
    last_idx = i;
  }
  if (std::abs(g[n - 1]) <= zero && n > 1) out.push_back(g.y_hi());
  return out;
}

std::pair<int, int> count_extrema(const SampledGraph& g, double prominence) {
  // Collapse plateaus.
  std::vector<double> vals;
  for (double x : g.values())
    if (vals.empty() || std::abs(x - vals.back()) > 1e-9) vals.push_back(x);
  if (prominence > 0.0) {
    // Keep only turning points that reverse by more than the prominence.
    std::vector<double> kept{vals.front()};
    int dir = 0;
    double ext = vals.front();
    for (std::size_t i = 1; i < vals.size(); ++i) {
      const double x = vals[i];
      if (dir >= 0 && x > ext) {
        ext = x;
        if (dir == 0 && ext - kept.back() > prominence) dir = 1;
      } else if (dir <= 0 && x < ext) {
        ext = x;
        if (dir == 0 && kept.back() - ext > prominence) dir = -1;
      } else if (dir == 1 && ext - x > prominence) {
        kept.push_back(ext);
        dir = -1;
        ext = x;
      } else if (dir == -1 && x - ext > prominence) {
        kept.push_back(ext);
        dir = 1;
        ext = x;
      }
      if (dir == 0 && std::abs(x - kept.back()) > prominence) dir = x > kept.back() ? 1 : -1;
    }
    kept.push_back(vals.back());
    vals = kept;
  }
  int nmax = 0, nmin = 0;
  for (std::size_t i = 1; i + 1 < vals.size(); ++i) {
    if (vals[i] > vals[i - 1] && vals[i] > vals[i + 1]) ++nmax;
    if (vals[i] < vals[i - 1] && vals[i] < vals[i + 1]) ++nmin;
  }
  return {nmax, nmin};
}

// ---------------------------------------------------------------------------

namespace {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 r = b - a;
  const double rr = dot(r, r);
  const double t = rr > 0.0 ? std::clamp(dot(p - a, r) / rr, 0.0, 1.0) : 0.0;
  return norm(a + r * t - p);
}

double directed_hausdorff(const PolyCurve& a, const PolyCurve& b) {
  // Bucket the segments of b on a grid so each query scans a neighbourhood.
  const auto segs = segments(b.vertices(), b.closed());
  double xmin = 1e300, ymin = 1e300, xmax = -1e300, ymax = -1e300, lsum = 0.0;
  for (const Seg& s : segs) {
    xmin = std::min(xmin, s.xmin);
    ymin = std::min(ymin, s.ymin);
    xmax = std::max(xmax, s.xmax);
    ymax = std::max(ymax, s.ymax);
    lsum += norm(s.q - s.p);
  }
  double best_all = 0.0;
  for (const Vec2& p : a.vertices()) {
    double best = std::numeric_limits<double>::infinity();
    for (const Seg& s : segs) {
      const double dx = std::max({0.0, s.xmin - p.x, p.x - s.xmax});
      const double dy = std::max({0.0, s.ymin - p.y, p.y - s.ymax});
      if (dx >= best || dy >= best) continue;
      best = std::min(best, point_segment_distance(p, s.p, s.q));
    }
    best_all = std::max(best_all, best);
  }
  (void)lsum;
  return best_all;
}

}  // namespace

double hausdorff_distance(const PolyCurve& a, const PolyCurve& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

int turning_number(const PolyCurve& c) {
  require(c.closed(), ErrorCode::NotClosed, "turning number needs a closed curve");
  double total = 0.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = c.edge((i + n - 1) % n), e2 = c.edge(i);
    require(norm(e1) > 0.0 && norm(e2) > 0.0, ErrorCode::DegenerateCurve, "zero-length edge");
    total += std::atan2(cross(e1, e2), dot(e1, e2));
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

double max_curvature(const PolyCurve& c) { return max_abs_curvature(c); }

PolyCurve convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  require(p.size() >= 3, ErrorCode::CollinearInput, "hull needs three distinct points");
  std::vector<Vec2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  require(h.size() >= 3, ErrorCode::CollinearInput, "points are collinear");
  return PolyCurve::closed_curve(std::move(h));
}

namespace {

bool inside_convex(const std::vector<Vec2>& hull, Vec2 p) {
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (cross(hull[(i + 1) % hull.size()] - hull[i], p - hull[i]) < -1e-12) return false;
  }
  return true;
}

}  // namespace

HullUnionStats hull_union_stats(const CurveTrajectory& traj, const std::vector<Rect>& rects, std::size_t grid) {
  HullUnionStats st;
  st.min_y = std::numeric_limits<double>::infinity();
  st.max_y = -st.min_y;
  std::vector<std::vector<Vec2>> hulls;
  for (std::size_t f = 0; f < traj.size(); ++f) {
    const PolyCurve& c = traj.snapshots[f];
    std::vector<Vec2> pts(c.vertices().begin(), c.vertices().end());
    if (c.is_half_curve())
      for (const Vec2& p : c.vertices()) pts.push_back(mirror(p));
    const PolyCurve hull = convex_hull(pts);
    HullFrame hf{traj.times[f], 1e300, -1e300, 0.0};
    for (const Vec2& p : hull.vertices()) {
      hf.min_y = std::min(hf.min_y, p.y);
      hf.max_y = std::max(hf.max_y, p.y);
      hf.max_abs_x = std::max(hf.max_abs_x, std::abs(p.x));
    }
    st.min_y = std::min(st.min_y, hf.min_y);
    st.max_y = std::max(st.max_y, hf.max_y);
    st.max_abs_x = std::max(st.max_abs_x, hf.max_abs_x);
    st.frames.push_back(hf);
    hulls.emplace_back(hull.vertices().begin(), hull.vertices().end());
  }
  for (const Rect& r : rects) {
    std::size_t covered = 0;
    for (std::size_t i = 0; i < grid; ++i) {
      for (std::size_t j = 0; j < grid; ++j) {
        const double fx = static_cast<double>(i) / static_cast<double>(grid - 1);
        const double fy = static_cast<double>(j) / static_cast<double>(grid - 1);
        const Vec2 p{-r.x_half_width + 2.0 * r.x_half_width * fx, r.y_lo + (r.y_hi - r.y_lo) * fy};
        if (std::any_of(hulls.begin(), hulls.end(), [&](const auto& h) { return inside_convex(h, p); })) ++covered;
      }
    }
    st.coverage.push_back(static_cast<double>(covered) / static_cast<double>(grid * grid));
  }
  return st;
}

C0Constants c0_constants(double A, double ell, double C_univ) {
  require(A > 0.0 && ell > 0.0 && C_univ > 0.0, ErrorCode::InvalidInput, "A, ell and C_univ must be positive");
  C0Constants c;
  c.A = A;
  c.ell = ell;
  c.C_univ = C_univ;
  c.K = 2.0 * (A + 5.0 * kPi) / ell;
  c.E = 20.0 * kPi * c.K / ell;
  c.M_lower = C_univ * std::pow(c.E, 4);
  return c;
}

double tail_area_bound(const LadderConfig& cfg, int n) {
  double sum = 0.0;
  int k = std::max(n, 1);
  for (; k <= static_cast<int>(cfg.a.size()); ++k) sum += 1.0 / (cfg.a_at(k) * cfg.a_at(k));
  // Continue with a_k = k until the increments fall below 1e-10, then add the
  // integral remainder 1/K.
  for (;; ++k) {
    const double inc = 1.0 / (static_cast<double>(k) * k);
    if (inc < 1e-10) {
      sum += 1.0 / static_cast<double>(k);
      break;
    }
    sum += inc;
  }
  return cfg.L * sum;
}

// ---------------------------------------------------------------------------
// Closeness

SampledGraph branch_graph(const PolyCurve& curve, std::size_t n) {
  if (curve.closed()) return graph_from_curve(curve, +1, n);
  return graph_from_curve(PolyCurve::open_curve({curve.vertices().begin(), curve.vertices().end()}), +1, n);
}

double ordering_gap(const PolyCurve& upper, const PolyCurve& lower) {
  // The side comes from the horizontal gap, the size from the distance to the
  // upper polyline: horizontal gaps are ill conditioned on the nearly
  // horizontal reaper arms. Close to the upper curve the chord is replaced by
  // the arc through its ends, since the chord sagitta (h^2 kappa / 8) is
  // larger than the gaps of interest.
  std::vector<Vec2> u(upper.vertices().begin(), upper.vertices().end());
  if (u.front().y > u.back().y) std::reverse(u.begin(), u.end());
  const PolyCurve up_curve = PolyCurve::open_curve(u, EndKind::Free, EndKind::Free);
  const BranchGraph up(up_curve);
  const auto segs = segments(up_curve.vertices(), false);
  // signed vertex curvature, left turns positive
  std::vector<double> kappa(u.size(), 0.0);
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    const Vec2 e1 = u[i] - u[i - 1], e2 = u[i + 1] - u[i], span = u[i + 1] - u[i - 1];
    const double d = norm(e1) * norm(e2) * norm(span);
    if (d > 0.0) kappa[i] = 2.0 * cross(e1, e2) / d;
  }
  if (u.size() > 2) {
    kappa.front() = kappa[1];
    kappa.back() = kappa[u.size() - 2];
  }
  double gap = std::numeric_limits<double>::infinity();
  for (const Vec2& p : lower.vertices()) {
    if (p.y < up.y_lo() || p.y > up.y_hi()) continue;
    const double dx = up(p.y) - p.x;
    double dist = std::abs(dx) + 1e-3;
    const Seg* best = nullptr;
    for (const Seg& sg : segs) {
      const double ex = std::max({0.0, sg.xmin - p.x, p.x - sg.xmax});
      const double ey = std::max({0.0, sg.ymin - p.y, p.y - sg.ymax});
      if (ex >= dist || ey >= dist) continue;
      const double d = point_segment_distance(p, sg.p, sg.q);
      if (d < dist) {
        dist = d;
        best = &sg;
      }
    }
    double g = dx < 0.0 ? -std::min(dist, std::abs(dx)) : std::min(dist, std::abs(dx));
    if (best && dist < 1e-3) {
      const Vec2 e = best->q - best->p;
      const double l2 = dot(e, e), sigma = dot(p - best->p, e) / l2;
      if (sigma > 0.0 && sigma < 1.0) {
        const double k = 0.5 * (kappa[best->id] + kappa[best->id + 1]);
        g = cross(e, p - best->p) / std::sqrt(l2) + 0.5 * k * l2 * sigma * (1.0 - sigma);
      }
    }
    gap = std::min(gap, g);
  }
  return gap;
}

double barrier_margin(const PolyCurve& curve, const LadderConfig& cfg, const DerivedLadder& dl, int m, double t) {
  const GrimSpec spec{cfg.a_at(m), 2.0 * kPi * dl.h[static_cast<std::size_t>(m - 1)], -1,
                      dl.C[static_cast<std::size_t>(m)]};
  double margin = std::numeric_limits<double>::infinity();
  for (const Vec2& p : curve.vertices()) {
    const double v = spec.a * (p.y - spec.y0);
    if (v <= 0.0 || v >= kPi) continue;
    // Horizontal margin times sin(a v) = 1/sqrt(1 + slope^2): signed distance
    // to first order.
    margin = std::min(margin, (grim_scaled(spec, t, p.y) - p.x) * std::sin(v));
  }
  return margin;
}

ClosenessReport closeness_check(const PolyCurve& curve, const SampledGraph& ref, const LadderConfig& cfg,
                                const DerivedLadder& dl, int n, double t, const ClosenessOptions& opt) {
  ClosenessReport rep;
  const auto nn = static_cast<std::size_t>(n);
  require(t < -dl.C[nn] - 1.0, ErrorCode::TimeTooLate, "closeness needs t < -C_n - 1");

  // (1) graphical with both ends on the axis.
  std::optional<SampledGraph> g;
  try {
    g = branch_graph(curve, std::max<std::size_t>(ref.size(), 3));
    rep.flags[0] = std::abs((*g)[0]) <= 1e-6 && std::abs((*g)[g->size() - 1]) <= 1e-6;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotGraphical) throw;
    rep.flags[0] = false;
  }
  if (!g) return rep;

  // (2) endpoint window.
  rep.y_minus0 = g->y_lo();
  rep.y_plus_n = g->y_hi();
  const auto next = cfg.a.size() > nn ? cfg.a[nn] : 1.0;
  rep.window_top = 2.0 * kPi * dl.h[nn] + kPi / next;
  rep.flags[1] = rep.window_top > rep.y_plus_n && rep.y_plus_n > rep.y_minus0 && rep.y_minus0 > -kPi;

  // (3) one-sided ordering and the area bound, compared on the union grid.
  const double lo = std::min(g->y_lo(), ref.y_lo()), hi = std::max(g->y_hi(), ref.y_hi());
  const std::size_t samples = std::max(g->size(), ref.size());
  std::vector<double> diff(samples);
  const double dy = (hi - lo) / static_cast<double>(samples - 1);
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double y = lo + dy * static_cast<double>(i);
    const double vc = g->contains(y, 0.0) ? g->evaluate(y) : 0.0;
    const double vr = ref.contains(y, 0.0) ? ref.evaluate(y) : 0.0;
    diff[i] = vc - vr;
    if (ref.contains(y, 0.0)) rep.min_gap = std::min(rep.min_gap, diff[i]);
  }
  rep.area_to_reference = 0.5 * (diff.front() + diff.back());
  for (std::size_t i = 1; i + 1 < samples; ++i) rep.area_to_reference += diff[i];
  rep.area_to_reference *= dy;
  rep.area_bound = opt.area_factor * tail_area_bound(cfg, n);
  rep.flags[2] = rep.min_gap >= -opt.order_tol && rep.area_to_reference < rep.area_bound;

  // (4) domination by the slab reapers.
  rep.flags[3] = true;
  for (int m = 1; m <= n; ++m) {
    const GrimSpec spec{cfg.a_at(m), 2.0 * kPi * dl.h[static_cast<std::size_t>(m - 1)], -1,
                        dl.C[static_cast<std::size_t>(m)]};
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double y = g->y_at(i);
      const double v = spec.a * (y - spec.y0);
      if (v <= 0.0 || v >= kPi) continue;
      margin = std::min(margin, grim_scaled(spec, t, y) - (*g)[i]);
    }
    rep.barrier_margins.push_back(margin);
    if (!(margin > -opt.order_tol)) rep.flags[3] = false;
  }

  // (5) extrema counts.
  std::tie(rep.n_max, rep.n_min) = count_extrema(*g, opt.extrema_prominence);
  rep.flags[4] = rep.n_max == n + 1 && rep.n_min == n;
  return rep;
}

ClosenessReport closeness_check(const PolyCurve& curve, const PolyCurve& ref_curve, const LadderConfig& cfg,
                                const DerivedLadder& dl, int n, double t, const ClosenessOptions& opt) {
  require(curve.is_half_curve() && ref_curve.is_half_curve(), ErrorCode::InvalidInput,
          "polyline closeness needs half curves");
  ClosenessReport rep = closeness_check(curve, branch_graph(ref_curve), cfg, dl, n, t, opt);
  rep.min_gap = ordering_gap(curve, ref_curve);
  rep.area_to_reference = x_dy_integral(curve) - x_dy_integral(ref_curve);
  rep.flags[2] = rep.min_gap >= -opt.order_tol && rep.area_to_reference < rep.area_bound;
  rep.flags[3] = true;
  for (int m = 1; m <= n; ++m) {
    rep.barrier_margins[static_cast<std::size_t>(m - 1)] = barrier_margin(curve, cfg, dl, m, t);
    if (!(rep.barrier_margins[static_cast<std::size_t>(m - 1)] > -opt.order_tol)) rep.flags[3] = false;
  }
  return rep;
}

}  // namespace csf
