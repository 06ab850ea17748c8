#include "csf/gluing.hpp"

#include <algorithm>
#include <cmath>

namespace csf {

namespace {

// Integral of ln sin u over [0, x] for 0 <= x <= pi.
double log_sin_integral(double x) {
  if (x <= 0.0) return 0.0;
  if (x > 0.5 * kPi) return -kPi * std::log(2.0) - log_sin_integral(kPi - x);
  // ln sin u = ln u + ln(sin u / u); the second term is smooth on [0, pi/2].
  const int m = 2048;
  const double h = x / m;
  auto f = [](double u) { return u < 1e-8 ? -u * u / 6.0 : std::log(std::sin(u) / u); };
  double acc = f(0.0) + f(x);
  for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(h * i);
  return acc * h / 3.0 + x * std::log(x) - x;
}

ProfilePiece line_piece(double y_lo, double x_lo, double y_hi, double x_hi) {
  ProfilePiece p;
  p.kind = ProfilePiece::Kind::Line;
  p.y_lo = y_lo;
  p.y_hi = y_hi;
  p.x_lo = x_lo;
  p.x_hi = x_hi;
  return p;
}

// Reaper clipped where it meets x = x_clip, joined by lines to the axis at
// both slab ends. arg = sin(a v) at the joints.
void append_clipped_reaper(std::vector<ProfilePiece>& out, const GrimSpec& spec, double t, double x_clip,
                           double arg) {
  require(arg > 0.0 && arg < 1.0, ErrorCode::TimeTooLate, "reaper does not reach the clipping line");
  const double a = spec.a;
  const double s = std::asin(arg);
  const double v1 = s / a;
  const double v2 = (kPi - s) / a;
  ProfilePiece r;
  r.kind = ProfilePiece::Kind::Reaper;
  r.spec = spec;
  r.t = t;
  r.v_lo = v1;
  r.v_hi = v2;
  r.y_lo = spec.y0 + v1;
  r.y_hi = spec.y0 + v2;
  r.x_lo = x_clip;
  r.x_hi = x_clip;
  out.push_back(line_piece(spec.y0, 0.0, r.y_lo, x_clip));
  out.push_back(r);
  out.push_back(line_piece(r.y_hi, x_clip, spec.slab_hi(), 0.0));
}

// Lobes - and + of a slab of scale a starting at y0, shifted by C.
void append_lobe_pair(std::vector<ProfilePiece>& out, double a, double y0, double C, double L, double t) {
  const double shifted = a * a * (t + C);
  append_clipped_reaper(out, GrimSpec{a, y0, -1, C}, t, -1.0 / a, std::exp(1.0 + shifted));
  append_clipped_reaper(out, GrimSpec{a, y0 + kPi / a, +1, C - L / (a * a)}, t, 1.0 / a,
                        std::exp(1.0 + shifted - L));
}

void check_config(const LadderConfig& cfg) {
  require(cfg.n >= 0, ErrorCode::InvalidConfig, "n must be non-negative");
  require(cfg.a.size() >= static_cast<std::size_t>(cfg.n) && cfg.B.size() >= static_cast<std::size_t>(cfg.n),
          ErrorCode::InvalidConfig, "a and B need at least n entries");
  require(cfg.L > 0.0, ErrorCode::InvalidConfig, "L must be positive");
  for (double a : cfg.a) require(a >= 1.0, ErrorCode::InvalidConfig, "a_k must be >= 1");
  for (double b : cfg.B) require(b > 0.0, ErrorCode::InvalidConfig, "B_k must be positive");
}

}  // namespace

LadderConfig LadderConfig::standard(int n, double b, double L) {
  LadderConfig cfg;
  for (int k = 1; k <= n + 1; ++k) {
    cfg.a.push_back(k);
    cfg.B.push_back(b);
  }
  cfg.L = L;
  cfg.n = n;
  return cfg;
}

double LadderConfig::sum_inv_a() const {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += 1.0 / a[static_cast<std::size_t>(k)];
  return s;
}

double LadderConfig::sum_inv_a2() const {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += 1.0 / (a[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(k)]);
  return s;
}

DerivedLadder ladder_derive(const LadderConfig& cfg) {
  check_config(cfg);
  DerivedLadder dl;
  dl.h.push_back(0.0);
  for (double a : cfg.a) dl.h.push_back(dl.h.back() + 1.0 / a);
  dl.C.push_back(0.0);
  for (double b : cfg.B) dl.C.push_back(dl.C.back() + b);
  return dl;
}

double default_alpha(const LadderConfig& cfg, const DerivedLadder& dl) {
  const double bn = cfg.n > 0 ? cfg.B[static_cast<std::size_t>(cfg.n - 1)] : 0.0;
  return dl.C[static_cast<std::size_t>(cfg.n)] + std::max(10.0, 2.0 * bn);
}

// ---------------------------------------------------------------------------

double ProfilePiece::operator()(double y) const {
  if (kind == Kind::Line) {
    if (!(y_hi > y_lo)) return x_hi;
    const double f = (y - y_lo) / (y_hi - y_lo);
    return x_lo + (x_hi - x_lo) * std::clamp(f, 0.0, 1.0);
  }
  // clip points can sit closer to the walls than y resolves
  if (y <= y_lo) return x_lo;
  if (y >= y_hi) return x_hi;
  const double v = std::clamp(y - spec.y0, v_lo, v_hi);
  const double s = std::max(std::sin(spec.a * v), std::min(std::sin(spec.a * v_lo), std::sin(spec.a * v_hi)));
  const double g = std::log(s) / spec.a;
  const double shift = spec.a * (t + spec.tau);
  return spec.sign < 0 ? -g + shift : g - shift;
}

BrokenProfile::BrokenProfile(std::vector<ProfilePiece> pieces) : pieces_(std::move(pieces)) {
  require(!pieces_.empty(), ErrorCode::InvalidInput, "profile needs at least one piece");
}

double BrokenProfile::operator()(double y) const {
  const auto it = std::lower_bound(pieces_.begin(), pieces_.end(), y,
                                   [](const ProfilePiece& p, double v) { return p.y_hi < v; });
  return it == pieces_.end() ? pieces_.back()(y) : (*it)(y);
}

SampledGraph BrokenProfile::sample(double lo, double hi, std::size_t n) const {
  require(n >= 3, ErrorCode::InvalidInput, "need at least 3 samples");
  std::vector<double> vals(n);
  const double dy = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) vals[i] = (*this)(i + 1 == n ? hi : lo + dy * static_cast<double>(i));
  if (lo == y_lo()) vals.front() = pieces_.front()(lo);
  if (hi == y_hi()) vals.back() = pieces_.back().x_hi;
  return SampledGraph(lo, hi, std::move(vals));
}

std::vector<Vec2> BrokenProfile::polyline(double h) const {
  require(h > 0.0, ErrorCode::InvalidInput, "spacing must be positive");
  std::vector<Vec2> out;
  auto push = [&](Vec2 p) {
    if (out.empty() || norm(p - out.back()) > 1e-12) out.push_back(p);
  };
  for (const ProfilePiece& p : pieces_) {
    if (p.kind == ProfilePiece::Kind::Line) {
      const Vec2 a{p.x_lo, p.y_lo}, b{p.x_hi, p.y_hi};
      const int k = std::max(1, static_cast<int>(std::ceil(norm(b - a) / h)));
      for (int i = 0; i <= k; ++i) push(a + (b - a) * (static_cast<double>(i) / k));
      continue;
    }
    // Sample by arclength from the apex: x - x_apex = -(1/a) ln cosh(a s).
    const double a = p.spec.a;
    const double s_lo = grim_arclength(a, p.v_lo);
    const double s_hi = -s_lo;  // joints are symmetric about the apex
    const int k = std::max(1, static_cast<int>(std::ceil((s_hi - s_lo) / h)));
    const double x_apex = p(p.spec.apex());
    const double dir = p.spec.sign < 0 ? -1.0 : 1.0;
    push({p.x_lo, p.y_lo});
    for (int i = 1; i < k; ++i) {
      const double s = s_lo + (s_hi - s_lo) * static_cast<double>(i) / k;
      const double v = s <= 0.0 ? grim_ordinate_at(a, s) : kPi / a - grim_ordinate_at(a, -s);
      const double as = std::abs(a * s);
      const double log_cosh = as + std::log1p(std::exp(-2.0 * as)) - std::log(2.0);
      push({x_apex + dir * (-log_cosh / a), p.spec.y0 + v});
    }
    push({p.x_hi, p.y_hi});
  }
  return out;
}

PolyCurve BrokenProfile::half_curve(double h) const {
  auto v = polyline(h);
  v.front().x = 0.0;
  v.back().x = 0.0;
  return PolyCurve::open_curve(std::move(v), EndKind::AxisMirror, EndKind::AxisMirror);
}

double BrokenProfile::integral() const {
  double acc = 0.0;
  for (const ProfilePiece& p : pieces_) {
    if (p.kind == ProfilePiece::Kind::Line) {
      acc += 0.5 * (p.x_lo + p.x_hi) * (p.y_hi - p.y_lo);
      continue;
    }
    const double a = p.spec.a;
    const double logs = (log_sin_integral(a * p.v_hi) - log_sin_integral(a * p.v_lo)) / (a * a);
    const double shift = a * (p.t + p.spec.tau) * (p.v_hi - p.v_lo);
    acc += p.spec.sign < 0 ? -logs + shift : logs - shift;
  }
  return acc;
}

// ---------------------------------------------------------------------------

BrokenProfile broken_ladder_profile(const LadderConfig& cfg, const DerivedLadder& dl, double t) {
  check_config(cfg);
  const auto n = static_cast<std::size_t>(cfg.n);
  require(t < -dl.C[n] - 1.0, ErrorCode::TimeTooLate, "broken ladder needs t < -C_n - 1");
  std::vector<ProfilePiece> pieces;
  append_clipped_reaper(pieces, GrimSpec{1.0, -kPi, +1, 0.0}, t, 1.0, std::exp(1.0 + t));
  for (std::size_t m = 1; m <= n; ++m) {
    append_lobe_pair(pieces, cfg.a[m - 1], 2.0 * kPi * dl.h[m - 1], dl.C[m], cfg.L, t);
  }
  return BrokenProfile(std::move(pieces));
}

SampledGraph build_broken_ladder(const LadderConfig& cfg, const DerivedLadder& dl, double t, std::size_t n) {
  require(n >= 64 * static_cast<std::size_t>(cfg.n + 1), ErrorCode::InvalidInput, "N must be at least 64(n+1)");
  return broken_ladder_profile(cfg, dl, t).sample(n);
}

BrokenProfile broken_oval_profile(const LadderConfig& cfg, const DerivedLadder& dl, int n, double t) {
  LadderConfig sub = cfg;
  sub.n = n;
  const auto full = broken_ladder_profile(sub, dl, t);
  if (n == 0) return full;
  const auto& p = full.pieces();
  return BrokenProfile(std::vector<ProfilePiece>(p.end() - 3, p.end()));
}

SampledGraph build_broken_oval(const LadderConfig& cfg, const DerivedLadder& dl, int n, double t,
                               std::size_t samples) {
  return broken_oval_profile(cfg, dl, n, t).sample(samples);
}

BrokenProfile barrier_B_profile(double L, double t) { return barrier_B_profile(L, t, 1.0, 0.0, 0.0); }

BrokenProfile barrier_B_profile(double L, double t, double a, double y0, double C) {
  require(L > 0.0 && a > 0.0, ErrorCode::InvalidInput, "barrier needs L > 0 and a > 0");
  const double shifted = a * a * (t + C);
  require(shifted < -1.0 && shifted < L - 1.0, ErrorCode::TimeTooLate, "barrier needs rescaled t < -1");
  std::vector<ProfilePiece> pieces;
  append_lobe_pair(pieces, a, y0, C, L, t);
  return BrokenProfile(std::move(pieces));
}

BarrierGraph build_barrier_B(double L, double t, std::size_t n) {
  require(n >= 128, ErrorCode::InvalidInput, "barrier needs N >= 128");
  return BarrierGraph{barrier_B_profile(L, t).sample(n), true};
}

PolyCurve barrier_B_half_curve(const BrokenProfile& b, double h, double x_far) {
  const double y0 = b.y_lo();
  require(x_far > h, ErrorCode::InvalidInput, "ray end must lie right of the axis");
  std::vector<Vec2> v;
  const int k = static_cast<int>(std::ceil(x_far / h));
  for (int i = 0; i < k; ++i) v.push_back({x_far * (1.0 - static_cast<double>(i) / k), y0});
  auto arc = b.polyline(h);
  arc.front() = {0.0, y0};
  arc.back().x = 0.0;
  v.insert(v.end(), arc.begin(), arc.end());
  return PolyCurve::open_curve(std::move(v), EndKind::Fixed, EndKind::AxisMirror);
}

double barrier_P_ordinate(double E, const LadderConfig& cfg, const DerivedLadder& dl, int n) {
  require(n >= 1 && n <= static_cast<int>(cfg.a.size()), ErrorCode::InvalidConfig, "barrier P needs 1 <= n <= len(a)");
  const double a = cfg.a_at(n);
  require(E > 0.0, ErrorCode::InvalidInput, "E must be positive");
  require(E < a, ErrorCode::BarrierTooWide, "barrier P needs E < a_n");
  // -G^-_n(y) - a_n = E  <=>  sin(a (y - y0)) = exp(-a (E + a)).
  return 2.0 * kPi * dl.h[static_cast<std::size_t>(n - 1)] + std::asin(std::exp(-a * (E + a))) / a;
}

PolyCurve build_barrier_P(double E, const DerivedLadder& dl, const LadderConfig& cfg, int n, double h,
                          double x_far) {
  const double p = barrier_P_ordinate(E, cfg, dl, n);
  require(static_cast<int>(cfg.a.size()) > n, ErrorCode::InvalidConfig, "barrier P needs a_{n+1}");
  const double a = cfg.a_at(n);
  const double y0 = 2.0 * kPi * dl.h[static_cast<std::size_t>(n - 1)];
  const double top = 2.0 * kPi * dl.h[static_cast<std::size_t>(n)] + kPi / cfg.a_at(n + 1);
  if (x_far <= E) x_far = E + 10.0;

  // Lower arm x = -(1/a) ln sin(a v) - a, from x_far in to (E, p).
  const double v_far = std::asin(std::exp(-a * (x_far + a))) / a;
  const double s_far = grim_arclength(a, v_far);
  const double s_p = grim_arclength(a, p - y0);
  std::vector<Vec2> v;
  const int k = std::max(1, static_cast<int>(std::ceil((s_p - s_far) / h)));
  for (int i = 0; i < k; ++i) {
    const double s = s_far + (s_p - s_far) * static_cast<double>(i) / k;
    const double as = std::abs(a * s);
    const double log_cosh = as + std::log1p(std::exp(-2.0 * as)) - std::log(2.0);
    v.push_back({log_cosh / a - a, y0 + grim_ordinate_at(a, s)});
  }
  v.front().x = x_far;
  const int kv = std::max(1, static_cast<int>(std::ceil((top - p) / h)));
  for (int i = 0; i <= kv; ++i) v.push_back({E, p + (top - p) * static_cast<double>(i) / kv});
  const int kh = std::max(1, static_cast<int>(std::ceil(E / h)));
  for (int i = 1; i <= kh; ++i) v.push_back({E * (1.0 - static_cast<double>(i) / kh), top});
  v.back().x = 0.0;
  return mirror_full(PolyCurve::open_curve(std::move(v), EndKind::Fixed, EndKind::AxisMirror));
}

}  // namespace csf
