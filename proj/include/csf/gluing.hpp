#pragma once

// Broken initial data: ladders of Grim Reapers joined by straight segments.

#include <cstddef>
#include <optional>
#include <vector>

#include "csf/curve.hpp"
#include "csf/exact.hpp"

namespace csf {

/// Sequences a_1.., B_1.. and the area parameter L. Arrays may be longer than
/// n; the extra a_{n+1} is used by the barrier P_n and the closeness window.
struct LadderConfig {
  std::vector<double> a;
  std::vector<double> B;
  double L = 1.0;
  int n = 0;

  /// a_k = k, B_k = b for k = 1..n+1.
  static LadderConfig standard(int n, double b, double L);

  double a_at(int k) const { return a.at(static_cast<std::size_t>(k - 1)); }
  std::optional<double> a_next() const {
    return a.size() > static_cast<std::size_t>(n) ? std::optional<double>(a[static_cast<std::size_t>(n)])
                                                  : std::nullopt;
  }
  double sum_inv_a() const;
  double sum_inv_a2() const;
};

/// Prefix sums h_k = sum 1/a_j and C_k = sum B_j, with h_0 = C_0 = 0.
struct DerivedLadder {
  std::vector<double> h;
  std::vector<double> C;
};

DerivedLadder ladder_derive(const LadderConfig& cfg);

/// One piece of a broken profile on [y_lo, y_hi]: a segment or a reaper arc.
struct ProfilePiece {
  enum class Kind { Line, Reaper } kind = Kind::Line;
  double y_lo = 0.0;
  double y_hi = 0.0;
  double x_lo = 0.0;  // line end values
  double x_hi = 0.0;
  GrimSpec spec{};    // reaper: x = grim_scaled(spec, t, y)
  double t = 0.0;
  double v_lo = 0.0;  // reaper: ends relative to spec.y0, kept unrounded
  double v_hi = 0.0;

  double operator()(double y) const;
};

/// A piecewise profile x = u(y), continuous, with exact joints.
class BrokenProfile {
 public:
  explicit BrokenProfile(std::vector<ProfilePiece> pieces);

  double y_lo() const { return pieces_.front().y_lo; }
  double y_hi() const { return pieces_.back().y_hi; }
  const std::vector<ProfilePiece>& pieces() const { return pieces_; }
  double operator()(double y) const;

  /// Uniform grid of n samples on the whole domain or on [lo, hi].
  SampledGraph sample(std::size_t n) const { return sample(y_lo(), y_hi(), n); }
  SampledGraph sample(double lo, double hi, std::size_t n) const;

  /// Polyline through the profile with edges of length about h; joints are
  /// vertices and reaper arcs are sampled uniformly in arclength.
  std::vector<Vec2> polyline(double h) const;
  /// Same polyline as an open half curve with both ends on the axis.
  PolyCurve half_curve(double h) const;
  /// Exact integral of u over the domain.
  double integral() const;

 private:
  std::vector<ProfilePiece> pieces_;
};

/// The broken ladder g_n(t, .) on (-pi, 2 pi h_n). Needs t < -C_n - 1.
BrokenProfile broken_ladder_profile(const LadderConfig& cfg, const DerivedLadder& dl, double t);
SampledGraph build_broken_ladder(const LadderConfig& cfg, const DerivedLadder& dl, double t, std::size_t n);

/// The top positive lobe o_n on [2 pi h_{n-1} + pi/a_n, 2 pi h_n]; n = 0 gives g_0.
BrokenProfile broken_oval_profile(const LadderConfig& cfg, const DerivedLadder& dl, int n, double t);
SampledGraph build_broken_oval(const LadderConfig& cfg, const DerivedLadder& dl, int n, double t,
                               std::size_t samples);

/// The figure-8 barrier b(t, .) on (0, 2 pi) at unit scale. Needs t < -1
/// and t < L - 1. The full barrier also carries the ray {y = 0, x >= 0}.
BrokenProfile barrier_B_profile(double L, double t);
/// Barrier rescaled to slab m: (1/a) b(a^2 (t + C)) shifted up by y0.
BrokenProfile barrier_B_profile(double L, double t, double a, double y0, double C);

struct BarrierGraph {
  SampledGraph graph;
  bool has_ray = true;  // full barrier appends {(x, 0): x >= 0} then reflects
};
BarrierGraph build_barrier_B(double L, double t, std::size_t n);

/// Half curve of the full barrier: fixed end at (x_far, 0), the ray, then b
/// up to an axis end at (y0 + 2 pi / a, 0).
PolyCurve barrier_B_half_curve(const BrokenProfile& b, double h, double x_far);

/// Lower ordinate where the slab-n reaper at ladder time -C_n - 1 crosses x = E.
double barrier_P_ordinate(double E, const LadderConfig& cfg, const DerivedLadder& dl, int n);

/// The reflected open curve X u RX with X the reaper arc below p_n, the
/// vertical segment at x = E up to 2 pi h_n + pi / a_{n+1} and the horizontal
/// cap back to the axis. The arc is truncated at x = x_far.
PolyCurve build_barrier_P(double E, const DerivedLadder& dl, const LadderConfig& cfg, int n, double h = 0.05,
                          double x_far = 0.0);

/// Default backward start time C_n + max(10, 2 B_n).
double default_alpha(const LadderConfig& cfg, const DerivedLadder& dl);

}  // namespace csf
