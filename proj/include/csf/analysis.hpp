#pragma once

// Geometric measurements on curves and graphs, and the closeness predicate
// comparing an evolved curve with a reference ladder flow.

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "csf/curve.hpp"
#include "csf/gluing.hpp"

namespace csf {

/// Trapezoid integral of f2 - f1 over f2's domain, f1 extended by zero.
double signed_area_between(const SampledGraph& f1, const SampledGraph& f2);

/// Shoelace area, counterclockwise positive.
double enclosed_area(const PolyCurve& curve);

/// Integral of x dy along the polyline; for a half curve with axis ends this
/// is the signed area between the curve and the axis.
double x_dy_integral(const PolyCurve& curve);

struct Intersection {
  Vec2 point;
  std::size_t seg_a = 0;
  std::size_t seg_b = 0;
  bool grazing = false;
};

/// Intersections between non-adjacent segments. Touches at vertices count as
/// crossings when the two passes interleave and are flagged grazing otherwise.
std::vector<Intersection> self_intersections(const PolyCurve& curve);
std::size_t transversal_count(const std::vector<Intersection>& hits);

/// Self-crossings of the mirrored closure of a half curve, counted on the
/// half curve itself: sign changes of x (crossings on the axis), twice its
/// own crossings, and twice its off-axis crossings with its mirror image.
struct SymmetricCrossings {
  std::size_t axis = 0;
  std::size_t self = 0;
  std::size_t mirror = 0;
  std::size_t total() const { return axis + 2 * self + 2 * mirror; }
};
SymmetricCrossings symmetric_crossings(const PolyCurve& half, double y_min = -1e300);

/// Crossing count of a curve: symmetric_crossings for half curves, transversal
/// self-intersections otherwise.
std::size_t crossing_count(const PolyCurve& curve, double y_min = -1e300);

/// Sorted ordinates where the linear interpolant of u vanishes; endpoints are
/// included when |u| <= 1e-9.
std::vector<double> axis_crossings(const SampledGraph& g);

/// Strict interior extrema (n_max, n_min) after collapsing plateaus. A
/// positive prominence ignores wiggles smaller than it.
std::pair<int, int> count_extrema(const SampledGraph& g, double prominence = 0.0);

/// Hausdorff distance between polylines (vertices against segments, both ways).
double hausdorff_distance(const PolyCurve& a, const PolyCurve& b);

int turning_number(const PolyCurve& curve);
double max_curvature(const PolyCurve& curve);

PolyCurve convex_hull(std::span<const Vec2> points);

struct HullFrame {
  double t = 0.0;
  double min_y = 0.0;
  double max_y = 0.0;
  double max_abs_x = 0.0;
};
struct Rect {
  double x_half_width = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
};
struct HullUnionStats {
  std::vector<HullFrame> frames;
  std::vector<double> coverage;  // fraction of each test rectangle covered by the union
  double min_y = 0.0;
  double max_y = 0.0;
  double max_abs_x = 0.0;
};
HullUnionStats hull_union_stats(const CurveTrajectory& traj, const std::vector<Rect>& rects,
                                std::size_t grid = 41);

struct C0Constants {
  double A = 0.0;
  double ell = 0.0;
  double K = 0.0;
  double E = 0.0;
  double M_lower = 0.0;
  double C_univ = 1.0;
};
C0Constants c0_constants(double A, double ell, double C_univ = 1.0);

/// L * sum_{k >= n} a_k^{-2}; entries beyond the configured ones follow a_k = k.
double tail_area_bound(const LadderConfig& cfg, int n);

struct ClosenessOptions {
  double area_factor = kPi;      // area of a glued lobe pair is pi L a^-2
  double order_tol = 1e-6;
  double extrema_prominence = 0.0;
};

struct ClosenessReport {
  std::array<bool, 5> flags{};
  double y_minus0 = 0.0;
  double y_plus_n = 0.0;
  double window_top = 0.0;
  double area_to_reference = 0.0;
  double area_bound = 0.0;
  double min_gap = 0.0;
  int n_max = 0;
  int n_min = 0;
  std::vector<double> barrier_margins;
  bool verdict() const { return flags[0] && flags[1] && flags[2] && flags[3] && flags[4]; }
};

/// Checks items (1)-(5) of closeness of `curve` (full or half) to the ladder
/// flow of index n at time t, whose profile is ref_graph.
ClosenessReport closeness_check(const PolyCurve& curve, const SampledGraph& ref_graph, const LadderConfig& cfg,
                                const DerivedLadder& dl, int n, double t, const ClosenessOptions& opt = {});

/// Same checks against a reference half curve: the ordering gap and area in
/// (3) and the margins in (4) are taken on the polylines (ordering_gap,
/// x_dy_integral, barrier_margin), which avoids resampling error where the
/// branches are nearly horizontal. Both curves must be half curves.
ClosenessReport closeness_check(const PolyCurve& curve, const PolyCurve& ref_curve, const LadderConfig& cfg,
                                const DerivedLadder& dl, int n, double t, const ClosenessOptions& opt = {});

/// Graph of a half curve (or the right branch of a closed curve) on its own
/// y-range with n samples.
SampledGraph branch_graph(const PolyCurve& curve, std::size_t n = 0);

/// min over vertices p of `lower` of x_upper(p.y) - p.x, restricted to the
/// common y-range: the ordering gap between two half curves.
double ordering_gap(const PolyCurve& upper, const PolyCurve& lower);

/// min over vertices of `curve` in the slab of lobe m of
/// -G^-_m(y) + a_m (t + C_m) - x.
double barrier_margin(const PolyCurve& curve, const LadderConfig& cfg, const DerivedLadder& dl, int m, double t);

}  // namespace csf
