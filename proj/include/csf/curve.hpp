#pragma once

// Plane-curve representations shared by the solvers and the analysis code.
//
// SampledGraph holds x = u(y) on a uniform y-grid. PolyCurve is an oriented
// polyline, either closed (implicit wrap) or open with an end condition at
// each end. A "half curve" is an open PolyCurve whose ends carry
// EndKind::AxisMirror: it stands for the reflection-symmetric curve
// X ∪ RX, R being the reflection x -> -x.

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "csf/error.hpp"

namespace csf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 perp_left(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 mirror(Vec2 a) { return {-a.x, a.y}; }

/// x = u(y) on a uniform grid of at least three samples.
class SampledGraph {
 public:
  SampledGraph(double y_lo, double y_hi, std::vector<double> values);

  double y_lo() const { return y_lo_; }
  double y_hi() const { return y_hi_; }
  double dy() const { return (y_hi_ - y_lo_) / static_cast<double>(values_.size() - 1); }
  std::size_t size() const { return values_.size(); }
  double y_at(std::size_t i) const;
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  bool contains(double y, double tol = 1e-12) const { return y >= y_lo_ - tol && y <= y_hi_ + tol; }
  /// Linear interpolation; clamps to the end values outside the domain.
  double evaluate(double y) const;

 private:
  double y_lo_;
  double y_hi_;
  std::vector<double> values_;
};

enum class EndKind {
  Free,        // open end, no constraint (solvers treat it as fixed)
  Fixed,       // end vertex held in place
  AxisMirror,  // end vertex on x = 0, continued by its mirror image
};

class PolyCurve {
 public:
  static constexpr double kMinEdge = 1e-12;

  /// Closed curve (first vertex not repeated).
  static PolyCurve closed_curve(std::vector<Vec2> vertices);
  /// Open curve with the given end conditions.
  static PolyCurve open_curve(std::vector<Vec2> vertices, EndKind front = EndKind::Fixed,
                              EndKind back = EndKind::Fixed);

  std::span<const Vec2> vertices() const { return v_; }
  const Vec2& operator[](std::size_t i) const { return v_[i]; }
  std::size_t size() const { return v_.size(); }
  bool closed() const { return closed_; }
  EndKind front() const { return front_; }
  EndKind back() const { return back_; }
  bool is_half_curve() const {
    return !closed_ && (front_ == EndKind::AxisMirror || back_ == EndKind::AxisMirror);
  }

  std::size_t edge_count() const { return closed_ ? v_.size() : v_.size() - 1; }
  Vec2 edge(std::size_t i) const { return v_[(i + 1) % v_.size()] - v_[i]; }
  double length() const;
  /// +1 counterclockwise, -1 clockwise, 0 for open or zero-area curves.
  int orientation() const;

 private:
  PolyCurve(std::vector<Vec2> v, bool closed, EndKind front, EndKind back);

  std::vector<Vec2> v_;
  bool closed_;
  EndKind front_;
  EndKind back_;
};

/// Cumulative arclength at each vertex (closed curves also get the wrap edge
/// appended as a final entry).
std::vector<double> cumulative_length(const PolyCurve& curve);

/// N vertices equally spaced in arclength along the polyline. Open curves keep
/// both endpoints; closed curves start at vertex 0.
PolyCurve resample_uniform(const PolyCurve& curve, std::size_t n);

/// Closed curve {(u(y), y)} upward then {(-u(y), y)} downward.
PolyCurve reflect_close(const SampledGraph& graph);

/// Open curve {(u(y), y)} with both ends on the axis (AxisMirror).
PolyCurve half_curve_from_graph(const SampledGraph& graph);

/// Expands a half curve into the full reflection-symmetric curve. Two mirror
/// ends give a closed curve, one gives an open curve; other curves are
/// returned unchanged.
PolyCurve mirror_full(const PolyCurve& curve);

/// Extracts x = u(y) from a curve. For closed curves the branch runs from the
/// lowest vertex to the highest one, leaving the lowest vertex towards
/// x * side > 0; for half curves the branch is the curve itself (x negated
/// for side = -1). n = 0 uses the branch vertex count.
SampledGraph graph_from_curve(const PolyCurve& curve, int side, std::size_t n = 0);

/// x along a y-monotone branch, evaluated at y by linear interpolation. The
/// branch is first reduced to its monotone envelope with the same rule as
/// graph_from_curve.
class BranchGraph {
 public:
  explicit BranchGraph(const PolyCurve& branch, double grid_hint = 0.0);
  double y_lo() const { return ys_.front(); }
  double y_hi() const { return ys_.back(); }
  double operator()(double y) const;
  SampledGraph sample(std::size_t n) const;
  SampledGraph sample(double y_lo, double y_hi, std::size_t n) const;

 private:
  std::vector<double> ys_;
  std::vector<double> xs_;
};

struct StepStats {
  double dt = 0.0;
  double max_curvature = 0.0;
  bool remeshed = false;
};

/// Time-stamped snapshots of a flow.
template <class Shape>
class Trajectory {
 public:
  void push(double t, Shape shape, StepStats stats = {}) {
    require(times.empty() || t > times.back(), ErrorCode::InvalidInput,
            "trajectory times must increase strictly");
    times.push_back(t);
    snapshots.push_back(std::move(shape));
    step_stats.push_back(stats);
  }
  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  std::vector<double> times;
  std::vector<Shape> snapshots;
  std::vector<StepStats> step_stats;
};

using CurveTrajectory = Trajectory<PolyCurve>;
using GraphTrajectory = Trajectory<SampledGraph>;

// CSV file formats.
void write_curve(std::ostream& out, const PolyCurve& curve, double t);
void write_curve(const std::string& path, const PolyCurve& curve, double t);
PolyCurve read_curve(std::istream& in, double* t = nullptr);
PolyCurve read_curve(const std::string& path, double* t = nullptr);

void write_graph(std::ostream& out, const SampledGraph& graph, double t);
void write_graph(const std::string& path, const SampledGraph& graph, double t);
SampledGraph read_graph(std::istream& in, double* t = nullptr);
SampledGraph read_graph(const std::string& path, double* t = nullptr);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace csf
