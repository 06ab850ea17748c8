#pragma once

// Parametric curve shortening flow for polylines: closed curves, open curves
// with fixed ends and half curves closed by reflection across x = 0.

#include <functional>
#include <vector>

#include "csf/curve.hpp"

namespace csf {

struct StepController {
  double dt_max = 1e-3;
  double cfl = 0.25;           // dt <= cfl / kappa_max^2
  double remesh_ratio = 5.0;   // global remesh when max/min edge exceeds this
  double target_edge = 0.0;    // 0: mean edge length of the initial curve
  double omega = 0.5;          // tangential relaxation per step
  double relax_ratio = 1.5;    // relax a vertex only when its edges differ by this factor
  bool richardson = true;      // second order in time by step doubling
  double snapshot_dt = 0.05;   // frame cadence (0: every step)
  double singular_kappa = 0.0; // > 0: stop with Singular when exceeded
  double singular_after = 0.0; // ... but only this long after t0
  std::size_t min_vertices = 16;
  /// Called on every recorded frame; returning false stops the run.
  std::function<bool(double, const PolyCurve&)> on_frame;

  void validate() const;
};

struct CurvatureSample {
  double kappa = 0.0;
  Vec2 normal;  // left unit normal
};

/// Menger curvature at each vertex. Axis-mirror ends use the reflected
/// neighbour; other open ends copy their neighbour.
std::vector<CurvatureSample> discrete_curvature(const PolyCurve& curve);
double max_abs_curvature(const PolyCurve& curve);

/// One step: linearly implicit curvature solve, tangential relaxation, local
/// edge splitting and merging.
PolyCurve step_param(const PolyCurve& curve, double dt, const StepController& ctrl);

/// Position update only (no tangential motion or remeshing).
PolyCurve implicit_curvature_step(const PolyCurve& curve, double dt);

enum class FlowVerdict { Completed, Extinct, Singular, Stopped };

struct ParamRun {
  CurveTrajectory traj;
  FlowVerdict verdict = FlowVerdict::Completed;
  double end_time = 0.0;
  double extinction_time = 0.0;  // estimate, set when verdict == Extinct
  std::size_t steps = 0;
  double max_kappa_seen = 0.0;
};

/// Adaptive stepping from t0 to t1; stops early on extinction, singularity or
/// a false return from on_frame.
ParamRun evolve_param(const PolyCurve& curve, double t0, double t1, const StepController& ctrl);

/// Area enclosed by a closed curve or by the mirrored closure of a half curve
/// with two axis ends; 0 otherwise.
double flow_area(const PolyCurve& curve);

}  // namespace csf
