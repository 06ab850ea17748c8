#pragma once

// Scenario runners: build initial data, evolve it and measure the result,
// producing verdicts with measured value, target and tolerance.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "csf/gluing.hpp"
#include "csf/param_solver.hpp"

namespace csf {

struct Tolerances {
  double area_rel = 0.01;       // constructed area against its formula
  double drift_rel = 0.005;     // area drift along a run
  double zero_area = 1e-6;      // self-paired area
  double gap = 1e-6;            // ordering gap and barrier margin
  double event_t = 1e-3;        // event-time bisection
  double rescale_rel = 0.02;    // rescaled embedding time, fraction of the flow window
  double alpha_rel = 0.05;      // event-time change when alpha doubles
  double kappa_rel = 0.05;      // max-curvature change when alpha doubles
  double bisect_rel = 0.10;     // threshold bisection half-width
  double refine_factor = 3.0;   // Hausdorff drift reduction per refinement
  double hull_margin = 1e-3;    // hull min-y above -pi
  double barrier_area_rel = 0.01;

  void validate() const;
};

struct ScenarioConfig {
  std::string scenario;
  LadderConfig ladder;
  std::vector<double> alpha;   // backward start times; empty: default_alpha
  std::size_t N = 2048;        // samples for extracted graphs
  double h = 0.05;             // vertex spacing of polyline runs
  StepController controller;
  Tolerances tol;
  std::vector<std::pair<int, int>> pairs;  // area, comparison and closeness pairs (n, m)
  int n_max = 3;               // halfplane
  double hull_inset = 0.2;     // halfplane test rectangles stay this far inside the strip
  double delta = 1.0;          // embedding slack after T^e_n
  double C_univ = 1.0;
  double B_start = 0.25;       // first B_n of the unfolding threshold sweep
  double L_lo = 0.05;          // barrier bisection bracket
  double L_hi = 8.0;
  double barrier_alpha = 10.0; // unit-scale barrier start time is -barrier_alpha
  double settle = 2.0;         // closeness: skip frames this close to the start
  double perturbation = 0.0;   // amplitude of seeded vertex noise on initial curves
  std::uint64_t seed = 0;
  std::string output_dir;      // empty: no files
  bool write_frames = false;
  bool render = false;

  void validate() const;
};

ScenarioConfig scenario_config_from_json(const nlohmann::json& j);
nlohmann::json scenario_config_to_json(const ScenarioConfig& cfg);
/// Defaults for a named scenario (the acceptance parameters).
ScenarioConfig default_scenario_config(const std::string& name);

struct Verdict {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  // "abs": |m - t| <= tol, "rel": |m - t| <= tol |t|, "ge": m >= t - tol, "le": m <= t + tol,
  // "gt": m > t - tol
  std::string relation;
  std::string detail;
};

Verdict make_verdict(std::string name, double measured, const std::string& relation, double target,
                     double tolerance, std::string detail = {});

enum class ScenarioStatus { Pass, Fail, Unresolved };
std::string to_string(ScenarioStatus s);

struct ScenarioReport {
  std::string scenario;
  nlohmann::json config;
  std::vector<Verdict> verdicts;
  std::map<std::string, double> events;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<std::string> files;
  bool unresolved = false;
  std::string unresolved_reason;

  Verdict& check(std::string name, double measured, const std::string& relation, double target,
                 double tolerance, std::string detail = {});
  bool all_passed() const;
  ScenarioStatus status() const;
  /// Report without the run_info block; deterministic for a fixed config.
  nlohmann::json to_json() const;
};

ScenarioReport scenario_figure8_unfold(const ScenarioConfig& cfg);
ScenarioReport scenario_area_conservation(const ScenarioConfig& cfg);
ScenarioReport scenario_comparison(const ScenarioConfig& cfg);
ScenarioReport scenario_halfplane(const ScenarioConfig& cfg);
ScenarioReport scenario_barrier_embedding(const ScenarioConfig& cfg);
ScenarioReport scenario_c0_tip(const ScenarioConfig& cfg);
ScenarioReport scenario_refinement(const ScenarioConfig& cfg);
ScenarioReport scenario_closeness(const ScenarioConfig& cfg);

std::vector<std::string> scenario_names();
ScenarioReport run_scenario(const ScenarioConfig& cfg);

/// Writes report.json atomically, adding a run_info block that holds the
/// only non-deterministic fields.
void write_report(const ScenarioReport& report, const std::string& path, double wall_seconds = 0.0);

// Building blocks shared by the scenarios.

/// Ladder config cut to index n (a and B keep their extra entries).
LadderConfig ladder_at(const LadderConfig& cfg, int n);

/// Half curve of the broken ladder of index n at time -alpha, optionally
/// perturbed by seeded noise that keeps the axis ends on the axis.
PolyCurve ladder_half_curve(const LadderConfig& cfg, int n, double alpha, double h, double perturbation = 0.0,
                            std::uint64_t seed = 0);

/// First time in (t_a, t_b] at which pred holds, by re-evolving from the
/// curve at t_a; pred must be false at t_a and true at t_b.
double locate_event(const PolyCurve& at_a, double t_a, double t_b, const StepController& ctrl,
                    const std::function<bool(const PolyCurve&)>& pred, double tol);

struct BarrierRun {
  bool embedded = false;
  bool singular = false;
  double embed_time = 0.0;     // located to the event tolerance
  double start_time = 0.0;
  double area_target = 0.0;    // pi L / a^2
  double max_area_error = 0.0; // relative, over recorded frames
  double end_time = 0.0;
};

/// Evolves the rescaled barrier (1/a) B(a^2 (t + C)) + (0, y0) from unit-scale
/// time -alpha until it embeds, turns singular or reaches unit time L + 10.
BarrierRun run_barrier(double L, double alpha, double h, const StepController& ctrl, double event_tol,
                       double a = 1.0, double y0 = 0.0, double C = 0.0);

}  // namespace csf
