// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "csf/analysis.hpp"
#include "csf/exact.hpp"
#include "csf/gluing.hpp"
#include "csf/graph_solver.hpp"
#include "csf/param_solver.hpp"
#include "csf/scenarios.hpp"

using namespace csf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("CRITERION %2d %s  %s: %s [%.1f s of %.0f s%s]\n", id, pass ? "PASS" : "FAIL", name, o.detail.c_str(),
              secs, budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

void note(const std::string& s) {
  std::printf("             note: %s\n", s.c_str());
  std::fflush(stdout);
}

SampledGraph sample(double lo, double hi, std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return SampledGraph(lo, hi, v);
}

const Verdict* find(const ScenarioReport& r, const std::string& name) {
  for (const Verdict& v : r.verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

std::string verdict_list(const ScenarioReport& r) {
  std::string s;
  for (const Verdict& v : r.verdicts) {
    if (!s.empty()) s += ", ";
    s += v.name + (v.passed ? " ok" : " FAILED") + fmt(" (%.4g)", v.measured);
  }
  return s;
}

Outcome whole_scenario(const std::string& name) {
  const ScenarioReport r = run_scenario(default_scenario_config(name));
  return {r.status() == ScenarioStatus::Pass, to_string(r.status()) + "; " + verdict_list(r)};
}

// Per-frame-pair loss rate against 2 pi over frames with no crossings.
double worst_rate_error(const ParamRun& run) {
  double worst = 0.0;
  std::size_t pairs = 0;
  const std::size_t last = run.verdict == FlowVerdict::Extinct ? run.traj.size() - 1 : run.traj.size();
  for (std::size_t k = 1; k < last; ++k) {
    const PolyCurve& a = run.traj.snapshots[k - 1];
    const PolyCurve& b = run.traj.snapshots[k];
    auto crossings = [](const PolyCurve& c) {
      return c.is_half_curve() ? symmetric_crossings(c).total() : transversal_count(self_intersections(c));
    };
    if (crossings(a) != 0 || crossings(b) != 0) continue;
    const double rate = (flow_area(a) - flow_area(b)) / (run.traj.times[k] - run.traj.times[k - 1]);
    worst = std::max(worst, std::abs(rate - 2 * kPi) / (2 * kPi));
    ++pairs;
  }
  return pairs ? worst : kPi;
}

}  // namespace

int main() {
  criterion(1, "grim reaper oracle", 10, [] {
    const double lo = 0.2, hi = kPi - 0.2, t0 = -1.0, s = 0.5;
    auto exact = [](double t) { return [t](double y) { return grim_profile(y) - t; }; };
    const GraphBC bc = GraphBC::dirichlet([&](double t) { return grim_profile(lo) - t; },
                                          [&](double t) { return grim_profile(hi) - t; });
    const GraphTrajectory tr = evolve_graph(sample(lo, hi, 2000, exact(t0)), t0, t0 + s, 1e-4, bc, 0.0);
    const SampledGraph want = sample(lo, hi, 2000, exact(t0 + s));
    double err = 0;
    for (std::size_t i = 0; i < want.size(); ++i) err = std::max(err, std::abs(tr.snapshots.back()[i] - want[i]));
    return Outcome{err <= 1e-4, fmt("max error %.3g (<= 1e-4)", err)};
  });

  criterion(2, "shrinking circle", 30, [] {
    StepController ctrl;
    ctrl.snapshot_dt = 0.125;
    const ParamRun run = evolve_param(circle_curve(1, 512), 0, 1, ctrl);
    double r375 = std::nan("");
    for (std::size_t i = 0; i < run.traj.size(); ++i)
      if (std::abs(run.traj.times[i] - 0.375) < 1e-12) r375 = std::sqrt(flow_area(run.traj.snapshots[i]) / kPi);
    const double e_ext = std::abs(run.extinction_time - 0.5) / 0.5, e_r = std::abs(r375 - 0.5) / 0.5;
    return Outcome{run.verdict == FlowVerdict::Extinct && e_ext <= 0.02 && e_r <= 0.005,
                   fmt("extinction %.5f (rel err %.3g <= 0.02), radius(0.375) %.5f (rel err %.3g <= 0.005)",
                       run.extinction_time, e_ext, r375, e_r)};
  });

  criterion(3, "enclosed-area law", 120, [] {
    std::vector<Vec2> v;
    for (int i = 0; i < 1200; ++i) {
      const double s = 2 * kPi * i / 1200;
      v.push_back({2 * std::cos(s), 0.7 * std::sin(s)});
    }
    StepController ctrl;
    ctrl.snapshot_dt = 0.05;
    const double e1 = worst_rate_error(evolve_param(resample_uniform(PolyCurve::closed_curve(v), 300), 0, 1, ctrl));
    // a figure-8 ladder, counted once its crossings are gone
    const LadderConfig cfg{{1, 2}, {5, 5}, 4, 1};
    const DerivedLadder dl = ladder_derive(cfg);
    const double alpha = default_alpha(cfg, dl);
    StepController lc;
    lc.target_edge = 0.05;
    lc.snapshot_dt = 0.25;
    const double e2 = worst_rate_error(evolve_param(ladder_half_curve(cfg, 1, alpha, 0.05), -alpha, 40, lc));
    return Outcome{e1 <= 0.02 && e2 <= 0.02,
                   fmt("worst rate error: ellipse %.3g, unfolded ladder %.3g (<= 0.02)", e1, e2)};
  });

  criterion(4, "area-rate identity", 10, [] {
    const SampledGraph u0 = sample(0, 2, 801, [](double y) { return std::sin(kPi * y / 2) * (1 + 0.5 * y); });
    const GraphTrajectory tr = evolve_graph(u0, 0, 0.2, 1e-5, GraphBC::dirichlet(0, 0), 0.002);
    double worst = 0;
    for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
      const double rate = (graph_integral(tr.snapshots[k + 1]) - graph_integral(tr.snapshots[k - 1])) /
                          (tr.times[k + 1] - tr.times[k - 1]);
      const auto [lo, hi] = boundary_angles(tr.snapshots[k]);
      worst = std::max(worst, std::abs(rate - (hi - lo)));
    }
    return Outcome{worst <= 1e-3, fmt("max |dA/dt - (theta_hi - theta_lo)| = %.3g (<= 1e-3)", worst)};
  });

  double pi_area = std::nan(""), pi_target = std::nan("");
  criterion(5, "signed-area conservation", 300, [&] {
    const ScenarioReport r = run_scenario(default_scenario_config("area_conservation"));
    const Verdict* lit = find(r, "area_vs_L_sum_inv_a2(0,2)");
    const Verdict* pi = find(r, "area_vs_pi_L_sum_inv_a2(0,2)");
    const Verdict* drift = find(r, "area_drift(0,2)");
    if (!lit || !pi || !drift) return Outcome{false, "missing verdicts"};
    pi_area = pi->measured;
    pi_target = pi->target;
    return Outcome{lit->passed && drift->passed,
                   fmt("area %.6g vs 12.5 (rel err %.3g <= 0.01), drift %.3g (<= 0.005)", lit->measured,
                       std::abs(lit->measured - 12.5) / 12.5, drift->measured)};
  });
  note(fmt("the same area equals pi L (1 + 1/4) = %.6g to rel %.3g: each lobe pair encloses pi L / a^2, not L / a^2",
           pi_target, std::abs(pi_area - pi_target) / pi_target));

  criterion(6, "ordering and barrier domination", 600, [] { return whole_scenario("comparison"); });
  criterion(7, "barrier embedding and rescaling", 900, [] { return whole_scenario("barrier_embedding"); });
  criterion(8, "figure-8 unfolding", 900, [] { return whole_scenario("figure8_unfold"); });

  criterion(9, "C0 constants and tip check", 300, [] {
    const C0Constants k = c0_constants(5 * kPi, kPi, 1);
    const bool exact = k.K == 20 && k.E == 400 && k.M_lower == 2.56e10;
    const ScenarioReport r = run_scenario(default_scenario_config("c0_tip"));
    std::string tip;
    if (r.metrics.contains("tip")) {
      const auto& m = r.metrics["tip"];
      tip = fmt("; run duration M = %.3g against M_lower = %.3g (C_univ would have to be %.3g)", m.value("M", 0.0),
                m.value("M_lower", 0.0), m.value("C_univ_for_duration", 0.0));
    }
    return Outcome{exact && r.status() == ScenarioStatus::Pass,
                   fmt("K=%.17g E=%.17g M_lower=%.17g; ", k.K, k.E, k.M_lower) + verdict_list(r) + tip};
  });

  criterion(10, "structural counts", 1, [] {
    bool ok = true;
    std::string d;
    for (int n = 1; n <= 3; ++n) {
      const LadderConfig cfg{{1, 2, 3}, {5, 5, 5}, 10, n};
      const DerivedLadder dl = ladder_derive(cfg);
      const SampledGraph g = build_broken_ladder(cfg, dl, -default_alpha(cfg, dl), 4097);
      const std::size_t z = axis_crossings(g).size();
      const auto [mx, mn] = count_extrema(g);
      ok = ok && z == static_cast<std::size_t>(2 * n + 2) && mx == n + 1 && mn == n;
      d += fmt("n=%.0f: crossings %.0f, extrema (%.0f,%.0f)  ", n, static_cast<double>(z), mx, mn);
    }
    return Outcome{ok, d};
  });

  criterion(11, "refinement convergence", 1800, [] { return whole_scenario("refinement"); });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
