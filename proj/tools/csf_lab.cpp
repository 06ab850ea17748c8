// csf-lab: construct, evolve, analyze, render and run scenario/sweep configs.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "csf/analysis.hpp"
#include "csf/exact.hpp"
#include "csf/gluing.hpp"
#include "csf/graph_solver.hpp"
#include "csf/param_solver.hpp"
#include "csf/render.hpp"
#include "csf/scenarios.hpp"
#include "csf/sweep.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace csf;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), ErrorCode::IOError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidConfig, path + ": " + e.what());
  }
}

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), ErrorCode::IOError, "cannot open " + path);
  std::string line;
  std::getline(in, line);
  return line;
}

bool is_graph_file(const std::string& path) { return first_line(path).rfind("# csf-graph", 0) == 0; }

json curve_summary(const PolyCurve& c) {
  json j = {{"vertices", c.size()}, {"closed", c.closed()}, {"length", c.length()},
            {"max_curvature", max_curvature(c)}};
  if (c.closed()) {
    j["enclosed_area"] = enclosed_area(c);
    j["turning_number"] = turning_number(c);
    j["crossings"] = transversal_count(self_intersections(c));
  } else if (c.is_half_curve()) {
    const SymmetricCrossings s = symmetric_crossings(c);
    j["x_dy_integral"] = x_dy_integral(c);
    j["crossings"] = s.total();
    j["axis_crossings"] = s.axis;
  } else {
    j["crossings"] = transversal_count(self_intersections(c));
  }
  return j;
}

json graph_summary(const SampledGraph& g) {
  const auto [mx, mn] = count_extrema(g);
  return {{"samples", g.size()},
          {"y_lo", g.y_lo()},
          {"y_hi", g.y_hi()},
          {"integral", graph_integral(g)},
          {"axis_crossings", axis_crossings(g).size()},
          {"maxima", mx},
          {"minima", mn}};
}

void frames_out(const CurveTrajectory& tr, const std::string& dir) {
  for (std::size_t i = 0; i < tr.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "frame_%05zu.csv", i);
    write_curve((fs::path(dir) / name).string(), tr.snapshots[i], tr.times[i]);
  }
}

GraphBC parse_bc(const std::string& spec, const SampledGraph& g) {
  if (spec == "free-axis") return GraphBC::free_axis();
  if (spec == "dirichlet") return GraphBC::dirichlet(g[0], g[g.size() - 1]);
  double lo = 0, hi = 0;
  char tail = 0;
  require(std::sscanf(spec.c_str(), "dirichlet:%lf,%lf%c", &lo, &hi, &tail) == 2, ErrorCode::InvalidInput,
          "--bc must be dirichlet, dirichlet:lo,hi or free-axis");
  return GraphBC::dirichlet(lo, hi);
}

std::vector<std::string> csv_files(const std::string& path) {
  std::vector<std::string> files;
  if (!fs::is_directory(path)) return {path};
  for (const auto& e : fs::directory_iterator(path))
    if (e.path().extension() == ".csv") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

CurveTrajectory read_frames(const std::string& path) {
  CurveTrajectory tr;
  for (const std::string& f : csv_files(path)) {
    double tf = 0;
    PolyCurve c = is_graph_file(f) ? half_curve_from_graph(read_graph(f, &tf)) : read_curve(f, &tf);
    // duplicate times (e.g. hand-made files) are nudged to keep order
    if (!tr.empty() && tf <= tr.times.back()) tf = std::nextafter(tr.times.back(), 1e300);
    tr.push(tf, std::move(c));
  }
  return tr;
}

std::size_t crossings_of(const PolyCurve& c) {
  return c.is_half_curve() ? symmetric_crossings(c).total() : transversal_count(self_intersections(c));
}

double area_of(const PolyCurve& c) { return c.closed() ? enclosed_area(c) : x_dy_integral(c); }

// Reference frame with the nearest time.
const PolyCurve& matched(const CurveTrajectory& ref, double t) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < ref.size(); ++i)
    if (std::abs(ref.times[i] - t) < std::abs(ref.times[best] - t)) best = i;
  return ref.snapshots[best];
}

json analyze_frames(const CurveTrajectory& tr, const std::vector<std::string>& checks, const std::string& ref_path,
                    const LadderConfig& cfg) {
  require(!tr.empty(), ErrorCode::InvalidInput, "no frames to analyze");
  auto want = [&](const char* c) { return checks.empty() || std::count(checks.begin(), checks.end(), c) > 0; };
  const bool need_ref = std::any_of(checks.begin(), checks.end(), [](const std::string& c) {
    return c == "ordering" || c == "closeness";
  });
  require(!need_ref || !ref_path.empty(), ErrorCode::InvalidInput, "ordering and closeness need --ref");
  CurveTrajectory ref;
  if (!ref_path.empty()) ref = read_frames(ref_path);

  json out = {{"frames", tr.size()}, {"t_first", tr.times.front()}, {"t_last", tr.times.back()}};
  if (want("intersections")) {
    json per = json::array(), changes = json::array();
    std::size_t prev = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const std::size_t k = crossings_of(tr.snapshots[i]);
      per.push_back(k);
      if (i > 0 && k != prev) changes.push_back({{"t", tr.times[i]}, {"from", prev}, {"to", k}});
      prev = k;
    }
    out["intersections"] = {{"per_frame", per}, {"changes", changes}};
  }
  if (want("area")) {
    json per = json::array(), rates = json::array();
    for (std::size_t i = 0; i < tr.size(); ++i) {
      double a = area_of(tr.snapshots[i]);
      if (!ref.empty()) a -= area_of(matched(ref, tr.times[i]));
      per.push_back(a);
      if (i > 0) rates.push_back((a - per[i - 1].get<double>()) / (tr.times[i] - tr.times[i - 1]));
    }
    out["area"] = {{"per_frame", per}, {"rate", rates}, {"relative_to_ref", !ref.empty()}};
  }
  if (want("hull")) {
    const HullUnionStats st = hull_union_stats(tr, {});
    out["hull"] = {{"min_y", st.min_y}, {"max_y", st.max_y}, {"max_abs_x", st.max_abs_x}};
  }
  if (want("ordering") && !ref.empty()) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tr.size(); ++i)
      worst = std::min(worst, ordering_gap(tr.snapshots[i], matched(ref, tr.times[i])));
    out["ordering"] = {{"min_gap", worst}, {"ok", worst >= -1e-6}};
  }
  if (want("closeness") && !ref.empty()) {
    const DerivedLadder dl = ladder_derive(cfg);
    json per = json::array();
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double t = tr.times[i];
      if (!(t < -dl.C.at(cfg.n) - 1.0)) continue;
      const ClosenessReport r = closeness_check(tr.snapshots[i], matched(ref, t), cfg, dl, cfg.n, t);
      per.push_back({{"t", t}, {"flags", r.flags}, {"close", r.verdict()}, {"min_gap", r.min_gap}});
    }
    out["closeness"] = per;
  }
  return out;
}

int print_report(const ScenarioReport& rep) {
  for (const Verdict& v : rep.verdicts)
    std::printf("%-4s %-40s measured=%.6g target=%.6g tol=%.3g (%s)\n", v.passed ? "ok" : "FAIL", v.name.c_str(),
                v.measured, v.target, v.tolerance, v.relation.c_str());
  for (const auto& [k, t] : rep.events) std::printf("event %-30s %.6g\n", k.c_str(), t);
  std::printf("%s: %s%s%s\n", rep.scenario.c_str(), to_string(rep.status()).c_str(),
              rep.unresolved ? " " : "", rep.unresolved_reason.c_str());
  switch (rep.status()) {
    case ScenarioStatus::Pass: return 0;
    case ScenarioStatus::Fail: return 1;
    case ScenarioStatus::Unresolved: return 3;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"csf-lab: curve shortening flow experiments"};
  app.require_subcommand(1);
  // -h is taken by the vertex spacing option
  app.set_help_flag("--help", "print help");

  // construct
  auto* con = app.add_subcommand("construct", "build initial data");
  std::string kind = "ladder", con_out, format = "curve";
  std::vector<double> a{1, 2}, B{5, 5};
  double L = 10, t = std::nan(""), h = 0.05, E = 3;
  int n = 1;
  std::size_t N = 2048;
  con->add_option("kind", kind, "ladder | oval | barrierB | barrierP")
      ->check(CLI::IsMember({"ladder", "oval", "barrierB", "barrierP"}));
  con->add_option("--a", a, "slab speeds a_1.. (comma separated)")->delimiter(',');
  con->add_option("--B", B, "lobe spacings B_1..")->delimiter(',');
  con->add_option("--L", L, "lobe length");
  con->add_option("--n", n, "ladder index");
  con->add_option("--t", t, "time (default: -default_alpha)");
  con->add_option("--N", N, "graph samples");
  con->add_option("--h", h, "polyline vertex spacing");
  con->add_option("--E", E, "barrier P abscissa");
  con->add_option("--format", format, "curve | graph")->check(CLI::IsMember({"curve", "graph"}));
  con->add_option("--out", con_out, "output file")->required();

  // evolve
  auto* evo = app.add_subcommand("evolve", "evolve a curve or graph file");
  std::string evo_in, evo_dir, mode = "param", bc = "dirichlet";
  std::string evo_events;
  double t0 = std::nan(""), t1 = 0, dt_max = 1e-3, dt = 1e-4, snap = 0.1, evo_h = 0, cfl = StepController{}.cfl;
  evo->add_option("--in", evo_in)->required()->check(CLI::ExistingFile);
  evo->add_option("--mode", mode)->check(CLI::IsMember({"param", "graph"}));
  evo->add_option("--t0", t0, "start time (default: from file)");
  evo->add_option("--t1", t1)->required();
  evo->add_option("--h", evo_h, "target edge length (param; default: mean edge)");
  evo->add_option("--dt-max", dt_max, "param step bound");
  evo->add_option("--cfl", cfl, "param step is at most cfl / kappa_max^2");
  evo->add_option("--events", evo_events, "param: write intersection changes, embedding and extinction here");
  evo->add_option("--dt", dt, "graph step");
  evo->add_option("--bc", bc, "graph ends: dirichlet[:lo,hi] | free-axis");
  evo->add_option("--snapshot-dt", snap);
  evo->add_option("--frames,--out-dir", evo_dir, "frame directory")->required();

  // analyze
  auto* ana = app.add_subcommand("analyze", "measure a curve or graph file");
  std::string ana_in, ana_report, ana_ref;
  std::vector<std::string> checks;
  LadderConfig ana_cfg{{1, 2}, {5, 5}, 10, 1};
  ana->add_option("--in", ana_in, "curve/graph file or frame directory")->required()->check(CLI::ExistingPath);
  ana->add_option("--report", ana_report, "write JSON here instead of stdout");
  ana->add_option("--checks", checks, "frames: area,ordering,closeness,hull,intersections")
      ->delimiter(',')
      ->check(CLI::IsMember({"area", "ordering", "closeness", "hull", "intersections"}));
  ana->add_option("--ref", ana_ref, "reference frames for ordering, area and closeness")->check(CLI::ExistingPath);
  ana->add_option("--a", ana_cfg.a, "closeness ladder")->delimiter(',');
  ana->add_option("--B", ana_cfg.B)->delimiter(',');
  ana->add_option("--L", ana_cfg.L);
  ana->add_option("--n", ana_cfg.n);

  // scenario
  auto* sce = app.add_subcommand("scenario", "run a scenario and write report.json");
  std::string sce_config, sce_name, sce_out;
  bool sce_frames = false, sce_render = false, sce_dump = false;
  auto* cfg_opt = sce->add_option("--config", sce_config)->check(CLI::ExistingFile);
  sce->add_option("--name", sce_name, "scenario with default parameters")->excludes(cfg_opt);
  sce->add_option("--out", sce_out, "output directory");
  sce->add_flag("--frames", sce_frames, "write frame CSVs");
  sce->add_flag("--render", sce_render, "write SVG frames");
  sce->add_flag("--print-config", sce_dump, "print the resolved config and exit");

  // render
  auto* ren = app.add_subcommand("render", "SVG frames from curve files");
  std::string ren_in, ren_out;
  bool markers = false, hulls = false;
  ren->add_option("--in", ren_in, "curve file or directory of curve files")->required()->check(CLI::ExistingPath);
  ren->add_option("--out", ren_out)->required();
  ren->add_flag("--markers", markers);
  ren->add_flag("--hulls", hulls);

  // sweep
  auto* swp = app.add_subcommand("sweep", "run a parameter grid");
  std::string swp_config, swp_out;
  unsigned threads = 0;
  swp->add_option("--config", swp_config)->required()->check(CLI::ExistingFile);
  swp->add_option("--threads", threads);
  swp->add_option("--out", swp_out, "override output_dir");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*con) {
      LadderConfig cfg{a, B, L, n};
      const DerivedLadder dl = ladder_derive(cfg);
      if (std::isnan(t)) t = -default_alpha(cfg, dl);
      json summary;
      if (kind == "barrierP") {
        const PolyCurve c = build_barrier_P(E, dl, cfg, n, h);
        write_curve(con_out, c, -dl.C.at(n) - 1.0);
        summary = curve_summary(c);
      } else if (format == "graph") {
        SampledGraph g = kind == "ladder"  ? build_broken_ladder(cfg, dl, t, N)
                         : kind == "oval" ? build_broken_oval(cfg, dl, n, t, N)
                                          : build_barrier_B(L, t, N).graph;
        write_graph(con_out, g, t);
        summary = graph_summary(g);
      } else {
        const BrokenProfile p = kind == "ladder"  ? broken_ladder_profile(cfg, dl, t)
                                : kind == "oval" ? broken_oval_profile(cfg, dl, n, t)
                                                 : barrier_B_profile(L, t);
        const PolyCurve c = kind == "barrierB" ? barrier_B_half_curve(p, h, std::abs(t) + 10.0) : p.half_curve(h);
        write_curve(con_out, c, t);
        summary = curve_summary(c);
        summary["profile_integral"] = p.integral();
      }
      summary["t"] = t;
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (*evo) {
      double tf = 0;
      json summary;
      if (mode == "graph") {
        const SampledGraph g = read_graph(evo_in, &tf);
        if (std::isnan(t0)) t0 = tf;
        const GraphBC b = parse_bc(bc, g);
        const GraphTrajectory tr = evolve_graph(g, t0, t1, dt, b, snap);
        for (std::size_t i = 0; i < tr.size(); ++i) {
          char name[64];
          std::snprintf(name, sizeof name, "frame_%05zu.csv", i);
          write_graph((fs::path(evo_dir) / name).string(), tr.snapshots[i], tr.times[i]);
        }
        summary = {{"frames", tr.size()}, {"end_time", tr.times.back()}, {"final", graph_summary(tr.snapshots.back())}};
      } else {
        const PolyCurve c = read_curve(evo_in, &tf);
        if (std::isnan(t0)) t0 = tf;
        StepController ctrl;
        ctrl.dt_max = dt_max;
        ctrl.cfl = cfl;
        ctrl.snapshot_dt = snap;
        ctrl.target_edge = evo_h;
        json changes = json::array();
        std::optional<std::size_t> prev;
        double embedded_at = std::nan("");
        ctrl.on_frame = [&](double tt, const PolyCurve& cur) {
          const std::size_t k = crossings_of(cur);
          if (prev && k != *prev) changes.push_back({{"t", tt}, {"from", *prev}, {"to", k}});
          if (prev && *prev > 0 && k == 0 && std::isnan(embedded_at)) embedded_at = tt;
          prev = k;
          return true;
        };
        const ParamRun run = evolve_param(c, t0, t1, ctrl);
        if (!evo_events.empty()) {
          json ev = {{"intersection_changes", changes},
                     {"initial_crossings", run.traj.empty() ? 0 : crossings_of(run.traj.snapshots.front())},
                     {"embedding_time", std::isnan(embedded_at) ? json(nullptr) : json(embedded_at)},
                     {"extinction_time",
                      run.verdict == FlowVerdict::Extinct ? json(run.extinction_time) : json(nullptr)}};
          write_file_atomic(evo_events, ev.dump(2) + "\n");
        }
        frames_out(run.traj, evo_dir);
        const char* verdicts[] = {"completed", "extinct", "singular", "stopped"};
        summary = {{"frames", run.traj.size()},
                   {"verdict", verdicts[static_cast<int>(run.verdict)]},
                   {"end_time", run.end_time},
                   {"steps", run.steps},
                   {"max_kappa", run.max_kappa_seen},
                   {"final", curve_summary(run.traj.snapshots.back())}};
        if (run.verdict == FlowVerdict::Extinct) summary["extinction_time"] = run.extinction_time;
      }
      write_file_atomic((fs::path(evo_dir) / "summary.json").string(), summary.dump(2) + "\n");
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (*ana) {
      json j;
      if (fs::is_directory(ana_in) || !checks.empty()) {
        j = analyze_frames(read_frames(ana_in), checks, ana_ref, ana_cfg);
      } else {
        double tf = 0;
        j = is_graph_file(ana_in) ? graph_summary(read_graph(ana_in, &tf)) : curve_summary(read_curve(ana_in, &tf));
        j["t"] = tf;
      }
      if (ana_report.empty())
        std::cout << j.dump(2) << "\n";
      else
        write_file_atomic(ana_report, j.dump(2) + "\n");
      return 0;
    }

    if (*sce) {
      ScenarioConfig cfg = !sce_config.empty() ? scenario_config_from_json(read_json(sce_config))
                                               : default_scenario_config(sce_name.empty() ? "figure8_unfold" : sce_name);
      if (!sce_out.empty()) cfg.output_dir = sce_out;
      cfg.write_frames = cfg.write_frames || sce_frames;
      cfg.render = cfg.render || sce_render;
      if (sce_dump) {
        std::cout << scenario_config_to_json(cfg).dump(2) << "\n";
        return 0;
      }
      const auto start = std::chrono::steady_clock::now();
      const ScenarioReport rep = run_scenario(cfg);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (!cfg.output_dir.empty()) write_report(rep, (fs::path(cfg.output_dir) / "report.json").string(), wall);
      return print_report(rep);
    }

    if (*ren) {
      const CurveTrajectory tr = read_frames(ren_in);
      RenderStyle style;
      style.markers = markers;
      style.hulls = hulls;
      const auto out = render_svg(tr, style, ren_out);
      std::printf("wrote %zu frames\n", out.size());
      return 0;
    }

    if (*swp) {
      SweepConfig cfg = sweep_config_from_json(read_json(swp_config));
      if (!swp_out.empty()) cfg.output_dir = swp_out;
      if (threads) cfg.threads = threads;
      const SweepResult res = run_sweep(cfg);
      std::printf("sweep: %zu pass, %zu fail, %zu unresolved\n", res.passed, res.failed, res.unresolved);
      return res.failed == 0 && res.unresolved == 0 ? 0 : 1;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
