#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "csf/analysis.hpp"
#include "csf/exact.hpp"
#include "csf/render.hpp"
#include "csf/scenarios.hpp"
#include "csf/sweep.hpp"

using namespace csf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("csf_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t occurrences(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + 1)) ++n;
  return n;
}

// small tip run, a few seconds
ScenarioConfig cheap_c0() {
  ScenarioConfig c = default_scenario_config("c0_tip");
  c.ladder = {{1, 2}, {5, 5}, 4, 1};
  c.h = 0.1;
  return c;
}

PolyCurve lemniscate() {
  std::vector<Vec2> v;
  for (int i = 0; i < 202; ++i) {
    const double s = 2 * kPi * i / 202, d = 1 + std::sin(s) * std::sin(s);
    v.push_back({std::cos(s) / d, std::sin(s) * std::cos(s) / d});
  }
  return PolyCurve::closed_curve(v);
}

}  // namespace

TEST_CASE("scenario config round trip") {
  for (const std::string& name : scenario_names()) {
    CAPTURE(name);
    const ScenarioConfig c = default_scenario_config(name);
    CHECK_NOTHROW(c.validate());
    const nlohmann::json j = scenario_config_to_json(c);
    CHECK(scenario_config_to_json(scenario_config_from_json(j)) == j);
  }
}

TEST_CASE("scenario config rejects bad input") {
  nlohmann::json j = scenario_config_to_json(default_scenario_config("c0_tip"));
  j["bogus"] = 1;
  CHECK_THROWS_AS(scenario_config_from_json(j), Error);
  nlohmann::json k = scenario_config_to_json(default_scenario_config("c0_tip"));
  k["ladder"]["extra"] = true;
  CHECK_THROWS_AS(scenario_config_from_json(k), Error);
  nlohmann::json m = scenario_config_to_json(default_scenario_config("c0_tip"));
  m["ladder"]["L"] = -1;
  CHECK_THROWS_AS(scenario_config_from_json(m), Error);
  CHECK_THROWS_AS(default_scenario_config("nope"), Error);
}

TEST_CASE("verdict relations") {
  CHECK(make_verdict("a", 1.05, "abs", 1, 0.1).passed);
  CHECK_FALSE(make_verdict("a", 1.2, "abs", 1, 0.1).passed);
  CHECK(make_verdict("r", 105, "rel", 100, 0.05).passed);
  CHECK_FALSE(make_verdict("r", 106, "rel", 100, 0.05).passed);
  CHECK(make_verdict("g", 0.95, "ge", 1, 0.1).passed);
  CHECK_FALSE(make_verdict("g", 0.85, "ge", 1, 0.1).passed);
  CHECK(make_verdict("l", 1.05, "le", 1, 0.1).passed);
  CHECK_FALSE(make_verdict("l", 1.2, "le", 1, 0.1).passed);
  CHECK(make_verdict("s", 1e-9, "gt", 0, 0).passed);
  CHECK_FALSE(make_verdict("s", 0, "gt", 0, 0).passed);
  CHECK_FALSE(make_verdict("n", std::nan(""), "le", 1, 0.1).passed);
  CHECK_THROWS_AS(make_verdict("x", 1, "eq", 1, 0), Error);
}

TEST_CASE("report status and json") {
  ScenarioReport r;
  r.scenario = "x";
  r.check("a", 1, "abs", 1, 0);
  CHECK(r.status() == ScenarioStatus::Pass);
  r.check("b", std::numeric_limits<double>::infinity(), "le", 1, 0);
  CHECK(r.status() == ScenarioStatus::Fail);
  const nlohmann::json j = r.to_json();
  CHECK(j["schema"] == "csf-report/1");
  CHECK(j["verdicts"][1]["measured"].is_null());
  r.unresolved = true;
  CHECK(r.status() == ScenarioStatus::Unresolved);
}

TEST_CASE("render") {
  const fs::path dir = scratch("render");
  CHECK(render_svg({}, {}, dir.string()).empty());
  CHECK(fs::is_empty(dir));

  CurveTrajectory traj;
  traj.push(0.0, circle_curve(1, 40));
  const auto files = render_svg(traj, {}, dir.string());
  REQUIRE(files.size() == 1);
  const std::string svg = slurp(files[0]);
  CHECK(occurrences(svg, "class=\"curve\"") == 1);
  CHECK(svg.find(" Z\"") != std::string::npos);
  CHECK(occurrences(svg, "class=\"crossing\"") == 0);

  RenderStyle marked;
  marked.markers = true;
  const ViewBox box{-2, -2, 4, 4};
  const std::string eight = svg_frame(lemniscate(), 0.5, box, marked);
  CHECK(occurrences(eight, "class=\"crossing\"") == 1);
  CHECK(eight == svg_frame(lemniscate(), 0.5, box, marked));
  fs::remove_all(dir);
}

TEST_CASE("half curves are drawn mirrored") {
  const PolyCurve half = PolyCurve::open_curve({{0, -1}, {1, 0}, {0, 1}}, EndKind::AxisMirror, EndKind::AxisMirror);
  CurveTrajectory traj;
  traj.push(0.0, half);
  const ViewBox box = trajectory_view_box(traj, {});
  CHECK(box.x < -1);
  CHECK(box.x + box.w > 1);
}

TEST_CASE("locate_event on a shrinking circle") {
  // area pi - 2 pi t reaches pi / 2 at t = 1/4
  StepController ctrl;
  ctrl.target_edge = 0.02;
  const PolyCurve c = circle_curve(1, 314);
  const double t = locate_event(c, 0.0, 0.4, ctrl, [](const PolyCurve& x) { return flow_area(x) < kPi / 2; }, 1e-3);
  CHECK(t == doctest::Approx(0.25).epsilon(0.01).scale(0));
}

TEST_CASE("sweep cells") {
  SweepConfig s;
  s.base = cheap_c0();
  s.grid.L = {3, 4};
  s.grid.h = {0.1, 0.08};
  const auto cells = sweep_cells(s);
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].dir == "cell_000");
  CHECK(cells[3].dir == "cell_003");
  CHECK(cells[1].config.ladder.L == 3);
  CHECK(cells[1].config.h == 0.08);
  CHECK(cells[2].config.ladder.L == 4);
  CHECK(cells[2].config.h == 0.1);
  nlohmann::json bad = {{"base", scenario_config_to_json(s.base)}, {"grid", {{"q", {1}}}}};
  CHECK_THROWS_AS(sweep_config_from_json(bad), Error);
}

TEST_CASE("sweep run and manifest") {
  const fs::path dir = scratch("sweep");
  SweepConfig s;
  s.base = cheap_c0();
  s.grid.L = {3, 4};
  s.grid.h = {0.1, 0.12};
  s.output_dir = dir.string();
  s.threads = 2;
  const SweepResult a = run_sweep(s);
  CHECK(a.passed + a.failed + a.unresolved == 4);
  for (int i = 0; i < 4; ++i) CHECK(fs::exists(dir / ("cell_00" + std::to_string(i)) / "report.json"));
  const nlohmann::json m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["schema"] == "csf-manifest/1");
  CHECK(m.contains("run_info"));
  CHECK(m["cells"].size() == 4);

  // everything but run_info is reproducible
  const SweepResult b = run_sweep(s);
  CHECK(a.manifest == b.manifest);
  nlohmann::json m2 = nlohmann::json::parse(slurp(dir / "manifest.json"));
  nlohmann::json m1 = m;
  m1.erase("run_info");
  m2.erase("run_info");
  CHECK(m1 == m2);
  fs::remove_all(dir);
}

TEST_CASE("single cell sweep records errors") {
  const fs::path dir = scratch("sweep1");
  SweepConfig s;
  s.base = cheap_c0();
  s.base.ladder.n = 3;  // a and B are too short for index 3
  s.output_dir = dir.string();
  s.threads = 1;
  const SweepResult r = run_sweep(s);
  CHECK(r.failed == 1);
  CHECK(r.manifest["cells"][0]["status"] == "ERROR");
  fs::remove_all(dir);
}

TEST_CASE("tip scenario runs and writes its report") {
  const fs::path dir = scratch("c0");
  ScenarioConfig c = cheap_c0();
  c.output_dir = dir.string();
  const ScenarioReport r = run_scenario(c);
  CHECK(r.status() == ScenarioStatus::Pass);
  write_report(r, (dir / "report.json").string(), 1.0);
  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["scenario"] == "c0_tip");
  CHECK(j["run_info"].contains("wall_seconds"));
  fs::remove_all(dir);
}
