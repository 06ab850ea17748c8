#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csf/analysis.hpp"
#include "csf/exact.hpp"
#include "csf/gluing.hpp"
#include "csf/param_solver.hpp"

using namespace csf;

namespace {

// 202 samples keep the double point off the vertex set
PolyCurve lemniscate(std::size_t n = 202) {
  std::vector<Vec2> v;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = 2 * kPi * i / n, d = 1 + std::sin(s) * std::sin(s);
    v.push_back({std::cos(s) / d, std::sin(s) * std::cos(s) / d});
  }
  return PolyCurve::closed_curve(v);
}

PolyCurve square(bool ccw) {
  std::vector<Vec2> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  if (!ccw) std::reverse(v.begin(), v.end());
  return PolyCurve::closed_curve(v);
}

SampledGraph tabulate(double lo, double hi, std::size_t n, double (*f)(double)) {
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = f(lo + (hi - lo) * i / (n - 1));
  return SampledGraph(lo, hi, u);
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("signed area between graphs") {
  const SampledGraph zero(0, 1, std::vector<double>(11, 0.0));
  const SampledGraph two(0, 2, std::vector<double>(21, 2.0));
  CHECK(signed_area_between(zero, two) == doctest::Approx(4));
  CHECK(signed_area_between(two, two) == 0);
  CHECK(code_of([&] { signed_area_between(two, zero); }) == ErrorCode::DomainMismatch);
}

TEST_CASE("area between ladders of index 0 and 2") {
  // each lobe pair contributes the area under a reaper between its walls, pi L / a^2
  const LadderConfig c0{{1, 2}, {5, 5}, 10, 0}, c2{{1, 2}, {5, 5}, 10, 2};
  const double area = signed_area_between(build_broken_ladder(c0, ladder_derive(c0), -30, 16384),
                                          build_broken_ladder(c2, ladder_derive(c2), -30, 16384));
  CHECK(area == doctest::Approx(kPi * 10 * 1.25).epsilon(0.002));
}

TEST_CASE("enclosed area") {
  CHECK(enclosed_area(square(true)) == doctest::Approx(1));
  CHECK(enclosed_area(square(false)) == doctest::Approx(-1));
  CHECK(std::abs(enclosed_area(lemniscate())) <= 1e-9);
  CHECK(code_of([] { enclosed_area(PolyCurve::open_curve({{0, 0}, {1, 0}, {1, 1}})); }) == ErrorCode::NotClosed);
}

TEST_CASE("self intersections") {
  CHECK(self_intersections(circle_curve(1, 50)).empty());
  const auto hits = self_intersections(lemniscate());
  REQUIRE(transversal_count(hits) == 1);
  CHECK(norm(hits[0].point) <= 1e-3);
  const LadderConfig cfg{{1}, {5}, 10, 1};
  const PolyCurve c = reflect_close(build_broken_ladder(cfg, ladder_derive(cfg), -15, 4097));
  CHECK(transversal_count(self_intersections(c)) == 2);
}

TEST_CASE("axis crossings") {
  const auto z = axis_crossings(tabulate(0, 2 * kPi, 1001, [](double y) { return std::sin(y); }));
  REQUIRE(z.size() == 3);
  CHECK(z[0] == 0);
  CHECK(z[1] == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(z[2] == doctest::Approx(2 * kPi).epsilon(1e-9));
  CHECK(axis_crossings(SampledGraph(0, 1, std::vector<double>(5, 1.0))).empty());
}

TEST_CASE("extrema counts") {
  CHECK(count_extrema(tabulate(0, kPi, 501, [](double y) { return std::sin(y); })) == std::pair{1, 0});
  CHECK(count_extrema(tabulate(0, 1, 11, [](double y) { return y; })) == std::pair{0, 0});
  // plateaus count once
  CHECK(count_extrema(SampledGraph(0, 1, {0, 1, 1, 1, 0})) == std::pair{1, 0});
}

TEST_CASE("structure of the constructed ladders") {
  // a closed-up graph turns once: the right branch's tangent stays in the upper half plane
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const LadderConfig cfg{{1, 2, 3}, {5, 5, 5}, 10, n};
    const DerivedLadder dl = ladder_derive(cfg);
    const SampledGraph g = build_broken_ladder(cfg, dl, -default_alpha(cfg, dl), 4097);
    CHECK(axis_crossings(g).size() == static_cast<std::size_t>(2 * n + 2));
    CHECK(count_extrema(g) == std::pair{n + 1, n});
    const PolyCurve c = reflect_close(g);
    CHECK(transversal_count(self_intersections(c)) == static_cast<std::size_t>(2 * n));
    CHECK(turning_number(c) == 1);
  }
}

TEST_CASE("turning number") {
  CHECK(turning_number(circle_curve(1, 40)) == 1);
  CHECK(turning_number(square(false)) == -1);
  CHECK(turning_number(lemniscate()) == 0);
}

TEST_CASE("max curvature") {
  CHECK(max_curvature(circle_curve(2, 400)) == doctest::Approx(0.5).epsilon(1e-3).scale(0));
  CHECK(max_curvature(PolyCurve::open_curve({{0, 0}, {1, 0}, {2, 0}})) == 0);
}

TEST_CASE("hausdorff distance") {
  const PolyCurve a = circle_curve(1, 400), b = circle_curve(1.1, 400);
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.1).epsilon(1e-3).scale(0));
  CHECK(hausdorff_distance(a, a) == 0);
}

TEST_CASE("convex hull") {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.2, 0.7}};
  const PolyCurve h = convex_hull(pts);
  CHECK(h.size() == 4);
  CHECK(enclosed_area(h) == doctest::Approx(1));
  const std::vector<Vec2> line{{0, 0}, {1, 1}, {2, 2}};
  CHECK(code_of([&] { convex_hull(line); }) == ErrorCode::CollinearInput);
}

TEST_CASE("hull union of a translating family") {
  CurveTrajectory traj;
  const PolyCurve unit = circle_curve(1, 64);
  double reach = 0;
  for (const Vec2& p : unit.vertices()) reach = std::max(reach, p.x);
  for (int k = 0; k < 5; ++k) {
    std::vector<Vec2> v;
    for (const Vec2& p : unit.vertices()) v.push_back({p.x + k, p.y});
    traj.push(k, PolyCurve::closed_curve(v));
  }
  const HullUnionStats s = hull_union_stats(traj, {{0.5, -0.5, 0.5}, {10, -0.5, 0.5}});
  CHECK(s.frames.size() == 5);
  CHECK(s.min_y >= -1);
  CHECK(s.min_y <= -0.99);
  CHECK(s.max_abs_x == doctest::Approx(4 + reach).epsilon(1e-12));
  CHECK(s.coverage[0] == doctest::Approx(1));
  CHECK(s.coverage[1] < 0.5);
}

TEST_CASE("C0 constants") {
  const C0Constants c = c0_constants(5 * kPi, kPi);
  CHECK(c.K == doctest::Approx(20));
  CHECK(c.E == doctest::Approx(400));
  CHECK(c.M_lower == doctest::Approx(2.56e10));
  CHECK(c0_constants(1e-12, 2).K == doctest::Approx(10 * kPi / 2));
  const C0Constants d = c0_constants(3, 4), e = c0_constants(3, 8);
  CHECK(e.K == doctest::Approx(d.K / 2));
  CHECK(e.E == doctest::Approx(d.E / 4));
  CHECK(code_of([] { c0_constants(0, 1); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { c0_constants(1, -1); }) == ErrorCode::InvalidInput);
}

TEST_CASE("tail area bound") {
  // a_k = k for all k: L * pi^2 / 6 minus the first n-1 terms
  const LadderConfig cfg{{1, 2, 3}, {5, 5, 5}, 2, 3};
  CHECK(tail_area_bound(cfg, 1) == doctest::Approx(2 * kPi * kPi / 6).epsilon(1e-8));
  CHECK(tail_area_bound(cfg, 3) == doctest::Approx(2 * (kPi * kPi / 6 - 1.25)).epsilon(1e-8));
}

TEST_CASE("closeness against itself and a shifted copy") {
  // the reference is evolved for a while: the constructed ladder touches y = -pi at its axis end
  const LadderConfig cfg{{1, 2, 3}, {5, 5, 5}, 4, 1};
  const DerivedLadder dl = ladder_derive(cfg);
  const double t0 = -default_alpha(cfg, dl), t = t0 + 1;
  StepController ctrl;
  ctrl.target_edge = 0.05;
  ctrl.snapshot_dt = 0;
  const PolyCurve half = half_curve_from_graph(build_broken_ladder(cfg, dl, t0, 2049));
  const PolyCurve cur = evolve_param(resample_uniform(half, 2048), t0, t, ctrl).traj.snapshots.back();
  const SampledGraph g = branch_graph(cur, 4097);
  // the joints hug the slab walls to within the vertex spacing, not 1e-6
  ClosenessOptions opt;
  opt.order_tol = ctrl.target_edge * ctrl.target_edge;
  const ClosenessReport self = closeness_check(cur, cur, cfg, dl, 1, t, opt);
  CHECK(self.flags[0]);
  CHECK(self.flags[1]);
  CHECK(self.flags[2]);
  CHECK(self.area_to_reference == doctest::Approx(0).epsilon(1e-9));
  CHECK(self.flags[3]);
  CHECK(self.flags[4]);
  CHECK(self.verdict());

  std::vector<Vec2> v;
  for (const Vec2& p : reflect_close(g).vertices()) v.push_back({p.x, p.y + 10});
  const ClosenessReport shifted = closeness_check(PolyCurve::closed_curve(v), g, cfg, dl, 1, t);
  CHECK_FALSE(shifted.flags[1]);
  CHECK_FALSE(shifted.verdict());
}

TEST_CASE("ordering gap sees through chord sagitta") {
  // two samplings of the same right half circle with staggered vertices
  auto arc = [](double phase, double shift) {
    std::vector<Vec2> v;
    const int n = 300;
    for (int i = 0; i <= n; ++i) {
      const double s = std::clamp((i + phase) / n, 0.0, 1.0) * kPi - kPi / 2;
      v.push_back({std::cos(s) + shift, std::sin(s)});
    }
    return PolyCurve::open_curve(v, EndKind::AxisMirror, EndKind::AxisMirror);
  };
  const double h = kPi / 300;
  CHECK(ordering_gap(arc(0, 0), arc(0.5, 0)) >= -1e-3 * h * h);
  // a horizontal shift is a normal gap of shift * cos(s): smallest at the poles
  const double above = ordering_gap(arc(0, 1e-4), arc(0.5, 0));
  CHECK(above > 0);
  CHECK(above < 1e-4 * std::cos(kPi / 2 - 2 * h));
  CHECK(std::abs(ordering_gap(arc(0, 0), arc(0.5, 1e-4)) + 1e-4) <= 1e-8);
}
