#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csf/analysis.hpp"
#include "csf/exact.hpp"
#include "csf/param_solver.hpp"

using namespace csf;

namespace {

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

TEST_CASE("grim profile values") {
  CHECK(grim_profile(kPi / 2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(grim_profile(kPi / 6) == doctest::Approx(-0.6931471805599453).epsilon(1e-14));
  CHECK(code_of([] { grim_profile(0.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { grim_profile(kPi); }) == ErrorCode::DomainError);
}

TEST_CASE("scaled reapers") {
  CHECK(grim_scaled({2, 0, +1, 0}, 0, kPi / 4) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(grim_scaled({1, 0, -1, 0}, -5, kPi / 2) == doctest::Approx(-5.0).epsilon(1e-15));
  CHECK(grim_scaled({2, 0, -1, 0}, -3, kPi / 8) == doctest::Approx(0.25 * std::log(2.0) - 6).epsilon(1e-14));
}

TEST_CASE("reaper solves the graph equation") {
  // u_t = u'' / (1 + u'^2) by finite differences at dy = 1e-4
  for (const GrimSpec s : {GrimSpec{1, 0, -1, 0}, GrimSpec{2, 1, +1, 0.5}, GrimSpec{3, -2, -1, 0}}) {
    const double d = 1e-4, t = -1.0;
    double worst = 0;
    for (double v = 0.1 / s.a; v <= kPi / s.a - 0.1 / s.a; v += 0.05 / s.a) {
      const double y = s.y0 + v;
      const double ut = (grim_scaled(s, t + d, y) - grim_scaled(s, t - d, y)) / (2 * d);
      const double u0 = grim_scaled(s, t, y);
      const double up = grim_scaled(s, t, y + d), um = grim_scaled(s, t, y - d);
      const double upp = grim_scaled(s, t, y + 2 * d), umm = grim_scaled(s, t, y - 2 * d);
      // fourth-order stencils
      const double u1 = (-upp + 8 * up - 8 * um + umm) / (12 * d);
      const double u2 = (-upp + 16 * up - 30 * u0 + 16 * um - umm) / (12 * d * d);
      worst = std::max(worst, std::abs(ut - u2 / (1 + u1 * u1)));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("reaper diverges at the slab walls") {
  const GrimSpec s{2, 0, -1, 0};
  CHECK(grim_scaled(s, 0, 1e-9) > grim_scaled(s, 0, 1e-3));
  CHECK(grim_scaled(s, 0, 1e-3) > grim_scaled(s, 0, 0.1));
  CHECK(grim_scaled(s, 0, kPi / 2 - 1e-9) > 10);
  const GrimSpec r{2, 0, +1, 0};
  CHECK(grim_scaled(r, 0, kPi / 2 - 1e-9) < -10);
}

TEST_CASE("slope and arclength") {
  const GrimSpec s{2, 0.5, -1, 0};
  const double y = 0.9, d = 1e-6;
  CHECK(grim_slope(s, y) == doctest::Approx((grim_scaled(s, 0, y + d) - grim_scaled(s, 0, y - d)) / (2 * d)).epsilon(1e-6));
  for (double v : {0.1, 0.5, 0.785, 1.2, 1.5}) {
    const double sa = grim_arclength(2, v);
    CHECK(grim_ordinate_at(2, sa) == doctest::Approx(v).epsilon(1e-10));
  }
  CHECK(grim_arclength(1, kPi / 2) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(grim_arclength(1, 1.0) < 0);
}

TEST_CASE("shrinking circle") {
  CHECK(shrinking_circle_radius(1, 0) == 1);
  CHECK(shrinking_circle_radius(1, 0.375) == doctest::Approx(0.5).epsilon(1e-15).scale(0));
  CHECK(code_of([] { shrinking_circle_radius(1, 0.5); }) == ErrorCode::Extinct);
  for (double t : {0.0, 0.1, 0.3, 0.49}) {
    const double r = shrinking_circle_radius(1.7, t);
    CHECK(r * r + 2 * t == doctest::Approx(1.7 * 1.7).epsilon(1e-14));
  }
}

TEST_CASE("angenent oval") {
  const PolyCurve o = angenent_oval(-std::log(2.0), 400);
  double x_max = 0;
  double worst = 0;
  for (const Vec2& p : o.vertices()) {
    x_max = std::max(x_max, p.x);
    worst = std::max(worst, std::abs(std::cosh(p.y) - 2.0 * std::cos(p.x)));
  }
  CHECK(worst <= 1e-10);
  CHECK(x_max == doctest::Approx(kPi / 3).epsilon(1e-3));
  CHECK(o.orientation() == 1);
  CHECK(enclosed_area(o) == doctest::Approx(angenent_oval_area(-std::log(2.0))).epsilon(2e-3));
  for (double t : {-0.1, -1.0, -5.0}) {
    double res = 0;
    for (const Vec2& p : angenent_oval(t, 200).vertices())
      res = std::max(res, std::abs(std::cosh(p.y) - std::exp(-t) * std::cos(p.x)));
    CHECK(res <= 1e-10 * std::exp(-t));
  }
}

TEST_CASE("oval evolves onto the closed form") {
  StepController c;
  c.dt_max = 1e-4;
  c.snapshot_dt = 0;
  const ParamRun run = evolve_param(angenent_oval(-1.0, 400), -1.0, -0.5, c);
  REQUIRE(run.verdict == FlowVerdict::Completed);
  CHECK(hausdorff_distance(run.traj.snapshots.back(), angenent_oval(-0.5, 400)) <= 5e-3);
}

TEST_CASE("circle polygon") {
  const PolyCurve c = circle_curve(2, 64, {1, -1});
  CHECK(c.size() == 64);
  CHECK(c.orientation() == 1);
  CHECK(norm(c[0] - Vec2{3, -1}) < 1e-14);
}
