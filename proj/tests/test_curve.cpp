#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "csf/analysis.hpp"
#include "csf/curve.hpp"
#include "csf/exact.hpp"
#include "csf/gluing.hpp"

using namespace csf;

namespace {

PolyCurve unit_square() { return PolyCurve::closed_curve({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

SampledGraph sampled(double lo, double hi, std::size_t n, double (*f)(double)) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(lo + (hi - lo) * i / (n - 1.0));
  return SampledGraph(lo, hi, v);
}

double max_set_distance(const PolyCurve& a, const PolyCurve& b) {
  double worst = 0;
  for (const Vec2& p : a.vertices()) {
    double best = 1e300;
    for (const Vec2& q : b.vertices()) best = std::min(best, norm(p - q));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("resample square to octagon spacing") {
  const PolyCurve r = resample_uniform(unit_square(), 8);
  REQUIRE(r.size() == 8);
  CHECK(r.closed());
  CHECK(r.length() == doctest::Approx(4.0).epsilon(1e-12));
  const auto s = cumulative_length(r);
  for (std::size_t i = 0; i < 8; ++i) CHECK(s[i] == doctest::Approx(0.5 * i).epsilon(1e-12));
  CHECK(norm(r[1] - Vec2{0.5, 0}) < 1e-12);
}

TEST_CASE("resample segment") {
  const PolyCurve r = resample_uniform(PolyCurve::open_curve({{0, 0}, {1, 0}}), 3);
  REQUIRE(r.size() == 3);
  CHECK(norm(r[0] - Vec2{0, 0}) < 1e-15);
  CHECK(norm(r[1] - Vec2{0.5, 0}) < 1e-15);
  CHECK(norm(r[2] - Vec2{1, 0}) < 1e-15);
}

TEST_CASE("coincident vertices are degenerate") {
  try {
    PolyCurve::closed_curve({{0, 0}, {0, 0}, {1, 0}, {0, 1}});
    FAIL("expected DegenerateCurve");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateCurve);
  }
}

TEST_CASE("resample is idempotent") {
  const PolyCurve c = circle_curve(1.3, 37);
  const PolyCurve once = resample_uniform(c, 64);
  const PolyCurve twice = resample_uniform(once, 64);
  // second pass only moves vertices along the same polyline
  double worst = 0;
  for (std::size_t i = 0; i < 64; ++i) worst = std::max(worst, norm(once[i] - twice[i]));
  CHECK(worst < 2e-2 * once.length() / 64);
  const PolyCurve sq = resample_uniform(unit_square(), 8);
  const PolyCurve sq2 = resample_uniform(sq, 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(norm(sq[i] - sq2[i]) < 1e-9);
}

TEST_CASE("reflect_close of sine bump") {
  const SampledGraph g = sampled(0, kPi, 5, [](double y) { return std::sin(y); });
  const PolyCurve c = reflect_close(g);
  CHECK(c.closed());
  CHECK(c.size() == 8);
  CHECK(c.orientation() == 1);
  std::vector<Vec2> m;
  for (const Vec2& p : c.vertices()) m.push_back(mirror(p));
  CHECK(max_set_distance(c, PolyCurve::closed_curve(m)) < 1e-9);
}

TEST_CASE("reflect_close of zero graph is degenerate") {
  try {
    reflect_close(SampledGraph(0, 1, {0, 0, 0}));
    FAIL("expected DegenerateCurve");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateCurve);
  }
}

TEST_CASE("graph of unit circle") {
  const PolyCurve c = circle_curve(1.0, 400);
  const SampledGraph g = graph_from_curve(c, +1, 200);
  CHECK(g.y_lo() == doctest::Approx(-1).epsilon(1e-3));
  CHECK(g.y_hi() == doctest::Approx(1).epsilon(1e-3));
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.y_at(i);
    worst = std::max(worst, std::abs(g[i] - std::sqrt(std::max(0.0, 1 - y * y))));
  }
  // the polygon's chord error near the poles dominates
  CHECK(worst < 1e-2);
  double interior = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.y_at(i);
    if (std::abs(y) < 0.9) interior = std::max(interior, std::abs(g[i] - std::sqrt(1 - y * y)));
  }
  CHECK(interior < 1e-3);
}

TEST_CASE("folded branch is not graphical") {
  // hairpin: up the right, back down, then up again further out
  std::vector<Vec2> v;
  for (int i = 0; i <= 20; ++i) v.push_back({1.0, 0.1 * i});
  for (int i = 1; i <= 10; ++i) v.push_back({1.0 + 0.1 * i, 2.0 - 0.1 * i});
  for (int i = 1; i <= 30; ++i) v.push_back({2.0, 1.0 + 0.1 * i});
  try {
    graph_from_curve(PolyCurve::open_curve(v), +1);
    FAIL("expected NotGraphical");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotGraphical);
  }
}

TEST_CASE("figure-8 side branch") {
  // lowest to highest vertex, leaving towards +x: the outer arc of the right lobe
  std::vector<Vec2> v;
  for (int i = 0; i < 200; ++i) {
    const double s = 2 * kPi * i / 200.0;
    v.push_back({std::cos(s), 0.5 * std::sin(2 * s)});
  }
  const SampledGraph g = graph_from_curve(PolyCurve::closed_curve(v), +1, 101);
  CHECK(axis_crossings(g).empty());
  CHECK(g.evaluate(0.0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("graph_from_curve inverts reflect_close") {
  const SampledGraph g = sampled(0, kPi, 101, [](double y) { return 2 * std::sin(y) + 0.3 * std::sin(3 * y); });
  const SampledGraph back = graph_from_curve(reflect_close(g), +1, 101);
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(back.evaluate(g.y_at(i)) - g[i]));
  CHECK(worst <= 2 * g.dy());
}

TEST_CASE("ladder graph has 2n+2 axis crossings") {
  const LadderConfig cfg{{1, 2}, {5, 5}, 10, 1};
  const DerivedLadder dl = ladder_derive(cfg);
  const SampledGraph g = build_broken_ladder(cfg, dl, -20, 4001);
  const SampledGraph back = graph_from_curve(reflect_close(g), +1, 4001);
  CHECK(axis_crossings(back).size() == 4);
}

TEST_CASE("half curve mirrors to closed curve") {
  const SampledGraph g = sampled(0, kPi, 50, [](double y) { return std::sin(y); });
  const PolyCurve half = half_curve_from_graph(g);
  CHECK(half.is_half_curve());
  const PolyCurve full = mirror_full(half);
  CHECK(full.closed());
  CHECK(enclosed_area(full) == doctest::Approx(enclosed_area(reflect_close(g))).epsilon(1e-12));
}

TEST_CASE("curve csv round trip keeps end kinds and digits") {
  const PolyCurve c = PolyCurve::open_curve({{0, 0.1}, {1.0 / 3.0, 0.7}, {0, 1.9}}, EndKind::AxisMirror,
                                            EndKind::Fixed);
  std::stringstream ss;
  write_curve(ss, c, -2.5);
  double t = 0;
  const PolyCurve back = read_curve(ss, &t);
  CHECK(t == -2.5);
  CHECK(back.front() == EndKind::AxisMirror);
  CHECK(back.back() == EndKind::Fixed);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back[i].x == c[i].x);
}

TEST_CASE("graph csv round trip") {
  const SampledGraph g(0.5, 1.5, {1, 2.25, 3.0 / 7.0});
  std::stringstream ss;
  write_graph(ss, g, 4);
  double t = 0;
  const SampledGraph back = read_graph(ss, &t);
  CHECK(t == 4);
  CHECK(back.y_lo() == 0.5);
  CHECK(back[2] == g[2]);
}

TEST_CASE("bad header is an IOError") {
  std::stringstream ss("x,y\n1,2\n");
  try {
    read_curve(ss);
    FAIL("expected IOError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IOError);
  }
}

TEST_CASE("atomic write leaves no temp file") {
  const auto dir = std::filesystem::temp_directory_path() / "csf_test_curve";
  std::filesystem::remove_all(dir);
  write_curve((dir / "c.csv").string(), unit_square(), 0);
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    (void)e;
    ++n;
  }
  CHECK(n == 1);
  CHECK(read_curve((dir / "c.csv").string()).size() == 4);
  std::filesystem::remove_all(dir);
}
