#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "csf/exact.hpp"
#include "csf/graph_solver.hpp"

using namespace csf;

namespace {

SampledGraph sample(double lo, double hi, std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return SampledGraph(lo, hi, v);
}

double max_diff(const SampledGraph& a, const SampledGraph& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("steady states") {
  const SampledGraph zero(0, 1, std::vector<double>(50, 0.0));
  CHECK(max_diff(step_graph(zero, 0.02, GraphBC::dirichlet(0, 0)), zero) == 0);
  const SampledGraph line = sample(0, 1, 64, [](double y) { return 0.3 * y; });
  SampledGraph u = line;
  for (int k = 0; k < 100; ++k) u = step_graph(u, 1e-2, GraphBC::dirichlet(0, 0.3));
  CHECK(max_diff(u, line) <= 1e-12);
  const GraphTrajectory tr = evolve_graph(zero, 0, 1, 0.01, GraphBC::dirichlet(0, 0), 0.25);
  CHECK(tr.size() == 5);
  for (const SampledGraph& s : tr.snapshots) CHECK(max_diff(s, zero) == 0);
}

TEST_CASE("grim reaper translates") {
  const double lo = 0.2, hi = kPi - 0.2, t0 = -1.0, s = 0.5;
  auto exact = [](double t) { return [t](double y) { return grim_profile(y) - t; }; };
  const SampledGraph u0 = sample(lo, hi, 2000, exact(t0));
  const GraphBC bc = GraphBC::dirichlet([&](double t) { return grim_profile(lo) - t; },
                                        [&](double t) { return grim_profile(hi) - t; });
  const GraphTrajectory tr = evolve_graph(u0, t0, t0 + s, 1e-4, bc, 0.0);
  CHECK(tr.times.back() == doctest::Approx(t0 + s).epsilon(1e-12));
  CHECK(max_diff(tr.snapshots.back(), sample(lo, hi, 2000, exact(t0 + s))) <= 1e-4);
}

TEST_CASE("small sine decays at the heat rate") {
  const SampledGraph u0 = sample(0, 1, 401, [](double y) { return 0.01 * std::sin(kPi * y); });
  const GraphTrajectory tr = evolve_graph(u0, 0, 0.1, 1e-5, GraphBC::dirichlet(0, 0), 0.02);
  for (std::size_t k = 1; k < tr.size(); ++k) {
    const double ratio = tr.snapshots[k][200] / 0.01;
    const double heat = std::exp(-kPi * kPi * tr.times[k]);
    CHECK(std::abs(ratio - heat) <= 0.05 * heat);
  }
}

TEST_CASE("boundary angles") {
  const auto [a, b] = boundary_angles(sample(0, 1, 50, [](double y) { return y; }));
  CHECK(a == doctest::Approx(kPi / 4).epsilon(1e-12));
  CHECK(b == doctest::Approx(kPi / 4).epsilon(1e-12));
  const auto [z0, z1] = boundary_angles(SampledGraph(0, 1, std::vector<double>(20, 0.0)));
  CHECK(z0 == 0);
  CHECK(z1 == 0);
  const auto [g0, g1] = boundary_angles(sample(0.2, kPi - 0.2, 4000, [](double y) { return grim_profile(y) + 3; }));
  CHECK(g0 == doctest::Approx(std::atan(1 / std::tan(0.2))).epsilon(1e-5));
  CHECK(g0 == doctest::Approx(1.3708).epsilon(1e-4));
  CHECK(g1 == doctest::Approx(-g0).epsilon(1e-5));
}

TEST_CASE("area rate equals the turning of the end tangents") {
  // d/dt int u = int u'' / (1 + u'^2) = [arctan u']
  const SampledGraph u0 = sample(0, 2, 801, [](double y) { return std::sin(kPi * y / 2) * (1 + 0.5 * y); });
  const GraphTrajectory tr = evolve_graph(u0, 0, 0.2, 1e-5, GraphBC::dirichlet(0, 0), 0.002);
  double worst = 0;
  for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
    const double rate =
        (graph_integral(tr.snapshots[k + 1]) - graph_integral(tr.snapshots[k - 1])) / (tr.times[k + 1] - tr.times[k - 1]);
    const auto [lo, hi] = boundary_angles(tr.snapshots[k]);
    worst = std::max(worst, std::abs(rate - (hi - lo)));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("comparison and maximum property") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> bump(0.0, 0.3);
  std::vector<double> base(201), above(201);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double y = i / 200.0;
    base[i] = std::sin(kPi * y) + 0.2 * std::sin(5 * kPi * y);
    above[i] = base[i] + (i == 0 || i == 200 ? 0.0 : bump(rng) * std::sin(kPi * y));
  }
  SampledGraph u(0, 1, base), v(0, 1, above);
  double prev_max = 1e300;
  for (int k = 0; k < 2000; ++k) {
    u = step_graph(u, 5e-5, GraphBC::dirichlet(0, 0));
    v = step_graph(v, 5e-5, GraphBC::dirichlet(0, 0));
    double m = -1e300;
    for (std::size_t i = 0; i < u.size(); ++i) {
      REQUIRE(u[i] <= v[i] + 1e-8);
      m = std::max(m, u[i]);
    }
    REQUIRE(m <= prev_max + 1e-14);
    prev_max = m;
  }
}

TEST_CASE("free axis ends") {
  const SampledGraph u0 = sample(0, 1, 101, [](double y) { return std::sin(kPi * y); });
  const SampledGraph u1 = step_graph(u0, 1e-3, GraphBC::free_axis());
  CHECK(u1[0] == 0);
  CHECK(u1[100] == 0);
}

TEST_CASE("trajectory ends exactly at t1") {
  const SampledGraph u0 = sample(0, 1, 51, [](double y) { return y * (1 - y); });
  const GraphTrajectory tr = evolve_graph(u0, 0.0, 0.0105, 1e-3, GraphBC::dirichlet(0, 0), 0.005);
  REQUIRE(tr.size() == 4);
  CHECK(tr.times[1] == doctest::Approx(0.005));
  CHECK(tr.times.back() == 0.0105);
}
