#include "csf/graph_solver.hpp"

#include <cmath>
#include <vector>

namespace csf {

SampledGraph step_graph(const SampledGraph& u, double dt, const GraphBC& bc, double t) {
  const double dy = u.dy();
  require(dt > 0.0, ErrorCode::InvalidInput, "dt must be positive");
  require(dt <= dy, ErrorCode::StepTooLarge, "graph step needs dt <= dy");
  const std::size_t n = u.size();
  const double r = dt / (dy * dy);

  std::vector<double> sub(n, 0.0), diag(n, 1.0), sup(n, 0.0), rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = u[i];
  rhs.front() = bc.lo.at(t + dt);
  rhs.back() = bc.hi.at(t + dt);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double du = (u[i + 1] - u[i - 1]) / (2.0 * dy);
    const double c = r / (1.0 + du * du);
    sub[i] = -c;
    diag[i] = 1.0 + 2.0 * c;
    sup[i] = -c;
  }

  // Thomas algorithm.
  for (std::size_t i = 1; i < n; ++i) {
    require(std::abs(diag[i - 1]) >= 1e-14, ErrorCode::SolverSingular, "tridiagonal pivot vanished");
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  require(std::abs(diag[n - 1]) >= 1e-14, ErrorCode::SolverSingular, "tridiagonal pivot vanished");
  std::vector<double> out(n);
  out[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) out[i] = (rhs[i] - sup[i] * out[i + 1]) / diag[i];
  return SampledGraph(u.y_lo(), u.y_hi(), std::move(out));
}

GraphTrajectory evolve_graph(const SampledGraph& u0, double t0, double t1, double dt, const GraphBC& bc,
                             double snapshot_dt) {
  require(t0 < t1, ErrorCode::InvalidInput, "evolve_graph needs t0 < t1");
  require(dt > 0.0, ErrorCode::InvalidInput, "dt must be positive");
  GraphTrajectory traj;
  traj.push(t0, u0);
  SampledGraph u = u0;
  double t = t0;
  double next_snap = t0 + snapshot_dt;
  while (t < t1) {
    double h = dt;
    bool last = false;
    if (t + h >= t1 - 1e-12 * std::max(1.0, std::abs(t1))) {
      h = t1 - t;
      last = true;
    }
    u = step_graph(u, h, bc, t);
    t = last ? t1 : t + h;
    if (last || snapshot_dt <= 0.0 || t >= next_snap - 1e-12) {
      traj.push(t, u, StepStats{h, 0.0, false});
      while (snapshot_dt > 0.0 && next_snap <= t + 1e-12) next_snap += snapshot_dt;
    }
  }
  return traj;
}

std::pair<double, double> boundary_angles(const SampledGraph& u) {
  const std::size_t n = u.size();
  const double dy = u.dy();
  const double d_lo = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dy);
  const double d_hi = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * dy);
  return {std::atan(d_lo), std::atan(d_hi)};
}

double graph_integral(const SampledGraph& u) {
  double acc = 0.5 * (u[0] + u[u.size() - 1]);
  for (std::size_t i = 1; i + 1 < u.size(); ++i) acc += u[i];
  return acc * u.dy();
}

}  // namespace csf
