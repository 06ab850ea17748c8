#pragma once

// Graphical curve shortening flow u_t = u'' / (1 + u'^2) for x = u(y).

#include <functional>
#include <utility>

#include "csf/curve.hpp"

namespace csf {

/// Endpoint conditions. A Dirichlet value may follow a provider t -> value;
/// FreeAxis pins the endpoint to x = 0.
struct GraphBC {
  enum class Kind { Dirichlet, FreeAxis };
  struct End {
    Kind kind = Kind::Dirichlet;
    double value = 0.0;
    std::function<double(double)> provider;

    double at(double t) const {
      if (kind == Kind::FreeAxis) return 0.0;
      return provider ? provider(t) : value;
    }
  };
  End lo;
  End hi;

  static GraphBC dirichlet(double lo, double hi) { return {{Kind::Dirichlet, lo, {}}, {Kind::Dirichlet, hi, {}}}; }
  static GraphBC dirichlet(std::function<double(double)> lo, std::function<double(double)> hi) {
    return {{Kind::Dirichlet, 0.0, std::move(lo)}, {Kind::Dirichlet, 0.0, std::move(hi)}};
  }
  static GraphBC free_axis() { return {{Kind::FreeAxis, 0.0, {}}, {Kind::FreeAxis, 0.0, {}}}; }
};

/// One linearly implicit step from time t to t + dt: the coefficient
/// 1/(1+u'^2) is taken from u, the second difference is implicit.
SampledGraph step_graph(const SampledGraph& u, double dt, const GraphBC& bc, double t = 0.0);

/// Steps from t0 to exactly t1. Snapshots every snapshot_dt (0: every step),
/// always including both ends.
GraphTrajectory evolve_graph(const SampledGraph& u0, double t0, double t1, double dt, const GraphBC& bc,
                             double snapshot_dt = 0.0);

/// (arctan u'(y_lo), arctan u'(y_hi)) from second-order one-sided differences.
std::pair<double, double> boundary_angles(const SampledGraph& u);

/// Trapezoid integral of u over its domain.
double graph_integral(const SampledGraph& u);

}  // namespace csf
