#pragma once

// Closed-form curve shortening flows: Grim Reapers, shrinking circles and the
// Angenent oval.

#include <cstddef>
#include <numbers>

#include "csf/curve.hpp"

namespace csf {

inline constexpr double kPi = std::numbers::pi;

/// G(y) = ln sin y on (0, pi).
double grim_profile(double y);

/// A Grim Reaper of width pi/a sitting on the slab (y0, y0 + pi/a).
/// sign = -1 opens towards -x and moves left at speed a; sign = +1 is the
/// mirror image moving right.
struct GrimSpec {
  double a = 1.0;
  double y0 = 0.0;
  int sign = -1;
  double tau = 0.0;

  double slab_lo() const { return y0; }
  double slab_hi() const { return y0 + kPi / a; }
  double apex() const { return y0 + 0.5 * kPi / a; }
};

/// sign = -1: -(1/a) G(a(y - y0)) + a(t + tau); sign = +1: (1/a) G(a(y - y0)) - a(t + tau).
double grim_scaled(const GrimSpec& spec, double t, double y);
/// d/dy of grim_scaled.
double grim_slope(const GrimSpec& spec, double y);

/// Arclength from the apex along a reaper arm of scale a, as a function of the
/// slab-relative ordinate v = y - y0 in (0, pi/a). Negative below the apex.
double grim_arclength(double a, double v);
/// Inverse of grim_arclength.
double grim_ordinate_at(double a, double s);

/// sqrt(R0^2 - 2t).
double shrinking_circle_radius(double r0, double t);

/// Regular N-gon inscribed in the circle of radius r, counterclockwise.
PolyCurve circle_curve(double r, std::size_t n, Vec2 center = {});

/// The oval cosh(y) = e^{-t} cos(x), counterclockwise, N vertices spaced
/// approximately uniformly in arclength; every vertex lies on the curve.
PolyCurve angenent_oval(double t, std::size_t n);

/// Area enclosed by the Angenent oval at time t (= -2 pi t).
inline double angenent_oval_area(double t) { return -2.0 * kPi * t; }

}  // namespace csf
