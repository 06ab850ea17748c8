#include "csf/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace csf {

double grim_profile(double y) {
  require(y > 0.0 && y < kPi, ErrorCode::DomainError, "G(y) needs 0 < y < pi, got " + std::to_string(y));
  return std::log(std::sin(y));
}

double grim_scaled(const GrimSpec& spec, double t, double y) {
  require(spec.a > 0.0, ErrorCode::InvalidInput, "reaper scale must be positive");
  const double v = spec.a * (y - spec.y0);
  require(v > 0.0 && v < kPi, ErrorCode::DomainError, "ordinate outside the reaper slab");
  const double g = std::log(std::sin(v)) / spec.a;
  const double shift = spec.a * (t + spec.tau);
  return spec.sign < 0 ? -g + shift : g - shift;
}

double grim_slope(const GrimSpec& spec, double y) {
  const double v = spec.a * (y - spec.y0);
  require(v > 0.0 && v < kPi, ErrorCode::DomainError, "ordinate outside the reaper slab");
  const double cot = std::cos(v) / std::sin(v);
  return spec.sign < 0 ? -cot : cot;
}

double grim_arclength(double a, double v) {
  require(a * v > 0.0 && a * v < kPi, ErrorCode::DomainError, "ordinate outside the reaper slab");
  return std::log(std::tan(0.5 * a * v)) / a;
}

double grim_ordinate_at(double a, double s) { return 2.0 * std::atan(std::exp(a * s)) / a; }

double shrinking_circle_radius(double r0, double t) {
  require(r0 > 0.0, ErrorCode::InvalidInput, "radius must be positive");
  require(t < 0.5 * r0 * r0, ErrorCode::Extinct, "circle is extinct at t = R0^2/2");
  return std::sqrt(r0 * r0 - 2.0 * t);
}

PolyCurve circle_curve(double r, std::size_t n, Vec2 center) {
  require(r > 0.0 && n >= 3, ErrorCode::InvalidInput, "circle needs r > 0 and n >= 3");
  std::vector<Vec2> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    v[i] = center + Vec2{r * std::cos(phi), r * std::sin(phi)};
  }
  return PolyCurve::closed_curve(std::move(v));
}

namespace {

// Point of the oval on the ray at polar angle phi. The level function
// e^{-t} cos x - cosh y is decreasing along each ray inside the strip.
Vec2 oval_point(double t, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  const double y_max = std::acosh(std::exp(-t));
  double hi = std::numeric_limits<double>::infinity();
  if (std::abs(c) > 1e-300) hi = std::min(hi, 0.5 * kPi / std::abs(c));
  if (std::abs(s) > 1e-300) hi = std::min(hi, y_max / std::abs(s));
  double lo = 0.0;
  const double e = std::exp(-t);
  auto level = [&](double r) { return e * std::cos(r * c) - std::cosh(r * s); };
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (level(mid) > 0.0 ? lo : hi) = mid;
  }
  const double r = std::abs(level(lo)) < std::abs(level(hi)) ? lo : hi;
  return {r * c, r * s};
}

}  // namespace

PolyCurve angenent_oval(double t, std::size_t n) {
  require(t < 0.0, ErrorCode::DomainError, "the oval exists only for t < 0");
  require(n >= 16, ErrorCode::InvalidInput, "oval needs at least 16 vertices");

  // Fine equal-angle pass, then vertices at equal arclength, each projected
  // back onto the curve along its own ray.
  const std::size_t fine = 16 * n;
  std::vector<double> phi(fine + 1), s(fine + 1, 0.0);
  Vec2 prev = oval_point(t, 0.0);
  for (std::size_t i = 0; i <= fine; ++i) {
    phi[i] = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(fine);
    const Vec2 p = oval_point(t, phi[i]);
    if (i > 0) s[i] = s[i - 1] + norm(p - prev);
    prev = p;
  }
  std::vector<Vec2> v(n);
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double target = s[fine] * static_cast<double>(k) / static_cast<double>(n);
    while (j + 1 < fine && s[j + 1] <= target) ++j;
    const double f = (target - s[j]) / (s[j + 1] - s[j]);
    v[k] = oval_point(t, phi[j] + f * (phi[j + 1] - phi[j]));
  }
  return PolyCurve::closed_curve(std::move(v));
}

}  // namespace csf
