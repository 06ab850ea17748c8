#include "csf/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "csf/analysis.hpp"

namespace csf {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 5e-13 ? 0.0 : v);
  return buf;
}

PolyCurve drawable(const PolyCurve& c, const RenderStyle& style) {
  return style.mirror_half && c.is_half_curve() ? mirror_full(c) : c;
}

// y is flipped so the picture has y up.
std::string path_data(const PolyCurve& c) {
  std::string d;
  const auto v = c.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    d += i == 0 ? "M" : " L";
    d += num(v[i].x) + ' ' + num(-v[i].y);
  }
  if (c.closed()) d += " Z";
  return d;
}

}  // namespace

ViewBox trajectory_view_box(const CurveTrajectory& frames, const RenderStyle& style) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const PolyCurve& c : frames.snapshots) {
    for (const Vec2& p : drawable(c, style).vertices()) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  }
  if (!(x1 >= x0)) return {};
  const double m = 0.05 * std::max({x1 - x0, y1 - y0, 1e-9});
  // viewBox coordinates use -y
  return {x0 - m, -y1 - m, x1 - x0 + 2 * m, y1 - y0 + 2 * m};
}

std::string svg_frame(const PolyCurve& curve, double t, const ViewBox& box, const RenderStyle& style,
                      const std::vector<PolyCurve>& overlays) {
  const double height_px = std::max(1.0, std::round(style.width_px * box.h / box.w));
  const double px = box.w / style.width_px;  // one pixel in user units
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(style.width_px) + "\" height=\"" +
       num(height_px) + "\" viewBox=\"" + num(box.x) + ' ' + num(box.y) + ' ' + num(box.w) + ' ' + num(box.h) +
       "\">\n";
  s += "<rect x=\"" + num(box.x) + "\" y=\"" + num(box.y) + "\" width=\"" + num(box.w) + "\" height=\"" +
       num(box.h) + "\" fill=\"white\"/>\n";
  s += "<line x1=\"0\" y1=\"" + num(box.y) + "\" x2=\"0\" y2=\"" + num(box.y + box.h) +
       "\" stroke=\"#bbbbbb\" stroke-width=\"" + num(px) + "\"/>\n";

  const PolyCurve c = drawable(curve, style);
  if (style.hulls && c.size() >= 3) {
    try {
      const PolyCurve hull = convex_hull(c.vertices());
      s += "<path class=\"hull\" d=\"" + path_data(hull) + "\" fill=\"#4a90e2\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    } catch (const Error&) {
      // collinear frames get no hull
    }
  }
  for (const PolyCurve& o : overlays) {
    s += "<path class=\"overlay\" d=\"" + path_data(drawable(o, style)) +
         "\" fill=\"none\" stroke=\"#bd10e0\" stroke-dasharray=\"" + num(4 * px) + "\" stroke-width=\"" +
         num(style.stroke * px) + "\"/>\n";
  }
  s += "<path class=\"curve\" d=\"" + path_data(c) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"" +
       num(style.stroke * px) + "\"/>\n";
  if (style.markers) {
    for (const Intersection& hit : self_intersections(c)) {
      if (hit.grazing) continue;
      s += "<circle class=\"crossing\" cx=\"" + num(hit.point.x) + "\" cy=\"" + num(-hit.point.y) + "\" r=\"" +
           num(5 * px) + "\" fill=\"none\" stroke=\"#d0021b\" stroke-width=\"" + num(style.stroke * px) + "\"/>\n";
    }
  }
  s += "<text x=\"" + num(box.x + 8 * px) + "\" y=\"" + num(box.y + 20 * px) + "\" font-size=\"" + num(14 * px) +
       "\" font-family=\"monospace\">t = " + num(t) + "</text>\n";
  s += "</svg>\n";
  return s;
}

std::vector<std::string> render_svg(const CurveTrajectory& frames, const RenderStyle& style,
                                    const std::string& out_dir, const std::string& prefix) {
  std::vector<std::string> files;
  if (frames.empty()) return files;
  const ViewBox box = trajectory_view_box(frames, style);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%05zu.svg", prefix.c_str(), i);
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    static const std::vector<PolyCurve> none;
    const auto& over = i < style.overlays.size() ? style.overlays[i] : none;
    write_file_atomic(path, svg_frame(frames.snapshots[i], frames.times[i], box, style, over));
    files.push_back(path);
  }
  return files;
}

}  // namespace csf
