#pragma once

// Deterministic SVG frames for curve trajectories.

#include <string>
#include <vector>

#include "csf/curve.hpp"

namespace csf {

struct ViewBox {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;
};

struct RenderStyle {
  double width_px = 800.0;
  double stroke = 1.5;        // in pixels
  bool mirror_half = true;    // draw half curves with their mirror image
  bool markers = false;       // circle transversal self-crossings
  bool hulls = false;         // shade the convex hull of each frame
  std::vector<std::vector<PolyCurve>> overlays;  // per frame (index-aligned), drawn dashed
};

/// Bounding box of all frames (mirrored where style asks for it) with a 5% margin.
ViewBox trajectory_view_box(const CurveTrajectory& frames, const RenderStyle& style);

/// SVG text for one frame. The y axis points up.
std::string svg_frame(const PolyCurve& curve, double t, const ViewBox& box, const RenderStyle& style,
                      const std::vector<PolyCurve>& overlays = {});

/// Writes <prefix>_00000.svg ... into out_dir, one per frame, and returns the
/// paths. An empty trajectory writes nothing.
std::vector<std::string> render_svg(const CurveTrajectory& frames, const RenderStyle& style,
                                    const std::string& out_dir, const std::string& prefix = "frame");

}  // namespace csf
