#include "csf/curve.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace csf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateCurve: return "DegenerateCurve";
    case ErrorCode::BoundaryNotOnAxis: return "BoundaryNotOnAxis";
    case ErrorCode::NotGraphical: return "NotGraphical";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::Extinct: return "Extinct";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::TimeTooLate: return "TimeTooLate";
    case ErrorCode::BarrierTooWide: return "BarrierTooWide";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::SolverSingular: return "SolverSingular";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::CollinearInput: return "CollinearInput";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// SampledGraph

SampledGraph::SampledGraph(double y_lo, double y_hi, std::vector<double> values)
    : y_lo_(y_lo), y_hi_(y_hi), values_(std::move(values)) {
  require(y_lo_ < y_hi_, ErrorCode::InvalidInput, "graph needs y_lo < y_hi");
  require(values_.size() >= 3, ErrorCode::InvalidInput, "graph needs at least 3 samples");
  for (double v : values_) require(std::isfinite(v), ErrorCode::InvalidInput, "graph value not finite");
}

double SampledGraph::y_at(std::size_t i) const {
  if (i + 1 == values_.size()) return y_hi_;
  return y_lo_ + dy() * static_cast<double>(i);
}

double SampledGraph::evaluate(double y) const {
  if (y <= y_lo_) return values_.front();
  if (y >= y_hi_) return values_.back();
  const double s = (y - y_lo_) / dy();
  const auto i = std::min(static_cast<std::size_t>(s), values_.size() - 2);
  const double f = s - static_cast<double>(i);
  return values_[i] * (1.0 - f) + values_[i + 1] * f;
}

// ---------------------------------------------------------------------------
// PolyCurve

PolyCurve::PolyCurve(std::vector<Vec2> v, bool closed, EndKind front, EndKind back)
    : v_(std::move(v)), closed_(closed), front_(front), back_(back) {
  require(v_.size() >= (closed_ ? 3u : 2u), ErrorCode::DegenerateCurve, "too few vertices");
  for (const Vec2& p : v_) {
    require(std::isfinite(p.x) && std::isfinite(p.y), ErrorCode::InvalidInput, "vertex not finite");
  }
  for (std::size_t i = 0; i < edge_count(); ++i) {
    require(norm(edge(i)) > kMinEdge, ErrorCode::DegenerateCurve,
            "consecutive vertices coincide at index " + std::to_string(i));
  }
}

PolyCurve PolyCurve::closed_curve(std::vector<Vec2> vertices) {
  if (vertices.size() > 3 && norm(vertices.back() - vertices.front()) <= kMinEdge) vertices.pop_back();
  return PolyCurve(std::move(vertices), true, EndKind::Free, EndKind::Free);
}

PolyCurve PolyCurve::open_curve(std::vector<Vec2> vertices, EndKind front, EndKind back) {
  return PolyCurve(std::move(vertices), false, front, back);
}

double PolyCurve::length() const {
  double len = 0.0;
  for (std::size_t i = 0; i < edge_count(); ++i) len += norm(edge(i));
  return len;
}

int PolyCurve::orientation() const {
  if (!closed_) return 0;
  double a = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) a += cross(v_[i], v_[(i + 1) % v_.size()]);
  return a > 0 ? 1 : (a < 0 ? -1 : 0);
}

std::vector<double> cumulative_length(const PolyCurve& curve) {
  std::vector<double> s(curve.edge_count() + 1, 0.0);
  for (std::size_t i = 0; i < curve.edge_count(); ++i) s[i + 1] = s[i] + norm(curve.edge(i));
  return s;
}

PolyCurve resample_uniform(const PolyCurve& curve, std::size_t n) {
  require(n >= (curve.closed() ? 3u : 2u), ErrorCode::InvalidInput, "too few target vertices");
  const auto s = cumulative_length(curve);
  const double total = s.back();
  require(total >= 1e-10, ErrorCode::DegenerateCurve, "curve has no length");

  const std::size_t m = curve.size();
  auto vertex = [&](std::size_t i) { return curve[i % m]; };
  const double step = curve.closed() ? total / static_cast<double>(n) : total / static_cast<double>(n - 1);

  std::vector<Vec2> out;
  out.reserve(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double target = step * static_cast<double>(k);
    while (seg + 1 < s.size() - 1 && s[seg + 1] <= target) ++seg;
    const double len = s[seg + 1] - s[seg];
    const double f = std::clamp((target - s[seg]) / len, 0.0, 1.0);
    out.push_back(vertex(seg) * (1.0 - f) + vertex(seg + 1) * f);
  }
  if (!curve.closed()) {
    out.front() = curve[0];
    out.back() = curve[m - 1];
    return PolyCurve::open_curve(std::move(out), curve.front(), curve.back());
  }
  return PolyCurve::closed_curve(std::move(out));
}

namespace {

constexpr double kAxisTol = 1e-9;

void check_axis_ends(const SampledGraph& g) {
  require(std::abs(g[0]) <= kAxisTol && std::abs(g[g.size() - 1]) <= kAxisTol,
          ErrorCode::BoundaryNotOnAxis, "graph endpoints must lie on x = 0");
  const auto vals = g.values();
  const double width = std::transform_reduce(vals.begin(), vals.end(), 0.0,
                                             [](double a, double b) { return std::max(a, b); },
                                             [](double v) { return std::abs(v); });
  require(width > 1e-12, ErrorCode::DegenerateCurve, "zero-width loop");
}

}  // namespace

PolyCurve reflect_close(const SampledGraph& g) {
  check_axis_ends(g);
  const std::size_t n = g.size();
  std::vector<Vec2> v;
  v.reserve(2 * n - 2);
  for (std::size_t i = 0; i < n; ++i) v.push_back({g[i], g.y_at(i)});
  v.front().x = 0.0;
  v.back().x = 0.0;
  for (std::size_t i = n - 2; i >= 1; --i) v.push_back({-g[i], g.y_at(i)});
  return PolyCurve::closed_curve(std::move(v));
}

PolyCurve half_curve_from_graph(const SampledGraph& g) {
  check_axis_ends(g);
  std::vector<Vec2> v;
  v.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v.push_back({g[i], g.y_at(i)});
  v.front().x = 0.0;
  v.back().x = 0.0;
  return PolyCurve::open_curve(std::move(v), EndKind::AxisMirror, EndKind::AxisMirror);
}

PolyCurve mirror_full(const PolyCurve& c) {
  if (!c.is_half_curve()) return c;
  const auto v = c.vertices();
  const std::size_t n = v.size();
  std::vector<Vec2> out;
  out.reserve(2 * n);
  if (c.front() == EndKind::AxisMirror && c.back() == EndKind::AxisMirror) {
    out.assign(v.begin(), v.end());
    for (std::size_t i = n - 2; i >= 1; --i) out.push_back(mirror(v[i]));
    return PolyCurve::closed_curve(std::move(out));
  }
  if (c.back() == EndKind::AxisMirror) {
    out.assign(v.begin(), v.end());
    for (std::size_t i = n - 1; i-- > 0;) out.push_back(mirror(v[i]));
    return PolyCurve::open_curve(std::move(out), c.front(), c.front());
  }
  for (std::size_t i = n; i-- > 1;) out.push_back(mirror(v[i]));
  out.insert(out.end(), v.begin(), v.end());
  return PolyCurve::open_curve(std::move(out), c.back(), c.back());
}

// ---------------------------------------------------------------------------
// Graph extraction

BranchGraph::BranchGraph(const PolyCurve& branch, double grid_hint) {
  const auto v = branch.vertices();
  double y_min = v.front().y, y_max = v.front().y, scale = 1.0;
  for (const Vec2& p : v) {
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
    scale = std::max(scale, std::abs(p.y));
  }
  const double grid = grid_hint > 0.0 ? grid_hint : (y_max - y_min) / static_cast<double>(v.size() - 1);
  const double back_tol = 1e-10 * scale;

  ys_.reserve(v.size());
  xs_.reserve(v.size());
  ys_.push_back(v.front().y);
  xs_.push_back(v.front().x);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const Vec2 p = v[i];
    if (p.y > ys_.back()) {
      ys_.push_back(p.y);
      xs_.push_back(p.x);
      continue;
    }
    if (p.y >= ys_.back() - back_tol) continue;
    // Backtracking vertex: tolerated only if it sits on the earlier branch.
    const double x_prev = (*this)(p.y);
    if (std::abs(p.x - x_prev) > 10.0 * grid) {
      fail(ErrorCode::NotGraphical, "curve revisits y = " + std::to_string(p.y) + " at a different x");
    }
  }
  require(ys_.size() >= 2, ErrorCode::NotGraphical, "branch has no y extent");
}

double BranchGraph::operator()(double y) const {
  if (y <= ys_.front()) return xs_.front();
  if (y >= ys_.back()) return xs_.back();
  const auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
  const auto i = static_cast<std::size_t>(it - ys_.begin());
  const double f = (y - ys_[i - 1]) / (ys_[i] - ys_[i - 1]);
  return xs_[i - 1] * (1.0 - f) + xs_[i] * f;
}

SampledGraph BranchGraph::sample(std::size_t n) const { return sample(y_lo(), y_hi(), n); }

SampledGraph BranchGraph::sample(double lo, double hi, std::size_t n) const {
  std::vector<double> vals(n);
  const double dy = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) vals[i] = (*this)(i + 1 == n ? hi : lo + dy * static_cast<double>(i));
  return SampledGraph(lo, hi, std::move(vals));
}

SampledGraph graph_from_curve(const PolyCurve& curve, int side, std::size_t n) {
  require(side == 1 || side == -1, ErrorCode::InvalidInput, "side must be +1 or -1");
  std::vector<Vec2> branch;
  const auto v = curve.vertices();
  if (curve.closed()) {
    const std::size_t m = v.size();
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (v[i].y < v[lo].y || (v[i].y == v[lo].y && std::abs(v[i].x) < std::abs(v[lo].x))) lo = i;
      if (v[i].y > v[hi].y || (v[i].y == v[hi].y && std::abs(v[i].x) < std::abs(v[hi].x))) hi = i;
    }
    // Departure direction of the forward path from the lowest vertex.
    double departure = 0.0;
    for (std::size_t k = 1; k < m && departure == 0.0; ++k) departure = v[(lo + k) % m].x - v[lo].x;
    const bool forward = departure * side > 0.0;
    for (std::size_t i = lo;; i = forward ? (i + 1) % m : (i + m - 1) % m) {
      branch.push_back(v[i]);
      if (i == hi) break;
    }
  } else {
    branch.assign(v.begin(), v.end());
    if (branch.front().y > branch.back().y) std::reverse(branch.begin(), branch.end());
  }
  if (side < 0) {
    for (Vec2& p : branch) p.x = -p.x;
  }
  const std::size_t samples = n == 0 ? std::max<std::size_t>(branch.size(), 3) : n;
  const double y_lo = branch.front().y;
  const double y_hi = branch.back().y;
  require(y_hi > y_lo, ErrorCode::NotGraphical, "branch has no y extent");
  const double grid = (y_hi - y_lo) / static_cast<double>(samples - 1);
  const PolyCurve b = PolyCurve::open_curve(std::move(branch), EndKind::Free, EndKind::Free);
  return BranchGraph(b, grid).sample(samples);
}

// ---------------------------------------------------------------------------
// File formats

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_field(const std::string& header, const std::string& key) {
  const auto pos = header.find(" " + key + "=");
  require(pos != std::string::npos, ErrorCode::IOError, "header missing " + key);
  return std::stod(header.substr(pos + key.size() + 2));
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IOError, "cannot open " + path);
  return in;
}

}  // namespace

void write_curve(std::ostream& out, const PolyCurve& curve, double t) {
  out << "# csf-curve v1 closed=" << (curve.closed() ? 1 : 0) << " front=" << static_cast<int>(curve.front())
      << " back=" << static_cast<int>(curve.back()) << " t=" << fmt17(t) << '\n';
  for (const Vec2& p : curve.vertices()) out << fmt17(p.x) << ',' << fmt17(p.y) << '\n';
}

void write_curve(const std::string& path, const PolyCurve& curve, double t) {
  std::ostringstream os;
  write_curve(os, curve, t);
  write_file_atomic(path, os.str());
}

PolyCurve read_curve(std::istream& in, double* t) {
  std::string header;
  std::getline(in, header);
  require(header.rfind("# csf-curve v1", 0) == 0, ErrorCode::IOError, "not a csf-curve file");
  const bool closed = parse_field(header, "closed") != 0.0;
  if (t) *t = parse_field(header, "t");
  std::vector<Vec2> v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorCode::IOError, "malformed curve line: " + line);
    v.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  if (closed) return PolyCurve::closed_curve(std::move(v));
  // end kinds are optional so hand-written files stay readable
  auto end_kind = [&](const std::string& key) {
    if (header.find(" " + key + "=") == std::string::npos) return EndKind::Fixed;
    const int k = static_cast<int>(parse_field(header, key));
    require(k >= 0 && k <= 2, ErrorCode::IOError, "bad end kind in header");
    return static_cast<EndKind>(k);
  };
  return PolyCurve::open_curve(std::move(v), end_kind("front"), end_kind("back"));
}

PolyCurve read_curve(const std::string& path, double* t) {
  auto in = open_in(path);
  return read_curve(in, t);
}

void write_graph(std::ostream& out, const SampledGraph& g, double t) {
  out << "# csf-graph v1 ylo=" << fmt17(g.y_lo()) << " yhi=" << fmt17(g.y_hi()) << " t=" << fmt17(t) << '\n';
  for (double v : g.values()) out << fmt17(v) << '\n';
}

void write_graph(const std::string& path, const SampledGraph& g, double t) {
  std::ostringstream os;
  write_graph(os, g, t);
  write_file_atomic(path, os.str());
}

SampledGraph read_graph(std::istream& in, double* t) {
  std::string header;
  std::getline(in, header);
  require(header.rfind("# csf-graph v1", 0) == 0, ErrorCode::IOError, "not a csf-graph file");
  const double lo = parse_field(header, "ylo");
  const double hi = parse_field(header, "yhi");
  if (t) *t = parse_field(header, "t");
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    vals.push_back(std::stod(line));
  }
  return SampledGraph(lo, hi, std::move(vals));
}

SampledGraph read_graph(const std::string& path, double* t) {
  auto in = open_in(path);
  return read_graph(in, t);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::IOError, "cannot write " + tmp.string());
    out << contents;
    require(out.good(), ErrorCode::IOError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  require(!ec, ErrorCode::IOError, "rename failed for " + path);
}

}  // namespace csf
