#include "riverfuse/geo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riverfuse::geo {

double signed_area(const GeoPolygon& p) {
  const auto& r = p.ring;
  if (r.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0, n = r.size(); i < n; ++i) {
    const GeoPoint& a = r[i];
    const GeoPoint& b = r[(i + 1) % n];
    s += a.lon * b.lat - b.lon * a.lat;
  }
  return 0.5 * s;
}

double area(const GeoPolygon& p) { return std::fabs(signed_area(p)); }

GeoPoint vertex_mean(const GeoPolygon& p) {
  GeoPoint c;
  if (p.ring.empty()) return c;
  for (const GeoPoint& v : p.ring) {
    c.lon += v.lon;
    c.lat += v.lat;
  }
  c.lon /= static_cast<double>(p.ring.size());
  c.lat /= static_cast<double>(p.ring.size());
  return c;
}

namespace {

// Perpendicular signed distance of q from the directed edge a->b, in degrees.
// Positive = left of the edge (inside for CCW rings).
double edge_side(const GeoPoint& a, const GeoPoint& b, const GeoPoint& q) {
  const double ex = b.lon - a.lon;
  const double ey = b.lat - a.lat;
  const double cross = ex * (q.lat - a.lat) - ey * (q.lon - a.lon);
  const double len = std::hypot(ex, ey);
  if (len == 0.0) return std::hypot(q.lon - a.lon, q.lat - a.lat);
  return cross / len;
}

GeoPoint line_intersect(const GeoPoint& a, const GeoPoint& b,
                        const GeoPoint& c, const GeoPoint& d) {
  const double rx = b.lon - a.lon, ry = b.lat - a.lat;
  const double sx = d.lon - c.lon, sy = d.lat - c.lat;
  const double denom = rx * sy - ry * sx;
  // Callers only intersect edges that straddle the clip line, so denom is
  // bounded away from zero; guard anyway.
  if (denom == 0.0) return a;
  const double t = ((c.lon - a.lon) * sy - (c.lat - a.lat) * sx) / denom;
  return {a.lon + t * rx, a.lat + t * ry};
}

bool segments_intersect(const GeoPoint& p1, const GeoPoint& p2,
                        const GeoPoint& q1, const GeoPoint& q2) {
  const auto orient = [](const GeoPoint& a, const GeoPoint& b,
                         const GeoPoint& c) {
    const double v = edge_side(a, b, c);
    if (v > kEdgeEpsDeg) return 1;
    if (v < -kEdgeEpsDeg) return -1;
    return 0;
  };
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;

  const auto on_segment = [&](const GeoPoint& a, const GeoPoint& b,
                              const GeoPoint& c, int o) {
    if (o != 0) return false;
    return std::min(a.lon, b.lon) - kEdgeEpsDeg <= c.lon &&
           c.lon <= std::max(a.lon, b.lon) + kEdgeEpsDeg &&
           std::min(a.lat, b.lat) - kEdgeEpsDeg <= c.lat &&
           c.lat <= std::max(a.lat, b.lat) + kEdgeEpsDeg;
  };
  return on_segment(p1, p2, q1, o1) || on_segment(p1, p2, q2, o2) ||
         on_segment(q1, q2, p1, o3) || on_segment(q1, q2, p2, o4);
}

}  // namespace

bool is_convex_ccw(const GeoPolygon& p) {
  const auto& r = p.ring;
  if (r.size() < 3) return false;
  for (std::size_t i = 0, n = r.size(); i < n; ++i) {
    if (edge_side(r[i], r[(i + 1) % n], r[(i + 2) % n]) < -kEdgeEpsDeg)
      return false;
  }
  return signed_area(p) > 0.0;
}

bool point_in_convex(const GeoPolygon& p, const GeoPoint& q) {
  const auto& r = p.ring;
  if (r.size() < 3) return false;
  for (std::size_t i = 0, n = r.size(); i < n; ++i) {
    if (edge_side(r[i], r[(i + 1) % n], q) < -kEdgeEpsDeg) return false;
  }
  return true;
}

GeoPolygon convex_clip(const GeoPolygon& subject, const GeoPolygon& clip) {
  if (subject.empty() || clip.empty()) return {};
  std::vector<GeoPoint> output = subject.ring;
  const auto& cr = clip.ring;
  for (std::size_t i = 0, n = cr.size(); i < n && !output.empty(); ++i) {
    const GeoPoint& ca = cr[i];
    const GeoPoint& cb = cr[(i + 1) % n];
    std::vector<GeoPoint> input;
    input.swap(output);
    for (std::size_t j = 0, m = input.size(); j < m; ++j) {
      const GeoPoint& cur = input[j];
      const GeoPoint& prev = input[(j + m - 1) % m];
      const double dc = edge_side(ca, cb, cur);
      const double dp = edge_side(ca, cb, prev);
      const bool cur_in = dc >= -kEdgeEpsDeg;
      const bool prev_in = dp >= -kEdgeEpsDeg;
      if (cur_in) {
        if (!prev_in) output.push_back(line_intersect(prev, cur, ca, cb));
        output.push_back(cur);
      } else if (prev_in) {
        output.push_back(line_intersect(prev, cur, ca, cb));
      }
    }
  }
  if (output.size() < 3) return {};
  return GeoPolygon{std::move(output)};
}

double rotated_iou(const GeoPolygon& a, const GeoPolygon& b) {
  const double aa = area(a);
  const double ab = area(b);
  const double ai = area(convex_clip(a, b));
  const double u = aa + ab - ai;
  if (u <= 0.0) return 0.0;
  return ai / u;
}

bool polygon_intersects_polyline(const GeoPolygon& poly,
                                 const std::vector<GeoPoint>& line) {
  if (poly.empty() || line.empty()) return false;
  for (const GeoPoint& v : line) {
    if (point_in_convex(poly, v)) return true;
  }
  const auto& r = poly.ring;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    for (std::size_t j = 0, n = r.size(); j < n; ++j) {
      if (segments_intersect(line[i], line[i + 1], r[j], r[(j + 1) % n]))
        return true;
    }
  }
  return false;
}

LocalFrame::LocalFrame(GeoPoint origin_) : origin(origin_) {
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  m_per_deg_lat = 111320.0;
  m_per_deg_lon = 111320.0 * std::cos(origin.lat * kDegToRad);
}

std::pair<double, double> LocalFrame::to_local(const GeoPoint& p) const {
  return {(p.lon - origin.lon) * m_per_deg_lon,
          (p.lat - origin.lat) * m_per_deg_lat};
}

double local_distance_m(const LocalFrame& frame, const GeoPoint& p,
                        const GeoPoint& q) {
  const auto [px, py] = frame.to_local(p);
  const auto [qx, qy] = frame.to_local(q);
  return std::hypot(px - qx, py - qy);
}

GeoPoint pixel_to_geo(const Geotransform& gt, double col, double row) {
  return {gt.x0 + gt.dx_col * col + gt.dx_row * row,
          gt.y0 + gt.dy_col * col + gt.dy_row * row};
}

std::pair<double, double> geo_to_pixel(const Geotransform& gt,
                                       const GeoPoint& p) {
  const double det = gt.determinant();
  if (det == 0.0)
    throw std::invalid_argument("geo_to_pixel: singular geotransform");
  const double dx = p.lon - gt.x0;
  const double dy = p.lat - gt.y0;
  return {(dx * gt.dy_row - dy * gt.dx_row) / det,
          (dy * gt.dx_col - dx * gt.dy_col) / det};
}

void Rect::expand(const GeoPoint& p) {
  min_lon = std::min(min_lon, p.lon);
  min_lat = std::min(min_lat, p.lat);
  max_lon = std::max(max_lon, p.lon);
  max_lat = std::max(max_lat, p.lat);
}

Rect Rect::of(const std::vector<GeoPoint>& pts) {
  if (pts.empty()) return {};
  Rect r{pts[0].lon, pts[0].lat, pts[0].lon, pts[0].lat};
  for (const GeoPoint& p : pts) r.expand(p);
  return r;
}

namespace {
constexpr std::uint32_t kNodeFanout = 16;
}

RectIndex::RectIndex(std::vector<std::pair<Rect, std::uint32_t>> items)
    : items_(std::move(items)) {
  if (items_.empty()) return;

  // Sort-Tile-Recursive packing: order by lon, tile into vertical slices,
  // order each slice by lat, then chunk into leaves.
  const std::size_t n = items_.size();
  const std::size_t leaf_count = (n + kNodeFanout - 1) / kNodeFanout;
  const std::size_t slice_count = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(leaf_count))));
  const std::size_t slice_size =
      ((leaf_count + slice_count - 1) / slice_count) * kNodeFanout;

  const auto center_lon = [](const std::pair<Rect, std::uint32_t>& it) {
    return 0.5 * (it.first.min_lon + it.first.max_lon);
  };
  const auto center_lat = [](const std::pair<Rect, std::uint32_t>& it) {
    return 0.5 * (it.first.min_lat + it.first.max_lat);
  };
  std::sort(items_.begin(), items_.end(),
            [&](const auto& a, const auto& b) {
              if (center_lon(a) != center_lon(b))
                return center_lon(a) < center_lon(b);
              return a.second < b.second;
            });
  for (std::size_t s = 0; s < n; s += slice_size) {
    const std::size_t e = std::min(n, s + slice_size);
    std::sort(items_.begin() + static_cast<std::ptrdiff_t>(s),
              items_.begin() + static_cast<std::ptrdiff_t>(e),
              [&](const auto& a, const auto& b) {
                if (center_lat(a) != center_lat(b))
                  return center_lat(a) < center_lat(b);
                return a.second < b.second;
              });
  }

  std::vector<Node> level;
  for (std::size_t s = 0; s < n; s += kNodeFanout) {
    const std::size_t e = std::min(n, s + kNodeFanout);
    Node node;
    node.first = static_cast<std::uint32_t>(s);
    node.count = static_cast<std::uint32_t>(e - s);
    node.box = items_[s].first;
    for (std::size_t i = s + 1; i < e; ++i) {
      node.box.expand({items_[i].first.min_lon, items_[i].first.min_lat});
      node.box.expand({items_[i].first.max_lon, items_[i].first.max_lat});
    }
    level.push_back(node);
  }
  levels_.push_back(std::move(level));

  while (levels_.back().size() > 1) {
    const std::vector<Node>& below = levels_.back();
    std::vector<Node> up;
    for (std::size_t s = 0; s < below.size(); s += kNodeFanout) {
      const std::size_t e = std::min(below.size(), s + kNodeFanout);
      Node node;
      node.first = static_cast<std::uint32_t>(s);
      node.count = static_cast<std::uint32_t>(e - s);
      node.box = below[s].box;
      for (std::size_t i = s + 1; i < e; ++i) {
        node.box.expand({below[i].box.min_lon, below[i].box.min_lat});
        node.box.expand({below[i].box.max_lon, below[i].box.max_lat});
      }
      up.push_back(node);
    }
    levels_.push_back(std::move(up));
  }
}

void RectIndex::query(const Rect& r, std::vector<std::uint32_t>& out) const {
  out.clear();
  if (levels_.empty()) return;

  // Iterative descent; stack holds (level, node index).
  std::vector<std::pair<std::size_t, std::uint32_t>> stack;
  stack.emplace_back(levels_.size() - 1, 0);
  while (!stack.empty()) {
    const auto [lvl, idx] = stack.back();
    stack.pop_back();
    const Node& node = levels_[lvl][idx];
    if (!node.box.intersects(r)) continue;
    if (lvl == 0) {
      for (std::uint32_t i = 0; i < node.count; ++i) {
        const auto& item = items_[node.first + i];
        if (item.first.intersects(r)) out.push_back(item.second);
      }
    } else {
      for (std::uint32_t i = 0; i < node.count; ++i)
        stack.emplace_back(lvl - 1, node.first + i);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

std::vector<std::uint32_t> RectIndex::query(const Rect& r) const {
  std::vector<std::uint32_t> out;
  query(r, out);
  return out;
}

}  // namespace riverfuse::geo
