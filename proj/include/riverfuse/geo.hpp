// Planar geometry in WGS84 lon/lat: affine pixel mapping, convex polygon
// clipping, rotated IoU, polygon/polyline intersection, a local metric frame,
// and a packed bounding-rectangle tree for candidate pruning.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace riverfuse::geo {

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
};

// Counter-clockwise vertex ring, closed implicitly (last vertex != first).
struct GeoPolygon {
  std::vector<GeoPoint> ring;

  bool empty() const { return ring.size() < 3; }
};

// Absolute epsilon, in degrees, for on-edge classification. Side tests divide
// the cross product by the edge length so the tolerance is a perpendicular
// distance, not an area.
inline constexpr double kEdgeEpsDeg = 1e-12;

double signed_area(const GeoPolygon& p);
double area(const GeoPolygon& p);
GeoPoint vertex_mean(const GeoPolygon& p);
bool is_convex_ccw(const GeoPolygon& p);

// Boundary-inclusive point test; polygon must be convex CCW.
bool point_in_convex(const GeoPolygon& p, const GeoPoint& q);

// Sutherland-Hodgman clip of a convex subject against a convex CCW clip
// polygon. Returns an empty polygon when the inputs are disjoint.
GeoPolygon convex_clip(const GeoPolygon& subject, const GeoPolygon& clip);

// area(a∩b) / area(a∪b); 0 when the union has zero area. Convex inputs.
double rotated_iou(const GeoPolygon& a, const GeoPolygon& b);

// True iff any segment of the polyline crosses or touches the polygon, or any
// vertex lies inside it. A single-vertex line is tested as point-in-polygon.
// Boundary contact counts as intersection.
bool polygon_intersects_polyline(const GeoPolygon& poly,
                                 const std::vector<GeoPoint>& line);

// Equirectangular frame for metric quantities over a small region.
struct LocalFrame {
  GeoPoint origin;
  double m_per_deg_lat = 111320.0;
  double m_per_deg_lon = 111320.0;

  explicit LocalFrame(GeoPoint origin_);

  // (east, north) meters relative to the origin.
  std::pair<double, double> to_local(const GeoPoint& p) const;
};

double local_distance_m(const LocalFrame& frame, const GeoPoint& p,
                        const GeoPoint& q);

// Six-coefficient affine map from pixel (col,row) to (lon,lat):
//   lon = x0 + dx_col*col + dx_row*row
//   lat = y0 + dy_col*col + dy_row*row
struct Geotransform {
  double x0 = 0.0, dx_col = 1.0, dx_row = 0.0;
  double y0 = 0.0, dy_col = 0.0, dy_row = 1.0;

  double determinant() const { return dx_col * dy_row - dx_row * dy_col; }
};

GeoPoint pixel_to_geo(const Geotransform& gt, double col, double row);
// Inverse affine; requires determinant() != 0.
std::pair<double, double> geo_to_pixel(const Geotransform& gt,
                                       const GeoPoint& p);

struct Rect {
  double min_lon = 0.0, min_lat = 0.0, max_lon = 0.0, max_lat = 0.0;

  bool intersects(const Rect& o) const {
    return min_lon <= o.max_lon && o.min_lon <= max_lon &&
           min_lat <= o.max_lat && o.min_lat <= max_lat;
  }
  void expand(const GeoPoint& p);

  static Rect of(const std::vector<GeoPoint>& pts);
  static Rect of(const GeoPolygon& poly) { return of(poly.ring); }
};

// Static STR-packed rectangle tree. Build once, then query concurrently;
// query(r) returns a superset of the ids whose exact geometry intersects r
// (it prunes on bounding rectangles only), ascending and duplicate-free.
class RectIndex {
 public:
  RectIndex() = default;
  explicit RectIndex(std::vector<std::pair<Rect, std::uint32_t>> items);

  std::vector<std::uint32_t> query(const Rect& r) const;
  void query(const Rect& r, std::vector<std::uint32_t>& out) const;
  std::size_t size() const { return items_.size(); }

 private:
  struct Node {
    Rect box;
    std::uint32_t first = 0;  // child node index, or item index at level 0
    std::uint32_t count = 0;
  };

  std::vector<std::pair<Rect, std::uint32_t>> items_;
  // levels_[0] holds leaf nodes over items_; each higher level groups the one
  // below; the top level has a single root (when non-empty).
  std::vector<std::vector<Node>> levels_;
};

}  // namespace riverfuse::geo
