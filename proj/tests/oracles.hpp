// Independent reference implementations used to cross-check the library.
// Everything here deliberately avoids the production code paths: point
// containment is a crossing-number ray cast (the library uses half-plane
// tests), areas come from long-double shoelace sums or stratified sampling,
// and matchings come from exhaustive or augmenting-path search.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "riverfuse/ais.hpp"
#include "riverfuse/geo.hpp"

namespace oracle {

using riverfuse::geo::GeoPoint;
using riverfuse::geo::GeoPolygon;

// Crossing-number test; boundary behavior is unspecified, so callers must
// avoid boundary-sensitive assertions with it.
inline bool point_in_polygon_crossing(const GeoPolygon& poly,
                                      const GeoPoint& q) {
  bool inside = false;
  const auto& r = poly.ring;
  for (std::size_t i = 0, n = r.size(), j = n - 1; i < n; j = i++) {
    const bool straddles = (r[i].lat > q.lat) != (r[j].lat > q.lat);
    if (!straddles) continue;
    const double x_cross = r[j].lon + (r[i].lon - r[j].lon) *
                                          (q.lat - r[j].lat) /
                                          (r[i].lat - r[j].lat);
    if (q.lon < x_cross) inside = !inside;
  }
  return inside;
}

inline long double shoelace_area_ld(const GeoPolygon& poly) {
  const auto& r = poly.ring;
  long double s = 0.0L;
  for (std::size_t i = 0, n = r.size(); i < n; ++i) {
    const auto& a = r[i];
    const auto& b = r[(i + 1) % n];
    s += static_cast<long double>(a.lon) * b.lat -
         static_cast<long double>(b.lon) * a.lat;
  }
  return std::fabs(s) * 0.5L;
}

// Stratified (jittered-grid) Monte-Carlo IoU over the union bounding box:
// grid_n x grid_n cells, one uniform point per cell. With grid_n = 1000 the
// sample count is 1e6 and the standard error is a few 1e-5.
inline double mc_iou(const GeoPolygon& a, const GeoPolygon& b, int grid_n,
                     std::uint64_t seed) {
  double min_lon = a.ring[0].lon, max_lon = a.ring[0].lon;
  double min_lat = a.ring[0].lat, max_lat = a.ring[0].lat;
  for (const GeoPolygon* poly : {&a, &b}) {
    for (const GeoPoint& p : poly->ring) {
      min_lon = std::min(min_lon, p.lon);
      max_lon = std::max(max_lon, p.lon);
      min_lat = std::min(min_lat, p.lat);
      max_lat = std::max(max_lat, p.lat);
    }
  }
  std::mt19937_64 gen(seed);
  const auto unit = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  const double dx = (max_lon - min_lon) / grid_n;
  const double dy = (max_lat - min_lat) / grid_n;
  std::int64_t n_inter = 0, n_union = 0;
  for (int gy = 0; gy < grid_n; ++gy) {
    for (int gx = 0; gx < grid_n; ++gx) {
      const GeoPoint p{min_lon + (gx + unit()) * dx,
                       min_lat + (gy + unit()) * dy};
      const bool ina = point_in_polygon_crossing(a, p);
      const bool inb = point_in_polygon_crossing(b, p);
      if (ina && inb) ++n_inter;
      if (ina || inb) ++n_union;
    }
  }
  if (n_union == 0) return 0.0;
  return static_cast<double>(n_inter) / static_cast<double>(n_union);
}

// Stratified area estimate of one polygon over its own bounding box.
inline double mc_area(const GeoPolygon& poly, int grid_n, std::uint64_t seed) {
  double min_lon = poly.ring[0].lon, max_lon = poly.ring[0].lon;
  double min_lat = poly.ring[0].lat, max_lat = poly.ring[0].lat;
  for (const GeoPoint& p : poly.ring) {
    min_lon = std::min(min_lon, p.lon);
    max_lon = std::max(max_lon, p.lon);
    min_lat = std::min(min_lat, p.lat);
    max_lat = std::max(max_lat, p.lat);
  }
  std::mt19937_64 gen(seed);
  const auto unit = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  const double dx = (max_lon - min_lon) / grid_n;
  const double dy = (max_lat - min_lat) / grid_n;
  std::int64_t hits = 0;
  for (int gy = 0; gy < grid_n; ++gy) {
    for (int gx = 0; gx < grid_n; ++gx) {
      const GeoPoint p{min_lon + (gx + unit()) * dx,
                       min_lat + (gy + unit()) * dy};
      if (point_in_polygon_crossing(poly, p)) ++hits;
    }
  }
  return (max_lon - min_lon) * (max_lat - min_lat) * hits /
         (static_cast<double>(grid_n) * grid_n);
}

// Brute-force temporal window scan.
inline std::vector<riverfuse::ais::AisRecord> window_scan(
    const std::vector<riverfuse::ais::AisRecord>& records,
    riverfuse::Timestamp t0, std::int64_t half_window_s) {
  std::vector<riverfuse::ais::AisRecord> out;
  for (const auto& r : records) {
    const std::int64_t dt =
        r.timestamp >= t0 ? r.timestamp - t0 : t0 - r.timestamp;
    if (dt <= half_window_s) out.push_back(r);
  }
  return out;
}

// Kuhn's augmenting-path maximum-cardinality bipartite matching.
// adj[i] lists the right-side vertices reachable from left vertex i.
inline int max_bipartite_matching(const std::vector<std::vector<int>>& adj,
                                  int n_right) {
  std::vector<int> match_right(static_cast<std::size_t>(n_right), -1);
  std::vector<bool> visited;
  std::function<bool(int)> try_kuhn = [&](int u) -> bool {
    for (const int v : adj[static_cast<std::size_t>(u)]) {
      if (visited[static_cast<std::size_t>(v)]) continue;
      visited[static_cast<std::size_t>(v)] = true;
      if (match_right[static_cast<std::size_t>(v)] < 0 ||
          try_kuhn(match_right[static_cast<std::size_t>(v)])) {
        match_right[static_cast<std::size_t>(v)] = u;
        return true;
      }
    }
    return false;
  };
  int matched = 0;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    visited.assign(static_cast<std::size_t>(n_right), false);
    if (try_kuhn(static_cast<int>(u))) ++matched;
  }
  return matched;
}

// Exhaustive optimal one-to-one assignment for tiny instances: maximize
// cardinality, then minimize total distance. edges are (left, right, cost).
struct TinyAssignment {
  int cardinality = 0;
  double total_cost = 0.0;
};

inline TinyAssignment optimal_assignment_exhaustive(
    int n_left, int n_right,
    const std::vector<std::tuple<int, int, double>>& edges) {
  TinyAssignment best;
  const std::size_t m = edges.size();
  // Subset enumeration is fine for the <= 20-edge instances used in tests.
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    std::vector<bool> l(static_cast<std::size_t>(n_left), false);
    std::vector<bool> r(static_cast<std::size_t>(n_right), false);
    int card = 0;
    double cost = 0.0;
    bool valid = true;
    for (std::size_t e = 0; e < m && valid; ++e) {
      if (!(mask >> e & 1)) continue;
      const auto& [le, re, c] = edges[e];
      if (l[static_cast<std::size_t>(le)] || r[static_cast<std::size_t>(re)])
        valid = false;
      else {
        l[static_cast<std::size_t>(le)] = r[static_cast<std::size_t>(re)] =
            true;
        ++card;
        cost += c;
      }
    }
    if (!valid) continue;
    if (card > best.cardinality ||
        (card == best.cardinality && cost < best.total_cost))
      best = {card, cost};
  }
  return best;
}

// Segment-sampled polygon/polyline intersection: dense interior sampling
// along each segment plus vertex containment. Misses tangential boundary
// grazes by design, so tests use it only on clearly-inside/outside cases.
inline bool polyline_hits_polygon_sampled(const GeoPolygon& poly,
                                          const std::vector<GeoPoint>& line,
                                          int samples_per_seg = 256) {
  for (const GeoPoint& p : line) {
    if (point_in_polygon_crossing(poly, p)) return true;
  }
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    for (int s = 1; s < samples_per_seg; ++s) {
      const double t = static_cast<double>(s) / samples_per_seg;
      const GeoPoint p{line[i].lon + t * (line[i + 1].lon - line[i].lon),
                       line[i].lat + t * (line[i + 1].lat - line[i].lat)};
      if (point_in_polygon_crossing(poly, p)) return true;
    }
  }
  return false;
}

inline long double kahan_sum(const std::vector<long double>& values) {
  long double sum = 0.0L, c = 0.0L;
  for (const long double v : values) {
    const long double y = v - c;
    const long double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// Deterministic random convex quadrilateral generator shared by IoU tests:
// an oriented box, so convexity is guaranteed and aspect/rotation vary.
inline GeoPolygon random_obb(std::mt19937_64& gen, double cx, double cy,
                             double scale) {
  const auto unit = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  const double w = scale * (0.3 + 1.7 * unit());
  const double h = scale * (0.3 + 1.7 * unit());
  const double ang = 2.0 * 3.14159265358979323846 * unit();
  const double ox = cx + scale * (unit() - 0.5);
  const double oy = cy + scale * (unit() - 0.5);
  const double c = std::cos(ang), s = std::sin(ang);
  GeoPolygon poly;
  const double hx[4] = {-w / 2, w / 2, w / 2, -w / 2};
  const double hy[4] = {-h / 2, -h / 2, h / 2, h / 2};
  for (int i = 0; i < 4; ++i) {
    poly.ring.push_back(
        {ox + hx[i] * c - hy[i] * s, oy + hx[i] * s + hy[i] * c});
  }
  if (riverfuse::geo::signed_area(poly) < 0.0)
    std::reverse(poly.ring.begin(), poly.ring.end());
  return poly;
}

}  // namespace oracle
