#include "riverfuse/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace riverfuse {

namespace {

bool all_digits(const char* s, int n) {
  for (int i = 0; i < n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

constexpr int kDaysPerMonth[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

std::int64_t days_from_civil(int y, int m, int d) {
  // Howard Hinnant's algorithm; valid for all practical dates.
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
      static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Timestamp parse_datetime(const std::string& s, char sep) {
  // YYYY-MM-DD<sep>hh:mm:ss[.frac][Z]
  const char* p = s.c_str();
  const std::size_t n = s.size();
  if (n < 19) throw FormatError("bad timestamp: " + s);
  if (!all_digits(p, 4) || p[4] != '-' || !all_digits(p + 5, 2) ||
      p[7] != '-' || !all_digits(p + 8, 2) || p[10] != sep ||
      !all_digits(p + 11, 2) || p[13] != ':' || !all_digits(p + 14, 2) ||
      p[16] != ':' || !all_digits(p + 17, 2)) {
    throw FormatError("bad timestamp: " + s);
  }
  const auto num = [&](int off, int len) {
    int v = 0;
    for (int i = 0; i < len; ++i) v = v * 10 + (p[off + i] - '0');
    return v;
  };
  const int year = num(0, 4), month = num(5, 2), day = num(8, 2);
  const int hour = num(11, 2), minute = num(14, 2), sec = num(17, 2);
  if (month < 1 || month > 12) throw FormatError("bad timestamp: " + s);
  const int dim = kDaysPerMonth[month - 1] + (month == 2 && is_leap(year));
  if (day < 1 || day > dim || hour > 23 || minute > 59 || sec > 60)
    throw FormatError("bad timestamp: " + s);

  std::size_t i = 19;
  if (i < n && p[i] == '.') {
    ++i;
    std::size_t digits = 0;
    while (i < n && p[i] >= '0' && p[i] <= '9') ++i, ++digits;
    if (digits == 0) throw FormatError("bad timestamp: " + s);
  }
  if (i < n && (p[i] == 'Z' || p[i] == 'z')) ++i;
  if (i != n) throw FormatError("bad timestamp: " + s);

  return days_from_civil(year, month, day) * 86400 + hour * 3600 +
         minute * 60 + sec;
}

}  // namespace

Timestamp parse_iso8601(const std::string& s) { return parse_datetime(s, 'T'); }

Timestamp parse_timestamp_lenient(const std::string& s) {
  if (s.size() > 10 && s[10] == ' ') return parse_datetime(s, ' ');
  return parse_datetime(s, 'T');
}

std::string format_iso8601(Timestamp t) {
  // Inverse of days_from_civil.
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  const std::int64_t year = y + (m <= 2);

  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(year), m, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

const char* to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::Tugboat: return "tugboat";
    case ObjectClass::CraneBarge: return "crane_barge";
    case ObjectClass::BulkCarrier: return "bulk_carrier";
    case ObjectClass::CargoShip: return "cargo_ship";
    case ObjectClass::HopperBarge: return "hopper_barge";
    case ObjectClass::Dock: return "dock";
    case ObjectClass::Bridge: return "bridge";
    case ObjectClass::StagingArea: return "staging_area";
  }
  return "tugboat";
}

const char* to_string(CoverState c) {
  switch (c) {
    case CoverState::NotApplicable: return "not_applicable";
    case CoverState::Covered: return "covered";
    case CoverState::Uncovered: return "uncovered";
  }
  return "not_applicable";
}

const char* to_string(OpStatus s) {
  switch (s) {
    case OpStatus::NotApplicable: return "not_applicable";
    case OpStatus::Staged: return "staged";
    case OpStatus::InMotion: return "in_motion";
    case OpStatus::Moored: return "moored";
  }
  return "not_applicable";
}

const char* to_string(DirectionClass d) {
  switch (d) {
    case DirectionClass::NotApplicable: return "not_applicable";
    case DirectionClass::Upstream: return "upstream";
    case DirectionClass::Downstream: return "downstream";
    case DirectionClass::Stationary: return "stationary";
  }
  return "not_applicable";
}

ObjectClass object_class_from_string(const std::string& s) {
  if (s == "tugboat") return ObjectClass::Tugboat;
  if (s == "crane_barge") return ObjectClass::CraneBarge;
  if (s == "bulk_carrier") return ObjectClass::BulkCarrier;
  if (s == "cargo_ship") return ObjectClass::CargoShip;
  if (s == "hopper_barge") return ObjectClass::HopperBarge;
  if (s == "dock") return ObjectClass::Dock;
  if (s == "bridge") return ObjectClass::Bridge;
  if (s == "staging_area") return ObjectClass::StagingArea;
  throw FormatError("unknown object class: " + s);
}

CoverState cover_state_from_string(const std::string& s) {
  if (s == "not_applicable") return CoverState::NotApplicable;
  if (s == "covered") return CoverState::Covered;
  if (s == "uncovered") return CoverState::Uncovered;
  throw FormatError("unknown cover state: " + s);
}

OpStatus op_status_from_string(const std::string& s) {
  if (s == "not_applicable") return OpStatus::NotApplicable;
  if (s == "staged") return OpStatus::Staged;
  if (s == "in_motion") return OpStatus::InMotion;
  if (s == "moored") return OpStatus::Moored;
  throw FormatError("unknown op status: " + s);
}

DirectionClass direction_class_from_string(const std::string& s) {
  if (s == "not_applicable") return DirectionClass::NotApplicable;
  if (s == "upstream") return DirectionClass::Upstream;
  if (s == "downstream") return DirectionClass::Downstream;
  if (s == "stationary") return DirectionClass::Stationary;
  throw FormatError("unknown direction class: " + s);
}

bool is_self_propelled(ObjectClass c) {
  return c == ObjectClass::Tugboat || c == ObjectClass::BulkCarrier ||
         c == ObjectClass::CargoShip;
}

bool is_infrastructure(ObjectClass c) {
  return c == ObjectClass::Dock || c == ObjectClass::Bridge ||
         c == ObjectClass::StagingArea;
}

std::vector<std::pair<double, double>> obb_corners(const Obb& box) {
  const double c = std::cos(box.angle_rad);
  const double s = std::sin(box.angle_rad);
  const double hw = 0.5 * box.width_px;
  const double hh = 0.5 * box.height_px;
  // Local corner offsets in order (-w,-h), (+w,-h), (+w,+h), (-w,+h); the
  // rotation (dx,dy) -> (dx*c - dy*s, dx*s + dy*c) is CCW in image axes.
  const double ox[4] = {-hw, hw, hw, -hw};
  const double oy[4] = {-hh, -hh, hh, hh};
  std::vector<std::pair<double, double>> out;
  out.reserve(4);
  for (int i = 0; i < 4; ++i) {
    out.emplace_back(box.center_col + ox[i] * c - oy[i] * s,
                     box.center_row + ox[i] * s + oy[i] * c);
  }
  return out;
}

std::vector<std::string> validate_detection(const Detection& d) {
  std::vector<std::string> v;
  if (!(d.box.width_px > 0.0)) v.push_back("width must be positive");
  if (!(d.box.height_px > 0.0)) v.push_back("height must be positive");
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0))
    v.push_back("confidence must be in [0,1]");
  if (d.cover != CoverState::NotApplicable &&
      d.klass != ObjectClass::HopperBarge)
    v.push_back("cover must be not_applicable unless klass is hopper_barge");
  if (is_infrastructure(d.klass)) {
    if (d.op_status != OpStatus::NotApplicable)
      v.push_back("infrastructure class must have op_status=not_applicable");
    if (d.direction_pred != DirectionClass::NotApplicable)
      v.push_back(
          "infrastructure class must have direction_pred=not_applicable");
  }
  return v;
}

std::vector<std::string> validate_scene(const SceneMeta& s) {
  std::vector<std::string> v;
  if (s.scene_id.empty()) v.push_back("scene_id must be non-empty");
  if (s.width_px <= 0) v.push_back("width_px must be positive");
  if (s.height_px <= 0) v.push_back("height_px must be positive");
  if (s.geotransform.determinant() == 0.0)
    v.push_back("geotransform determinant must be nonzero");
  if (s.footprint.ring.size() < 3)
    v.push_back("footprint must have at least 3 vertices");
  return v;
}

std::vector<std::string> validate_centerline(const Centerline& c) {
  std::vector<std::string> v;
  if (c.vertices.size() < 2) v.push_back("centerline must have >= 2 vertices");
  for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i) {
    if (c.vertices[i].lon == c.vertices[i + 1].lon &&
        c.vertices[i].lat == c.vertices[i + 1].lat) {
      v.push_back("centerline has duplicate consecutive vertices");
      break;
    }
  }
  return v;
}

geo::GeoPoint pixel_to_geo(const SceneMeta& scene, double col, double row) {
  return geo::pixel_to_geo(scene.geotransform, col, row);
}

geo::GeoPolygon obb_to_polygon(const SceneMeta& scene, const Obb& box) {
  geo::GeoPolygon poly;
  poly.ring.reserve(4);
  for (const auto& [col, row] : obb_corners(box))
    poly.ring.push_back(pixel_to_geo(scene, col, row));
  // Pixel-space CCW maps to geographic CW when the affine flips orientation
  // (north-up rasters have a negative determinant); reverse to keep the ring
  // CCW in lon/lat as the clipping kernel requires.
  if (geo::signed_area(poly) < 0.0)
    std::reverse(poly.ring.begin(), poly.ring.end());
  return poly;
}

geo::GeoPolygon footprint_from_geotransform(const geo::Geotransform& gt,
                                            std::int64_t width_px,
                                            std::int64_t height_px) {
  const double w = static_cast<double>(width_px);
  const double h = static_cast<double>(height_px);
  geo::GeoPolygon poly;
  poly.ring = {geo::pixel_to_geo(gt, 0, 0), geo::pixel_to_geo(gt, w, 0),
               geo::pixel_to_geo(gt, w, h), geo::pixel_to_geo(gt, 0, h)};
  if (geo::signed_area(poly) < 0.0)
    std::reverse(poly.ring.begin(), poly.ring.end());
  return poly;
}

}  // namespace riverfuse
