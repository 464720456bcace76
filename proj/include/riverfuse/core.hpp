// Domain types shared across the pipeline: detection records with oriented
// boxes, scene metadata, attribute enums, validation, and timestamp helpers.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riverfuse/geo.hpp"

namespace riverfuse {

// UTC seconds since the Unix epoch.
using Timestamp = std::int64_t;

// Parses "YYYY-MM-DDThh:mm:ss" with optional trailing "Z" or fractional
// seconds (truncated). Throws FormatError on malformed input.
Timestamp parse_iso8601(const std::string& s);
std::string format_iso8601(Timestamp t);

// Also accepts the "YYYY-MM-DD hh:mm:ss" variant used by AIS exports.
Timestamp parse_timestamp_lenient(const std::string& s);

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

enum class ObjectClass {
  Tugboat,
  CraneBarge,
  BulkCarrier,
  CargoShip,
  HopperBarge,
  Dock,
  Bridge,
  StagingArea,
};

enum class CoverState { NotApplicable, Covered, Uncovered };
enum class OpStatus { NotApplicable, Staged, InMotion, Moored };
enum class DirectionClass { NotApplicable, Upstream, Downstream, Stationary };

const char* to_string(ObjectClass c);
const char* to_string(CoverState c);
const char* to_string(OpStatus s);
const char* to_string(DirectionClass d);
ObjectClass object_class_from_string(const std::string& s);
CoverState cover_state_from_string(const std::string& s);
OpStatus op_status_from_string(const std::string& s);
DirectionClass direction_class_from_string(const std::string& s);

// Moving vessels that can carry an AIS transceiver. Barges and infrastructure
// never broadcast.
bool is_self_propelled(ObjectClass c);
bool is_infrastructure(ObjectClass c);

// Oriented box in pixel space: center, size, and rotation angle in radians
// measured counter-clockwise from image-axis alignment.
struct Obb {
  double center_col = 0.0;
  double center_row = 0.0;
  double width_px = 0.0;
  double height_px = 0.0;
  double angle_rad = 0.0;
};

// Corners in pixel space, CCW when the geotransform is north-up (negative
// row step). angle=0 yields (cx-w/2, cy-h/2) first, then +w, +h, -w.
std::vector<std::pair<double, double>> obb_corners(const Obb& box);

struct Detection {
  std::string detection_id;
  std::string scene_id;
  ObjectClass klass = ObjectClass::Tugboat;
  Obb box;
  double confidence = 1.0;
  CoverState cover = CoverState::NotApplicable;
  OpStatus op_status = OpStatus::NotApplicable;
  DirectionClass direction_pred = DirectionClass::NotApplicable;
  // Groups barges with their tug; empty when the object moves alone.
  std::string tow_id;
};

struct SceneMeta {
  std::string scene_id;
  Timestamp acquired_at = 0;
  std::int64_t width_px = 0;
  std::int64_t height_px = 0;
  geo::Geotransform geotransform;
  geo::GeoPolygon footprint;
  // Relative path of the pixel asset; resolved by catalog fetchers.
  std::string source_uri;
};

struct ScenePackage {
  SceneMeta scene;
  std::vector<Detection> detections;
};

// River axis polyline ordered upstream -> downstream; the local tangent
// defines the downstream direction for classification.
struct Centerline {
  std::vector<geo::GeoPoint> vertices;
};

std::vector<std::string> validate_centerline(const Centerline& c);

// Returns every violated constraint as a human-readable string; an empty
// vector means the record is well-formed.
std::vector<std::string> validate_detection(const Detection& d);
std::vector<std::string> validate_scene(const SceneMeta& s);

geo::GeoPoint pixel_to_geo(const SceneMeta& scene, double col, double row);
geo::GeoPolygon obb_to_polygon(const SceneMeta& scene, const Obb& box);
geo::GeoPolygon footprint_from_geotransform(const geo::Geotransform& gt,
                                            std::int64_t width_px,
                                            std::int64_t height_px);

}  // namespace riverfuse
