#include "riverfuse/geojson.hpp"

#include <cmath>
#include <fstream>

namespace riverfuse::io {

namespace {

constexpr double kPi = 3.14159265358979323846;

json require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw FormatError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write file: " + path);
  out << text;
  if (!out) throw FormatError("write failed: " + path);
}

void write_json_file(const json& j, const std::string& path) {
  write_text_file(j.dump(2) + "\n", path);
}

json polygon_to_geojson(const geo::GeoPolygon& poly) {
  json ring = json::array();
  for (const geo::GeoPoint& p : poly.ring) ring.push_back({p.lon, p.lat});
  if (!poly.ring.empty())
    ring.push_back({poly.ring.front().lon, poly.ring.front().lat});
  return {{"type", "Polygon"}, {"coordinates", json::array({ring})}};
}

geo::GeoPolygon polygon_from_geojson(const json& geometry) {
  if (require(geometry, "type", "polygon") != "Polygon")
    throw FormatError("polygon: geometry type must be Polygon");
  const json& coords = require(geometry, "coordinates", "polygon");
  if (!coords.is_array() || coords.empty())
    throw FormatError("polygon: empty coordinates");
  const json& ring = coords.at(0);
  geo::GeoPolygon poly;
  for (const json& v : ring) {
    if (!v.is_array() || v.size() < 2)
      throw FormatError("polygon: malformed vertex");
    poly.ring.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  }
  // GeoJSON rings repeat the first vertex; store open.
  if (poly.ring.size() >= 2 &&
      poly.ring.front().lon == poly.ring.back().lon &&
      poly.ring.front().lat == poly.ring.back().lat) {
    poly.ring.pop_back();
  }
  if (poly.ring.size() < 3) throw FormatError("polygon: ring has < 3 vertices");
  return poly;
}

json scene_to_json(const SceneMeta& scene) {
  const geo::Geotransform& g = scene.geotransform;
  json j{{"scene_id", scene.scene_id},
         {"acquired_at", format_iso8601(scene.acquired_at)},
         {"width_px", scene.width_px},
         {"height_px", scene.height_px},
         {"geotransform",
          json::array({g.x0, g.dx_col, g.dx_row, g.y0, g.dy_col, g.dy_row})},
         {"footprint", polygon_to_geojson(scene.footprint)}};
  if (!scene.source_uri.empty()) j["source_uri"] = scene.source_uri;
  return j;
}

SceneMeta scene_from_json(const json& j) {
  SceneMeta s;
  s.scene_id = require(j, "scene_id", "scene").get<std::string>();
  s.acquired_at =
      parse_iso8601(require(j, "acquired_at", "scene").get<std::string>());
  s.width_px = require(j, "width_px", "scene").get<std::int64_t>();
  s.height_px = require(j, "height_px", "scene").get<std::int64_t>();
  const json& g = require(j, "geotransform", "scene " + s.scene_id);
  if (!g.is_array() || g.size() != 6)
    throw FormatError("scene " + s.scene_id +
                      ": geotransform must be 6 numbers");
  s.geotransform = {g.at(0).get<double>(), g.at(1).get<double>(),
                    g.at(2).get<double>(), g.at(3).get<double>(),
                    g.at(4).get<double>(), g.at(5).get<double>()};
  if (j.contains("footprint")) {
    s.footprint = polygon_from_geojson(j.at("footprint"));
  } else {
    s.footprint =
        footprint_from_geotransform(s.geotransform, s.width_px, s.height_px);
  }
  if (j.contains("source_uri")) s.source_uri = j.at("source_uri").get<std::string>();
  for (const std::string& v : validate_scene(s))
    throw FormatError("scene " + s.scene_id + ": " + v);
  return s;
}

json scene_package_to_geojson(const ScenePackage& pkg) {
  json features = json::array();
  for (const Detection& d : pkg.detections) {
    json props{{"detection_id", d.detection_id},
               {"klass", to_string(d.klass)},
               {"cover", to_string(d.cover)},
               {"op_status", to_string(d.op_status)},
               {"direction_pred", to_string(d.direction_pred)},
               {"confidence", d.confidence},
               {"center_col", d.box.center_col},
               {"center_row", d.box.center_row},
               {"width_px", d.box.width_px},
               {"height_px", d.box.height_px},
               {"angle_deg", d.box.angle_rad * 180.0 / kPi}};
    if (!d.tow_id.empty()) props["tow_id"] = d.tow_id;
    features.push_back(
        {{"type", "Feature"},
         {"geometry", polygon_to_geojson(obb_to_polygon(pkg.scene, d.box))},
         {"properties", props}});
  }
  return {{"type", "FeatureCollection"},
          {"scene", scene_to_json(pkg.scene)},
          {"features", features}};
}

namespace {

// Recover a pixel OBB from a 4-vertex geographic ring by inverting the
// affine; used for files that carry only geometry.
Obb obb_from_polygon(const SceneMeta& scene, const geo::GeoPolygon& poly) {
  if (poly.ring.size() != 4)
    throw FormatError("detection polygon must have 4 vertices");
  double col[4], row[4];
  for (int i = 0; i < 4; ++i) {
    const auto [c, r] = geo::geo_to_pixel(scene.geotransform, poly.ring[i]);
    col[i] = c;
    row[i] = r;
  }
  Obb box;
  box.center_col = (col[0] + col[1] + col[2] + col[3]) / 4.0;
  box.center_row = (row[0] + row[1] + row[2] + row[3]) / 4.0;
  const double e0 = std::hypot(col[1] - col[0], row[1] - row[0]);
  const double e1 = std::hypot(col[2] - col[1], row[2] - row[1]);
  box.width_px = e0;
  box.height_px = e1;
  box.angle_rad = std::atan2(row[1] - row[0], col[1] - col[0]);
  return box;
}

}  // namespace

ScenePackage scene_package_from_geojson(const json& j) {
  ScenePackage pkg;
  pkg.scene = scene_from_json(require(j, "scene", "detection file"));
  const json& features = require(j, "features", "detection file");
  for (const json& f : features) {
    const json& props = require(f, "properties", "feature");
    Detection d;
    d.detection_id =
        require(props, "detection_id", "feature").get<std::string>();
    d.scene_id = pkg.scene.scene_id;
    d.klass = object_class_from_string(
        require(props, "klass", "detection " + d.detection_id)
            .get<std::string>());
    if (props.contains("cover"))
      d.cover = cover_state_from_string(props.at("cover").get<std::string>());
    if (props.contains("op_status"))
      d.op_status =
          op_status_from_string(props.at("op_status").get<std::string>());
    if (props.contains("direction_pred"))
      d.direction_pred = direction_class_from_string(
          props.at("direction_pred").get<std::string>());
    if (props.contains("confidence"))
      d.confidence = props.at("confidence").get<double>();
    if (props.contains("tow_id")) d.tow_id = props.at("tow_id").get<std::string>();

    if (props.contains("center_col")) {
      d.box.center_col = props.at("center_col").get<double>();
      d.box.center_row =
          require(props, "center_row", "detection " + d.detection_id)
              .get<double>();
      d.box.width_px =
          require(props, "width_px", "detection " + d.detection_id)
              .get<double>();
      d.box.height_px =
          require(props, "height_px", "detection " + d.detection_id)
              .get<double>();
      d.box.angle_rad =
          require(props, "angle_deg", "detection " + d.detection_id)
              .get<double>() *
          kPi / 180.0;
    } else if (f.contains("geometry") && !f.at("geometry").is_null()) {
      d.box = obb_from_polygon(pkg.scene,
                               polygon_from_geojson(f.at("geometry")));
    } else {
      throw FormatError("detection " + d.detection_id +
                        ": neither pixel obb nor geometry present");
    }
    for (const std::string& v : validate_detection(d))
      throw FormatError("detection " + d.detection_id + ": " + v);
    pkg.detections.push_back(std::move(d));
  }
  return pkg;
}

ScenePackage load_scene_package(const std::string& path) {
  return scene_package_from_geojson(read_json_file(path));
}

void save_scene_package(const ScenePackage& pkg, const std::string& path) {
  write_json_file(scene_package_to_geojson(pkg), path);
}

json centerline_to_geojson(const Centerline& line) {
  json coords = json::array();
  for (const geo::GeoPoint& p : line.vertices) coords.push_back({p.lon, p.lat});
  return {{"type", "Feature"},
          {"properties", {{"ordered", "upstream_to_downstream"}}},
          {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}};
}

Centerline centerline_from_geojson(const json& j) {
  const json* feature = &j;
  if (j.is_object() && j.value("type", "") == "FeatureCollection") {
    const json& fs = require(j, "features", "centerline");
    if (!fs.is_array() || fs.empty())
      throw FormatError("centerline: no features");
    feature = &fs.at(0);
  }
  const json& props = require(*feature, "properties", "centerline");
  const json& ordered = require(props, "ordered", "centerline");
  if (!ordered.is_string() ||
      ordered.get<std::string>() != "upstream_to_downstream")
    throw FormatError(
        "centerline: property \"ordered\" must be \"upstream_to_downstream\", "
        "got " +
        ordered.dump());
  const json& geom = require(*feature, "geometry", "centerline");
  if (require(geom, "type", "centerline") != "LineString")
    throw FormatError("centerline: geometry type must be LineString");
  Centerline line;
  for (const json& v : require(geom, "coordinates", "centerline"))
    line.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  for (const std::string& err : validate_centerline(line))
    throw FormatError("centerline: " + err);
  return line;
}

Centerline load_centerline(const std::string& path) {
  return centerline_from_geojson(read_json_file(path));
}

void save_centerline(const Centerline& line, const std::string& path) {
  write_json_file(centerline_to_geojson(line), path);
}

}  // namespace riverfuse::io
