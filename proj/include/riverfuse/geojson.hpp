// JSON/GeoJSON interchange: scene metadata sidecars, per-scene detection
// FeatureCollections, and the river centerline. All geometry is WGS84 in
// lon-lat order; angles are degrees at the file boundary.
#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "riverfuse/core.hpp"

namespace riverfuse::io {

using json = nlohmann::json;

json read_json_file(const std::string& path);
void write_json_file(const json& j, const std::string& path);
void write_text_file(const std::string& text, const std::string& path);

json polygon_to_geojson(const geo::GeoPolygon& poly);
geo::GeoPolygon polygon_from_geojson(const json& geometry);

json scene_to_json(const SceneMeta& scene);
SceneMeta scene_from_json(const json& j);

// FeatureCollection with a top-level "scene" metadata block. Features carry
// both the polygon geometry and the pixel-space OBB properties (center_col,
// center_row, width_px, height_px, angle_deg); on load the pixel fields win
// and the polygon is recovered from them, falling back to inverting the
// geometry through the scene geotransform.
json scene_package_to_geojson(const ScenePackage& pkg);
ScenePackage scene_package_from_geojson(const json& j);
ScenePackage load_scene_package(const std::string& path);
void save_scene_package(const ScenePackage& pkg, const std::string& path);

// GeoJSON LineString Feature; the property "ordered" must be
// "upstream_to_downstream" or the loader throws FormatError.
json centerline_to_geojson(const Centerline& line);
Centerline centerline_from_geojson(const json& j);
Centerline load_centerline(const std::string& path);
void save_centerline(const Centerline& line, const std::string& path);

}  // namespace riverfuse::io
