#include "riverfuse/catalog.hpp"

#include <algorithm>
#include <filesystem>

#include "riverfuse/geojson.hpp"

namespace riverfuse::catalog {

using nlohmann::json;

std::vector<Selection> select_scenes(
    const std::vector<ais::Trajectory>& trajectories,
    const std::vector<CatalogEntry>& catalog, std::int64_t half_window_s) {
  std::vector<Selection> out;
  std::vector<geo::GeoPoint> eligible;
  for (const CatalogEntry& entry : catalog) {
    Selection sel;
    sel.scene_id = entry.scene_id;
    sel.acquired_at = entry.acquired_at;
    for (const ais::Trajectory& traj : trajectories) {
      eligible.clear();
      for (const ais::TrajectoryPoint& p : traj.points) {
        if (std::llabs(p.timestamp - entry.acquired_at) <= half_window_s)
          eligible.push_back({p.lon, p.lat});
      }
      if (eligible.empty()) continue;
      if (geo::polygon_intersects_polyline(entry.footprint, eligible))
        sel.mmsis.push_back(traj.mmsi);
    }
    if (sel.mmsis.empty()) continue;
    std::sort(sel.mmsis.begin(), sel.mmsis.end());
    sel.mmsis.erase(std::unique(sel.mmsis.begin(), sel.mmsis.end()),
                    sel.mmsis.end());
    out.push_back(std::move(sel));
  }
  std::sort(out.begin(), out.end(), [](const Selection& a, const Selection& b) {
    if (a.acquired_at != b.acquired_at) return a.acquired_at < b.acquired_at;
    return a.scene_id < b.scene_id;
  });
  return out;
}

json FilesystemFetcher::read_sidecar(const CatalogEntry& entry) {
  const std::filesystem::path path =
      std::filesystem::path(root_) / (entry.source_uri + ".json");
  if (!std::filesystem::exists(path))
    throw FormatError("scene " + entry.scene_id +
                      ": sidecar missing: " + path.string());
  return io::read_json_file(path.string());
}

std::string FilesystemFetcher::resolve_asset(const CatalogEntry& entry) {
  const std::filesystem::path path =
      std::filesystem::path(root_) / entry.source_uri;
  if (!std::filesystem::exists(path))
    throw FormatError("scene " + entry.scene_id +
                      ": fetch failed: " + path.string());
  return path.string();
}

FetchedScene fetch_scene(const CatalogEntry& entry, SceneFetcher& fetcher) {
  const json sidecar = fetcher.read_sidecar(entry);
  if (!sidecar.is_object() || !sidecar.contains("geotransform"))
    throw FormatError("scene " + entry.scene_id + ": geotransform absent");
  FetchedScene fetched;
  try {
    fetched.scene = io::scene_from_json(sidecar);
  } catch (const FormatError& e) {
    throw FormatError("scene " + entry.scene_id + ": " + e.what());
  }
  fetched.asset_path = fetcher.resolve_asset(entry);
  return fetched;
}

json catalog_to_json(const std::vector<CatalogEntry>& entries) {
  json arr = json::array();
  for (const CatalogEntry& e : entries) {
    arr.push_back({{"scene_id", e.scene_id},
                   {"acquired_at", format_iso8601(e.acquired_at)},
                   {"footprint", io::polygon_to_geojson(e.footprint)},
                   {"source_uri", e.source_uri}});
  }
  return arr;
}

std::vector<CatalogEntry> catalog_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("catalog: expected a JSON array");
  std::vector<CatalogEntry> out;
  for (const json& ej : j) {
    CatalogEntry e;
    try {
      e.scene_id = ej.at("scene_id").get<std::string>();
      e.acquired_at = parse_iso8601(ej.at("acquired_at").get<std::string>());
      e.footprint = io::polygon_from_geojson(ej.at("footprint"));
      e.source_uri = ej.value("source_uri", std::string());
    } catch (const json::exception& ex) {
      throw FormatError(std::string("catalog entry invalid: ") + ex.what());
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CatalogEntry> load_catalog(const std::string& path) {
  return catalog_from_json(io::read_json_file(path));
}

json selections_to_json(const std::vector<Selection>& sel) {
  json arr = json::array();
  for (const Selection& s : sel) {
    arr.push_back({{"scene_id", s.scene_id},
                   {"acquired_at", format_iso8601(s.acquired_at)},
                   {"mmsis", s.mmsis}});
  }
  return arr;
}

}  // namespace riverfuse::catalog
