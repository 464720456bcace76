// AIS-guided scene selection over a catalog index, and pluggable scene
// fetching (metadata sidecar + pixel asset reference).
#pragma once

#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "riverfuse/ais.hpp"
#include "riverfuse/core.hpp"

namespace riverfuse::catalog {

struct CatalogEntry {
  std::string scene_id;
  Timestamp acquired_at = 0;
  geo::GeoPolygon footprint;
  std::string source_uri;
};

struct Selection {
  std::string scene_id;
  Timestamp acquired_at = 0;
  std::vector<std::string> mmsis;  // sorted, duplicate-free
};

// A scene is selected iff some trajectory has a point within half_window_s
// of acquisition AND the sub-polyline of those temporally eligible points
// intersects the footprint. Output sorted by (acquired_at, scene_id).
std::vector<Selection> select_scenes(
    const std::vector<ais::Trajectory>& trajectories,
    const std::vector<CatalogEntry>& catalog, std::int64_t half_window_s = 120);

// Retrieval abstraction: the filesystem fetcher ships; network-backed
// providers implement the same interface out of tree.
class SceneFetcher {
 public:
  virtual ~SceneFetcher() = default;
  // The scene's metadata sidecar document; throws FormatError when missing.
  virtual nlohmann::json read_sidecar(const CatalogEntry& entry) = 0;
  // Local path of the pixel asset; throws FormatError when unavailable.
  virtual std::string resolve_asset(const CatalogEntry& entry) = 0;
};

// Assets live at root/source_uri with the sidecar alongside as
// "<asset>.json".
class FilesystemFetcher : public SceneFetcher {
 public:
  explicit FilesystemFetcher(std::string root) : root_(std::move(root)) {}
  nlohmann::json read_sidecar(const CatalogEntry& entry) override;
  std::string resolve_asset(const CatalogEntry& entry) override;

 private:
  std::string root_;
};

struct FetchedScene {
  SceneMeta scene;
  std::string asset_path;
};

// Parses the sidecar into SceneMeta and resolves the asset. Missing sidecar,
// absent geotransform, and fetch failure raise distinct FormatErrors, each
// naming the scene_id.
FetchedScene fetch_scene(const CatalogEntry& entry, SceneFetcher& fetcher);

nlohmann::json catalog_to_json(const std::vector<CatalogEntry>& entries);
std::vector<CatalogEntry> catalog_from_json(const nlohmann::json& j);
std::vector<CatalogEntry> load_catalog(const std::string& path);
nlohmann::json selections_to_json(const std::vector<Selection>& sel);

}  // namespace riverfuse::catalog
