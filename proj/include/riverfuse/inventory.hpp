// Fleet aggregation: tow composition records, class/cover/status snapshots,
// and the georeferenced infrastructure inventory.
#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "riverfuse/core.hpp"
#include "riverfuse/fuse.hpp"

namespace riverfuse::inventory {

struct TowRecord {
  std::string tow_id;
  std::string scene_id;
  std::optional<std::string> tug_detection_id;
  std::int64_t barge_count = 0;
  std::int64_t covered_count = 0;
  std::int64_t uncovered_count = 0;
  OpStatus op_status = OpStatus::Staged;
  std::optional<std::string> linked_mmsi;
};

// One record per distinct non-empty tow_id, sorted by tow_id. The tug is the
// lexicographically first tugboat member; a tow without a tug is moored;
// otherwise the status is the members' majority vote (ties and all-
// not_applicable resolve to staged). A tow containing an infrastructure
// class throws FormatError.
std::vector<TowRecord> build_tows(const std::vector<Detection>& detections,
                                  const fuse::FusionReport& report);

struct Snapshot {
  std::map<std::string, std::int64_t> by_class;
  std::map<std::string, std::int64_t> by_cover;
  std::map<std::string, std::int64_t> by_op_status;
  std::map<std::string, std::int64_t> by_direction;
  std::int64_t n_detections = 0;
  std::int64_t n_linked = 0;
  std::int64_t n_dark = 0;
  std::int64_t n_tows = 0;
  std::int64_t total_barges = 0;

  void add(const Snapshot& other);
};

Snapshot fleet_snapshot(const std::vector<Detection>& detections,
                        const std::vector<TowRecord>& tows,
                        const fuse::FusionReport& report);

struct InfrastructureRecord {
  std::string detection_id;
  ObjectClass kind = ObjectClass::Dock;
  geo::GeoPoint centroid;  // footprint vertex mean
  geo::GeoPolygon footprint;
  std::string scene_id;
  bool near_duplicate = false;
};

// One record per infrastructure-class detection, in input order.
std::vector<InfrastructureRecord> build_infrastructure(
    const std::vector<Detection>& detections, const SceneMeta& scene);

// Marks same-kind records whose centroids lie within threshold_m of each
// other (flag only, never merged) and returns the offending index pairs.
std::vector<std::pair<std::size_t, std::size_t>> flag_near_duplicates(
    std::vector<InfrastructureRecord>& records, double threshold_m = 50.0);

nlohmann::json snapshot_to_json(const Snapshot& s);
nlohmann::json tows_to_json(const std::vector<TowRecord>& tows);
std::string snapshot_to_csv(const Snapshot& s);
nlohmann::json infrastructure_to_geojson(
    const std::vector<InfrastructureRecord>& records);

}  // namespace riverfuse::inventory
