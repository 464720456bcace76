// Satellite-AIS fusion: temporal filtering, spatial-intersection candidate
// generation, greedy one-to-one assignment, metadata enrichment, and
// dark-vessel flagging, per scene.
#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "riverfuse/ais.hpp"
#include "riverfuse/core.hpp"

namespace riverfuse::fuse {

// A detection/trajectory pair whose geometry intersects, with the temporal
// and metric context used for assignment and enrichment. dt_s and dist_m are
// measured against the trajectory point nearest in time to acquisition.
struct Candidate {
  std::string detection_id;
  std::string mmsi;
  double dt_s = 0.0;  // signed: ais point timestamp - acquired_at
  double dist_m = 0.0;
  double sog_kn = 0.0;
  std::optional<double> cog_deg;
  std::string vessel_name;
  geo::GeoPoint ais_position;
};

struct LinkedPair {
  std::string detection_id;
  std::string mmsi;
  double dt_s = 0.0;
  double dist_m = 0.0;
  // Inherited AIS metadata from the matched point.
  double sog_kn = 0.0;
  std::optional<double> cog_deg;
  std::string vessel_name;
  geo::GeoPoint ais_position;
};

struct FusionReport {
  std::string scene_id;
  // Vessel-class detections considered for fusion (infrastructure bypasses
  // this module entirely).
  std::int64_t n_detections = 0;
  std::int64_t n_linked = 0;
  double linkage_rate = 0.0;  // n_linked / n_detections; 0 when no detections
  std::vector<LinkedPair> links;               // sorted by detection_id
  std::vector<std::string> dark;               // sorted detection_ids
  std::vector<std::string> unmatched_mmsi;     // sorted
};

// One candidate per (vessel detection, trajectory) pair whose OBB polygon
// intersects the trajectory polyline. Single-point trajectories use
// point-in-polygon. Trajectories must already be filtered to the scene
// window; infrastructure detections must not be passed in. Candidates are
// ordered by (detection input order, mmsi).
std::vector<Candidate> candidate_links(
    const SceneMeta& scene, const std::vector<Detection>& detections,
    const std::vector<ais::Trajectory>& trajectories);

struct AssignResult {
  std::vector<LinkedPair> links;
  std::vector<std::string> dark;
  std::vector<std::string> unmatched_mmsi;
};

// Greedy one-to-one matching by ascending (dist_m, |dt_s|, mmsi,
// detection_id). Detections in vessel_detection_ids with no surviving
// candidate come back dark; mmsis with no link come back unmatched.
AssignResult assign_links(const std::vector<Candidate>& candidates,
                          const std::vector<std::string>& vessel_detection_ids,
                          const std::vector<std::string>& mmsis);

// temporal_filter -> build_trajectories -> candidate_links -> assign_links.
// Throws FormatError when a detection's scene_id does not match the scene.
FusionReport fuse_scene(const SceneMeta& scene,
                        const std::vector<Detection>& detections,
                        const std::vector<ais::AisRecord>& all_records,
                        std::int64_t half_window_s = 120);

struct MergeRow {
  std::string scene_id;
  std::int64_t n_detections = 0;
  std::int64_t n_linked = 0;
  double linkage_rate = 0.0;
};

struct MergeTable {
  std::vector<MergeRow> rows;  // input order
  MergeRow total;              // scene_id = "TOTAL"
};

// Throws FormatError on duplicate scene_ids.
MergeTable merge_reports(const std::vector<FusionReport>& reports);
// CSV with header scene_id,detections,linked,linkage_pct and a TOTAL row.
std::string merge_table_csv(const MergeTable& table);

nlohmann::json report_to_json(const FusionReport& report);
FusionReport report_from_json(const nlohmann::json& j);

}  // namespace riverfuse::fuse
