#include "riverfuse/inventory.hpp"

#include <algorithm>
#include <map>

namespace riverfuse::inventory {

using nlohmann::json;

namespace {

bool is_barge(ObjectClass c) {
  return c == ObjectClass::HopperBarge || c == ObjectClass::CraneBarge;
}

}  // namespace

std::vector<TowRecord> build_tows(const std::vector<Detection>& detections,
                                  const fuse::FusionReport& report) {
  std::map<std::string, std::string> mmsi_by_detection;
  for (const fuse::LinkedPair& lp : report.links)
    mmsi_by_detection[lp.detection_id] = lp.mmsi;

  std::map<std::string, std::vector<const Detection*>> groups;
  for (const Detection& d : detections) {
    if (d.tow_id.empty()) continue;
    if (is_infrastructure(d.klass))
      throw FormatError("tow " + d.tow_id +
                        " contains infrastructure detection " +
                        d.detection_id);
    groups[d.tow_id].push_back(&d);
  }

  std::vector<TowRecord> tows;
  tows.reserve(groups.size());
  for (const auto& [tow_id, members] : groups) {
    TowRecord t;
    t.tow_id = tow_id;
    t.scene_id = report.scene_id;

    for (const Detection* d : members) {
      if (d->klass == ObjectClass::Tugboat &&
          (!t.tug_detection_id || d->detection_id < *t.tug_detection_id)) {
        t.tug_detection_id = d->detection_id;
      }
      if (is_barge(d->klass)) {
        ++t.barge_count;
        if (d->cover == CoverState::Covered) ++t.covered_count;
        if (d->cover == CoverState::Uncovered) ++t.uncovered_count;
      }
    }

    if (!t.tug_detection_id) {
      t.op_status = OpStatus::Moored;
    } else {
      // Majority vote over members carrying a status; ties (and no votes at
      // all) resolve to staged.
      std::map<OpStatus, std::int64_t> votes;
      for (const Detection* d : members) {
        if (d->op_status != OpStatus::NotApplicable) ++votes[d->op_status];
      }
      OpStatus winner = OpStatus::Staged;
      std::int64_t best = 0;
      bool tie = false;
      for (const auto& [status, n] : votes) {
        if (n > best) {
          best = n;
          winner = status;
          tie = false;
        } else if (n == best) {
          tie = true;
        }
      }
      t.op_status = (best == 0 || tie) ? OpStatus::Staged : winner;
      const auto it = mmsi_by_detection.find(*t.tug_detection_id);
      if (it != mmsi_by_detection.end()) t.linked_mmsi = it->second;
    }
    tows.push_back(std::move(t));
  }
  return tows;  // std::map iteration already sorts by tow_id
}

void Snapshot::add(const Snapshot& other) {
  for (const auto& [k, v] : other.by_class) by_class[k] += v;
  for (const auto& [k, v] : other.by_cover) by_cover[k] += v;
  for (const auto& [k, v] : other.by_op_status) by_op_status[k] += v;
  for (const auto& [k, v] : other.by_direction) by_direction[k] += v;
  n_detections += other.n_detections;
  n_linked += other.n_linked;
  n_dark += other.n_dark;
  n_tows += other.n_tows;
  total_barges += other.total_barges;
}

Snapshot fleet_snapshot(const std::vector<Detection>& detections,
                        const std::vector<TowRecord>& tows,
                        const fuse::FusionReport& report) {
  Snapshot s;
  for (const Detection& d : detections) {
    ++s.by_class[to_string(d.klass)];
    ++s.n_detections;
    if (d.klass == ObjectClass::HopperBarge) ++s.by_cover[to_string(d.cover)];
    if (!is_infrastructure(d.klass)) {
      ++s.by_op_status[to_string(d.op_status)];
      ++s.by_direction[to_string(d.direction_pred)];
    }
  }
  s.n_linked = report.n_linked;
  s.n_dark = static_cast<std::int64_t>(report.dark.size());
  s.n_tows = static_cast<std::int64_t>(tows.size());
  for (const TowRecord& t : tows) s.total_barges += t.barge_count;
  return s;
}

std::vector<InfrastructureRecord> build_infrastructure(
    const std::vector<Detection>& detections, const SceneMeta& scene) {
  std::vector<InfrastructureRecord> out;
  for (const Detection& d : detections) {
    if (!is_infrastructure(d.klass)) continue;
    InfrastructureRecord r;
    r.detection_id = d.detection_id;
    r.kind = d.klass;
    r.footprint = obb_to_polygon(scene, d.box);
    r.centroid = geo::vertex_mean(r.footprint);
    r.scene_id = scene.scene_id;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> flag_near_duplicates(
    std::vector<InfrastructureRecord>& records, double threshold_m) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const geo::LocalFrame frame(records[i].centroid);
    for (std::size_t j = i + 1; j < records.size(); ++j) {
      if (records[i].kind != records[j].kind) continue;
      if (geo::local_distance_m(frame, records[i].centroid,
                                records[j].centroid) <= threshold_m) {
        records[i].near_duplicate = true;
        records[j].near_duplicate = true;
        pairs.emplace_back(i, j);
      }
    }
  }
  return pairs;
}

json snapshot_to_json(const Snapshot& s) {
  return {{"by_class", s.by_class},
          {"by_cover", s.by_cover},
          {"by_op_status", s.by_op_status},
          {"by_direction", s.by_direction},
          {"n_detections", s.n_detections},
          {"n_linked", s.n_linked},
          {"n_dark", s.n_dark},
          {"n_tows", s.n_tows},
          {"total_barges", s.total_barges}};
}

json tows_to_json(const std::vector<TowRecord>& tows) {
  json arr = json::array();
  for (const TowRecord& t : tows) {
    json j{{"tow_id", t.tow_id},
           {"scene_id", t.scene_id},
           {"barge_count", t.barge_count},
           {"covered_count", t.covered_count},
           {"uncovered_count", t.uncovered_count},
           {"op_status", to_string(t.op_status)}};
    j["tug_detection_id"] =
        t.tug_detection_id ? json(*t.tug_detection_id) : json(nullptr);
    j["linked_mmsi"] = t.linked_mmsi ? json(*t.linked_mmsi) : json(nullptr);
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string snapshot_to_csv(const Snapshot& s) {
  std::string csv = "dimension,key,count\n";
  const auto emit = [&csv](const char* dim,
                           const std::map<std::string, std::int64_t>& m) {
    for (const auto& [k, v] : m)
      csv += std::string(dim) + "," + k + "," + std::to_string(v) + "\n";
  };
  emit("class", s.by_class);
  emit("cover", s.by_cover);
  emit("op_status", s.by_op_status);
  emit("direction", s.by_direction);
  csv += "summary,n_detections," + std::to_string(s.n_detections) + "\n";
  csv += "summary,n_linked," + std::to_string(s.n_linked) + "\n";
  csv += "summary,n_dark," + std::to_string(s.n_dark) + "\n";
  csv += "summary,n_tows," + std::to_string(s.n_tows) + "\n";
  csv += "summary,total_barges," + std::to_string(s.total_barges) + "\n";
  return csv;
}

json infrastructure_to_geojson(
    const std::vector<InfrastructureRecord>& records) {
  json features = json::array();
  for (const InfrastructureRecord& r : records) {
    json ring = json::array();
    for (const geo::GeoPoint& p : r.footprint.ring)
      ring.push_back({p.lon, p.lat});
    if (!r.footprint.ring.empty())
      ring.push_back(
          {r.footprint.ring.front().lon, r.footprint.ring.front().lat});
    features.push_back(
        {{"type", "Feature"},
         {"geometry",
          {{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
         {"properties",
          {{"detection_id", r.detection_id},
           {"kind", to_string(r.kind)},
           {"scene_id", r.scene_id},
           {"centroid_lon", r.centroid.lon},
           {"centroid_lat", r.centroid.lat},
           {"near_duplicate", r.near_duplicate}}}});
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

}  // namespace riverfuse::inventory
