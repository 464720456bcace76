#include "riverfuse/fuse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace riverfuse::fuse {

using nlohmann::json;

std::vector<Candidate> candidate_links(
    const SceneMeta& scene, const std::vector<Detection>& detections,
    const std::vector<ais::Trajectory>& trajectories) {
  const geo::LocalFrame frame(geo::vertex_mean(scene.footprint));

  // Precompute detection polygons and index their bounding rectangles so a
  // trajectory only runs exact tests against nearby boxes.
  std::vector<geo::GeoPolygon> polys;
  polys.reserve(detections.size());
  std::vector<std::pair<geo::Rect, std::uint32_t>> items;
  for (std::uint32_t i = 0; i < detections.size(); ++i) {
    polys.push_back(obb_to_polygon(scene, detections[i].box));
    items.emplace_back(geo::Rect::of(polys.back()), i);
  }
  const geo::RectIndex index(std::move(items));

  // Collect per-detection hits first so output order is (detection, mmsi)
  // regardless of index traversal order.
  std::vector<std::vector<Candidate>> hits(detections.size());
  std::vector<geo::GeoPoint> line;
  std::vector<std::uint32_t> nearby;
  for (const ais::Trajectory& traj : trajectories) {
    if (traj.points.empty()) continue;
    line.clear();
    for (const ais::TrajectoryPoint& p : traj.points)
      line.push_back({p.lon, p.lat});
    index.query(geo::Rect::of(line), nearby);
    if (nearby.empty()) continue;

    const std::size_t ni = traj.nearest_point(scene.acquired_at);
    const ais::TrajectoryPoint& np = traj.points[ni];
    const geo::GeoPoint ais_pos{np.lon, np.lat};
    for (const std::uint32_t di : nearby) {
      if (!geo::polygon_intersects_polyline(polys[di], line)) continue;
      Candidate c;
      c.detection_id = detections[di].detection_id;
      c.mmsi = traj.mmsi;
      c.dt_s = static_cast<double>(np.timestamp - scene.acquired_at);
      c.dist_m = geo::local_distance_m(
          frame, geo::vertex_mean(polys[di]), ais_pos);
      c.sog_kn = np.sog_kn;
      c.cog_deg = np.cog_deg;
      c.vessel_name = traj.vessel_name;
      c.ais_position = ais_pos;
      hits[di].push_back(std::move(c));
    }
  }

  std::vector<Candidate> out;
  for (std::vector<Candidate>& h : hits) {
    std::sort(h.begin(), h.end(), [](const Candidate& a, const Candidate& b) {
      return a.mmsi < b.mmsi;
    });
    for (Candidate& c : h) out.push_back(std::move(c));
  }
  return out;
}

AssignResult assign_links(const std::vector<Candidate>& candidates,
                          const std::vector<std::string>& vessel_detection_ids,
                          const std::vector<std::string>& mmsis) {
  std::vector<const Candidate*> order;
  order.reserve(candidates.size());
  for (const Candidate& c : candidates) order.push_back(&c);
  std::sort(order.begin(), order.end(),
            [](const Candidate* a, const Candidate* b) {
              if (a->dist_m != b->dist_m) return a->dist_m < b->dist_m;
              const double da = std::fabs(a->dt_s), db = std::fabs(b->dt_s);
              if (da != db) return da < db;
              if (a->mmsi != b->mmsi) return a->mmsi < b->mmsi;
              return a->detection_id < b->detection_id;
            });

  AssignResult res;
  std::set<std::string> used_det, used_mmsi;
  for (const Candidate* c : order) {
    if (used_det.count(c->detection_id) || used_mmsi.count(c->mmsi)) continue;
    used_det.insert(c->detection_id);
    used_mmsi.insert(c->mmsi);
    res.links.push_back({c->detection_id, c->mmsi, c->dt_s, c->dist_m,
                         c->sog_kn, c->cog_deg, c->vessel_name,
                         c->ais_position});
  }
  std::sort(res.links.begin(), res.links.end(),
            [](const LinkedPair& a, const LinkedPair& b) {
              return a.detection_id < b.detection_id;
            });
  for (const std::string& id : vessel_detection_ids) {
    if (!used_det.count(id)) res.dark.push_back(id);
  }
  std::sort(res.dark.begin(), res.dark.end());
  for (const std::string& m : mmsis) {
    if (!used_mmsi.count(m)) res.unmatched_mmsi.push_back(m);
  }
  std::sort(res.unmatched_mmsi.begin(), res.unmatched_mmsi.end());
  return res;
}

FusionReport fuse_scene(const SceneMeta& scene,
                        const std::vector<Detection>& detections,
                        const std::vector<ais::AisRecord>& all_records,
                        std::int64_t half_window_s) {
  std::vector<Detection> vessels;
  for (const Detection& d : detections) {
    if (d.scene_id != scene.scene_id)
      throw FormatError("detection " + d.detection_id +
                        ": scene_id \"" + d.scene_id +
                        "\" does not match scene \"" + scene.scene_id + "\"");
    if (!is_infrastructure(d.klass)) vessels.push_back(d);
  }

  const std::vector<ais::AisRecord> windowed =
      ais::temporal_filter(all_records, scene.acquired_at, half_window_s);
  const std::vector<ais::Trajectory> trajectories =
      ais::build_trajectories(windowed);

  const std::vector<Candidate> candidates =
      candidate_links(scene, vessels, trajectories);

  std::vector<std::string> vessel_ids;
  vessel_ids.reserve(vessels.size());
  for (const Detection& d : vessels) vessel_ids.push_back(d.detection_id);
  std::vector<std::string> mmsis;
  mmsis.reserve(trajectories.size());
  for (const ais::Trajectory& t : trajectories) mmsis.push_back(t.mmsi);

  AssignResult assigned = assign_links(candidates, vessel_ids, mmsis);

  FusionReport report;
  report.scene_id = scene.scene_id;
  report.n_detections = static_cast<std::int64_t>(vessels.size());
  report.n_linked = static_cast<std::int64_t>(assigned.links.size());
  report.linkage_rate =
      report.n_detections == 0
          ? 0.0
          : static_cast<double>(report.n_linked) /
                static_cast<double>(report.n_detections);
  report.links = std::move(assigned.links);
  report.dark = std::move(assigned.dark);
  report.unmatched_mmsi = std::move(assigned.unmatched_mmsi);
  return report;
}

MergeTable merge_reports(const std::vector<FusionReport>& reports) {
  MergeTable table;
  table.total.scene_id = "TOTAL";
  std::set<std::string> seen;
  for (const FusionReport& r : reports) {
    if (!seen.insert(r.scene_id).second)
      throw FormatError("duplicate scene_id in merge: " + r.scene_id);
    MergeRow row{r.scene_id, r.n_detections, r.n_linked, r.linkage_rate};
    table.total.n_detections += row.n_detections;
    table.total.n_linked += row.n_linked;
    table.rows.push_back(std::move(row));
  }
  table.total.linkage_rate =
      table.total.n_detections == 0
          ? 0.0
          : static_cast<double>(table.total.n_linked) /
                static_cast<double>(table.total.n_detections);
  return table;
}

std::string merge_table_csv(const MergeTable& table) {
  std::string csv = "scene_id,detections,linked,linkage_pct\n";
  char buf[160];
  const auto emit = [&](const MergeRow& r) {
    std::snprintf(buf, sizeof buf, "%s,%lld,%lld,%.2f\n", r.scene_id.c_str(),
                  static_cast<long long>(r.n_detections),
                  static_cast<long long>(r.n_linked), 100.0 * r.linkage_rate);
    csv += buf;
  };
  for (const MergeRow& r : table.rows) emit(r);
  emit(table.total);
  return csv;
}

json report_to_json(const FusionReport& report) {
  json links = json::array();
  for (const LinkedPair& lp : report.links) {
    json j{{"detection_id", lp.detection_id},
           {"mmsi", lp.mmsi},
           {"dt_s", lp.dt_s},
           {"dist_m", lp.dist_m},
           {"sog_kn", lp.sog_kn},
           {"cog_deg", lp.cog_deg ? json(*lp.cog_deg) : json(nullptr)},
           {"ais_lon", lp.ais_position.lon},
           {"ais_lat", lp.ais_position.lat}};
    if (!lp.vessel_name.empty()) j["vessel_name"] = lp.vessel_name;
    links.push_back(std::move(j));
  }
  return {{"scene_id", report.scene_id},
          {"n_detections", report.n_detections},
          {"n_linked", report.n_linked},
          {"linkage_rate", report.linkage_rate},
          {"links", links},
          {"dark", report.dark},
          {"unmatched_mmsi", report.unmatched_mmsi}};
}

FusionReport report_from_json(const json& j) {
  FusionReport r;
  try {
    r.scene_id = j.at("scene_id").get<std::string>();
    r.n_detections = j.at("n_detections").get<std::int64_t>();
    r.n_linked = j.at("n_linked").get<std::int64_t>();
    r.linkage_rate = j.at("linkage_rate").get<double>();
    for (const json& lj : j.at("links")) {
      LinkedPair lp;
      lp.detection_id = lj.at("detection_id").get<std::string>();
      lp.mmsi = lj.at("mmsi").get<std::string>();
      lp.dt_s = lj.at("dt_s").get<double>();
      lp.dist_m = lj.at("dist_m").get<double>();
      lp.sog_kn = lj.value("sog_kn", 0.0);
      if (lj.contains("cog_deg") && !lj.at("cog_deg").is_null())
        lp.cog_deg = lj.at("cog_deg").get<double>();
      lp.vessel_name = lj.value("vessel_name", std::string());
      lp.ais_position = {lj.value("ais_lon", 0.0), lj.value("ais_lat", 0.0)};
      r.links.push_back(std::move(lp));
    }
    for (const json& d : j.at("dark")) r.dark.push_back(d.get<std::string>());
    if (j.contains("unmatched_mmsi")) {
      for (const json& m : j.at("unmatched_mmsi"))
        r.unmatched_mmsi.push_back(m.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid fusion report: ") + e.what());
  }
  return r;
}

}  // namespace riverfuse::fuse
