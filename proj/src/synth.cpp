#include "riverfuse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "riverfuse/geojson.hpp"

namespace riverfuse::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kMPerDegLat = 111320.0;
constexpr double kKnToMps = 0.514444;

// World layout: the river flows due south (upstream -> downstream) from
// lat 30.60 with a gentle meander in longitude; arc position s is meters
// downstream of the head. Scene k covers reach [k*L, (k+1)*L) and is
// acquired one hour after scene k-1.
constexpr Timestamp kT0 = 1706788800;  // 2024-02-01T12:00:00Z
constexpr double kHeadLat = 30.60;
constexpr double kAxisLon = -91.0;
constexpr double kMeanderAmpDeg = 0.015;
constexpr double kMeanderLenM = 8000.0;
constexpr double kReachM = 15000.0;
constexpr double kPixelM = 3.0;

double lat_of(double s) { return kHeadLat - s / kMPerDegLat; }

double m_per_deg_lon(double lat) { return kMPerDegLat * std::cos(lat * kDegToRad); }

geo::GeoPoint river_point(double s, double offset_m) {
  const double lat = lat_of(s);
  const double lon = kAxisLon + kMeanderAmpDeg * std::sin(s / kMeanderLenM) +
                     offset_m / m_per_deg_lon(lat);
  return {lon, lat};
}

// Unit (east, north) tangent of the river axis pointing downstream
// (increasing s).
std::pair<double, double> river_tangent(double s, double lat) {
  // d(lon)/ds in degrees -> meters east per meter of arc.
  const double east =
      (kMeanderAmpDeg / kMeanderLenM) * std::cos(s / kMeanderLenM) *
      m_per_deg_lon(lat);
  const double north = -1.0;  // southward flow
  const double len = std::hypot(east, north);
  return {east / len, north / len};
}

double cog_from_vector(double east, double north) {
  double deg = std::atan2(east, north) / kDegToRad;
  if (deg < 0.0) deg += 360.0;
  return deg;
}

struct VesselDims {
  double length_m;
  double beam_m;
};

VesselDims dims_for(ObjectClass c) {
  switch (c) {
    case ObjectClass::Tugboat: return {25.0, 8.0};
    case ObjectClass::BulkCarrier: return {60.0, 12.0};
    case ObjectClass::CargoShip: return {50.0, 10.0};
    case ObjectClass::HopperBarge: return {60.0, 11.0};
    case ObjectClass::CraneBarge: return {40.0, 12.0};
    case ObjectClass::Dock: return {120.0, 20.0};
    case ObjectClass::Bridge: return {600.0, 18.0};
    case ObjectClass::StagingArea: return {250.0, 80.0};
  }
  return {25.0, 8.0};
}

std::string scene_name(std::int64_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "S%02lld", static_cast<long long>(k + 1));
  return buf;
}

Detection make_detection(const SceneMeta& scene, const std::string& id,
                         ObjectClass klass, const geo::GeoPoint& pos,
                         double course_east, double course_north) {
  Detection d;
  d.detection_id = id;
  d.scene_id = scene.scene_id;
  d.klass = klass;
  const VesselDims dims = dims_for(klass);
  const auto [col, row] = geo::geo_to_pixel(scene.geotransform, pos);
  d.box.center_col = col;
  d.box.center_row = row;
  d.box.width_px = dims.length_m / kPixelM;
  d.box.height_px = dims.beam_m / kPixelM;
  // North-up raster: +col is east, +row is south.
  d.box.angle_rad = std::atan2(-course_north, course_east);
  return d;
}

}  // namespace

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(gen_() % span);
}

double Rng::gaussian(double mean, double sigma) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + sigma * spare_;
  }
  double u, v, r2;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    r2 = u * u + v * v;
  } while (r2 >= 1.0 || r2 == 0.0);
  const double f = std::sqrt(-2.0 * std::log(r2) / r2);
  spare_ = v * f;
  has_spare_ = true;
  return mean + sigma * u * f;
}

std::int64_t Rng::poisson(double lambda) {
  // Knuth's method; fine for the small lambdas used here.
  const double limit = std::exp(-lambda);
  std::int64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit);
  return k - 1;
}

void validate_config(const SynthConfig& cfg) {
  const auto fail = [](const std::string& field, const std::string& why) {
    throw FormatError("synth config: " + field + " " + why);
  };
  if (cfg.n_vessels < 0) fail("n_vessels", "must be >= 0");
  if (cfg.n_scenes < 1) fail("n_scenes", "must be >= 1");
  if (!cfg.scene_counts.empty()) {
    if (static_cast<std::int64_t>(cfg.scene_counts.size()) != cfg.n_scenes)
      fail("scene_counts", "length must equal n_scenes");
    for (const std::int64_t c : cfg.scene_counts)
      if (c < 0) fail("scene_counts", "entries must be >= 0");
  }
  if (cfg.dark_fraction < 0.0 || cfg.dark_fraction > 1.0)
    fail("dark_fraction", "must be in [0,1]");
  if (cfg.stationary_fraction < 0.0 || cfg.stationary_fraction > 1.0)
    fail("stationary_fraction", "must be in [0,1]");
  if (cfg.ais_period_s < 1) fail("ais_period_s", "must be >= 1");
  if (cfg.ais_span_s < 0) fail("ais_span_s", "must be >= 0");
  if (cfg.position_noise_m < 0.0) fail("position_noise_m", "must be >= 0");
  if (cfg.n_tows < 0) fail("n_tows", "must be >= 0");
  if (cfg.tow_barges_min < 1) fail("tow_barges_min", "must be >= 1");
  if (cfg.tow_barges_max < cfg.tow_barges_min)
    fail("tow_barges_max", "must be >= tow_barges_min");
  if (cfg.n_docks < 0) fail("n_docks", "must be >= 0");
  if (cfg.n_bridges < 0) fail("n_bridges", "must be >= 0");
  if (cfg.n_staging < 0) fail("n_staging", "must be >= 0");
  if (cfg.congestion_factor <= 0.0) fail("congestion_factor", "must be > 0");
}

SynthOutput generate(const SynthConfig& cfg) {
  validate_config(cfg);
  Rng rng(cfg.seed);
  SynthOutput out;

  // Per-scene vessel counts.
  std::vector<std::int64_t> counts = cfg.scene_counts;
  if (counts.empty()) {
    counts.assign(static_cast<std::size_t>(cfg.n_scenes), 0);
    for (std::int64_t i = 0; i < cfg.n_vessels; ++i)
      ++counts[static_cast<std::size_t>(i % cfg.n_scenes)];
  }
  const std::int64_t total_vessels =
      std::accumulate(counts.begin(), counts.end(), std::int64_t{0});

  // Centerline vertices every 250 m, with margin beyond the outer scenes so
  // nearest-vertex tangents stay two-sided.
  const double total_len = static_cast<double>(cfg.n_scenes) * kReachM;
  for (double s = -2000.0; s <= total_len + 2000.0 + 1e-9; s += 250.0)
    out.centerline.vertices.push_back(river_point(s, 0.0));

  // Dark set: a seeded shuffle picks round(dark_fraction * total) vessels.
  std::vector<std::int64_t> vessel_order(
      static_cast<std::size_t>(total_vessels));
  for (std::size_t i = 0; i < vessel_order.size(); ++i)
    vessel_order[i] = static_cast<std::int64_t>(i);
  rng.shuffle(vessel_order);
  const std::int64_t n_dark = static_cast<std::int64_t>(
      std::llround(cfg.dark_fraction * static_cast<double>(total_vessels)));
  std::vector<bool> is_dark(static_cast<std::size_t>(total_vessels), false);
  for (std::int64_t i = 0; i < n_dark; ++i)
    is_dark[static_cast<std::size_t>(vessel_order[static_cast<std::size_t>(i)])] =
        true;

  const double lane_spacing = 50.0 / cfg.congestion_factor;
  constexpr std::int64_t kLanes = 12;
  constexpr ObjectClass kVesselClasses[] = {
      ObjectClass::Tugboat, ObjectClass::BulkCarrier, ObjectClass::CargoShip};

  std::int64_t fleet_seq = 0;  // regular-vessel index (keys the dark set)
  std::int64_t mmsi_seq = 0;   // every AIS-capable hull, tugs included
  for (std::int64_t k = 0; k < cfg.n_scenes; ++k) {
    const double s_lo = static_cast<double>(k) * kReachM;
    const Timestamp t_scene = kT0 + k * 3600;

    // Scene raster: north-up, 3 m pixels, footprint covering the reach plus
    // margin for lane offsets and box extents.
    const double pad_deg = 500.0 / kMPerDegLat;
    const double lat_hi = lat_of(s_lo) + pad_deg;
    const double lat_lo = lat_of(s_lo + kReachM) - pad_deg;
    const double lon_half = kMeanderAmpDeg + 0.008 + pad_deg;
    const double px_deg = kPixelM / kMPerDegLat;
    SceneMeta scene;
    scene.scene_id = scene_name(k);
    scene.acquired_at = t_scene;
    scene.width_px =
        static_cast<std::int64_t>(std::ceil(2.0 * lon_half / px_deg));
    scene.height_px =
        static_cast<std::int64_t>(std::ceil((lat_hi - lat_lo) / px_deg));
    scene.geotransform = {kAxisLon - lon_half, px_deg, 0.0,
                          lat_hi,              0.0,    -px_deg};
    scene.footprint = footprint_from_geotransform(
        scene.geotransform, scene.width_px, scene.height_px);
    scene.source_uri = "assets/" + scene.scene_id + ".dat";

    ScenePackage pkg;
    pkg.scene = scene;

    std::int64_t det_seq = 0;
    const auto next_detection_id = [&]() {
      char buf[24];
      std::snprintf(buf, sizeof buf, "%s-d%03lld", scene.scene_id.c_str(),
                    static_cast<long long>(++det_seq));
      return std::string(buf);
    };

    struct VesselPlan {
      std::string detection_id;
      std::string mmsi;
      std::string name;
      std::string type_code;
      double s0 = 0.0;
      double lane_off = 0.0;
      double speed_mps = 0.0;
      double sog_kn = 0.0;
      int dir = 1;  // +1 downstream, -1 upstream
      bool stationary = false;
      bool dark = false;
      std::string tow_id;  // tug of a tow when non-empty
    };
    std::vector<VesselPlan> plans;

    // Rows of traffic every 1200 m in the middle of the reach; 12 lanes.
    const std::int64_t n_here = counts[static_cast<std::size_t>(k)];
    for (std::int64_t i = 0; i < n_here; ++i) {
      VesselPlan p;
      const std::int64_t row = i / kLanes;
      const std::int64_t lane = i % kLanes;
      p.s0 = s_lo + 2500.0 + static_cast<double>(row) * 1200.0;
      p.lane_off =
          (static_cast<double>(lane) - (kLanes - 1) / 2.0) * lane_spacing;
      p.stationary = rng.uniform() < cfg.stationary_fraction;
      p.dir = rng.uniform() < 0.5 ? 1 : -1;
      if (p.stationary) {
        p.sog_kn = 0.0;
        p.speed_mps = 0.0;
      } else {
        p.sog_kn = rng.uniform(2.0, 8.0);
        p.speed_mps = p.sog_kn * kKnToMps;
      }
      p.dark = is_dark[static_cast<std::size_t>(fleet_seq++)];
      const std::int64_t global = mmsi_seq++;
      char mmsi[16];
      std::snprintf(mmsi, sizeof mmsi, "%09lld",
                    static_cast<long long>(367000001 + global));
      p.mmsi = mmsi;
      char name[32];
      std::snprintf(name, sizeof name, "RV SYNTH %03lld",
                    static_cast<long long>(global + 1));
      p.name = name;
      p.detection_id = next_detection_id();
      plans.push_back(std::move(p));
    }

    // Assign classes deterministically by position in the scene.
    for (std::size_t i = 0; i < plans.size(); ++i) {
      VesselPlan& p = plans[i];
      const ObjectClass klass = kVesselClasses[i % 3];
      p.type_code = klass == ObjectClass::Tugboat ? "31" : "70";

      const geo::GeoPoint pos = river_point(p.s0, p.lane_off);
      const auto [te, tn] = river_tangent(p.s0, pos.lat);
      const double ce = te * p.dir, cn = tn * p.dir;
      Detection d = make_detection(scene, p.detection_id, klass, pos, ce, cn);
      d.op_status = p.stationary ? OpStatus::Staged : OpStatus::InMotion;
      const DirectionClass truth_dir =
          p.stationary ? DirectionClass::Stationary
          : (p.dir > 0 ? DirectionClass::Downstream : DirectionClass::Upstream);
      d.direction_pred = truth_dir;
      pkg.detections.push_back(d);

      out.truth.links[p.detection_id] = p.mmsi;
      out.truth.directions[p.detection_id] = truth_dir;
      if (p.dark) {
        out.truth.dark_detection_ids.push_back(p.detection_id);
        out.truth.dark_mmsis.push_back(p.mmsi);
      }
    }

    // Tows: a tug (AIS-capable, never dark) pushing a barge grid placed in a
    // dedicated band near the downstream end of the reach, away from the
    // vessel rows above.
    const std::int64_t tows_here =
        cfg.n_tows / cfg.n_scenes + (k < cfg.n_tows % cfg.n_scenes ? 1 : 0);
    for (std::int64_t ti = 0; ti < tows_here; ++ti) {
      char tow_id[24];
      std::snprintf(tow_id, sizeof tow_id, "%s-t%02lld", scene.scene_id.c_str(),
                    static_cast<long long>(ti + 1));

      VesselPlan p;
      p.s0 = s_lo + 12000.0 + static_cast<double>(ti % 4) * 700.0;
      p.lane_off = (static_cast<double>(ti / 4) - 1.0) * 500.0;
      p.dir = rng.uniform() < 0.5 ? 1 : -1;
      const bool in_motion = rng.uniform() < 0.5;
      p.stationary = !in_motion;
      p.sog_kn = in_motion ? rng.uniform(2.0, 8.0) : 0.0;
      p.speed_mps = p.sog_kn * kKnToMps;
      p.dark = false;
      const std::int64_t global = mmsi_seq++;
      char mmsi[16];
      std::snprintf(mmsi, sizeof mmsi, "%09lld",
                    static_cast<long long>(367000001 + global));
      p.mmsi = mmsi;
      char name[32];
      std::snprintf(name, sizeof name, "RV TOW %03lld",
                    static_cast<long long>(global + 1));
      p.name = name;
      p.type_code = "31";
      p.detection_id = next_detection_id();
      p.tow_id = tow_id;

      const OpStatus tow_status = in_motion ? OpStatus::InMotion : OpStatus::Staged;
      const geo::GeoPoint tug_pos = river_point(p.s0, p.lane_off);
      const auto [te, tn] = river_tangent(p.s0, tug_pos.lat);
      const double ce = te * p.dir, cn = tn * p.dir;
      Detection tug = make_detection(scene, p.detection_id,
                                     ObjectClass::Tugboat, tug_pos, ce, cn);
      tug.op_status = tow_status;
      const DirectionClass truth_dir =
          p.stationary ? DirectionClass::Stationary
          : (p.dir > 0 ? DirectionClass::Downstream : DirectionClass::Upstream);
      tug.direction_pred = truth_dir;
      tug.tow_id = tow_id;
      pkg.detections.push_back(tug);
      out.truth.links[p.detection_id] = p.mmsi;
      out.truth.directions[p.detection_id] = truth_dir;
      out.truth.tow_members[tow_id].push_back(p.detection_id);
      out.truth.tow_status[tow_id] = to_string(tow_status);

      // Barge grid ahead of the tug, five abreast.
      const std::int64_t n_barges =
          rng.uniform_int(cfg.tow_barges_min, cfg.tow_barges_max);
      out.truth.tow_barge_counts[tow_id] = n_barges;
      for (std::int64_t b = 0; b < n_barges; ++b) {
        const std::int64_t col = b % 5;
        const std::int64_t rowi = b / 5;
        const double ds =
            static_cast<double>(p.dir) * (static_cast<double>(rowi + 1) * 62.0);
        const double doff = (static_cast<double>(col) - 2.0) * 12.0;
        const geo::GeoPoint bpos = river_point(p.s0 + ds, p.lane_off + doff);
        const bool crane = (b % 9) == 8;
        Detection barge = make_detection(
            scene, next_detection_id(),
            crane ? ObjectClass::CraneBarge : ObjectClass::HopperBarge, bpos,
            ce, cn);
        if (!crane)
          barge.cover = rng.uniform() < 0.5 ? CoverState::Covered
                                            : CoverState::Uncovered;
        barge.op_status = tow_status;
        barge.direction_pred = truth_dir;
        barge.tow_id = tow_id;
        out.truth.tow_members[tow_id].push_back(barge.detection_id);
        pkg.detections.push_back(std::move(barge));
      }
      plans.push_back(std::move(p));
    }

    // Infrastructure along the banks (never fused, never AIS).
    const auto infra_share = [&](std::int64_t total) {
      return total / cfg.n_scenes + (k < total % cfg.n_scenes ? 1 : 0);
    };
    struct InfraSpec {
      ObjectClass klass;
      std::int64_t n;
    };
    const InfraSpec infra[] = {{ObjectClass::Dock, infra_share(cfg.n_docks)},
                               {ObjectClass::Bridge, infra_share(cfg.n_bridges)},
                               {ObjectClass::StagingArea,
                                infra_share(cfg.n_staging)}};
    std::int64_t infra_slot = 0;
    for (const InfraSpec& spec : infra) {
      for (std::int64_t i = 0; i < spec.n; ++i, ++infra_slot) {
        const double s = s_lo + 1000.0 + static_cast<double>(infra_slot) * 400.0;
        const double off = (infra_slot % 2 == 0 ? 1.0 : -1.0) *
                           (spec.klass == ObjectClass::Bridge ? 0.0 : 900.0);
        const geo::GeoPoint pos = river_point(s, off);
        // Bridges span the river (east-west); docks/staging hug the banks.
        const double ce = spec.klass == ObjectClass::Bridge ? 1.0 : 0.0;
        const double cn = spec.klass == ObjectClass::Bridge ? 0.0 : -1.0;
        Detection d = make_detection(scene, next_detection_id(), spec.klass,
                                     pos, ce, cn);
        pkg.detections.push_back(std::move(d));
      }
    }

    // AIS emission for every non-dark plan.
    for (const VesselPlan& p : plans) {
      if (p.dark) continue;
      for (std::int64_t t = -cfg.ais_span_s; t <= cfg.ais_span_s;
           t += cfg.ais_period_s) {
        const double s_t =
            p.s0 + static_cast<double>(p.dir) * p.speed_mps *
                       static_cast<double>(t);
        geo::GeoPoint pos = river_point(s_t, p.lane_off);
        if (cfg.position_noise_m > 0.0) {
          const double de = rng.gaussian(0.0, cfg.position_noise_m);
          const double dn = rng.gaussian(0.0, cfg.position_noise_m);
          pos.lon += de / m_per_deg_lon(pos.lat);
          pos.lat += dn / kMPerDegLat;
        }
        const auto [te, tn] = river_tangent(s_t, pos.lat);
        ais::AisRecord rec;
        rec.mmsi = p.mmsi;
        rec.timestamp = t_scene + t;
        rec.lat = pos.lat;
        rec.lon = pos.lon;
        rec.sog_kn = p.sog_kn;
        rec.cog_deg = cog_from_vector(te * p.dir, tn * p.dir);
        rec.heading_deg = rec.cog_deg;
        rec.vessel_name = p.name;
        rec.vessel_type = p.type_code;
        out.ais.push_back(std::move(rec));
      }
    }

    out.catalog_entries.push_back(
        {scene.scene_id, scene.acquired_at, scene.footprint, scene.source_uri});
    out.scenes.push_back(std::move(pkg));
  }

  std::sort(out.ais.begin(), out.ais.end(),
            [](const ais::AisRecord& a, const ais::AisRecord& b) {
              if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
              return a.mmsi < b.mmsi;
            });
  std::sort(out.truth.dark_detection_ids.begin(),
            out.truth.dark_detection_ids.end());
  std::sort(out.truth.dark_mmsis.begin(), out.truth.dark_mmsis.end());

  // Detector-style predictions: the truth boxes with confidence below 1 so
  // evaluation paths exercise the confidence cut.
  out.predicted = out.scenes;
  for (ScenePackage& pkg : out.predicted) {
    for (Detection& d : pkg.detections)
      d.confidence = 0.62 + 0.38 * rng.uniform();
  }
  return out;
}

std::string ais_to_csv(const std::vector<ais::AisRecord>& records) {
  std::string csv =
      "MMSI,BaseDateTime,LAT,LON,SOG,COG,Heading,VesselName,VesselType\n";
  char buf[256];
  for (const ais::AisRecord& r : records) {
    std::string ts = format_iso8601(r.timestamp);
    ts.pop_back();  // MarineCadastre convention: no trailing Z
    std::snprintf(buf, sizeof buf, "%s,%s,%.9f,%.9f,%.1f,%.1f,%.1f,%s,%s\n",
                  r.mmsi.c_str(), ts.c_str(), r.lat, r.lon, r.sog_kn,
                  r.cog_deg ? *r.cog_deg : 511.0,
                  r.heading_deg ? *r.heading_deg : 511.0,
                  r.vessel_name.c_str(), r.vessel_type.c_str());
    csv += buf;
  }
  return csv;
}

nlohmann::json truth_to_json(const GroundTruth& truth) {
  nlohmann::json dirs = nlohmann::json::object();
  for (const auto& [id, d] : truth.directions) dirs[id] = to_string(d);
  nlohmann::json tows = nlohmann::json::object();
  for (const auto& [tow_id, members] : truth.tow_members) {
    tows[tow_id] = {
        {"members", members},
        {"barge_count", truth.tow_barge_counts.at(tow_id)},
        {"op_status", truth.tow_status.at(tow_id)}};
  }
  return {{"links", truth.links},
          {"directions", dirs},
          {"dark_detection_ids", truth.dark_detection_ids},
          {"dark_mmsis", truth.dark_mmsis},
          {"tows", tows}};
}

GroundTruth truth_from_json(const nlohmann::json& j) {
  GroundTruth t;
  try {
    for (const auto& [id, mmsi] : j.at("links").items())
      t.links[id] = mmsi.get<std::string>();
    for (const auto& [id, d] : j.at("directions").items())
      t.directions[id] = direction_class_from_string(d.get<std::string>());
    for (const auto& id : j.at("dark_detection_ids"))
      t.dark_detection_ids.push_back(id.get<std::string>());
    for (const auto& m : j.at("dark_mmsis"))
      t.dark_mmsis.push_back(m.get<std::string>());
    for (const auto& [tow_id, tj] : j.at("tows").items()) {
      for (const auto& m : tj.at("members"))
        t.tow_members[tow_id].push_back(m.get<std::string>());
      t.tow_barge_counts[tow_id] = tj.at("barge_count").get<std::int64_t>();
      t.tow_status[tow_id] = tj.at("op_status").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid truth file: ") + e.what());
  }
  return t;
}

void write_fixture(const SynthOutput& out, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "detections");
  fs::create_directories(fs::path(dir) / "predictions");
  fs::create_directories(fs::path(dir) / "assets");

  io::write_text_file(ais_to_csv(out.ais), (fs::path(dir) / "ais.csv").string());
  io::save_centerline(out.centerline,
                      (fs::path(dir) / "centerline.geojson").string());
  io::write_json_file(catalog::catalog_to_json(out.catalog_entries),
                      (fs::path(dir) / "catalog.json").string());
  io::write_json_file(truth_to_json(out.truth),
                      (fs::path(dir) / "truth.json").string());
  for (const ScenePackage& pkg : out.scenes) {
    io::save_scene_package(pkg, (fs::path(dir) / "detections" /
                                 (pkg.scene.scene_id + ".geojson"))
                                    .string());
    // Placeholder pixel asset plus metadata sidecar for the fetcher path.
    io::write_text_file("synthetic scene raster placeholder\n",
                        (fs::path(dir) / pkg.scene.source_uri).string());
    io::write_json_file(
        io::scene_to_json(pkg.scene),
        (fs::path(dir) / (pkg.scene.source_uri + ".json")).string());
  }
  for (const ScenePackage& pkg : out.predicted) {
    io::save_scene_package(pkg, (fs::path(dir) / "predictions" /
                                 (pkg.scene.scene_id + ".geojson"))
                                    .string());
  }
}

metrics::CountSeries make_count_series(std::int64_t n, double lambda,
                                       std::uint64_t seed) {
  Rng rng(seed);
  metrics::CountSeries s;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t x = rng.uniform_int(1, 38);
    const std::int64_t noise = rng.poisson(lambda) - rng.poisson(lambda);
    s.pairs.emplace_back(x, std::max<std::int64_t>(0, x + noise));
  }
  return s;
}

}  // namespace riverfuse::synth
