// Python bindings over the riverfuse core: geometry kernels, AIS ingestion,
// fusion, direction classification, metrics, scene selection, and the
// synthetic fixture generator.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

#include "riverfuse/ais.hpp"
#include "riverfuse/catalog.hpp"
#include "riverfuse/core.hpp"
#include "riverfuse/direction.hpp"
#include "riverfuse/fuse.hpp"
#include "riverfuse/geojson.hpp"
#include "riverfuse/metrics.hpp"
#include "riverfuse/synth.hpp"

namespace py = pybind11;
using namespace riverfuse;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const json& v : j) out.append(json_to_py(v));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
      return out;
    }
    default: return py::none();
  }
}

geo::GeoPolygon ring_to_polygon(
    const std::vector<std::pair<double, double>>& ring) {
  geo::GeoPolygon poly;
  for (const auto& [lon, lat] : ring) poly.ring.push_back({lon, lat});
  return poly;
}

std::vector<std::pair<double, double>> polygon_to_ring(
    const geo::GeoPolygon& poly) {
  std::vector<std::pair<double, double>> out;
  for (const geo::GeoPoint& p : poly.ring) out.emplace_back(p.lon, p.lat);
  return out;
}

synth::SynthConfig config_from_dict(const py::dict& d) {
  synth::SynthConfig cfg;
  for (const auto& item : d) {
    const std::string key = py::cast<std::string>(item.first);
    const py::handle v = item.second;
    if (key == "seed") cfg.seed = py::cast<std::uint64_t>(v);
    else if (key == "n_vessels") cfg.n_vessels = py::cast<std::int64_t>(v);
    else if (key == "n_scenes") cfg.n_scenes = py::cast<std::int64_t>(v);
    else if (key == "scene_counts")
      cfg.scene_counts = py::cast<std::vector<std::int64_t>>(v);
    else if (key == "dark_fraction") cfg.dark_fraction = py::cast<double>(v);
    else if (key == "ais_period_s")
      cfg.ais_period_s = py::cast<std::int64_t>(v);
    else if (key == "ais_span_s") cfg.ais_span_s = py::cast<std::int64_t>(v);
    else if (key == "position_noise_m")
      cfg.position_noise_m = py::cast<double>(v);
    else if (key == "stationary_fraction")
      cfg.stationary_fraction = py::cast<double>(v);
    else if (key == "n_tows") cfg.n_tows = py::cast<std::int64_t>(v);
    else if (key == "tow_barges_min")
      cfg.tow_barges_min = py::cast<std::int64_t>(v);
    else if (key == "tow_barges_max")
      cfg.tow_barges_max = py::cast<std::int64_t>(v);
    else if (key == "n_docks") cfg.n_docks = py::cast<std::int64_t>(v);
    else if (key == "n_bridges") cfg.n_bridges = py::cast<std::int64_t>(v);
    else if (key == "n_staging") cfg.n_staging = py::cast<std::int64_t>(v);
    else if (key == "congestion_factor")
      cfg.congestion_factor = py::cast<double>(v);
    else
      throw py::key_error("unknown synth config field: " + key);
  }
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_riverfuse, m) {
  m.doc() = "Satellite-AIS fusion engine for inland waterways";
  m.attr("__version__") = "0.1.0";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def(
      "rotated_iou",
      [](const std::vector<std::pair<double, double>>& a,
         const std::vector<std::pair<double, double>>& b) {
        return geo::rotated_iou(ring_to_polygon(a), ring_to_polygon(b));
      },
      py::arg("a"), py::arg("b"),
      "Intersection-over-union of two convex lon/lat rings.");

  m.def(
      "convex_clip",
      [](const std::vector<std::pair<double, double>>& subject,
         const std::vector<std::pair<double, double>>& clip) {
        return polygon_to_ring(
            geo::convex_clip(ring_to_polygon(subject), ring_to_polygon(clip)));
      },
      py::arg("subject"), py::arg("clip"),
      "Sutherland-Hodgman intersection of convex rings; empty when disjoint.");

  m.def(
      "parse_ais_csv",
      [](const std::string& path, bool strict) {
        const auto [records, stats] = ais::parse_ais_csv_file(path, strict);
        json recs = json::array();
        for (const ais::AisRecord& r : records) {
          recs.push_back(
              {{"mmsi", r.mmsi},
               {"timestamp", format_iso8601(r.timestamp)},
               {"lat", r.lat},
               {"lon", r.lon},
               {"sog_kn", r.sog_kn},
               {"cog_deg", r.cog_deg ? json(*r.cog_deg) : json(nullptr)},
               {"vessel_name", r.vessel_name}});
        }
        json st{{"rows_read", stats.rows_read},
                {"rows_accepted", stats.rows_accepted},
                {"rows_rejected", stats.rows_rejected},
                {"rejects_by_reason", stats.rejects_by_reason}};
        return py::make_tuple(json_to_py(recs), json_to_py(st));
      },
      py::arg("path"), py::arg("strict") = false,
      "Parse an AIS CSV file; returns (records, ingest_stats).");

  m.def(
      "classify_direction",
      [](const std::vector<std::pair<double, double>>& centerline,
         std::pair<double, double> position, double sog_kn,
         std::optional<double> cog_deg) -> std::optional<std::string> {
        Centerline line;
        for (const auto& [lon, lat] : centerline)
          line.vertices.push_back({lon, lat});
        const auto result = direction::classify_direction(
            line, {position.first, position.second}, sog_kn, cog_deg);
        if (!result) return std::nullopt;
        return std::string(to_string(*result));
      },
      py::arg("centerline"), py::arg("position"), py::arg("sog_kn"),
      py::arg("cog_deg") = std::nullopt,
      "upstream/downstream/stationary against an upstream-to-downstream "
      "centerline; None when COG is unavailable.");

  m.def(
      "f1",
      [](std::optional<double> p,
         std::optional<double> r) -> std::optional<double> {
        return metrics::f1(p, r);
      },
      py::arg("precision"), py::arg("recall"),
      "Harmonic mean; None on undefined inputs.");

  m.def(
      "mae",
      [](const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs) {
        return metrics::mae({pairs});
      },
      py::arg("pairs"), "Mean absolute error over (true, predicted) counts.");

  m.def(
      "smape_pct",
      [](const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs) {
        return metrics::smape_pct({pairs});
      },
      py::arg("pairs"), "Symmetric MAPE in percent; 0/0 terms count as 0.");

  m.def(
      "fuse_scene",
      [](const std::string& detections_geojson, const std::string& ais_csv,
         std::int64_t half_window_s, bool strict) {
        const ScenePackage pkg = io::load_scene_package(detections_geojson);
        const auto [records, stats] = ais::parse_ais_csv_file(ais_csv, strict);
        const fuse::FusionReport report =
            fuse::fuse_scene(pkg.scene, pkg.detections, records, half_window_s);
        return json_to_py(fuse::report_to_json(report));
      },
      py::arg("detections_geojson"), py::arg("ais_csv"),
      py::arg("half_window_s") = 120, py::arg("strict") = false,
      "Run the fusion pipeline for one scene file; returns the report dict.");

  m.def(
      "select_scenes",
      [](const std::string& ais_csv, const std::string& catalog_json,
         std::int64_t half_window_s) {
        const auto [records, stats] = ais::parse_ais_csv_file(ais_csv, false);
        const auto selected = catalog::select_scenes(
            ais::build_trajectories(records),
            catalog::load_catalog(catalog_json), half_window_s);
        return json_to_py(catalog::selections_to_json(selected));
      },
      py::arg("ais_csv"), py::arg("catalog_json"),
      py::arg("half_window_s") = 120,
      "Scenes whose footprint and window intersect AIS activity.");

  m.def(
      "generate_fixture",
      [](const py::dict& config, const std::string& out_dir) {
        synth::write_fixture(synth::generate(config_from_dict(config)),
                             out_dir);
      },
      py::arg("config"), py::arg("out_dir"),
      "Write a deterministic synthetic fixture directory.");
}
