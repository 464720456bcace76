// riverfuse: satellite-AIS fusion pipeline for inland waterways.
// Subcommands: ingest, fuse, evaluate, inventory, select, synth.
// Exit codes: 0 success, 2 input-format error, 3 internal error.
#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <thread>

#include "riverfuse/ais.hpp"
#include "riverfuse/catalog.hpp"
#include "riverfuse/core.hpp"
#include "riverfuse/direction.hpp"
#include "riverfuse/fuse.hpp"
#include "riverfuse/geojson.hpp"
#include "riverfuse/inventory.hpp"
#include "riverfuse/metrics.hpp"
#include "riverfuse/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace riverfuse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFormat = 2;
constexpr int kExitInternal = 3;

int effective_jobs(int jobs_flag) {
  if (const char* env = std::getenv("RIVERFUSE_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  if (jobs_flag > 0) return jobs_flag;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Sorted .geojson scene packages from a directory.
std::vector<ScenePackage> load_scene_dir(const std::string& dir) {
  std::vector<std::string> paths;
  if (!fs::is_directory(dir))
    throw FormatError("not a directory: " + dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".geojson")
      paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<ScenePackage> out;
  out.reserve(paths.size());
  for (const std::string& p : paths) out.push_back(io::load_scene_package(p));
  return out;
}

// Runs fn(i) for i in [0, n) across up to jobs threads. Exceptions are
// captured and rethrown on the calling thread.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int cmd_ingest(const std::string& ais_path, bool strict,
               const std::string& out_path) {
  const auto [records, stats] = ais::parse_ais_csv_file(ais_path, strict);
  std::printf("rows_read=%lld rows_accepted=%lld rows_rejected=%lld\n",
              static_cast<long long>(stats.rows_read),
              static_cast<long long>(stats.rows_accepted),
              static_cast<long long>(stats.rows_rejected));
  for (const auto& [reason, count] : stats.rejects_by_reason)
    std::printf("  reject %s: %lld\n", reason.c_str(),
                static_cast<long long>(count));
  if (!out_path.empty()) {
    io::write_text_file(synth::ais_to_csv(records), out_path);
    std::printf("normalized store written to %s\n", out_path.c_str());
  }
  return kExitOk;
}

int cmd_fuse(const std::string& ais_path, const std::string& det_dir,
             const std::string& out_dir, std::int64_t half_window_s,
             bool strict, int jobs) {
  const auto [records, stats] = ais::parse_ais_csv_file(ais_path, strict);
  const std::vector<ScenePackage> scenes = load_scene_dir(det_dir);
  fs::create_directories(out_dir);

  std::vector<fuse::FusionReport> reports(scenes.size());
  parallel_for(scenes.size(), effective_jobs(jobs), [&](std::size_t i) {
    reports[i] = fuse::fuse_scene(scenes[i].scene, scenes[i].detections,
                                  records, half_window_s);
  });

  for (const fuse::FusionReport& r : reports) {
    io::write_json_file(fuse::report_to_json(r),
                        (fs::path(out_dir) / ("fusion_" + r.scene_id + ".json"))
                            .string());
  }
  const fuse::MergeTable table = fuse::merge_reports(reports);
  io::write_text_file(fuse::merge_table_csv(table),
                      (fs::path(out_dir) / "linkage.csv").string());
  std::printf("fused %zu scenes: %lld/%lld linked (%.2f%%)\n", scenes.size(),
              static_cast<long long>(table.total.n_linked),
              static_cast<long long>(table.total.n_detections),
              100.0 * table.total.linkage_rate);
  return kExitOk;
}

struct EvalAccumulator {
  std::vector<metrics::EvalBox> pred, truth;
};

int cmd_evaluate(const std::string& pred_dir, const std::string& truth_dir,
                 const std::string& out_dir, double iou_thresh,
                 double conf_thresh) {
  const std::vector<ScenePackage> pred_scenes = load_scene_dir(pred_dir);
  const std::vector<ScenePackage> truth_scenes = load_scene_dir(truth_dir);
  fs::create_directories(out_dir);

  std::map<std::string, const ScenePackage*> truth_by_id;
  for (const ScenePackage& p : truth_scenes) truth_by_id[p.scene.scene_id] = &p;

  EvalAccumulator klass_acc, cover_acc, op_acc, infra_acc;
  // Direction truth/pred pairs come from same-class matched boxes.
  std::vector<DirectionClass> dir_pred, dir_truth;
  std::map<std::string, std::int64_t> tow_truth_counts, tow_pred_counts;

  const auto add_boxes = [](EvalAccumulator& acc, bool is_pred,
                            const metrics::EvalBox& box) {
    (is_pred ? acc.pred : acc.truth).push_back(box);
  };

  const auto collect = [&](const ScenePackage& pkg, bool is_pred) {
    for (const Detection& d : pkg.detections) {
      const geo::GeoPolygon poly = obb_to_polygon(pkg.scene, d.box);
      const metrics::EvalBox base{to_string(d.klass), poly, d.confidence};
      if (is_infrastructure(d.klass)) {
        add_boxes(infra_acc, is_pred, base);
        continue;
      }
      add_boxes(klass_acc, is_pred, base);
      if (d.klass == ObjectClass::HopperBarge &&
          d.cover != CoverState::NotApplicable) {
        add_boxes(cover_acc, is_pred,
                  {to_string(d.cover), poly, d.confidence});
      }
      if (d.op_status != OpStatus::NotApplicable) {
        add_boxes(op_acc, is_pred,
                  {to_string(d.op_status), poly, d.confidence});
      }
      if (!d.tow_id.empty() &&
          (d.klass == ObjectClass::HopperBarge ||
           d.klass == ObjectClass::CraneBarge)) {
        auto& counts = is_pred ? tow_pred_counts : tow_truth_counts;
        ++counts[d.tow_id];
      }
    }
  };

  for (const ScenePackage& pkg : truth_scenes) collect(pkg, false);
  for (const ScenePackage& pkg : pred_scenes) {
    if (!truth_by_id.count(pkg.scene.scene_id))
      throw FormatError("prediction scene " + pkg.scene.scene_id +
                        " has no matching truth scene");
    collect(pkg, true);
  }

  // Direction pairs: greedily match same-class boxes per scene, then compare
  // the direction labels carried by each side.
  for (const ScenePackage& pkg : pred_scenes) {
    const ScenePackage& truth_pkg = *truth_by_id.at(pkg.scene.scene_id);
    std::vector<const Detection*> tv;
    for (const Detection& t : truth_pkg.detections) tv.push_back(&t);
    std::vector<bool> used(tv.size(), false);
    for (const Detection& p : pkg.detections) {
      if (p.confidence < conf_thresh) continue;
      if (p.direction_pred == DirectionClass::NotApplicable) continue;
      const geo::GeoPolygon pp = obb_to_polygon(pkg.scene, p.box);
      double best_iou = 0.0;
      std::size_t best = tv.size();
      for (std::size_t i = 0; i < tv.size(); ++i) {
        if (used[i] || tv[i]->klass != p.klass) continue;
        if (tv[i]->direction_pred == DirectionClass::NotApplicable) continue;
        const double iou = geo::rotated_iou(
            pp, obb_to_polygon(truth_pkg.scene, tv[i]->box));
        if (iou >= iou_thresh && iou > best_iou) {
          best_iou = iou;
          best = i;
        }
      }
      if (best < tv.size()) {
        used[best] = true;
        dir_pred.push_back(p.direction_pred);
        dir_truth.push_back(tv[best]->direction_pred);
      }
    }
  }

  json report;
  report["config"] = {{"iou_thresh", iou_thresh},
                      {"conf_thresh", conf_thresh}};
  json categories = json::array();
  const auto eval_category = [&](const char* name,
                                 const EvalAccumulator& acc) {
    const metrics::MatchTally tally = metrics::match_detections(
        acc.pred, acc.truth, iou_thresh, conf_thresh);
    categories.push_back(
        metrics::category_to_json(metrics::category_report(name, tally)));
  };
  eval_category("vessel_and_barge_classification", klass_acc);
  eval_category("cover_status", cover_acc);
  eval_category("operational_status", op_acc);
  eval_category("infrastructure_objects", infra_acc);
  report["categories"] = categories;

  const direction::ConfusionMatrix cm =
      direction::direction_confusion(dir_pred, dir_truth);
  json matrix = json::array();
  for (const auto& row : cm.counts) matrix.push_back(row);
  report["direction"] = {
      {"labels", {"upstream", "downstream", "stationary"}},
      {"matrix", matrix},
      {"per_class_accuracy",
       {{"upstream",
         metrics::metric_to_json(cm.class_accuracy(DirectionClass::Upstream))},
        {"downstream", metrics::metric_to_json(
                            cm.class_accuracy(DirectionClass::Downstream))},
        {"stationary", metrics::metric_to_json(cm.class_accuracy(
                            DirectionClass::Stationary))}}},
      {"overall_accuracy", metrics::metric_to_json(cm.overall_accuracy())}};

  metrics::CountSeries series;
  for (const auto& [tow_id, truth_count] : tow_truth_counts) {
    const auto it = tow_pred_counts.find(tow_id);
    if (it != tow_pred_counts.end())
      series.pairs.emplace_back(truth_count, it->second);
  }
  if (series.pairs.empty()) {
    report["count_metrics"] = {{"n", 0},
                               {"mae", nullptr},
                               {"smape_pct", nullptr}};
  } else {
    report["count_metrics"] = {
        {"n", static_cast<std::int64_t>(series.pairs.size())},
        {"mae", metrics::mae(series)},
        {"smape_pct", metrics::smape_pct(series)}};
  }

  const std::string out_path = (fs::path(out_dir) / "metrics.json").string();
  io::write_json_file(report, out_path);
  std::printf("metrics written to %s\n", out_path.c_str());
  return kExitOk;
}

int cmd_inventory(const std::string& det_dir, const std::string& reports_dir,
                  const std::string& out_dir) {
  const std::vector<ScenePackage> scenes = load_scene_dir(det_dir);
  fs::create_directories(out_dir);

  inventory::Snapshot aggregate;
  json per_scene = json::object();
  json all_tows = json::array();
  std::vector<inventory::InfrastructureRecord> infra;

  for (const ScenePackage& pkg : scenes) {
    const std::string report_path =
        (fs::path(reports_dir) / ("fusion_" + pkg.scene.scene_id + ".json"))
            .string();
    if (!fs::exists(report_path))
      throw FormatError("missing fusion report for scene " +
                        pkg.scene.scene_id + ": " + report_path);
    const fuse::FusionReport report =
        fuse::report_from_json(io::read_json_file(report_path));

    const std::vector<inventory::TowRecord> tows =
        inventory::build_tows(pkg.detections, report);
    const inventory::Snapshot snap =
        inventory::fleet_snapshot(pkg.detections, tows, report);
    per_scene[pkg.scene.scene_id] = inventory::snapshot_to_json(snap);
    aggregate.add(snap);
    for (const json& t : inventory::tows_to_json(tows)) all_tows.push_back(t);
    for (inventory::InfrastructureRecord& r :
         inventory::build_infrastructure(pkg.detections, pkg.scene))
      infra.push_back(std::move(r));
  }
  inventory::flag_near_duplicates(infra);

  io::write_json_file(
      {{"aggregate", inventory::snapshot_to_json(aggregate)},
       {"scenes", per_scene}},
      (fs::path(out_dir) / "snapshot.json").string());
  io::write_text_file(inventory::snapshot_to_csv(aggregate),
                      (fs::path(out_dir) / "snapshot.csv").string());
  io::write_json_file(all_tows, (fs::path(out_dir) / "tows.json").string());
  io::write_json_file(inventory::infrastructure_to_geojson(infra),
                      (fs::path(out_dir) / "infrastructure.geojson").string());
  std::printf(
      "inventory: %lld detections, %lld tows, %zu infrastructure objects\n",
      static_cast<long long>(aggregate.n_detections),
      static_cast<long long>(aggregate.n_tows), infra.size());
  return kExitOk;
}

int cmd_select(const std::string& ais_path, const std::string& catalog_path,
               std::int64_t half_window_s, bool strict,
               const std::string& out_path) {
  const auto [records, stats] = ais::parse_ais_csv_file(ais_path, strict);
  const std::vector<ais::Trajectory> trajectories =
      ais::build_trajectories(records);
  const std::vector<catalog::CatalogEntry> entries =
      catalog::load_catalog(catalog_path);
  const std::vector<catalog::Selection> selected =
      catalog::select_scenes(trajectories, entries, half_window_s);
  const json j = catalog::selections_to_json(selected);
  if (out_path.empty()) {
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    io::write_json_file(j, out_path);
  }
  std::printf("selected %zu of %zu scenes\n", selected.size(), entries.size());
  return kExitOk;
}

int cmd_synth(const synth::SynthConfig& cfg, const std::string& out_dir) {
  const synth::SynthOutput out = synth::generate(cfg);
  synth::write_fixture(out, out_dir);
  std::size_t n_detections = 0;
  for (const ScenePackage& p : out.scenes) n_detections += p.detections.size();
  std::printf("synth fixture: %lld scenes, %zu detections, %zu ais rows -> %s\n",
              static_cast<long long>(cfg.n_scenes), n_detections,
              out.ais.size(), out_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"riverfuse: satellite-AIS fusion for inland waterways"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse and clean an AIS CSV");
  std::string in_ais;
  std::string in_out;
  bool in_strict = false;
  ingest->add_option("--ais", in_ais, "AIS CSV path")->required();
  ingest->add_option("--out", in_out, "write normalized CSV here");
  ingest->add_flag("--strict", in_strict, "require 9-digit MMSI");

  // fuse
  auto* fuse_cmd = app.add_subcommand("fuse", "Link detections to AIS tracks");
  std::string fu_ais, fu_dets, fu_out;
  std::int64_t fu_window = 120;
  bool fu_strict = false;
  int fu_jobs = 0;
  fuse_cmd->add_option("--ais", fu_ais, "AIS CSV path")->required();
  fuse_cmd->add_option("--detections", fu_dets, "detection GeoJSON directory")
      ->required();
  fuse_cmd->add_option("--out", fu_out, "output directory")->required();
  fuse_cmd->add_option("--half-window", fu_window,
                       "temporal half-window seconds (default 120)");
  fuse_cmd->add_flag("--strict", fu_strict, "require 9-digit MMSI");
  fuse_cmd->add_option(
      "--jobs", fu_jobs,
      "scene fan-out threads (default: hardware; env RIVERFUSE_JOBS wins)");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate",
                                      "Score predictions against truth");
  std::string ev_pred, ev_truth, ev_out;
  double ev_iou = 0.5, ev_conf = 0.5;
  eval_cmd->add_option("--pred", ev_pred, "predicted detections directory")
      ->required();
  eval_cmd->add_option("--truth", ev_truth, "ground-truth directory")
      ->required();
  eval_cmd->add_option("--out", ev_out, "output directory")->required();
  eval_cmd->add_option("--iou", ev_iou, "IoU threshold (default 0.5)");
  eval_cmd->add_option("--conf", ev_conf,
                       "confidence threshold (default 0.5)");

  // inventory
  auto* inv_cmd = app.add_subcommand("inventory",
                                     "Fleet snapshot and infrastructure");
  std::string iv_dets, iv_reports, iv_out;
  inv_cmd->add_option("--detections", iv_dets, "detection GeoJSON directory")
      ->required();
  inv_cmd->add_option("--reports", iv_reports, "fusion report directory")
      ->required();
  inv_cmd->add_option("--out", iv_out, "output directory")->required();

  // select
  auto* sel_cmd = app.add_subcommand("select", "AIS-guided scene selection");
  std::string se_ais, se_catalog, se_out;
  std::int64_t se_window = 120;
  bool se_strict = false;
  sel_cmd->add_option("--ais", se_ais, "AIS CSV path")->required();
  sel_cmd->add_option("--catalog", se_catalog, "catalog JSON path")
      ->required();
  sel_cmd->add_option("--half-window", se_window,
                      "temporal half-window seconds (default 120)");
  sel_cmd->add_option("--out", se_out, "write selection JSON here");
  sel_cmd->add_flag("--strict", se_strict, "require 9-digit MMSI");

  // synth
  auto* syn_cmd = app.add_subcommand("synth", "Generate a synthetic fixture");
  synth::SynthConfig cfg;
  std::string sy_out;
  std::string sy_counts;
  syn_cmd->add_option("--out", sy_out, "fixture output directory")->required();
  syn_cmd->add_option("--seed", cfg.seed, "RNG seed (default 1)");
  syn_cmd->add_option("--vessels", cfg.n_vessels,
                      "AIS-capable vessels (default 20)");
  syn_cmd->add_option("--scenes", cfg.n_scenes, "scene count (default 1)");
  syn_cmd->add_option("--scene-counts", sy_counts,
                      "comma-separated per-scene vessel counts");
  syn_cmd->add_option("--dark-fraction", cfg.dark_fraction,
                      "fraction of vessels with AIS suppressed");
  syn_cmd->add_option("--stationary-fraction", cfg.stationary_fraction,
                      "fraction of vessels at rest");
  syn_cmd->add_option("--ais-period", cfg.ais_period_s,
                      "broadcast cadence seconds (default 60)");
  syn_cmd->add_option("--ais-span", cfg.ais_span_s,
                      "emit within +/- span seconds of scene time");
  syn_cmd->add_option("--position-noise", cfg.position_noise_m,
                      "gaussian AIS position noise meters");
  syn_cmd->add_option("--tows", cfg.n_tows, "tug+barge tows");
  syn_cmd->add_option("--tow-barges-min", cfg.tow_barges_min,
                      "min barges per tow (default 1)");
  syn_cmd->add_option("--tow-barges-max", cfg.tow_barges_max,
                      "max barges per tow (default 38)");
  syn_cmd->add_option("--docks", cfg.n_docks, "dock objects");
  syn_cmd->add_option("--bridges", cfg.n_bridges, "bridge objects");
  syn_cmd->add_option("--staging", cfg.n_staging, "staging areas");
  syn_cmd->add_option("--congestion", cfg.congestion_factor,
                      "lane-packing factor (default 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return cmd_ingest(in_ais, in_strict, in_out);
    if (fuse_cmd->parsed())
      return cmd_fuse(fu_ais, fu_dets, fu_out, fu_window, fu_strict, fu_jobs);
    if (eval_cmd->parsed())
      return cmd_evaluate(ev_pred, ev_truth, ev_out, ev_iou, ev_conf);
    if (inv_cmd->parsed()) return cmd_inventory(iv_dets, iv_reports, iv_out);
    if (sel_cmd->parsed())
      return cmd_select(se_ais, se_catalog, se_window, se_strict, se_out);
    if (syn_cmd->parsed()) {
      if (!sy_counts.empty()) {
        cfg.scene_counts.clear();
        std::string token;
        for (const char c : sy_counts + ",") {
          if (c == ',') {
            if (!token.empty()) cfg.scene_counts.push_back(std::stoll(token));
            token.clear();
          } else {
            token.push_back(c);
          }
        }
        cfg.n_scenes = static_cast<std::int64_t>(cfg.scene_counts.size());
      }
      return cmd_synth(cfg, sy_out);
    }
  } catch (const FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFormat;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitOk;
}
