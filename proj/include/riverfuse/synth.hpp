// Deterministic synthetic river world: centerline, AIS traffic, scenes,
// detections, and ground truth, so every pipeline claim is testable against
// known answers.
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "riverfuse/ais.hpp"
#include "riverfuse/catalog.hpp"
#include "riverfuse/core.hpp"
#include "riverfuse/metrics.hpp"

namespace riverfuse::synth {

// Deterministic RNG helpers over a fixed engine. Distributions are
// hand-rolled (not std::*_distribution) so emitted fixtures are stable
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive
  double gaussian(double mean, double sigma);
  std::int64_t poisson(double lambda);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(
          uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  std::int64_t n_vessels = 20;  // self-propelled AIS-capable vessels, total
  std::int64_t n_scenes = 1;
  // When non-empty, fixes the per-scene vessel count exactly (length must
  // equal n_scenes; overrides n_vessels).
  std::vector<std::int64_t> scene_counts;
  double dark_fraction = 0.0;       // fraction of vessels emitting no AIS
  std::int64_t ais_period_s = 60;   // broadcast cadence
  std::int64_t ais_span_s = 600;    // emit within +/- span of scene time
  double position_noise_m = 0.0;    // gaussian jitter on AIS positions
  double stationary_fraction = 0.0; // vessels with sog 0
  std::int64_t n_tows = 0;          // tug+barge tows, round-robin per scene
  std::int64_t tow_barges_min = 1;
  std::int64_t tow_barges_max = 38;
  std::int64_t n_docks = 0;  // infrastructure objects, round-robin per scene
  std::int64_t n_bridges = 0;
  std::int64_t n_staging = 0;
  double congestion_factor = 1.0;  // >1 packs traffic lanes closer together
};

// Throws FormatError naming the offending field.
void validate_config(const SynthConfig& cfg);

struct GroundTruth {
  // detection_id -> mmsi for every AIS-capable vessel, including suppressed
  // (dark) ones.
  std::map<std::string, std::string> links;
  std::map<std::string, DirectionClass> directions;  // AIS vessels only
  std::vector<std::string> dark_detection_ids;       // sorted
  std::vector<std::string> dark_mmsis;               // sorted
  std::map<std::string, std::vector<std::string>> tow_members;
  std::map<std::string, std::int64_t> tow_barge_counts;
  std::map<std::string, std::string> tow_status;  // tow_id -> op status label
};

struct SynthOutput {
  std::vector<ais::AisRecord> ais;  // sorted by (timestamp, mmsi)
  std::vector<ScenePackage> scenes;     // ground-truth detections
  std::vector<ScenePackage> predicted;  // detector-style output for evaluate
  Centerline centerline;
  std::vector<catalog::CatalogEntry> catalog_entries;
  GroundTruth truth;
};

SynthOutput generate(const SynthConfig& cfg);

// Materializes ais.csv, centerline.geojson, catalog.json, truth.json,
// detections/<scene>.geojson, predictions/<scene>.geojson, and
// assets/<scene>.dat with JSON sidecars under dir.
void write_fixture(const SynthOutput& out, const std::string& dir);

std::string ais_to_csv(const std::vector<ais::AisRecord>& records);
nlohmann::json truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const nlohmann::json& j);

// Paired (true, predicted) barge counts: truths uniform in [1, 38], noise
// the difference of two Poisson(lambda) draws, clamped at zero.
metrics::CountSeries make_count_series(std::int64_t n, double lambda,
                                       std::uint64_t seed);

}  // namespace riverfuse::synth
