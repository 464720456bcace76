// Evaluation suite: IoU-threshold detection matching, precision/recall/F1,
// accuracy, and count-error metrics (MAE, sMAPE).
#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "riverfuse/geo.hpp"

namespace riverfuse::metrics {

// A ratio that is undefined when its denominator is empty; serializes as
// null so "no samples" never masquerades as zero.
using Metric = std::optional<double>;

struct Tally {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

// Per-label tallies, keyed by class label.
using MatchTally = std::map<std::string, Tally>;

struct EvalBox {
  std::string label;
  geo::GeoPolygon poly;
  double confidence = 1.0;
};

// Greedy one-to-one matching among same-label pairs: predictions below
// conf_thresh are discarded, pairs below iou_thresh never match, remaining
// pairs are taken by descending IoU. Matched pairs are tp, leftover
// predictions fp, leftover truths fn.
MatchTally match_detections(const std::vector<EvalBox>& pred,
                            const std::vector<EvalBox>& truth,
                            double iou_thresh = 0.5,
                            double conf_thresh = 0.5);

Metric precision(const Tally& t);
Metric recall(const Tally& t);
Metric f1(const Tally& t);
// Harmonic mean; undefined when either input is undefined or p + r == 0.
Metric f1(Metric p, Metric r);
Metric accuracy(std::int64_t correct, std::int64_t total);

// Paired true/predicted counts (e.g. barges per tow).
struct CountSeries {
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
};

// Both throw std::invalid_argument on an empty series.
double mae(const CountSeries& s);
// Symmetric MAPE in percent, each term 2|x-y|/(|x|+|y|) with 0/0 -> 0.
double smape_pct(const CountSeries& s);

struct ClassRow {
  std::string label;
  std::int64_t instances = 0;  // truth count: tp + fn
  std::int64_t tp = 0, fp = 0, fn = 0;
  Metric precision;
  Metric recall;
  Metric f1;
};

struct CategoryReport {
  std::string name;
  std::vector<ClassRow> rows;  // sorted by label
  // Instance-weighted mean over rows whose metric is defined; the JSON
  // labels the aggregation rule explicitly.
  ClassRow overall;
};

CategoryReport category_report(const std::string& name, const MatchTally& t);
nlohmann::json category_to_json(const CategoryReport& report);
nlohmann::json metric_to_json(const Metric& m);

}  // namespace riverfuse::metrics
