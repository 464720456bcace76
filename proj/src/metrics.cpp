#include "riverfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riverfuse::metrics {

using nlohmann::json;

MatchTally match_detections(const std::vector<EvalBox>& pred,
                            const std::vector<EvalBox>& truth,
                            double iou_thresh, double conf_thresh) {
  MatchTally tally;
  for (const EvalBox& t : truth) tally[t.label];  // ensure row exists

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].confidence >= conf_thresh) kept.push_back(i);
  }

  struct Pair {
    double iou;
    std::size_t pred_i;  // index into kept
    std::size_t truth_i;
  };
  std::vector<Pair> pairs;
  for (std::size_t pi = 0; pi < kept.size(); ++pi) {
    const EvalBox& p = pred[kept[pi]];
    for (std::size_t ti = 0; ti < truth.size(); ++ti) {
      if (truth[ti].label != p.label) continue;
      const double iou = geo::rotated_iou(p.poly, truth[ti].poly);
      if (iou >= iou_thresh) pairs.push_back({iou, pi, ti});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.pred_i != b.pred_i) return a.pred_i < b.pred_i;
    return a.truth_i < b.truth_i;
  });

  std::vector<bool> pred_used(kept.size(), false);
  std::vector<bool> truth_used(truth.size(), false);
  for (const Pair& pr : pairs) {
    if (pred_used[pr.pred_i] || truth_used[pr.truth_i]) continue;
    pred_used[pr.pred_i] = true;
    truth_used[pr.truth_i] = true;
    ++tally[truth[pr.truth_i].label].tp;
  }
  for (std::size_t pi = 0; pi < kept.size(); ++pi) {
    if (!pred_used[pi]) ++tally[pred[kept[pi]].label].fp;
  }
  for (std::size_t ti = 0; ti < truth.size(); ++ti) {
    if (!truth_used[ti]) ++tally[truth[ti].label].fn;
  }
  return tally;
}

Metric precision(const Tally& t) {
  const std::int64_t d = t.tp + t.fp;
  if (d == 0) return std::nullopt;
  return static_cast<double>(t.tp) / static_cast<double>(d);
}

Metric recall(const Tally& t) {
  const std::int64_t d = t.tp + t.fn;
  if (d == 0) return std::nullopt;
  return static_cast<double>(t.tp) / static_cast<double>(d);
}

Metric f1(Metric p, Metric r) {
  if (!p || !r) return std::nullopt;
  const double s = *p + *r;
  if (s == 0.0) return std::nullopt;
  return 2.0 * (*p) * (*r) / s;
}

Metric f1(const Tally& t) { return f1(precision(t), recall(t)); }

Metric accuracy(std::int64_t correct, std::int64_t total) {
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(total);
}

double mae(const CountSeries& s) {
  if (s.pairs.empty()) throw std::invalid_argument("mae: empty series");
  double sum = 0.0;
  for (const auto& [x, y] : s.pairs)
    sum += std::fabs(static_cast<double>(x) - static_cast<double>(y));
  return sum / static_cast<double>(s.pairs.size());
}

double smape_pct(const CountSeries& s) {
  if (s.pairs.empty()) throw std::invalid_argument("smape: empty series");
  double sum = 0.0;
  for (const auto& [x, y] : s.pairs) {
    const double ax = std::fabs(static_cast<double>(x));
    const double ay = std::fabs(static_cast<double>(y));
    if (ax + ay == 0.0) continue;  // exact zero/zero term contributes 0
    sum += 2.0 * std::fabs(static_cast<double>(x) - static_cast<double>(y)) /
           (ax + ay);
  }
  return 100.0 * sum / static_cast<double>(s.pairs.size());
}

CategoryReport category_report(const std::string& name, const MatchTally& t) {
  CategoryReport rep;
  rep.name = name;
  rep.overall.label = "overall";
  double wp = 0.0, wr = 0.0, wf = 0.0;
  std::int64_t np = 0, nr = 0, nf = 0;
  for (const auto& [label, tally] : t) {
    ClassRow row;
    row.label = label;
    row.instances = tally.tp + tally.fn;
    row.tp = tally.tp;
    row.fp = tally.fp;
    row.fn = tally.fn;
    row.precision = precision(tally);
    row.recall = recall(tally);
    row.f1 = f1(tally);
    rep.overall.instances += row.instances;
    rep.overall.tp += row.tp;
    rep.overall.fp += row.fp;
    rep.overall.fn += row.fn;
    if (row.precision) {
      wp += *row.precision * static_cast<double>(row.instances);
      np += row.instances;
    }
    if (row.recall) {
      wr += *row.recall * static_cast<double>(row.instances);
      nr += row.instances;
    }
    if (row.f1) {
      wf += *row.f1 * static_cast<double>(row.instances);
      nf += row.instances;
    }
    rep.rows.push_back(std::move(row));
  }
  if (np > 0) rep.overall.precision = wp / static_cast<double>(np);
  if (nr > 0) rep.overall.recall = wr / static_cast<double>(nr);
  if (nf > 0) rep.overall.f1 = wf / static_cast<double>(nf);
  return rep;
}

json metric_to_json(const Metric& m) {
  return m ? json(*m) : json(nullptr);
}

json category_to_json(const CategoryReport& report) {
  json classes = json::object();
  for (const ClassRow& row : report.rows) {
    classes[row.label] = {{"instances", row.instances},
                          {"tp", row.tp},
                          {"fp", row.fp},
                          {"fn", row.fn},
                          {"precision", metric_to_json(row.precision)},
                          {"recall", metric_to_json(row.recall)},
                          {"f1", metric_to_json(row.f1)}};
  }
  return {{"name", report.name},
          {"classes", classes},
          {"overall",
           {{"aggregation", "instance_weighted_mean"},
            {"instances", report.overall.instances},
            {"precision", metric_to_json(report.overall.precision)},
            {"recall", metric_to_json(report.overall.recall)},
            {"f1", metric_to_json(report.overall.f1)}}}};
}

}  // namespace riverfuse::metrics
