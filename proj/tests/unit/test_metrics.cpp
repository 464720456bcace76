#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "riverfuse/metrics.hpp"

using namespace riverfuse;
using namespace riverfuse::metrics;

namespace {

geo::GeoPolygon box_at(double x, double y, double w = 1.0, double h = 1.0) {
  return geo::GeoPolygon{{{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}};
}

EvalBox eval_box(const std::string& label, double x, double y,
                 double conf = 1.0) {
  return EvalBox{label, box_at(x, y), conf};
}

}  // namespace

TEST_CASE("precision/recall/f1 on plain tallies") {
  const Tally t{8, 2, 4};
  REQUIRE(precision(t).has_value());
  CHECK(*precision(t) == doctest::Approx(0.8).epsilon(1e-15));
  REQUIRE(recall(t).has_value());
  CHECK(*recall(t) == doctest::Approx(8.0 / 12.0).epsilon(1e-15));
  REQUIRE(f1(t).has_value());
  CHECK(*f1(t) == doctest::Approx(2 * 0.8 * (8.0 / 12.0) / (0.8 + 8.0 / 12.0))
                      .epsilon(1e-12));

  // No predictions: precision undefined, recall zero.
  const Tally none{0, 0, 5};
  CHECK_FALSE(precision(none).has_value());
  REQUIRE(recall(none).has_value());
  CHECK(*recall(none) == 0.0);
  CHECK_FALSE(f1(none).has_value());

  // Nothing at all: everything undefined.
  const Tally empty{0, 0, 0};
  CHECK_FALSE(precision(empty).has_value());
  CHECK_FALSE(recall(empty).has_value());
  CHECK_FALSE(f1(empty).has_value());
}

TEST_CASE("harmonic-mean f1 reproduces the reference operating points") {
  // Published per-class operating points, F1 within +/-0.002.
  const auto check_pair = [](double p, double r, double expect) {
    const Metric m = f1(Metric{p}, Metric{r});
    REQUIRE(m.has_value());
    CHECK(std::fabs(*m - expect) <= 0.002);
  };
  check_pair(0.992, 1.0, 0.996);
  check_pair(0.904, 1.0, 0.950);
  check_pair(0.988, 1.0, 0.994);
  check_pair(0.990, 0.852, 0.916);

  CHECK_FALSE(f1(std::nullopt, Metric{0.5}).has_value());
  CHECK_FALSE(f1(Metric{0.5}, std::nullopt).has_value());
  CHECK_FALSE(f1(Metric{0.0}, Metric{0.0}).has_value());
}

TEST_CASE("f1 lies between min(p,r) and max(p,r)") {
  std::mt19937_64 gen(3);
  const auto u = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 500; ++i) {
    const double p = 0.01 + 0.99 * u();
    const double r = 0.01 + 0.99 * u();
    const Metric m = f1(Metric{p}, Metric{r});
    REQUIRE(m.has_value());
    CHECK(*m >= std::min(p, r) - 1e-12);
    CHECK(*m <= std::max(p, r) + 1e-12);
    // Harmonic mean never exceeds the arithmetic mean.
    CHECK(*m <= (p + r) / 2.0 + 1e-12);
  }
}

TEST_CASE("accuracy") {
  REQUIRE(accuracy(37, 37).has_value());
  CHECK(*accuracy(37, 37) == 1.0);
  CHECK(*accuracy(7, 8) == doctest::Approx(0.875).epsilon(1e-15));
  CHECK_FALSE(accuracy(0, 0).has_value());
}

TEST_CASE("mae and smape on small hand-checked series") {
  CountSeries s;
  s.pairs = {{10, 12}, {5, 4}, {8, 8}};  // |e| = 2, 1, 0
  CHECK(mae(s) == doctest::Approx(1.0).epsilon(1e-15));

  CountSeries one;
  one.pairs = {{10, 6}};
  // 2*|10-6| / (10+6) = 0.5 -> 50% exactly.
  CHECK(smape_pct(one) == 50.0);

  CountSeries zz;
  zz.pairs = {{0, 0}, {10, 6}};  // the 0/0 term contributes nothing
  CHECK(smape_pct(zz) == doctest::Approx(25.0).epsilon(1e-12));

  CHECK_THROWS_AS(mae(CountSeries{}), std::invalid_argument);
  CHECK_THROWS_AS(smape_pct(CountSeries{}), std::invalid_argument);
}

TEST_CASE("mae/smape agree with a brute-force accumulation to 1e-12") {
  std::mt19937_64 gen(77);
  CountSeries s;
  for (int i = 0; i < 200; ++i) {
    const std::int64_t truth = 1 + static_cast<std::int64_t>(gen() % 38);
    const std::int64_t noise = static_cast<std::int64_t>(gen() % 9) - 4;
    s.pairs.emplace_back(truth, std::max<std::int64_t>(0, truth + noise));
  }
  // Independent accumulation in long double via compensated summation.
  std::vector<long double> abs_err, terms;
  for (const auto& [t, p] : s.pairs) {
    abs_err.push_back(std::fabs(static_cast<long double>(t - p)));
    const long double denom =
        static_cast<long double>(std::llabs(t) + std::llabs(p));
    terms.push_back(denom == 0.0L ? 0.0L
                                  : 2.0L *
                                        std::fabs(static_cast<long double>(
                                            t - p)) /
                                        denom);
  }
  const double want_mae =
      static_cast<double>(oracle::kahan_sum(abs_err) / 200.0L);
  const double want_smape =
      static_cast<double>(100.0L * oracle::kahan_sum(terms) / 200.0L);
  CHECK(std::fabs(mae(s) - want_mae) <= 1e-12 * std::max(1.0, want_mae));
  CHECK(std::fabs(smape_pct(s) - want_smape) <=
        1e-12 * std::max(1.0, want_smape));
}

TEST_CASE("match_detections: exact overlap, same class") {
  const std::vector<EvalBox> truth = {eval_box("tugboat", 0, 0)};
  const std::vector<EvalBox> pred = {eval_box("tugboat", 0, 0, 0.9)};
  const MatchTally t = match_detections(pred, truth);
  CHECK(t.at("tugboat").tp == 1);
  CHECK(t.at("tugboat").fp == 0);
  CHECK(t.at("tugboat").fn == 0);
}

TEST_CASE("match_detections: IoU below threshold never matches") {
  const std::vector<EvalBox> truth = {eval_box("tugboat", 0, 0)};
  // Offset unit squares have IoU 1/3 < 0.5.
  const std::vector<EvalBox> pred = {eval_box("tugboat", 0.5, 0, 0.9)};
  const MatchTally t = match_detections(pred, truth, 0.5, 0.5);
  CHECK(t.at("tugboat").tp == 0);
  CHECK(t.at("tugboat").fp == 1);
  CHECK(t.at("tugboat").fn == 1);
  // Lowering the IoU threshold lets the same pair match.
  const MatchTally loose = match_detections(pred, truth, 0.3, 0.5);
  CHECK(loose.at("tugboat").tp == 1);
}

TEST_CASE("match_detections: class labels never cross-match") {
  const std::vector<EvalBox> truth = {eval_box("tugboat", 0, 0)};
  const std::vector<EvalBox> pred = {eval_box("hopper_barge", 0, 0, 0.9)};
  const MatchTally t = match_detections(pred, truth);
  CHECK(t.at("tugboat").fn == 1);
  CHECK(t.at("hopper_barge").fp == 1);
  CHECK(t.at("tugboat").tp == 0);
  CHECK(t.at("hopper_barge").tp == 0);
}

TEST_CASE("match_detections: confidence gate discards low-scoring predictions") {
  const std::vector<EvalBox> truth = {eval_box("tugboat", 0, 0)};
  const std::vector<EvalBox> pred = {eval_box("tugboat", 0, 0, 0.49)};
  const MatchTally t = match_detections(pred, truth, 0.5, 0.5);
  CHECK(t.at("tugboat").tp == 0);
  CHECK(t.at("tugboat").fp == 0);  // discarded, not a false positive
  CHECK(t.at("tugboat").fn == 1);
  // At exactly the threshold the prediction is kept.
  const std::vector<EvalBox> edge = {eval_box("tugboat", 0, 0, 0.5)};
  CHECK(match_detections(edge, truth, 0.5, 0.5).at("tugboat").tp == 1);
}

TEST_CASE("match_detections: one-to-one, greedy by descending IoU") {
  // Two predictions over one truth: only the higher-IoU one may match.
  const std::vector<EvalBox> truth = {eval_box("tugboat", 0, 0)};
  const std::vector<EvalBox> pred = {
      EvalBox{"tugboat", box_at(0.1, 0), 0.9},   // IoU ~ 0.8
      EvalBox{"tugboat", box_at(0.25, 0), 0.9},  // IoU ~ 0.6
  };
  const MatchTally t = match_detections(pred, truth);
  CHECK(t.at("tugboat").tp == 1);
  CHECK(t.at("tugboat").fp == 1);
  CHECK(t.at("tugboat").fn == 0);
}

TEST_CASE("match_detections: tp totals equal a maximum-matching oracle") {
  // Jittered boxes on a grid: every prediction overlaps exactly its own truth
  // above threshold, so greedy and maximum matching must agree; we then also
  // verify the bookkeeping identities.
  std::mt19937_64 gen(1234);
  const auto u = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<EvalBox> truth, pred;
  const char* labels[3] = {"tugboat", "hopper_barge", "crane_barge"};
  for (int i = 0; i < 50; ++i) {
    const double x = 3.0 * (i % 10), y = 3.0 * (i / 10);
    const std::string label = labels[i % 3];
    truth.push_back(EvalBox{label, box_at(x, y), 1.0});
    if (i % 10 != 9) {  // one in ten goes undetected
      pred.push_back(EvalBox{label, box_at(x + 0.1 * u(), y + 0.1 * u()),
                             0.6 + 0.4 * u()});
    }
  }
  // A handful of spurious predictions in empty space.
  for (int i = 0; i < 5; ++i)
    pred.push_back(EvalBox{labels[i % 3], box_at(100.0 + 3.0 * i, 0), 0.9});

  const MatchTally tally = match_detections(pred, truth, 0.5, 0.5);

  // Oracle: maximum bipartite matching per label over the same IoU graph.
  std::int64_t oracle_tp = 0;
  for (const char* label : labels) {
    std::vector<std::size_t> p_idx, t_idx;
    for (std::size_t i = 0; i < pred.size(); ++i)
      if (pred[i].label == label && pred[i].confidence >= 0.5) p_idx.push_back(i);
    for (std::size_t i = 0; i < truth.size(); ++i)
      if (truth[i].label == label) t_idx.push_back(i);
    std::vector<std::vector<int>> adj(p_idx.size());
    for (std::size_t a = 0; a < p_idx.size(); ++a)
      for (std::size_t b = 0; b < t_idx.size(); ++b)
        if (geo::rotated_iou(pred[p_idx[a]].poly, truth[t_idx[b]].poly) >= 0.5)
          adj[a].push_back(static_cast<int>(b));
    oracle_tp += oracle::max_bipartite_matching(adj, static_cast<int>(t_idx.size()));
  }

  std::int64_t got_tp = 0, got_fp = 0, got_fn = 0;
  for (const auto& [label, t] : tally) {
    got_tp += t.tp;
    got_fp += t.fp;
    got_fn += t.fn;
  }
  CHECK(got_tp == oracle_tp);
  // Identities: tp+fp = kept predictions, tp+fn = truths.
  CHECK(got_tp + got_fp == static_cast<std::int64_t>(pred.size()));
  CHECK(got_tp + got_fn == static_cast<std::int64_t>(truth.size()));
}

TEST_CASE("match_detections is invariant to input permutation") {
  std::mt19937_64 gen(555);
  const auto u = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<EvalBox> truth, pred;
  for (int i = 0; i < 30; ++i) {
    const double x = 2.5 * i;
    truth.push_back(EvalBox{"tugboat", box_at(x, 0), 1.0});
    pred.push_back(EvalBox{"tugboat", box_at(x + 0.2 * u(), 0.2 * u()), 0.8});
  }
  const MatchTally base = match_detections(pred, truth);
  std::shuffle(pred.begin(), pred.end(), gen);
  std::shuffle(truth.begin(), truth.end(), gen);
  const MatchTally shuffled = match_detections(pred, truth);
  REQUIRE(base.size() == shuffled.size());
  for (const auto& [label, t] : base) {
    CHECK(shuffled.at(label).tp == t.tp);
    CHECK(shuffled.at(label).fp == t.fp);
    CHECK(shuffled.at(label).fn == t.fn);
  }
}

TEST_CASE("category_report aggregates rows and weights the overall line") {
  MatchTally tally;
  tally["hopper_barge"] = Tally{90, 1, 0};   // p=0.989, r=1
  tally["tugboat"] = Tally{10, 0, 2};        // p=1, r=0.833
  const CategoryReport rep = category_report("vessel", tally);
  CHECK(rep.name == "vessel");
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].label == "hopper_barge");  // sorted by label
  CHECK(rep.rows[1].label == "tugboat");
  CHECK(rep.rows[0].instances == 90);
  CHECK(rep.rows[1].instances == 12);

  // Overall recall = (90*1.0 + 12*0.8333)/102.
  REQUIRE(rep.overall.recall.has_value());
  const double expect_r = (90 * 1.0 + 12 * (10.0 / 12.0)) / 102.0;
  CHECK(*rep.overall.recall == doctest::Approx(expect_r).epsilon(1e-12));
  CHECK(rep.overall.instances == 102);

  const nlohmann::json j = category_to_json(rep);
  CHECK(j.at("overall").at("aggregation") == "instance_weighted_mean");
  CHECK(j.at("classes").size() == 2);
}

TEST_CASE("metric_to_json renders undefined metrics as null") {
  CHECK(metric_to_json(std::nullopt).is_null());
  CHECK(metric_to_json(Metric{0.5}).get<double>() == doctest::Approx(0.5));
}
