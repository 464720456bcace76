#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "riverfuse/direction.hpp"

using namespace riverfuse;
using namespace riverfuse::direction;

namespace {

// A straight reach flowing due south: first vertex is the upstream end.
Centerline south_line() {
  Centerline line;
  for (int i = 0; i <= 10; ++i) {
    line.vertices.push_back({-91.0, 30.5 - 0.01 * i});
  }
  return line;
}

Centerline reversed(const Centerline& line) {
  Centerline out = line;
  std::reverse(out.vertices.begin(), out.vertices.end());
  return out;
}

}  // namespace

TEST_CASE("downstream tangent of a south-flowing line points south") {
  const Centerline line = south_line();
  const auto [east, north] = downstream_tangent(line, {-91.0, 30.45});
  CHECK(east == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(north == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::hypot(east, north) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classification against a south-flowing reach") {
  const Centerline line = south_line();
  const geo::GeoPoint p{-91.0, 30.45};

  CHECK(classify_direction(line, p, 5.0, 180.0) == DirectionClass::Downstream);
  CHECK(classify_direction(line, p, 5.0, 0.0) == DirectionClass::Upstream);
  CHECK(classify_direction(line, p, 5.0, 135.0) == DirectionClass::Downstream);
  CHECK(classify_direction(line, p, 5.0, 315.0) == DirectionClass::Upstream);
}

TEST_CASE("slow vessels are stationary before COG is even considered") {
  const Centerline line = south_line();
  const geo::GeoPoint p{-91.0, 30.45};
  CHECK(classify_direction(line, p, 0.2, 180.0) == DirectionClass::Stationary);
  CHECK(classify_direction(line, p, 0.49, std::nullopt) ==
        DirectionClass::Stationary);
  // The threshold itself is not stationary.
  CHECK(classify_direction(line, p, 0.5, 180.0) == DirectionClass::Downstream);
  // Custom threshold.
  CHECK(classify_direction(line, p, 0.8, 180.0, 1.0) ==
        DirectionClass::Stationary);
}

TEST_CASE("missing COG on a moving vessel is unclassifiable") {
  const Centerline line = south_line();
  CHECK_FALSE(classify_direction(line, {-91.0, 30.45}, 5.0, std::nullopt)
                  .has_value());
}

TEST_CASE("exact perpendicular course resolves to upstream") {
  // East-flowing reach (tangent exactly (1,0) in metres) and a due-north
  // course (COG 0, whose vector is exactly (0,1)): the projection onto the
  // tangent is exactly zero and the tie must deterministically break upstream.
  Centerline east_line;
  for (int i = 0; i <= 5; ++i) east_line.vertices.push_back({-91.0 + 0.01 * i, 30.3});
  const geo::GeoPoint p{-90.975, 30.3};
  CHECK(classify_direction(east_line, p, 5.0, 0.0) == DirectionClass::Upstream);
  // Sanity around the tie: slightly with/against the flow flips cleanly.
  CHECK(classify_direction(east_line, p, 5.0, 45.0) == DirectionClass::Downstream);
  CHECK(classify_direction(east_line, p, 5.0, 315.0) == DirectionClass::Upstream);
}

TEST_CASE("reversing the centerline flips every moving classification") {
  const Centerline line = south_line();
  const Centerline flipped = reversed(line);
  const geo::GeoPoint p{-91.003, 30.42};
  for (double cog = 5.0; cog < 360.0; cog += 17.0) {
    const auto a = classify_direction(line, p, 4.0, cog);
    const auto b = classify_direction(flipped, p, 4.0, cog);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    if (*a == DirectionClass::Upstream) CHECK(*b == DirectionClass::Downstream);
    if (*a == DirectionClass::Downstream) CHECK(*b == DirectionClass::Upstream);
  }
  // Stationary is invariant under reversal.
  CHECK(classify_direction(flipped, p, 0.1, 90.0) == DirectionClass::Stationary);
}

TEST_CASE("classification depends on the local tangent, not global position") {
  // An L-shaped river: flows south, then turns east.
  Centerline line;
  line.vertices.push_back({-91.0, 30.5});
  line.vertices.push_back({-91.0, 30.3});
  line.vertices.push_back({-90.7, 30.3});
  // Near the southern leg, heading south = downstream.
  CHECK(classify_direction(line, {-91.0, 30.45}, 5.0, 180.0) ==
        DirectionClass::Downstream);
  // Near the eastern leg, heading east = downstream, south is now upstream-ish
  // only through the tangent; heading west must be upstream.
  CHECK(classify_direction(line, {-90.75, 30.3}, 5.0, 90.0) ==
        DirectionClass::Downstream);
  CHECK(classify_direction(line, {-90.75, 30.3}, 5.0, 270.0) ==
        DirectionClass::Upstream);
}

TEST_CASE("confusion matrix: perfect predictions") {
  const std::vector<DirectionClass> truth = {
      DirectionClass::Upstream, DirectionClass::Upstream,
      DirectionClass::Downstream, DirectionClass::Stationary};
  const ConfusionMatrix m = direction_confusion(truth, truth);
  CHECK(m.total() == 4);
  CHECK(m.correct() == 4);
  CHECK(m.overall_accuracy() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.class_accuracy(DirectionClass::Upstream) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("confusion matrix: seven of eight downstream calls correct") {
  std::vector<DirectionClass> truth(8, DirectionClass::Downstream);
  std::vector<DirectionClass> pred(8, DirectionClass::Downstream);
  pred[3] = DirectionClass::Upstream;
  const ConfusionMatrix m = direction_confusion(pred, truth);
  const auto acc = m.class_accuracy(DirectionClass::Downstream);
  REQUIRE(acc.has_value());
  CHECK(*acc == doctest::Approx(0.875).epsilon(1e-15));
  CHECK(m.counts[1][1] == 7);
  CHECK(m.counts[1][0] == 1);
  // Upstream never occurs in truth: accuracy undefined, not zero.
  CHECK_FALSE(m.class_accuracy(DirectionClass::Upstream).has_value());
}

TEST_CASE("confusion matrix entries always sum to the sample count") {
  std::vector<DirectionClass> truth, pred;
  const DirectionClass classes[3] = {DirectionClass::Upstream,
                                     DirectionClass::Downstream,
                                     DirectionClass::Stationary};
  std::mt19937_64 gen(11);
  for (int i = 0; i < 500; ++i) {
    truth.push_back(classes[gen() % 3]);
    pred.push_back(classes[gen() % 3]);
  }
  const ConfusionMatrix m = direction_confusion(pred, truth);
  CHECK(m.total() == 500);
  std::int64_t sum = 0, diag = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      sum += m.counts[r][c];
      if (r == c) diag += m.counts[r][c];
    }
  CHECK(sum == 500);
  CHECK(m.correct() == diag);
}

TEST_CASE("confusion matrix rejects malformed input") {
  CHECK_THROWS_AS(direction_confusion({DirectionClass::Upstream}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(direction_confusion({DirectionClass::NotApplicable},
                                      {DirectionClass::Upstream}),
                  std::invalid_argument);
  CHECK_THROWS_AS(direction_confusion({DirectionClass::Upstream},
                                      {DirectionClass::NotApplicable}),
                  std::invalid_argument);
  // Empty inputs are fine; every accuracy is undefined.
  const ConfusionMatrix m = direction_confusion({}, {});
  CHECK(m.total() == 0);
  CHECK_FALSE(m.overall_accuracy().has_value());
}
