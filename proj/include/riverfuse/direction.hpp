// Upstream/downstream/stationary classification of AIS kinematics against a
// river centerline, plus confusion-matrix scoring of predicted directions.
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "riverfuse/core.hpp"

namespace riverfuse::direction {

// Below this speed over ground a vessel is classified stationary.
inline constexpr double kStationaryMaxKn = 0.5;

// Unit tangent (east, north) pointing downstream at the centerline vertex
// nearest to p; interior vertices average their two adjacent segment
// directions. Requires a valid centerline (>= 2 distinct vertices).
std::pair<double, double> downstream_tangent(const Centerline& line,
                                             const geo::GeoPoint& p);

// Classification rule: sog below the stationary threshold wins first; then a
// missing COG makes the sample unclassifiable (nullopt); otherwise the sign
// of the dot product between the COG vector and the downstream tangent
// decides, with the exact-perpendicular case resolving to upstream.
std::optional<DirectionClass> classify_direction(
    const Centerline& line, const geo::GeoPoint& position, double sog_kn,
    std::optional<double> cog_deg, double v_min_kn = kStationaryMaxKn);

// 3x3 confusion over {upstream, downstream, stationary}.
struct ConfusionMatrix {
  // counts[truth][pred], indexed by the order above.
  std::array<std::array<std::int64_t, 3>, 3> counts{};

  std::int64_t total() const;
  std::int64_t correct() const;
  // correct/total over the row of that true class; nullopt when the class
  // never occurs in truth.
  std::optional<double> class_accuracy(DirectionClass truth) const;
  std::optional<double> overall_accuracy() const;
};

// Throws std::invalid_argument on length mismatch or a not_applicable label.
ConfusionMatrix direction_confusion(const std::vector<DirectionClass>& pred,
                                    const std::vector<DirectionClass>& truth);

}  // namespace riverfuse::direction
