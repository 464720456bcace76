#include "riverfuse/direction.hpp"

#include <cmath>
#include <stdexcept>

namespace riverfuse::direction {

namespace {

constexpr double kPi = 3.14159265358979323846;

int class_index(DirectionClass c) {
  switch (c) {
    case DirectionClass::Upstream: return 0;
    case DirectionClass::Downstream: return 1;
    case DirectionClass::Stationary: return 2;
    case DirectionClass::NotApplicable: break;
  }
  throw std::invalid_argument("direction_confusion: label is not_applicable");
}

}  // namespace

std::pair<double, double> downstream_tangent(const Centerline& line,
                                             const geo::GeoPoint& p) {
  const auto& v = line.vertices;
  if (v.size() < 2)
    throw std::invalid_argument("centerline needs >= 2 vertices");

  // Nearest vertex in the local metric frame anchored at the query point.
  const geo::LocalFrame frame(p);
  std::size_t best = 0;
  double best_d = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto [x, y] = frame.to_local(v[i]);
    const double d = x * x + y * y;
    if (best_d < 0.0 || d < best_d) {
      best_d = d;
      best = i;
    }
  }

  // Average of the normalized adjacent segment directions (one-sided at the
  // endpoints), in meters so latitude scaling does not skew the angle.
  const auto seg_dir = [&](std::size_t a,
                           std::size_t b) -> std::pair<double, double> {
    const auto [ax, ay] = frame.to_local(v[a]);
    const auto [bx, by] = frame.to_local(v[b]);
    const double dx = bx - ax, dy = by - ay;
    const double len = std::hypot(dx, dy);
    if (len == 0.0) return {0.0, 0.0};
    return {dx / len, dy / len};
  };

  double tx = 0.0, ty = 0.0;
  if (best > 0) {
    const auto [dx, dy] = seg_dir(best - 1, best);
    tx += dx;
    ty += dy;
  }
  if (best + 1 < v.size()) {
    const auto [dx, dy] = seg_dir(best, best + 1);
    tx += dx;
    ty += dy;
  }
  const double len = std::hypot(tx, ty);
  if (len == 0.0) return {0.0, 0.0};
  return {tx / len, ty / len};
}

std::optional<DirectionClass> classify_direction(const Centerline& line,
                                                 const geo::GeoPoint& position,
                                                 double sog_kn,
                                                 std::optional<double> cog_deg,
                                                 double v_min_kn) {
  if (sog_kn < v_min_kn) return DirectionClass::Stationary;
  if (!cog_deg) return std::nullopt;

  const auto [tx, ty] = downstream_tangent(line, position);
  // COG is degrees true (clockwise from north): east = sin, north = cos.
  const double rad = *cog_deg * kPi / 180.0;
  const double ce = std::sin(rad);
  const double cn = std::cos(rad);
  const double dot = ce * tx + cn * ty;
  return dot > 0.0 ? DirectionClass::Downstream : DirectionClass::Upstream;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t n = 0;
  for (const auto& row : counts)
    for (const std::int64_t c : row) n += c;
  return n;
}

std::int64_t ConfusionMatrix::correct() const {
  return counts[0][0] + counts[1][1] + counts[2][2];
}

std::optional<double> ConfusionMatrix::class_accuracy(
    DirectionClass truth) const {
  const int i = class_index(truth);
  std::int64_t row = 0;
  for (const std::int64_t c : counts[i]) row += c;
  if (row == 0) return std::nullopt;
  return static_cast<double>(counts[i][i]) / static_cast<double>(row);
}

std::optional<double> ConfusionMatrix::overall_accuracy() const {
  const std::int64_t n = total();
  if (n == 0) return std::nullopt;
  return static_cast<double>(correct()) / static_cast<double>(n);
}

ConfusionMatrix direction_confusion(const std::vector<DirectionClass>& pred,
                                    const std::vector<DirectionClass>& truth) {
  if (pred.size() != truth.size())
    throw std::invalid_argument(
        "direction_confusion: pred and truth lengths differ");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < pred.size(); ++i)
    ++m.counts[class_index(truth[i])][class_index(pred[i])];
  return m;
}

}  // namespace riverfuse::direction
