#include <doctest.h>

#include <cmath>

#include "riverfuse/core.hpp"

using namespace riverfuse;

namespace {

Detection sample_detection() {
  Detection d;
  d.detection_id = "S01-d001";
  d.scene_id = "S01";
  d.klass = ObjectClass::HopperBarge;
  d.box = Obb{5.0, 5.0, 2.0, 4.0, 0.0};
  d.confidence = 0.9;
  d.cover = CoverState::Covered;
  d.op_status = OpStatus::Staged;
  d.direction_pred = DirectionClass::NotApplicable;
  return d;
}

}  // namespace

TEST_CASE("obb corner layout matches the documented example") {
  const Obb box{5.0, 5.0, 2.0, 4.0, 0.0};
  const auto corners = obb_corners(box);
  CHECK(corners[0].first == 4.0);
  CHECK(corners[0].second == 3.0);
  CHECK(corners[1].first == 6.0);
  CHECK(corners[1].second == 3.0);
  CHECK(corners[2].first == 6.0);
  CHECK(corners[2].second == 7.0);
  CHECK(corners[3].first == 4.0);
  CHECK(corners[3].second == 7.0);
}

TEST_CASE("obb corner rotation by pi/2 swaps the box axes") {
  const Obb box{0.0, 0.0, 2.0, 4.0, std::acos(-1.0) / 2.0};
  const auto corners = obb_corners(box);
  // Rotating (-1,-2) by +90 deg in image axes gives (2,-1).
  CHECK(corners[0].first == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(corners[0].second == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(corners[2].first == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(corners[2].second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validate_detection reports exact violation strings") {
  Detection d = sample_detection();
  CHECK(validate_detection(d).empty());

  d.box.width_px = -1.0;
  auto violations = validate_detection(d);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0] == "width must be positive");

  d = sample_detection();
  d.box.height_px = 0.0;
  violations = validate_detection(d);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0] == "height must be positive");

  d = sample_detection();
  d.confidence = 1.5;
  violations = validate_detection(d);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0] == "confidence must be in [0,1]");

  d = sample_detection();
  d.klass = ObjectClass::Tugboat;
  d.cover = CoverState::Covered;
  d.direction_pred = DirectionClass::Upstream;
  violations = validate_detection(d);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0] == "cover must be not_applicable unless klass is hopper_barge");

  d = sample_detection();
  d.klass = ObjectClass::Dock;
  d.cover = CoverState::NotApplicable;
  d.op_status = OpStatus::InMotion;
  violations = validate_detection(d);
  bool found_status = false;
  for (const auto& v : violations)
    if (v == "infrastructure class must have op_status=not_applicable") found_status = true;
  CHECK(found_status);

  d.op_status = OpStatus::NotApplicable;
  d.direction_pred = DirectionClass::Downstream;
  violations = validate_detection(d);
  bool found_dir = false;
  for (const auto& v : violations)
    if (v == "infrastructure class must have direction_pred=not_applicable") found_dir = true;
  CHECK(found_dir);
}

TEST_CASE("enum round-trips and the taxonomy is closed") {
  for (const ObjectClass k :
       {ObjectClass::HopperBarge, ObjectClass::CraneBarge, ObjectClass::Tugboat,
        ObjectClass::BulkCarrier, ObjectClass::CargoShip, ObjectClass::Dock,
        ObjectClass::Bridge, ObjectClass::StagingArea}) {
    CHECK(object_class_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(object_class_from_string("submarine"), FormatError);

  for (const CoverState s :
       {CoverState::Covered, CoverState::Uncovered, CoverState::NotApplicable}) {
    CHECK(cover_state_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS(cover_state_from_string("open"), FormatError);

  for (const OpStatus s : {OpStatus::Staged, OpStatus::InMotion, OpStatus::Moored,
                           OpStatus::NotApplicable}) {
    CHECK(op_status_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS(op_status_from_string("parked"), FormatError);

  for (const DirectionClass c :
       {DirectionClass::Upstream, DirectionClass::Downstream,
        DirectionClass::Stationary, DirectionClass::NotApplicable}) {
    CHECK(direction_class_from_string(to_string(c)) == c);
  }
  CHECK_THROWS_AS(direction_class_from_string("sideways"), FormatError);
}

TEST_CASE("class predicates") {
  CHECK(is_self_propelled(ObjectClass::Tugboat));
  CHECK(is_self_propelled(ObjectClass::BulkCarrier));
  CHECK(is_self_propelled(ObjectClass::CargoShip));
  CHECK_FALSE(is_self_propelled(ObjectClass::HopperBarge));
  CHECK_FALSE(is_self_propelled(ObjectClass::Dock));

  CHECK(is_infrastructure(ObjectClass::Dock));
  CHECK(is_infrastructure(ObjectClass::Bridge));
  CHECK(is_infrastructure(ObjectClass::StagingArea));
  CHECK_FALSE(is_infrastructure(ObjectClass::CraneBarge));
}

TEST_CASE("ISO-8601 parsing and formatting") {
  CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601("2024-02-01T12:00:00Z") == 1706788800);
  CHECK(format_iso8601(1706788800) == "2024-02-01T12:00:00Z");

  // Round-trip across a spread of instants, including leap days.
  for (const Timestamp t : {Timestamp{0}, Timestamp{951827696}, Timestamp{1582934400},
                            Timestamp{1706788800}, Timestamp{4102444799}}) {
    CHECK(parse_iso8601(format_iso8601(t)) == t);
  }

  // Lenient form: space separator, optional Z, fractional seconds truncated.
  CHECK(parse_timestamp_lenient("2024-02-01 12:00:00") == 1706788800);
  CHECK(parse_timestamp_lenient("2024-02-01T12:00:00.750Z") == 1706788800);

  CHECK_THROWS_AS(parse_iso8601("not-a-date"), FormatError);
  CHECK_THROWS_AS(parse_iso8601("2024-13-01T00:00:00Z"), FormatError);
  CHECK_THROWS_AS(parse_iso8601("2024-02-30T00:00:00Z"), FormatError);
  CHECK_THROWS_AS(parse_timestamp_lenient("2024-02-01T25:00:00"), FormatError);
}

TEST_CASE("scene validation") {
  SceneMeta scene;
  scene.scene_id = "S01";
  scene.acquired_at = 1706788800;
  scene.width_px = 100;
  scene.height_px = 100;
  scene.geotransform = geo::Geotransform{-91.0, 1e-4, 0.0, 30.0, 0.0, -1e-4};
  scene.footprint = footprint_from_geotransform(scene.geotransform, 100, 100);
  CHECK(validate_scene(scene).empty());

  scene.width_px = 0;
  CHECK_FALSE(validate_scene(scene).empty());
  scene.width_px = 100;

  scene.geotransform.dx_col = 0.0;
  scene.geotransform.dy_col = 0.0;
  CHECK_FALSE(validate_scene(scene).empty());
}

TEST_CASE("obb_to_polygon yields a CCW geo ring under north-up transforms") {
  SceneMeta scene;
  scene.scene_id = "S01";
  scene.acquired_at = 0;
  scene.width_px = 1000;
  scene.height_px = 1000;
  // North-up raster: row increases southwards (negative determinant).
  scene.geotransform = geo::Geotransform{-91.0, 2.7e-5, 0.0, 30.0, 0.0, -2.7e-5};
  scene.footprint = footprint_from_geotransform(scene.geotransform, 1000, 1000);

  const Obb box{500.0, 500.0, 20.0, 60.0, 0.3};
  const geo::GeoPolygon poly = obb_to_polygon(scene, box);
  REQUIRE(poly.ring.size() == 4);
  CHECK(geo::signed_area(poly) > 0.0);
  CHECK(geo::is_convex_ccw(poly));
}
