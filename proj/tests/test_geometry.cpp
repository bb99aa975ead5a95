#include <doctest.h>

#include "wavechannel/geometry.hpp"

#include <cmath>
#include <stdexcept>

using namespace wavechannel;

namespace {

const Grid kGrid = build_grid(128, 64, 0.5, 0.5);  // 64 x 32 box
const ChannelGeometry kGeom{20.0, 10.0, 4.0, 16.0};

int count(const MaskField& m) { return static_cast<int>(m.values().count()); }

}  // namespace

TEST_CASE("hard-wall mask covers the slab minus the opening") {
  const MaskField m = wall_mask(kGrid, kGeom);
  // columns x = 20.0 .. 30.0 (21), open rows y = 14.5 .. 17.5 (7)
  CHECK(count(m) == 21 * (64 - 7));
  CHECK(m(40, 0));
  CHECK(m(60, 63));
  CHECK_FALSE(m(39, 0));
  CHECK_FALSE(m(61, 0));
  CHECK_FALSE(m(50, 32));  // centre line
  CHECK(m(50, 28));        // y = 14 sits on the wall surface
  CHECK_FALSE(m(50, 29));
  for (int j = 0; j < kGrid.ny; ++j)
    for (int i = 0; i < kGrid.nx; ++i) CHECK(m(i, j) == is_material(kGrid, kGeom, i, j));
}

TEST_CASE("zero width closes the channel") {
  const ChannelGeometry closed{20.0, 10.0, 0.0, 16.0};
  CHECK(count(wall_mask(kGrid, closed)) == 21 * 64);
  const FaceSegments f = face_segments(kGrid, closed);
  CHECK(f.entry.size() == 64);
  CHECK(f.exit.size() == 64);
}

TEST_CASE("face segments sit on the slab faces with outward signs") {
  const FaceSegments f = face_segments(kGrid, kGeom);
  REQUIRE(f.entry.size() == 57);
  REQUIRE(f.exit.size() == 57);
  for (const FacePoint& p : f.entry) {
    CHECK(p.i == 40);
    CHECK(p.sign == -1);
    CHECK(is_material(kGrid, kGeom, p.i, p.j));
    CHECK_FALSE(is_material(kGrid, kGeom, p.i + p.sign, p.j));
  }
  for (const FacePoint& p : f.exit) {
    CHECK(p.i == 60);
    CHECK(p.sign == 1);
    CHECK_FALSE(is_material(kGrid, kGeom, p.i + p.sign, p.j));
  }
}

TEST_CASE("signed depth") {
  CHECK(signed_depth(kGeom, 25.0, 2.0) == doctest::Approx(5.0));    // centre of slab, far from opening
  CHECK(signed_depth(kGeom, 25.0, 12.0) == doctest::Approx(2.0));   // 2 below the lower channel wall
  CHECK(signed_depth(kGeom, 25.0, 16.0) == doctest::Approx(-2.0));  // channel centre
  CHECK(signed_depth(kGeom, 17.0, 2.0) == doctest::Approx(-3.0));
  // in front of the opening: nearest material is a corner, (20, 14) or (20, 18)
  CHECK(signed_depth(kGeom, 17.0, 16.0) == doctest::Approx(-std::hypot(3.0, 2.0)));
  CHECK(signed_depth(kGeom, 17.0, 18.0) == doctest::Approx(-3.0));
}

TEST_CASE("finite step is V0 on material and zero elsewhere") {
  const RealField v = build_potential(kGrid, kGeom, FiniteStep{20.0});
  const MaskField m = wall_mask(kGrid, kGeom);
  for (int j = 0; j < kGrid.ny; ++j)
    for (int i = 0; i < kGrid.nx; ++i) CHECK(v(i, j) == (m(i, j) ? 20.0 : 0.0));
  CHECK(build_potential(kGrid, kGeom, HardWall{}).values().abs().maxCoeff() == 0.0);
}

TEST_CASE("smoothed ramp is centred on the boundary") {
  const double w = 2.0;
  const RealField v = build_potential(kGrid, kGeom, Smoothed{20.0, w});
  const RealField step = build_potential(kGrid, kGeom, FiniteStep{20.0});
  CHECK(v(40, 0) == doctest::Approx(10.0));  // on the entry face
  CHECK(v(42, 0) == doctest::Approx(20.0));  // depth w/2
  CHECK(v(38, 0) == doctest::Approx(0.0));   // depth -w/2
  CHECK(v(41, 0) == doctest::Approx(20.0 * 0.84375));  // smoothstep(3/4)
  for (int j = 0; j < kGrid.ny; ++j)
    for (int i = 0; i < kGrid.nx; ++i) {
      const double d = signed_depth(kGeom, kGrid.x(i), kGrid.y(j));
      if (std::abs(d) > 0.5 * w) CHECK(v(i, j) == step(i, j));
      if (j > 0) CHECK(v(i, j) == v(i, 64 - j));  // mirror about y = 16 (j = 32)
    }
  CHECK(build_barrier(kGrid, kGeom, Smoothed{20.0, w}).mask.values().count() == 0);
}

TEST_CASE("geometry and model validation") {
  CHECK_THROWS_AS(wall_mask(kGrid, {20.0, 0.0, 4.0, 16.0}), std::invalid_argument);
  CHECK_THROWS_AS(wall_mask(kGrid, {20.0, 10.0, -1.0, 16.0}), std::invalid_argument);
  CHECK_THROWS_AS(wall_mask(kGrid, {60.0, 10.0, 4.0, 16.0}), std::invalid_argument);
  CHECK_THROWS_AS(wall_mask(kGrid, {20.0, 10.0, 4.0, 40.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_potential(kGrid, kGeom, FiniteStep{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_potential(kGrid, kGeom, Smoothed{20.0, 0.5}), std::invalid_argument);
  CHECK_NOTHROW(build_potential(kGrid, kGeom, Smoothed{20.0, 1.0}));
  CHECK(model_name(Smoothed{1.0, 1.0}) == "smooth");
  CHECK(model_name(FiniteStep{1.0}) == "step");
  CHECK(is_hard_wall(HardWall{}));
}
