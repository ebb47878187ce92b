#include <doctest.h>

#include <cmath>

#include "trifrac/geometry.hpp"

using namespace trifrac;

namespace {

DnbdGeometry spk_geometry() {
  DnbdGeometry g;
  g.radius = 47.0;
  g.notch_top = 37.5;
  g.notch_bottom = 37.5;
  g.notch_width = 1.1;
  g.notch_offset = 0.0;
  g.load_angle_deg = 15.0;
  return g;
}

}  // namespace

TEST_CASE("indicator on the dnbd shape") {
  const DnbdGeometry geom = spk_geometry();
  const ImplicitShape shape = build_dnbd(geom);
  CHECK(indicator(shape, Vec2(0.0, 0.0), 1e-8) == 1.0);          // ligament center
  CHECK(indicator(shape, Vec2(0.0, 100.0), 1e-8) == 1e-8);       // outside the disk
  // midpoint of the top notch centerline
  const Vec2 t = geom.notch_axis();
  const Vec2 inner = (geom.radius - geom.notch_top + geom.notch_width / 2.0) * t;
  const Vec2 outer = (geom.radius + geom.notch_width) * t;
  CHECK(indicator(shape, 0.5 * (inner + outer), 1e-8) == 1e-8);
  CHECK_THROWS(indicator(shape, Vec2(0, 0), 0.0));
}

TEST_CASE("indicator is translation consistent") {
  const Vec2 shift(13.7, -4.2);
  const ImplicitShape a = ImplicitShape::difference_of(
      ImplicitShape::disk(Vec2(1, 2), 5.0),
      ImplicitShape::capsule(Vec2(1, 2), Vec2(7, 2), 0.5));
  const ImplicitShape b = ImplicitShape::difference_of(
      ImplicitShape::disk(Vec2(1, 2) + shift, 5.0),
      ImplicitShape::capsule(Vec2(1, 2) + shift, Vec2(7, 2) + shift, 0.5));
  for (double x = -6.0; x <= 8.0; x += 0.37)
    for (double y = -4.0; y <= 8.0; y += 0.41) {
      const Vec2 q(x, y);
      CHECK(indicator(a, q, 1e-8) == indicator(b, q + shift, 1e-8));
    }
}

TEST_CASE("dnbd construction and ligament") {
  const DnbdGeometry geom = spk_geometry();
  CHECK(geom.ligament() == doctest::Approx(19.0));
  CHECK((geom.top_tip() - geom.bottom_tip()).norm() == doctest::Approx(19.0));
  const ImplicitShape shape = build_dnbd(geom);
  // material resumes just inside the tips, notch just outside
  const Vec2 t = geom.notch_axis();
  CHECK(shape.contains(geom.top_tip() - 0.05 * t));
  CHECK(!shape.contains(geom.top_tip() + 0.05 * t));

  // hand-saw geometry: centerlines offset by 1 mm across the notch line
  DnbdGeometry saw = spk_geometry();
  saw.notch_width = 2.7;
  saw.notch_offset = 1.0;
  const auto segments = build_dnbd(saw).cut_segments();
  REQUIRE(segments.size() == 2);
  const Vec2 m(t.y(), -t.x());
  CHECK(segments[0].a.dot(m) - segments[1].a.dot(m) == doctest::Approx(1.0));
}

TEST_CASE("degenerate notches give a plain disk") {
  DnbdGeometry geom = spk_geometry();
  geom.notch_top = 0.0;
  geom.notch_bottom = 0.0;
  const ImplicitShape disk = build_dnbd(geom);
  for (double r = 0.0; r < 47.0; r += 3.1)
    for (double a = 0.0; a < 6.28; a += 0.7)
      CHECK(disk.contains(r * Vec2(std::cos(a), std::sin(a))));
  CHECK(disk.cut_segments().empty());
}

TEST_CASE("geometry invariants are enforced") {
  DnbdGeometry bad = spk_geometry();
  bad.notch_top = 50.0;
  bad.notch_bottom = 47.0;
  CHECK_THROWS(build_dnbd(bad));
  bad = spk_geometry();
  bad.notch_width = 0.0;
  CHECK_THROWS(build_dnbd(bad));
  bad = spk_geometry();
  bad.radius = -1.0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("partition classifies uncut elements with a single leaf") {
  const ImplicitShape disk = ImplicitShape::disk(Vec2::Zero(), 47.0);
  const auto inside = partition_element(Box2(Vec2(-3, -3), Vec2(3, 3)), disk, 3, 3, 1e-8);
  REQUIRE(inside.size() == 1);
  CHECK(inside[0].kind == CellKind::kPhysical);
  for (const CellPoint& pt : inside[0].points) CHECK(pt.alpha == 1.0);

  const auto outside =
      partition_element(Box2(Vec2(50, 50), Vec2(56, 56)), disk, 3, 3, 1e-8);
  REQUIRE(outside.size() == 1);
  CHECK(outside[0].kind == CellKind::kFictitious);
  for (const CellPoint& pt : outside[0].points) CHECK(pt.alpha == 1e-8);
}

TEST_CASE("leaf weights tile the reference element") {
  const ImplicitShape shape = build_dnbd(spk_geometry());
  for (const Box2& box :
       {Box2(Vec2(44, -3), Vec2(50, 3)), Box2(Vec2(8, 38), Vec2(16, 46)),
        Box2(Vec2(-2, -2), Vec2(2, 2))}) {
    const auto cells = partition_element(box, shape, 3, 4, 1e-8);
    double total = 0.0;
    for (const IntegrationCell& cell : cells)
      for (const CellPoint& pt : cell.points) total += pt.weight;
    CHECK(total == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("cut element integrates the rim segment area") {
  const double radius = 47.0;
  const ImplicitShape disk = ImplicitShape::disk(Vec2::Zero(), radius);
  const Box2 box(Vec2(44, -3), Vec2(50, 3));
  // oracle: area inside the circle, chord integral with Simpson's rule
  double exact = 0.0;
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    const double y = -3.0 + 6.0 * i / n;
    const double chord = std::sqrt(radius * radius - y * y) - 44.0;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    exact += w * chord;
  }
  exact *= 6.0 / n / 3.0;

  const auto cells = partition_element(box, disk, 3, 3, 1e-8);
  CHECK(cells.size() > 1);
  const double jac = 6.0 * 6.0 / 4.0;
  double area = 0.0;
  for (const IntegrationCell& cell : cells)
    for (const CellPoint& pt : cell.points)
      if (pt.alpha == 1.0) area += pt.weight * jac;
  CHECK(area == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("thin notch centerlines always force a cut") {
  // a notch far thinner than any sample spacing still marks the cell cut
  const ImplicitShape shape = ImplicitShape::difference_of(
      ImplicitShape::disk(Vec2::Zero(), 40.0),
      ImplicitShape::capsule(Vec2(0, 5), Vec2(0, 45), 0.005));
  const auto cells = partition_element(Box2(Vec2(-4, 8), Vec2(4, 16)), shape, 0, 2, 1e-8);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].kind == CellKind::kCut);
}

TEST_CASE("measured area converges monotonically on the disk") {
  const ImplicitShape disk = ImplicitShape::disk(Vec2::Zero(), 47.0);
  EmbeddingMesh mesh;
  mesh.origin = Vec2(-47, -47);
  mesh.nx = mesh.ny = 20;
  mesh.hx = mesh.hy = 94.0 / 20;
  mesh.degree = 2;
  const double exact = M_PI * 47.0 * 47.0;
  // Quadrature tolerance: a percent of the cut-leaf band area at the coarser
  // depth (perimeter x leaf size); the indicator is discontinuous there.
  auto band = [&](int depth) {
    return 0.01 * 2.0 * M_PI * 47.0 * mesh.hx / (1 << depth);
  };
  double prev = -1.0;
  int prev_depth = 0;
  for (int depth : {1, 2, 3, 4, 5}) {
    const double err = std::abs(measure_physical_area(disk, mesh, depth) - exact);
    if (prev >= 0.0) CHECK(err <= prev + band(prev_depth));
    prev = err;
    prev_depth = depth;
  }
}

TEST_CASE("measure_physical_area matches analytic areas") {
  EmbeddingMesh mesh;
  mesh.origin = Vec2(-47, -47);
  mesh.nx = mesh.ny = 50;
  mesh.hx = mesh.hy = 94.0 / 50;
  mesh.degree = 3;
  const ImplicitShape disk = ImplicitShape::disk(Vec2::Zero(), 47.0);
  CHECK(measure_physical_area(disk, mesh, 5) ==
        doctest::Approx(M_PI * 47.0 * 47.0).epsilon(0.005));

  // axis-aligned box resolves exactly (no cut cells)
  const ImplicitShape square = ImplicitShape::intersection_of(
      ImplicitShape::intersection_of(ImplicitShape::half_plane(Vec2(0, 0), Vec2(-1, 0)),
                                     ImplicitShape::half_plane(Vec2(0, 0), Vec2(0, -1))),
      ImplicitShape::intersection_of(
          ImplicitShape::half_plane(Vec2(9.4, 9.4), Vec2(1, 0)),
          ImplicitShape::half_plane(Vec2(9.4, 9.4), Vec2(0, 1))));
  EmbeddingMesh unit;
  unit.origin = Vec2(-9.4, -9.4);
  unit.nx = unit.ny = 10;
  unit.hx = unit.hy = 18.8 / 10;
  unit.degree = 2;
  CHECK(measure_physical_area(square, unit, 3) ==
        doctest::Approx(9.4 * 9.4).epsilon(1e-12));

  const DnbdGeometry geom = spk_geometry();
  CHECK(measure_physical_area(build_dnbd(geom), mesh, 4) ==
        doctest::Approx(dnbd_analytic_area(geom)).epsilon(0.01));
}

TEST_CASE("analytic dnbd area matches the frozen pixel-count oracle") {
  CHECK(dnbd_analytic_area(spk_geometry()) == doctest::Approx(6857.5402).epsilon(2e-4));
  DnbdGeometry saw = spk_geometry();
  saw.notch_width = 2.7;
  saw.notch_offset = 1.0;
  CHECK(dnbd_analytic_area(saw) == doctest::Approx(6738.8775).epsilon(2e-4));
}

TEST_CASE("bounding boxes") {
  const ImplicitShape shape = build_dnbd(spk_geometry());
  const Box2 box = shape.bounding_box();
  CHECK(box.min().x() == doctest::Approx(-47.0));
  CHECK(box.max().y() == doctest::Approx(47.0));
  CHECK_THROWS(ImplicitShape::half_plane(Vec2(0, 0), Vec2(1, 0)).bounding_box());
}
