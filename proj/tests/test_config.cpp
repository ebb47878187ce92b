#include <doctest.h>

#include <fstream>
#include <sstream>

#include "trifrac/config.hpp"

using namespace trifrac;

namespace {
const std::string kDataDir = std::string(TRIFRAC_SOURCE_DIR) + "/data";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("shipped spk config carries the published parameters") {
  const SimulationConfig config = SimulationConfig::load(kDataDir + "/dnbd_spk.cfg");
  CHECK(config.integer("mesh.nx") == 25);
  CHECK(config.integer("mesh.ny") == 25);
  CHECK(config.integer("mesh.p") == 3);
  CHECK(config.number("solver.tolerance") == 1e-5);
  CHECK(config.number("solver.beta") == 1e6);
  CHECK(config.number("solver.u_init_mm") == 5e-3);
  CHECK(config.number("solver.u_min_mm") == 5e-4);
  CHECK(config.number("geometry.load_angle_deg") == 15.0);
  CHECK(config.number("geometry.radius_mm") == 47.0);
  CHECK(config.number("geometry.notch_width_mm") == 1.1);
  const MaterialCard card = config.make_material();
  CHECK(card.youngs == 45.8);
  CHECK(card.gc2 == 4.98e-4);
  CHECK(card.l01 == 0.259);
  CHECK(card.l02 == 0.682);
  const EmbeddingMesh mesh = config.make_mesh();
  CHECK(mesh.nx == 25);
  CHECK(mesh.hx == doctest::Approx(94.0 / 25));
}

TEST_CASE("schema violations carry the key path") {
  CHECK_THROWS_AS(SimulationConfig::parse(""), SchemaError);
  try {
    SimulationConfig::parse("");
  } catch (const SchemaError& e) {
    CHECK(e.key == "geometry.kind");
  }

  CHECK_THROWS_AS(SimulationConfig::parse("[geometry]\nkind = dnbd\n[mesh]\np = 9\n"),
                  SchemaError);
  try {
    SimulationConfig::parse("[geometry]\nkind = dnbd\n[mesh]\np = 9\n");
  } catch (const SchemaError& e) {
    CHECK(e.key == "mesh.p");
  }

  CHECK_THROWS_AS(SimulationConfig::parse("[geometry]\nkind = dnbd\nweird = 1\n"),
                  SchemaError);
  CHECK_THROWS_AS(
      SimulationConfig::parse("[geometry]\nkind = dnbd\nkind = dnbd\n"),
      SchemaError);
  CHECK_THROWS_AS(SimulationConfig::parse("[geometry]\nkind = dnbd\n[mesh]\nnx = x\n"),
                  SchemaError);
  // geometry invariant violations surface as schema errors
  CHECK_THROWS_AS(SimulationConfig::parse("[geometry]\nkind = dnbd\n"
                                          "notch_top_mm = 50\nnotch_bottom_mm = 47\n"),
                  SchemaError);
}

TEST_CASE("missing material data is rejected without a preset") {
  CHECK_THROWS_AS(SimulationConfig::parse("[geometry]\nkind = dnbd\n"), SchemaError);
  // with a preset it parses
  const SimulationConfig ok =
      SimulationConfig::parse("[geometry]\nkind = dnbd\n[material]\npreset = pfd\n");
  CHECK(ok.make_material().youngs == 52.5);
}

TEST_CASE("serialize-parse round trip is stable") {
  const SimulationConfig config = SimulationConfig::load(kDataDir + "/dnbd_spk.cfg");
  const std::string normal = config.serialize();
  const SimulationConfig again = SimulationConfig::parse(normal);
  CHECK(config == again);
  CHECK(again.serialize() == normal);
  CHECK(config.hash() == again.hash());
}

TEST_CASE("defaults are filled at parse time") {
  const SimulationConfig config =
      SimulationConfig::parse("[geometry]\nkind = dnbd\n[material]\npreset = spk\n");
  CHECK(config.number("solver.alpha_fict") == 1e-8);
  CHECK(config.integer("solver.max_staggered") == 500);
  CHECK(config.text("solver.on_nonconvergence") == "warn");
  CHECK(config.text("solver.step_error_source") == "final_residual");
  CHECK(config.integer("mesh.quad_depth") == 3);
  CHECK(config.boolean("output.write_curve"));
}

TEST_CASE("preset values can be overridden per key") {
  const SimulationConfig config = SimulationConfig::parse(
      "[geometry]\nkind = dnbd\n[material]\npreset = pfd\ngc_ii_kn_mm = 1.7653e-4\n"
      "l0_ii_mm = 0.3814\n");
  const MaterialCard card = config.make_material();
  CHECK(card.youngs == 52.5);
  CHECK(card.gc2 == 1.7653e-4);
  CHECK(card.l02 == 0.3814);
}

TEST_CASE("csg geometries parse and build") {
  const SimulationConfig config = SimulationConfig::parse(
      "[geometry]\nkind = csg\n"
      "csg = difference(disk(0,0,47), capsule(0,10,0,50,0.55))\n"
      "[material]\npreset = spk\n");
  const ImplicitShape shape = config.make_shape();
  CHECK(shape.contains(Vec2(20, 0)));
  CHECK(!shape.contains(Vec2(0, 30)));
  // a run needs arcs, which only the dnbd geometry defines
  CHECK_THROWS_AS(config.make_setup(), SchemaError);

  CHECK_THROWS_AS(SimulationConfig::parse("[geometry]\nkind = csg\ncsg = blob(1)\n"
                                          "[material]\npreset = spk\n"),
                  SchemaError);
  CHECK_THROWS_AS(SimulationConfig::parse("[geometry]\nkind = csg\n"
                                          "[material]\npreset = spk\n"),
                  SchemaError);
}

TEST_CASE("dotted keys work without section headers") {
  const SimulationConfig config = SimulationConfig::parse(
      "geometry.kind = dnbd\nmaterial.preset = spk\nmesh.refine = 2\n");
  CHECK(config.make_mesh().nx == 50);
}

TEST_CASE("setup wires the table-3 defaults") {
  const SimulationConfig config = SimulationConfig::load(kDataDir + "/dnbd_spk.cfg");
  const SimulationSetup setup = config.make_setup();
  CHECK(setup.stagger.tolerance == 1e-5);
  CHECK(setup.stepping.kappa == 1.1);
  CHECK(setup.thickness == 20.0);
  REQUIRE(setup.arcs.size() == 2);
  CHECK(setup.arcs[0].load_direction.y() == -1.0);
  CHECK(setup.arcs[0].fix_y);
  CHECK(!setup.arcs[0].fix_x);
  CHECK(setup.arcs[1].fix_x);
  CHECK(setup.arcs[1].fix_y);
  CHECK(setup.arcs[0].arc_length == 10.0);
  CHECK(setup.arcs[0].beta == 1e6);
}

TEST_CASE("config echo matches the normal form") {
  const std::string raw = slurp(kDataDir + "/dnbd_pfd.cfg");
  const SimulationConfig config = SimulationConfig::parse(raw);
  // the echo is the normal form, not the raw bytes
  const SimulationConfig echoed = SimulationConfig::parse(config.serialize());
  CHECK(echoed == config);
}
