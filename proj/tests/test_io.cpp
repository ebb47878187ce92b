#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/vtk_reader.hpp"
#include "trifrac/solver.hpp"
#include "trifrac/vtk.hpp"

using namespace trifrac;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("trifrac_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("number formatting always carries a decimal marker") {
  CHECK(format_double(0.0) == "0.0");
  CHECK(format_double(2.5) == "2.5");
  CHECK(format_double(21.0) == "21.0");
  CHECK(format_double(1e-7) == "1e-07");
  CHECK(format_double(-3.0) == "-3.0");
}

TEST_CASE("load curve writing") {
  TempDir dir;
  StepRecord zero;
  zero.step = 0;
  zero.displacement = 0.0;
  zero.force = 0.0;
  zero.iterations = 1;
  zero.residual = 0.0;
  write_load_curve({zero}, dir.file("curve.csv"));
  const std::string text = slurp(dir.file("curve.csv"));
  CHECK(text == "step,displacement_mm,force_kN,staggered_iters,residual\n"
                "0,0.0,0.0,1,0.0\n");

  StepRecord next = zero;
  next.step = 1;
  next.displacement = 5e-3;
  next.force = 1.25;
  next.iterations = 4;
  next.residual = 3e-6;
  write_load_curve({zero, next}, dir.file("curve2.csv"));
  const std::string text2 = slurp(dir.file("curve2.csv"));
  CHECK(text2.find("1,0.005,1.25,4,3e-06\n") != std::string::npos);

  // out-of-order series violate an invariant
  StepRecord bad = next;
  bad.step = 2;
  bad.displacement = 1e-3;
  CHECK_THROWS_AS(write_load_curve({zero, next, bad}, dir.file("bad.csv")),
                  std::logic_error);
  CHECK_THROWS(write_load_curve({}, dir.file("empty.csv")));

  // byte stability
  write_load_curve({zero, next}, dir.file("curve3.csv"));
  CHECK(slurp(dir.file("curve3.csv")) == text2);
}

TEST_CASE("snapshot round trip through a vtk reader") {
  DnbdGeometry geom;
  EmbeddingMesh mesh;
  mesh.origin = Vec2(-47, -47);
  mesh.nx = mesh.ny = 6;
  mesh.hx = mesh.hy = 94.0 / 6;
  mesh.degree = 1;
  FcmOptions fcm;
  fcm.depth = 1;
  AssemblyContext ctx(mesh, build_dnbd(geom), fcm);
  SimulationState state = SimulationState::initial(ctx);

  TempDir dir;
  write_snapshot(ctx, state, dir.file("undamaged.vtk"), 2);
  const vtk_support::VtkFile undamaged = vtk_support::read_vtk(dir.file("undamaged.vtk"));
  CHECK(undamaged.nx == 13);
  CHECK(undamaged.ny == 13);
  CHECK(undamaged.nz == 1);
  REQUIRE(undamaged.point_scalars.count("s_I"));
  REQUIRE(undamaged.point_scalars.count("s_II"));
  REQUIRE(undamaged.point_scalars.count("s_viz"));
  REQUIRE(undamaged.point_vectors.count("u"));
  REQUIRE(undamaged.cell_scalars.count("alpha"));
  CHECK(undamaged.point_scalars.at("s_I").size() == 13 * 13);
  CHECK(undamaged.cell_scalars.at("alpha").size() == 12 * 12);
  for (double v : undamaged.point_scalars.at("s_viz")) CHECK(v == 0.0);
  for (double v : undamaged.point_scalars.at("s_I")) CHECK(v == 1.0);
  for (double v : undamaged.cell_scalars.at("alpha"))
    CHECK((v == 1.0 || v == 1e-8));

  // fully tensile-cracked: s_I = 0, s_II = 1 -> s_viz = +1
  state.s1.setZero();
  write_snapshot(ctx, state, dir.file("tensile.vtk"), 2);
  const vtk_support::VtkFile tensile = vtk_support::read_vtk(dir.file("tensile.vtk"));
  for (double v : tensile.point_scalars.at("s_viz")) CHECK(v == 1.0);

  // shear crack: s_II = 0, s_I = 1 -> s_viz = -1
  state.s1.setOnes();
  state.s2.setZero();
  write_snapshot(ctx, state, dir.file("shear.vtk"), 2);
  const vtk_support::VtkFile shear = vtk_support::read_vtk(dir.file("shear.vtk"));
  for (double v : shear.point_scalars.at("s_viz")) CHECK(v == -1.0);

  // byte stability of repeated writes
  write_snapshot(ctx, state, dir.file("shear2.vtk"), 2);
  CHECK(slurp(dir.file("shear2.vtk")) == slurp(dir.file("shear.vtk")));
}

TEST_CASE("snapshots clamp overshooting fields") {
  EmbeddingMesh mesh;
  mesh.origin = Vec2(0, 0);
  mesh.nx = mesh.ny = 2;
  mesh.hx = mesh.hy = 1.0;
  mesh.degree = 1;
  AssemblyContext ctx(mesh, ImplicitShape::disk(Vec2(1, 1), 10.0), FcmOptions{});
  SimulationState state = SimulationState::initial(ctx);
  state.s1.setConstant(1.04);
  state.s2.setConstant(-0.02);
  TempDir dir;
  write_snapshot(ctx, state, dir.file("clamped.vtk"), 1);
  const vtk_support::VtkFile file = vtk_support::read_vtk(dir.file("clamped.vtk"));
  for (double v : file.point_scalars.at("s_I")) CHECK(v == 1.0);
  for (double v : file.point_scalars.at("s_II")) CHECK(v == 0.0);
}
