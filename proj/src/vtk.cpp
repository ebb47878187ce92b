#include "trifrac/vtk.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace trifrac {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void write_load_curve(const std::vector<StepRecord>& series,
                      const std::string& path) {
  if (series.empty()) throw std::invalid_argument("load curve: empty series");
  std::string out = "step,displacement_mm,force_kN,staggered_iters,residual\n";
  double prev = -1.0;
  for (const StepRecord& rec : series) {
    if (rec.displacement <= prev && rec.step > 0)
      throw std::logic_error("load curve: series not ordered by displacement");
    prev = rec.displacement;
    out += std::to_string(rec.step) + "," + format_double(rec.displacement) + "," +
           format_double(rec.force) + "," + std::to_string(rec.iterations) + "," +
           format_double(rec.residual) + "\n";
  }
  write_file_atomic(path, out);
}

void write_snapshot(const AssemblyContext& ctx, const SimulationState& state,
                    const std::string& path, int samples_per_element) {
  if (samples_per_element < 1)
    throw std::invalid_argument("snapshot: samples_per_element must be >= 1");
  const EmbeddingMesh& mesh = ctx.mesh();
  const int nx = mesh.nx * samples_per_element + 1;
  const int ny = mesh.ny * samples_per_element + 1;
  const double dx = mesh.hx / samples_per_element;
  const double dy = mesh.hy / samples_per_element;

  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
  std::vector<double> ux(nx * ny), uy(nx * ny), s1(nx * ny), s2(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Vec2 x = mesh.origin + Vec2(i * dx, j * dy);
      const int k = j * nx + i;
      const Vec2 u = ctx.eval_vector(state.u, x);
      ux[k] = u.x();
      uy[k] = u.y();
      s1[k] = clamp01(ctx.eval_scalar(state.s1, x));
      s2[k] = clamp01(ctx.eval_scalar(state.s2, x));
    }

  std::string out;
  out.reserve(static_cast<size_t>(nx) * ny * 60);
  out += "# vtk DataFile Version 3.0\n";
  out += "trifrac fields\n";
  out += "ASCII\n";
  out += "DATASET STRUCTURED_POINTS\n";
  out += "DIMENSIONS " + std::to_string(nx) + " " + std::to_string(ny) + " 1\n";
  out += "ORIGIN " + format_double(mesh.origin.x()) + " " +
         format_double(mesh.origin.y()) + " 0.0\n";
  out += "SPACING " + format_double(dx) + " " + format_double(dy) + " 1.0\n";
  out += "POINT_DATA " + std::to_string(nx * ny) + "\n";
  out += "VECTORS u double\n";
  for (int k = 0; k < nx * ny; ++k)
    out += format_double(ux[k]) + " " + format_double(uy[k]) + " 0.0\n";
  auto scalar_block = [&](const char* name, auto&& value) {
    out += std::string("SCALARS ") + name + " double 1\n";
    out += "LOOKUP_TABLE default\n";
    for (int k = 0; k < nx * ny; ++k) out += format_double(value(k)) + "\n";
  };
  scalar_block("s_I", [&](int k) { return s1[k]; });
  scalar_block("s_II", [&](int k) { return s2[k]; });
  scalar_block("s_viz", [&](int k) { return s2[k] - s1[k]; });
  out += "CELL_DATA " + std::to_string((nx - 1) * (ny - 1)) + "\n";
  out += "SCALARS alpha double 1\n";
  out += "LOOKUP_TABLE default\n";
  const double alpha_fict = ctx.options().alpha_fict;
  for (int j = 0; j < ny - 1; ++j)
    for (int i = 0; i < nx - 1; ++i) {
      const Vec2 x = mesh.origin + Vec2((i + 0.5) * dx, (j + 0.5) * dy);
      out += format_double(indicator(ctx.shape(), x, alpha_fict)) + "\n";
    }
  write_file_atomic(path, out);
}

}  // namespace trifrac
