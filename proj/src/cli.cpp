#include "trifrac/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "trifrac/calibration.hpp"
#include "trifrac/config.hpp"
#include "trifrac/crack_metrics.hpp"
#include "trifrac/solver.hpp"
#include "trifrac/vtk.hpp"

namespace trifrac {

namespace {

namespace fs = std::filesystem;

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_provenance(const SimulationConfig& config, const std::string& dir) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  std::string out;
  out += std::string("trifrac ") + kVersion + "\n";
  out += "config_hash " + hash_hex(config.hash()) + "\n";
  out += std::string(stamp) + "\n";
  write_file_atomic(dir + "/provenance.txt", out);
}

int run_command(const std::string& config_path, const std::string& out_override) {
  const SimulationConfig config = SimulationConfig::load(config_path);
  const std::string dir =
      out_override.empty() ? config.text("output.dir") : out_override;
  fs::create_directories(dir);
  write_file_atomic(dir + "/config.echo.cfg", config.serialize());
  write_provenance(config, dir);

  const int cadence = config.integer("output.snapshot_every");
  const int viz = config.integer("output.viz_samples");
  const bool snapshots = config.boolean("output.write_snapshots");

  SimulationSetup setup = config.make_setup();
  const StepObserver observer = [&](const StepRecord& rec,
                                    const SimulationState& state,
                                    const AssemblyContext& ctx) {
    std::printf("step %4d  u = %-10.6g mm  F = %-10.6g kN  %4d iters  residual %.3g%s\n",
                rec.step, rec.displacement, rec.force, rec.iterations,
                rec.residual, rec.converged ? "" : "  [not converged]");
    std::fflush(stdout);
    if (snapshots && cadence > 0 && rec.step % cadence == 0) {
      char name[64];
      std::snprintf(name, sizeof(name), "/snapshot_%06d.vtk", rec.step);
      write_snapshot(ctx, state, dir + name, viz);
    }
    return true;
  };

  AssemblyContext* last_ctx = nullptr;
  SimulationState state = [&] {
    // simulate() owns the context; capture it for the final snapshot through
    // the observer instead of rebuilding the quadrature.
    SimulationState result;
    const StepObserver wrap = [&](const StepRecord& rec, const SimulationState& s,
                                  const AssemblyContext& ctx) {
      last_ctx = const_cast<AssemblyContext*>(&ctx);
      return observer(rec, s, ctx);
    };
    result = simulate(setup, wrap);
    if (snapshots && last_ctx != nullptr)
      write_snapshot(*last_ctx, result, dir + "/snapshot_final.vtk", viz);
    return result;
  }();

  if (config.boolean("output.write_curve"))
    write_load_curve(state.series, dir + "/curve.csv");

  double peak = 0.0;
  for (const StepRecord& rec : state.series) peak = std::max(peak, rec.force);
  std::printf("done: %zu steps, peak force %.6g kN, outputs in %s\n",
              state.series.size(), peak, dir.c_str());
  return 0;
}

int calibrate_command(const std::string& csv_path, const std::string& rock,
                      std::optional<double> youngs_gpa, std::optional<double> nu,
                      std::optional<double> sigma_t_mpa,
                      std::optional<double> gc1, const std::string& emit) {
  std::vector<ExperimentRecord> records = read_records_file(csv_path);
  if (!rock.empty()) {
    std::erase_if(records, [&](const ExperimentRecord& r) { return r.rock != rock; });
    if (records.empty())
      throw std::invalid_argument("no records for rock '" + rock + "' in " + csv_path);
  } else {
    for (const ExperimentRecord& r : records)
      if (r.rock != records.front().rock)
        throw std::invalid_argument(
            "records mix rocks; select one with --rock");
  }
  const std::string rock_id = rock.empty() ? records.front().rock : rock;

  CalibrationInputs inputs;
  bool have_base = false;
  try {
    const MaterialCard base = MaterialCard::preset(rock_id);
    inputs.youngs = base.youngs;
    inputs.poisson = base.poisson;
    inputs.sigma_t = base.sigma_t;
    inputs.gc1 = base.gc1;
    inputs.eta = base.eta;
    have_base = true;
  } catch (const std::exception&) {
  }
  if (youngs_gpa) inputs.youngs = *youngs_gpa;
  if (nu) inputs.poisson = *nu;
  if (sigma_t_mpa) inputs.sigma_t = *sigma_t_mpa * 1e-3;
  if (gc1) inputs.gc1 = *gc1;
  if (!have_base && !(youngs_gpa && nu && sigma_t_mpa && gc1))
    throw std::invalid_argument(
        "rock '" + rock_id +
        "' has no preset; supply --youngs-gpa, --nu, --sigma-t-mpa and --gc1");

  const KStarTable table = KStarTable::builtin();
  const MaterialCard card = build_material_card(records, table, inputs);

  double k2_mean = 0.0;
  for (const ExperimentRecord& r : records) {
    const auto [k1s, k2s] = table.lookup(r.notch_length / r.radius, r.angle_deg);
    (void)k1s;
    k2_mean += mode2_toughness(r.failure_load, r.notch_length, r.radius,
                               r.thickness, k2s);
  }
  k2_mean /= static_cast<double>(records.size());

  std::string out;
  out += "# calibrated from " + std::to_string(records.size()) + " record(s) in " +
         csv_path + "\n";
  out += "# mean K_II = " + format_double(k2_mean / kMpaSqrtM) +
         " MPa*sqrt(m) = " + format_double(k2_mean) + " kN*mm^-1.5\n";
  out += "# tau = " + format_double(card.tau * 1e3) + " MPa\n";
  out += "[material]\n";
  out += "e_gpa = " + format_double(card.youngs) + "\n";
  out += "nu = " + format_double(card.poisson) + "\n";
  out += "sigma_t_mpa = " + format_double(card.sigma_t * 1e3) + "\n";
  out += "tau_mpa = " + format_double(card.tau * 1e3) + "\n";
  out += "gc_i_kn_mm = " + format_double(card.gc1) + "\n";
  out += "gc_ii_kn_mm = " + format_double(card.gc2) + "\n";
  out += "l0_i_mm = " + format_double(card.l01) + "\n";
  out += "l0_ii_mm = " + format_double(card.l02) + "\n";
  out += "eta = " + format_double(card.eta) + "\n";
  std::fputs(out.c_str(), stdout);
  if (!emit.empty()) write_file_atomic(emit, out);
  return 0;
}

int geometry_command(const std::string& config_path, bool check) {
  const SimulationConfig config = SimulationConfig::load(config_path);
  const ImplicitShape shape = config.make_shape();
  const EmbeddingMesh mesh = config.make_mesh();
  const int depth = config.integer("mesh.quad_depth");
  std::printf("mesh: %d x %d elements, p = %d, h = %.6g x %.6g mm\n", mesh.nx,
              mesh.ny, mesh.degree, mesh.hx, mesh.hy);
  if (!check) return 0;

  const double measured = measure_physical_area(shape, mesh, depth);
  double reference = 0.0;
  bool analytic = false;
  if (config.text("geometry.kind") == "dnbd") {
    reference = dnbd_analytic_area(config.dnbd());
    analytic = true;
  } else {
    reference = measure_physical_area(shape, mesh, depth + 3);
  }
  const double rel = std::abs(measured - reference) / reference;
  int cut = 0, physical = 0, fictitious = 0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto cells = partition_element(mesh.element_box(e), shape, 0,
                                         1, config.number("solver.alpha_fict"));
    switch (cells.front().kind) {
      case CellKind::kCut:
        ++cut;
        break;
      case CellKind::kPhysical:
        ++physical;
        break;
      case CellKind::kFictitious:
        ++fictitious;
        break;
    }
  }
  std::printf("elements: %d physical, %d cut, %d fictitious\n", physical, cut,
              fictitious);
  std::printf("physical area: measured %.8g mm^2 at depth %d, %s %.8g mm^2, "
              "relative error %.3g\n",
              measured, depth, analytic ? "analytic" : "deep-quadtree reference",
              reference, rel);
  return 0;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv) {
  CLI::App app{"two-phase-field brittle fracture solver on embedded domains"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  CLI::App* run = app.add_subcommand("run", "run a simulation from a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_override, "override output.dir");
  bool help_config = false;
  run->add_flag("--help-config", help_config, "print the config schema and exit");

  std::string csv_path, rock, emit;
  std::optional<double> youngs, nu, sigma_t, gc1;
  CLI::App* cal = app.add_subcommand(
      "calibrate", "derive a material card from DNBD experiment records");
  cal->add_option("records", csv_path, "experiment CSV")->required();
  cal->add_option("--rock", rock, "select records of one rock id");
  cal->add_option("--youngs-gpa", youngs, "Young's modulus (GPa)");
  cal->add_option("--nu", nu, "Poisson ratio");
  cal->add_option("--sigma-t-mpa", sigma_t, "tensile strength (MPa)");
  cal->add_option("--gc1", gc1, "mode I fracture energy (kN/mm)");
  cal->add_option("--emit", emit, "also write the card to this file");

  std::string geo_config;
  bool geo_check = false;
  CLI::App* geo = app.add_subcommand("geometry", "geometry diagnostics");
  geo->add_option("config", geo_config, "config file")->required();
  geo->add_flag("--check", geo_check, "integrate the physical area and compare");

  CLI::App* ver = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*ver) {
      std::printf("trifrac %s\n", kVersion);
      return 0;
    }
    if (*run) {
      if (help_config) {
        std::fputs(SimulationConfig::schema_help().c_str(), stdout);
        return 0;
      }
      return run_command(config_path, out_override);
    }
    if (*cal)
      return calibrate_command(csv_path, rock, youngs, nu, sigma_t, gc1, emit);
    if (*geo) return geometry_command(geo_config, geo_check);
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "error: %s\nsee `trifrac run --help-config` for the schema\n",
                 e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return 2;
  }
  return 1;
}

}  // namespace trifrac
