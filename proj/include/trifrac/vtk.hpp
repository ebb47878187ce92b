#pragma once

#include <string>
#include <vector>

#include "trifrac/assembly.hpp"
#include "trifrac/solver.hpp"

namespace trifrac {

/// "%.10g" with a guaranteed decimal point for integral values.
std::string format_double(double v);

/// Writes content to path via a temp file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// CSV load-displacement series:
/// step,displacement_mm,force_kN,staggered_iters,residual. Throws
/// std::logic_error if the series is not ordered by applied displacement.
void write_load_curve(const std::vector<StepRecord>& series,
                      const std::string& path);

/// Legacy ASCII VTK snapshot on a uniform grid of
/// (samples_per_element * nx + 1) x (... ny + 1) points: displacement vector
/// u, clamped phase fields s_I and s_II, the combined scale
/// s_viz = s_II - s_I, and the indicator as cell data.
void write_snapshot(const AssemblyContext& ctx, const SimulationState& state,
                    const std::string& path, int samples_per_element = 2);

}  // namespace trifrac
