#pragma once

#include <Eigen/Dense>

#include "trifrac/assembly.hpp"
#include "trifrac/solver.hpp"

namespace trifrac {

/// Phase fields sampled on a uniform grid with a physical-domain mask;
/// fictitious samples are excluded from all morphology queries.
struct FieldGrid {
  int nx = 0, ny = 0;
  Vec2 origin = Vec2::Zero();
  double dx = 0.0, dy = 0.0;
  Eigen::MatrixXd s1, s2;                              // nx x ny, clamped
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> physical;

  Vec2 point(int i, int j) const { return origin + Vec2(i * dx, j * dy); }
  bool inside(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx && j < ny && physical(i, j);
  }
};

FieldGrid sample_grid(const AssemblyContext& ctx, const SimulationState& state,
                      int nx, int ny);

/// True if any physical sample within `radius` of `center` has the selected
/// field below `threshold`. mode: 1 -> s1, 2 -> s2, 0 -> min(s1, s2).
bool damaged_near(const FieldGrid& grid, const Vec2& center, double radius,
                  int mode, double threshold);

/// True if every physical sample along the segment (n of them) has the
/// selected field below `threshold`: a fully formed band.
bool band_along_segment(const AssemblyContext& ctx, const Eigen::VectorXd& s,
                        const Vec2& a, const Vec2& b, double threshold,
                        int samples = 129);

/// Largest bounding-box diagonal over connected components (8-neighbour) of
/// {selected field < threshold} restricted to physical samples; 0 if empty.
double max_damage_extent(const FieldGrid& grid, int mode, double threshold);

/// True if {min(s1, s2) < threshold} connects the two endpoints' nearest
/// physical samples (8-neighbour flood fill).
bool damage_connects(const FieldGrid& grid, const Vec2& a, const Vec2& b,
                     double threshold);

}  // namespace trifrac
