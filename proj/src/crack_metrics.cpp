#include "trifrac/crack_metrics.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace trifrac {

FieldGrid sample_grid(const AssemblyContext& ctx, const SimulationState& state,
                      int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("sample_grid: need >= 2x2");
  const Box2 box = ctx.mesh().box();
  FieldGrid grid;
  grid.nx = nx;
  grid.ny = ny;
  grid.origin = box.min();
  grid.dx = box.sizes().x() / (nx - 1);
  grid.dy = box.sizes().y() / (ny - 1);
  grid.s1.resize(nx, ny);
  grid.s2.resize(nx, ny);
  grid.physical.resize(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const Vec2 x = grid.point(i, j);
      grid.physical(i, j) = ctx.shape().contains(x);
      grid.s1(i, j) = std::clamp(ctx.eval_scalar(state.s1, x), 0.0, 1.0);
      grid.s2(i, j) = std::clamp(ctx.eval_scalar(state.s2, x), 0.0, 1.0);
    }
  return grid;
}

namespace {

double field_of(const FieldGrid& grid, int mode, int i, int j) {
  switch (mode) {
    case 1:
      return grid.s1(i, j);
    case 2:
      return grid.s2(i, j);
    default:
      return std::min(grid.s1(i, j), grid.s2(i, j));
  }
}

}  // namespace

bool damaged_near(const FieldGrid& grid, const Vec2& center, double radius,
                  int mode, double threshold) {
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j) {
      if (!grid.physical(i, j)) continue;
      if ((grid.point(i, j) - center).norm() > radius) continue;
      if (field_of(grid, mode, i, j) < threshold) return true;
    }
  return false;
}

bool band_along_segment(const AssemblyContext& ctx, const Eigen::VectorXd& s,
                        const Vec2& a, const Vec2& b, double threshold,
                        int samples) {
  bool any = false;
  for (int k = 0; k < samples; ++k) {
    const Vec2 x = a + (b - a) * (k / double(samples - 1));
    if (!ctx.shape().contains(x)) continue;
    any = true;
    if (ctx.eval_scalar(s, x) >= threshold) return false;
  }
  return any;
}

double max_damage_extent(const FieldGrid& grid, int mode, double threshold) {
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen(grid.nx, grid.ny);
  seen.setConstant(false);
  double best = 0.0;
  for (int i0 = 0; i0 < grid.nx; ++i0)
    for (int j0 = 0; j0 < grid.ny; ++j0) {
      if (seen(i0, j0) || !grid.physical(i0, j0) ||
          field_of(grid, mode, i0, j0) >= threshold)
        continue;
      int ilo = i0, ihi = i0, jlo = j0, jhi = j0;
      std::queue<std::pair<int, int>> frontier;
      frontier.emplace(i0, j0);
      seen(i0, j0) = true;
      while (!frontier.empty()) {
        const auto [i, j] = frontier.front();
        frontier.pop();
        ilo = std::min(ilo, i);
        ihi = std::max(ihi, i);
        jlo = std::min(jlo, j);
        jhi = std::max(jhi, j);
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj) {
            const int ni = i + di, nj = j + dj;
            if ((di == 0 && dj == 0) || !grid.inside(ni, nj) || seen(ni, nj))
              continue;
            if (field_of(grid, mode, ni, nj) >= threshold) continue;
            seen(ni, nj) = true;
            frontier.emplace(ni, nj);
          }
      }
      const double w = (ihi - ilo) * grid.dx;
      const double h = (jhi - jlo) * grid.dy;
      best = std::max(best, std::sqrt(w * w + h * h));
    }
  return best;
}

bool damage_connects(const FieldGrid& grid, const Vec2& a, const Vec2& b,
                     double threshold) {
  auto nearest_damaged = [&](const Vec2& x) {
    int bi = -1, bj = -1;
    double bd = 0.0;
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 0; j < grid.ny; ++j) {
        if (!grid.physical(i, j) || field_of(grid, 0, i, j) >= threshold) continue;
        const double d = (grid.point(i, j) - x).norm();
        if (bi < 0 || d < bd) {
          bi = i;
          bj = j;
          bd = d;
        }
      }
    return std::pair<int, int>(bi, bj);
  };
  const auto [ai, aj] = nearest_damaged(a);
  const auto [bi, bj] = nearest_damaged(b);
  if (ai < 0 || bi < 0) return false;
  // Endpoints must actually sit near the requested tips (within 3 cells).
  const double tol = 3.0 * std::max(grid.dx, grid.dy);
  if ((grid.point(ai, aj) - a).norm() > tol || (grid.point(bi, bj) - b).norm() > tol)
    return false;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen(grid.nx, grid.ny);
  seen.setConstant(false);
  std::queue<std::pair<int, int>> frontier;
  frontier.emplace(ai, aj);
  seen(ai, aj) = true;
  while (!frontier.empty()) {
    const auto [i, j] = frontier.front();
    frontier.pop();
    if (i == bi && j == bj) return true;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        const int ni = i + di, nj = j + dj;
        if ((di == 0 && dj == 0) || !grid.inside(ni, nj) || seen(ni, nj)) continue;
        if (field_of(grid, 0, ni, nj) >= threshold) continue;
        seen(ni, nj) = true;
        frontier.emplace(ni, nj);
      }
  }
  return false;
}

}  // namespace trifrac
