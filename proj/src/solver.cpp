#include "trifrac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace trifrac {

SimulationState SimulationState::initial(const AssemblyContext& ctx) {
  SimulationState state;
  state.u = Eigen::VectorXd::Zero(ctx.dofs().vector_count());
  state.s1 = Eigen::VectorXd::Ones(ctx.dofs().scalar_count());
  state.s2 = Eigen::VectorXd::Ones(ctx.dofs().scalar_count());
  state.history.assign(ctx.point_count(), QuadPointState{});
  return state;
}

namespace {

double relative_change(const Eigen::VectorXd& now, const Eigen::VectorXd& before) {
  return (now - before).norm() / std::max(now.norm(), 1e-12);
}

double overshoot_of(const Eigen::VectorXd& s) {
  return std::max(std::max(s.maxCoeff() - 1.0, 0.0),
                  std::max(-s.minCoeff(), 0.0));
}

}  // namespace

StaggeredResult staggered_solve(SimulationState& state, const AssemblyContext& ctx,
                                const MaterialCard& card,
                                const StaggeredOptions& options,
                                StaggeredSolvers& solvers) {
  if (options.tolerance <= 0.0 || options.max_iterations < 1)
    throw std::invalid_argument("staggered: bad tolerance or iteration cap");
  const int np = ctx.point_count();
  Eigen::VectorXd h1(np), h2(np), g(np);
  StaggeredResult result;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd u_prev = state.u;
    const Eigen::VectorXd s1_prev = state.s1;
    const Eigen::VectorXd s2_prev = state.s2;

    for (int k = 0; k < np; ++k) {
      h1[k] = state.history[k].h1;
      h2[k] = state.history[k].h2;
    }
    state.s1 = solvers.s1.solve(
        assemble_phase(ctx, 1, h1, card.l01, card.gc1, card.eta));
    state.s2 = solvers.s2.solve(
        assemble_phase(ctx, 2, h2, card.l02, card.gc2, card.eta));

    const Eigen::VectorXd s1q = ctx.sample_scalar(state.s1);
    const Eigen::VectorXd s2q = ctx.sample_scalar(state.s2);
    for (int k = 0; k < np; ++k) g[k] = degradation(s1q[k], s2q[k], card.eta);
    state.u = solvers.u.solve(assemble_elastic(ctx, g, card.lambda, card.mu));

#pragma omp parallel for schedule(static)
    for (int k = 0; k < np; ++k) {
      const Mat2 eps = small_strain(Mat2(ctx.gradient_at(state.u, k)));
      const auto [psi1, psi2] = driving_forces(eps, card.lambda, card.mu);
      update_history(state.history[k], psi1, psi2, s1q[k], s2q[k]);
    }

    result.field_residuals = Eigen::Vector3d(relative_change(state.u, u_prev),
                                             relative_change(state.s1, s1_prev),
                                             relative_change(state.s2, s2_prev));
    result.residual = result.field_residuals.maxCoeff();
    result.iterations = it;
    if (it == 1) result.first_residual = result.residual;
    if (result.residual < options.tolerance) {
      result.converged = true;
      return result;
    }
  }
  result.converged = false;
  return result;
}

double next_step_size(double du, double tolerance, double achieved, double kappa,
                      double u_min) {
  if (du <= 0.0 || tolerance <= 0.0 || achieved <= 0.0 || kappa <= 0.0 ||
      u_min <= 0.0)
    throw std::invalid_argument("next_step_size: inputs must be positive");
  return std::max(du * std::pow(tolerance / achieved, kappa), u_min);
}

std::vector<DirichletArc> make_dnbd_arcs(const DnbdGeometry& geom, double beta) {
  DirichletArc top;
  top.center = Vec2::Zero();
  top.radius = geom.radius;
  top.center_angle = M_PI / 2.0;
  top.arc_length = geom.arc_length;
  top.fix_x = false;
  top.fix_y = true;
  top.beta = beta;
  top.load_direction = Vec2(0.0, -1.0);

  DirichletArc bottom = top;
  bottom.center_angle = -M_PI / 2.0;
  bottom.fix_x = true;
  bottom.load_direction = Vec2::Zero();
  return {top, bottom};
}

namespace {

void apply_arc_motion(AssemblyContext& ctx, double displacement) {
  for (DirichletArc& arc : ctx.arcs())
    if (arc.load_direction != Vec2::Zero())
      arc.value = displacement * arc.load_direction;
}

}  // namespace

SimulationState simulate(const SimulationSetup& setup, const StepObserver& observer) {
  AssemblyContext ctx(setup.mesh, setup.shape, setup.fcm);
  ctx.set_boundary(setup.arcs, {});
  SimulationState state = SimulationState::initial(ctx);
  StaggeredSolvers solvers;

  double applied = 0.0;
  double force_2d_prev = 0.0;
  double work = 0.0;
  double peak_force = 0.0;
  double du = setup.stepping.u_init;

  auto record_step = [&](int step, const StaggeredResult& res) {
    const double force_2d = reaction_force(ctx, state.u);
    const double d_prev = state.series.empty() ? 0.0 : state.series.back().displacement;
    work += 0.5 * (force_2d_prev + force_2d) * (applied - d_prev);
    force_2d_prev = force_2d;
    const EnergyBreakdown energy = total_energy(ctx, state.u, state.s1, state.s2,
                                                setup.card);
    StepRecord rec;
    rec.step = step;
    rec.displacement = applied;
    rec.force = force_2d * setup.thickness;
    rec.iterations = res.iterations;
    rec.residual = res.residual;
    rec.converged = res.converged;
    rec.elastic_energy = energy.elastic;
    rec.surface_energy = energy.surface1 + energy.surface2;
    rec.external_work = work;
    rec.overshoot = std::max(overshoot_of(state.s1), overshoot_of(state.s2));
    state.series.push_back(rec);
    peak_force = std::max(peak_force, rec.force);
    return rec;
  };

  apply_arc_motion(ctx, 0.0);
  StaggeredResult res0 = staggered_solve(state, ctx, setup.card, setup.stagger, solvers);
  const StepRecord rec0 = record_step(0, res0);
  if (observer && !observer(rec0, state, ctx)) return state;

  int step = 0;
  while (applied < setup.target_displacement && step < setup.max_steps) {
    du = std::min(du, setup.stepping.u_init);
    du = std::min(du, setup.target_displacement - applied);

    SimulationState saved = state;
    apply_arc_motion(ctx, applied + du);
    StaggeredResult res = staggered_solve(state, ctx, setup.card, setup.stagger, solvers);
    if (!res.converged) {
      // one retry at half the step before the error policy applies
      state = std::move(saved);
      du *= 0.5;
      apply_arc_motion(ctx, applied + du);
      res = staggered_solve(state, ctx, setup.card, setup.stagger, solvers);
      if (!res.converged) {
        if (setup.stagger.abort_on_nonconvergence)
          throw NonConvergence("staggered iteration cap reached at u = " +
                                   std::to_string(applied + du),
                               res.field_residuals);
        std::cerr << "[trifrac] warning: step " << step + 1
                  << " accepted without convergence (residual " << res.residual
                  << ")\n";
      }
    }
    applied += du;
    ++step;
    const StepRecord rec = record_step(step, res);
    if (observer && !observer(rec, state, ctx)) break;

    if (peak_force > 0.0 && rec.force < setup.failure_fraction * peak_force &&
        rec.force < peak_force)
      break;

    const double achieved = setup.stepping.use_first_residual
                                ? std::max(res.first_residual, 1e-16)
                                : std::max(res.residual, 1e-16);
    du = next_step_size(du, setup.stagger.tolerance, achieved,
                        setup.stepping.kappa, setup.stepping.u_min);
  }
  return state;
}

}  // namespace trifrac
