#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "trifrac/assembly.hpp"
#include "trifrac/linear_solver.hpp"
#include "trifrac/material.hpp"

namespace trifrac {

struct StaggeredOptions {
  double tolerance = 1e-5;
  int max_iterations = 500;
  bool abort_on_nonconvergence = false;  // false: accept with a warning flag
};

struct LoadStepOptions {
  double u_init = 5e-3;
  double u_min = 5e-4;
  double kappa = 1.1;
  bool use_first_residual = false;  // step error source for the controller
};

struct StepRecord {
  int step = 0;
  double displacement = 0.0;  // applied, mm
  double force = 0.0;         // kN (thickness included)
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
  double elastic_energy = 0.0;   // per unit thickness, kN*mm/mm
  double surface_energy = 0.0;
  double external_work = 0.0;
  double overshoot = 0.0;  // max |s - clamp(s)| seen this step
};

struct SimulationState {
  Eigen::VectorXd u, s1, s2;
  std::vector<QuadPointState> history;
  std::vector<StepRecord> series;

  static SimulationState initial(const AssemblyContext& ctx);
};

struct StaggeredResult {
  int iterations = 0;
  double residual = 0.0;
  double first_residual = 0.0;
  bool converged = false;
  Eigen::Vector3d field_residuals = Eigen::Vector3d::Zero();  // u, s1, s2
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, const Eigen::Vector3d& residuals)
      : std::runtime_error(what), residuals(residuals) {}
  Eigen::Vector3d residuals;
};

struct StaggeredSolvers {
  SymmetricSolver s1, s2, u;
};

/// One staggered pass to convergence: repeat [solve s1 | solve s2 | solve u |
/// update history] until the largest relative field change drops below the
/// tolerance or the iteration cap is hit.
StaggeredResult staggered_solve(SimulationState& state, const AssemblyContext& ctx,
                                const MaterialCard& card,
                                const StaggeredOptions& options,
                                StaggeredSolvers& solvers);

/// Step-size controller: next = max(du * (tolerance / achieved)^kappa, u_min).
double next_step_size(double du, double tolerance, double achieved, double kappa,
                      double u_min);

/// Loading arcs for the DNBD setup: the bottom arc is fully fixed, the top
/// arc is driven downward in y and carries the reaction measurement.
std::vector<DirichletArc> make_dnbd_arcs(const DnbdGeometry& geom, double beta);

struct SimulationSetup {
  EmbeddingMesh mesh;
  ImplicitShape shape;
  MaterialCard card;
  FcmOptions fcm;
  StaggeredOptions stagger;
  LoadStepOptions stepping;
  std::vector<DirichletArc> arcs;
  double target_displacement = 0.1;  // mm of applied arc motion
  double failure_fraction = 0.01;    // stop once F < fraction * peak, post-peak
  double thickness = 20.0;           // mm
  int max_steps = 100000;

  SimulationSetup(EmbeddingMesh m, ImplicitShape s, MaterialCard c)
      : mesh(std::move(m)), shape(std::move(s)), card(c) {}
};

/// Called after every completed load step; return false to stop the run.
using StepObserver = std::function<bool(
    const StepRecord&, const SimulationState&, const AssemblyContext&)>;

/// Quasi-static displacement-driven run: applies the step displacement to the
/// moving arcs, solves the staggered system, records the reaction, and adapts
/// the step size from the achieved staggered error. A non-converged step is
/// retried once at half size before the error policy applies.
SimulationState simulate(const SimulationSetup& setup,
                         const StepObserver& observer = {});

}  // namespace trifrac
