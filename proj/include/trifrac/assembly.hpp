#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "trifrac/geometry.hpp"
#include "trifrac/material.hpp"
#include "trifrac/mesh.hpp"
#include "trifrac/types.hpp"

namespace trifrac {

struct LinearSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::string field;
};

/// Penalty Dirichlet condition on a circular arc of the given length
/// centered at `center_angle` (radians, from +x). Components can be
/// constrained individually. A nonzero load_direction marks the arc whose
/// penalty reaction is reported as the load-axis force.
struct DirichletArc {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  double center_angle = 0.0;
  double arc_length = 0.0;
  bool fix_x = true, fix_y = true;
  Vec2 value = Vec2::Zero();
  double beta = 1e6;
  Vec2 load_direction = Vec2::Zero();
};

/// Straight-segment counterpart, used for patch tests on rectangular domains.
/// When value_end is set the prescribed data varies linearly from `value` at
/// `a` to `value_end` at `b`.
struct DirichletSegment {
  Vec2 a = Vec2::Zero(), b = Vec2::Zero();
  bool fix_x = true, fix_y = true;
  Vec2 value = Vec2::Zero();
  double beta = 1e6;
  Vec2 load_direction = Vec2::Zero();
  std::optional<Vec2> value_end;
};

struct FcmOptions {
  int depth = 3;
  int points_per_dir = 0;  // 0: degree + 1
  double alpha_fict = 1e-8;
};

/// Precomputed quadrature-level data for one mesh/shape pair: quadtree cells
/// of every element flattened into per-point arrays with cached basis values
/// and physical gradients, plus arc-length quadrature for the penalty
/// boundary terms. Everything here is immutable during a solve except the
/// prescribed boundary values.
class AssemblyContext {
 public:
  AssemblyContext(const EmbeddingMesh& mesh, const ImplicitShape& shape,
                  const FcmOptions& options);

  const EmbeddingMesh& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const ImplicitShape& shape() const { return shape_; }
  const FcmOptions& options() const { return options_; }

  int point_count() const { return static_cast<int>(alpha_.size()); }
  const Eigen::VectorXd& point_alpha() const { return alpha_; }
  /// Reference weight times the element Jacobian.
  const Eigen::VectorXd& point_weight() const { return weight_; }
  const Eigen::VectorXi& point_element() const { return element_; }
  Vec2 point_coords(int k) const { return coords_.row(k).transpose(); }
  int element_begin(int e) const { return offsets_[e]; }
  int element_end(int e) const { return offsets_[e + 1]; }

  /// Cached basis data, one column per quadrature point (nb rows).
  const Eigen::MatrixXd& basis_values() const { return n_; }
  const Eigen::MatrixXd& basis_grad_x() const { return dnx_; }
  const Eigen::MatrixXd& basis_grad_y() const { return dny_; }

  void set_boundary(std::vector<DirichletArc> arcs,
                    std::vector<DirichletSegment> segments);
  const std::vector<DirichletArc>& arcs() const { return arcs_; }
  std::vector<DirichletArc>& arcs() { return arcs_; }
  std::vector<DirichletSegment>& segments() { return segments_; }

  /// Scalar field coefficients -> values at every quadrature point.
  Eigen::VectorXd sample_scalar(const Eigen::VectorXd& coeffs) const;
  /// Displacement gradient at quadrature point k.
  Mat2 gradient_at(const Eigen::VectorXd& u, int k) const;

  /// Point evaluation anywhere in the mesh box (used by writers/diagnostics).
  double eval_scalar(const Eigen::VectorXd& coeffs, const Vec2& x) const;
  Vec2 eval_vector(const Eigen::VectorXd& u, const Vec2& x) const;
  Mat2 eval_vector_gradient(const Eigen::VectorXd& u, const Vec2& x) const;

  const Eigen::SparseMatrix<double>& scalar_pattern() const { return pattern_scalar_; }
  const Eigen::SparseMatrix<double>& vector_pattern() const { return pattern_vector_; }

  struct BoundaryPoint {
    int element;
    int bc;  // index into arcs (then segments, offset by arcs().size())
    double weight;  // arc-length measure
    Vec2 x;
    Eigen::VectorXd basis;
    Vec2 value = Vec2::Zero();  // segments: interpolated prescribed value
  };
  const std::vector<BoundaryPoint>& boundary_points() const { return boundary_; }

 private:
  EmbeddingMesh mesh_;
  DofMap dofs_;
  ImplicitShape shape_;
  FcmOptions options_;
  std::vector<int> offsets_;
  Eigen::VectorXd alpha_, weight_;
  Eigen::VectorXi element_;
  Eigen::MatrixXd coords_;            // npts x 2
  Eigen::MatrixXd n_, dnx_, dny_;     // nb x npts
  std::vector<DirichletArc> arcs_;
  std::vector<DirichletSegment> segments_;
  std::vector<BoundaryPoint> boundary_;
  Eigen::SparseMatrix<double> pattern_scalar_, pattern_vector_;

  void build_quadrature();
  void build_patterns();
  void build_boundary_cache();
};

/// Plane-strain elastic system with indicator- and degradation-weighted
/// stiffness and penalty Dirichlet terms. `g_field` must hold the
/// degradation value at every quadrature point.
LinearSystem assemble_elastic(const AssemblyContext& ctx,
                              const Eigen::VectorXd& g_field, double lambda,
                              double mu, const Vec2& body_force = Vec2::Zero());

/// Phase-field system for one mode: reaction coefficient
/// 4 l0 (1 - eta) H / Gc + 1, gradient coefficient 4 l0^2, unit source
/// weighted by the indicator.
LinearSystem assemble_phase(const AssemblyContext& ctx, int mode,
                            const Eigen::VectorXd& h_field, double l0,
                            double gc, double eta);

/// Penalty-consistent reaction along each marked arc's load direction,
/// per unit thickness: F = beta * integral (g - u) . n_load ds.
double reaction_force(const AssemblyContext& ctx, const Eigen::VectorXd& u);

/// Adds beta * integral_segment N_i N_j (and beta * value * N_i to the rhs)
/// to a scalar-field system; pins the field along a line.
void add_scalar_segment_penalty(LinearSystem& system, const AssemblyContext& ctx,
                                const Segment& segment, double beta,
                                double value = 0.0);

struct EnergyBreakdown {
  double elastic = 0.0;
  double surface1 = 0.0;
  double surface2 = 0.0;
  double total() const { return elastic + surface1 + surface2; }
};

/// Diagnostic energies: degraded elastic energy plus the per-mode crack
/// surface energies (per unit thickness).
EnergyBreakdown total_energy(const AssemblyContext& ctx,
                             const Eigen::VectorXd& u,
                             const Eigen::VectorXd& s1,
                             const Eigen::VectorXd& s2,
                             const MaterialCard& card);

}  // namespace trifrac
