#include "trifrac/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trifrac {

namespace {

// Adds into an existing entry of a compressed column-major matrix.
inline void add_entry(Eigen::SparseMatrix<double>& m, int row, int col,
                      double v) {
  const int* outer = m.outerIndexPtr();
  const int* inner = m.innerIndexPtr();
  const int* it = std::lower_bound(inner + outer[col], inner + outer[col + 1], row);
  m.valuePtr()[it - inner] += v;
}

}  // namespace

AssemblyContext::AssemblyContext(const EmbeddingMesh& mesh,
                                 const ImplicitShape& shape,
                                 const FcmOptions& options)
    : mesh_(mesh), dofs_(mesh), shape_(shape), options_(options) {
  mesh_.validate();
  if (options_.points_per_dir == 0)
    options_.points_per_dir = mesh_.degree + 1;
  if (options_.alpha_fict <= 0.0)
    throw std::invalid_argument("assembly: alpha_fict must be positive");
  build_quadrature();
  build_patterns();
}

void AssemblyContext::build_quadrature() {
  const int ne = mesh_.element_count();
  const int nb = dofs_.functions_per_element();
  const int p = mesh_.degree;
  std::vector<std::vector<IntegrationCell>> cells(ne);
#pragma omp parallel for schedule(dynamic, 8)
  for (int e = 0; e < ne; ++e)
    cells[e] = partition_element(mesh_.element_box(e), shape_, options_.depth,
                                 options_.points_per_dir, options_.alpha_fict);
  offsets_.assign(ne + 1, 0);
  for (int e = 0; e < ne; ++e) {
    int count = 0;
    for (const auto& cell : cells[e]) count += static_cast<int>(cell.points.size());
    offsets_[e + 1] = offsets_[e] + count;
  }
  const int npts = offsets_[ne];
  alpha_.resize(npts);
  weight_.resize(npts);
  element_.resize(npts);
  coords_.resize(npts, 2);
  n_.resize(nb, npts);
  dnx_.resize(nb, npts);
  dny_.resize(nb, npts);
  const double jac = mesh_.jacobian();
  const Vec2 dref(2.0 / mesh_.hx, 2.0 / mesh_.hy);
#pragma omp parallel for schedule(dynamic, 8)
  for (int e = 0; e < ne; ++e) {
    int k = offsets_[e];
    for (const auto& cell : cells[e]) {
      for (const CellPoint& pt : cell.points) {
        const TensorBasis basis = tensor_basis(p, pt.xi);
        alpha_[k] = pt.alpha;
        weight_[k] = pt.weight * jac;
        element_[k] = e;
        coords_.row(k) = mesh_.from_reference(e, pt.xi).transpose();
        n_.col(k) = basis.values;
        dnx_.col(k) = basis.grads.col(0) * dref.x();
        dny_.col(k) = basis.grads.col(1) * dref.y();
        ++k;
      }
    }
  }
}

void AssemblyContext::build_patterns() {
  const int ne = mesh_.element_count();
  const int nb = dofs_.functions_per_element();
  std::vector<Eigen::Triplet<double>> ts, tv;
  ts.reserve(static_cast<size_t>(ne) * nb * nb);
  tv.reserve(static_cast<size_t>(ne) * nb * nb * 4);
  for (int e = 0; e < ne; ++e) {
    const Eigen::VectorXi& dofs = dofs_.element_scalar_dofs(e);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) {
        ts.emplace_back(dofs[i], dofs[j], 0.0);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            tv.emplace_back(2 * dofs[i] + a, 2 * dofs[j] + b, 0.0);
      }
  }
  pattern_scalar_.resize(dofs_.scalar_count(), dofs_.scalar_count());
  pattern_scalar_.setFromTriplets(ts.begin(), ts.end());
  pattern_scalar_.makeCompressed();
  pattern_vector_.resize(dofs_.vector_count(), dofs_.vector_count());
  pattern_vector_.setFromTriplets(tv.begin(), tv.end());
  pattern_vector_.makeCompressed();
}

namespace {

// Parameter values in (t0, t1) where a curve crosses mesh gridlines, from a
// per-axis inverse. Keeps the penalty quadrature within single elements.
void append_sorted_unique(std::vector<double>& v, double t, double t0, double t1) {
  const double tol = 1e-12 * (std::abs(t1 - t0) + 1.0);
  if (t <= t0 + tol || t >= t1 - tol) return;
  for (double s : v)
    if (std::abs(s - t) < tol) return;
  v.push_back(t);
}

}  // namespace

void AssemblyContext::set_boundary(std::vector<DirichletArc> arcs,
                                   std::vector<DirichletSegment> segments) {
  arcs_ = std::move(arcs);
  segments_ = std::move(segments);
  build_boundary_cache();
}

void AssemblyContext::build_boundary_cache() {
  boundary_.clear();
  const int p = mesh_.degree;
  const QuadratureRule rule = gauss_legendre(2 * (p + 1));
  auto emit = [&](int bc, const Vec2& x, double w, const Vec2& value) {
    BoundaryPoint bp;
    bp.bc = bc;
    bp.element = mesh_.element_of(x);
    bp.weight = w;
    bp.x = x;
    bp.basis = tensor_basis(p, mesh_.to_reference(bp.element, x)).values;
    bp.value = value;
    boundary_.push_back(std::move(bp));
  };

  for (size_t a = 0; a < arcs_.size(); ++a) {
    const DirichletArc& arc = arcs_[a];
    if (arc.arc_length <= 0.0 || arc.radius <= 0.0)
      throw std::invalid_argument("boundary: arc needs positive radius and length");
    const double half = 0.5 * arc.arc_length / arc.radius;
    const double t0 = arc.center_angle - half, t1 = arc.center_angle + half;
    std::vector<double> brk{t0, t1};
    auto add_angle = [&](double theta) {
      // normalize candidate into [t0, t0 + 2*pi)
      double t = theta - std::floor((theta - t0) / (2.0 * M_PI)) * 2.0 * M_PI;
      append_sorted_unique(brk, t, t0, t1);
    };
    for (int i = 0; i <= mesh_.nx; ++i) {
      const double q = (mesh_.origin.x() + i * mesh_.hx - arc.center.x()) / arc.radius;
      if (std::abs(q) <= 1.0) {
        add_angle(std::acos(q));
        add_angle(-std::acos(q));
      }
    }
    for (int j = 0; j <= mesh_.ny; ++j) {
      const double q = (mesh_.origin.y() + j * mesh_.hy - arc.center.y()) / arc.radius;
      if (std::abs(q) <= 1.0) {
        add_angle(std::asin(q));
        add_angle(M_PI - std::asin(q));
      }
    }
    std::sort(brk.begin(), brk.end());
    for (size_t s = 0; s + 1 < brk.size(); ++s) {
      const double mid = 0.5 * (brk[s] + brk[s + 1]);
      const double hw = 0.5 * (brk[s + 1] - brk[s]);
      if (hw <= 0.0) continue;
      for (int g = 0; g < rule.points.size(); ++g) {
        const double theta = mid + hw * rule.points[g];
        const Vec2 x = arc.center + arc.radius * Vec2(std::cos(theta), std::sin(theta));
        emit(static_cast<int>(a), x, rule.weights[g] * hw * arc.radius, Vec2::Zero());
      }
    }
  }

  for (size_t s = 0; s < segments_.size(); ++s) {
    const DirichletSegment& seg = segments_[s];
    const Vec2 d = seg.b - seg.a;
    const double len = d.norm();
    if (len <= 0.0)
      throw std::invalid_argument("boundary: zero-length segment");
    std::vector<double> brk{0.0, 1.0};
    for (int axis = 0; axis < 2; ++axis) {
      if (std::abs(d[axis]) < 1e-14 * len) continue;
      const double h = axis == 0 ? mesh_.hx : mesh_.hy;
      const int n = axis == 0 ? mesh_.nx : mesh_.ny;
      for (int i = 0; i <= n; ++i)
        append_sorted_unique(brk, (mesh_.origin[axis] + i * h - seg.a[axis]) / d[axis],
                             0.0, 1.0);
    }
    std::sort(brk.begin(), brk.end());
    for (size_t q = 0; q + 1 < brk.size(); ++q) {
      const double mid = 0.5 * (brk[q] + brk[q + 1]);
      const double hw = 0.5 * (brk[q + 1] - brk[q]);
      if (hw <= 0.0) continue;
      for (int g = 0; g < rule.points.size(); ++g) {
        const double t = mid + hw * rule.points[g];
        const Vec2 value =
            seg.value_end ? Vec2(seg.value + t * (*seg.value_end - seg.value))
                          : seg.value;
        emit(static_cast<int>(arcs_.size() + s), seg.a + t * d,
             rule.weights[g] * hw * len, value);
      }
    }
  }
}

Eigen::VectorXd AssemblyContext::sample_scalar(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != dofs_.scalar_count())
    throw std::invalid_argument("sample_scalar: coefficient size mismatch");
  Eigen::VectorXd out(point_count());
  const int nb = dofs_.functions_per_element();
#pragma omp parallel for schedule(static)
  for (int e = 0; e < mesh_.element_count(); ++e) {
    const Eigen::VectorXi& dofs = dofs_.element_scalar_dofs(e);
    Eigen::VectorXd local(nb);
    for (int i = 0; i < nb; ++i) local[i] = coeffs[dofs[i]];
    const int b = offsets_[e], c = offsets_[e + 1] - offsets_[e];
    if (c > 0) out.segment(b, c).noalias() = n_.middleCols(b, c).transpose() * local;
  }
  return out;
}

Mat2 AssemblyContext::gradient_at(const Eigen::VectorXd& u, int k) const {
  const int e = element_[k];
  const Eigen::VectorXi& dofs = dofs_.element_scalar_dofs(e);
  const int nb = dofs_.functions_per_element();
  Mat2 grad = Mat2::Zero();
  for (int i = 0; i < nb; ++i) {
    const double gx = dnx_(i, k), gy = dny_(i, k);
    for (int c = 0; c < 2; ++c) {
      const double ui = u[2 * dofs[i] + c];
      grad(c, 0) += ui * gx;
      grad(c, 1) += ui * gy;
    }
  }
  return grad;
}

double AssemblyContext::eval_scalar(const Eigen::VectorXd& coeffs, const Vec2& x) const {
  const int e = mesh_.element_of(x);
  const TensorBasis basis = tensor_basis(mesh_.degree, mesh_.to_reference(e, x));
  const Eigen::VectorXi& dofs = dofs_.element_scalar_dofs(e);
  double v = 0.0;
  for (int i = 0; i < basis.values.size(); ++i) v += basis.values[i] * coeffs[dofs[i]];
  return v;
}

Vec2 AssemblyContext::eval_vector(const Eigen::VectorXd& u, const Vec2& x) const {
  const int e = mesh_.element_of(x);
  const TensorBasis basis = tensor_basis(mesh_.degree, mesh_.to_reference(e, x));
  const Eigen::VectorXi& dofs = dofs_.element_scalar_dofs(e);
  Vec2 v = Vec2::Zero();
  for (int i = 0; i < basis.values.size(); ++i)
    for (int c = 0; c < 2; ++c) v[c] += basis.values[i] * u[2 * dofs[i] + c];
  return v;
}

Mat2 AssemblyContext::eval_vector_gradient(const Eigen::VectorXd& u, const Vec2& x) const {
  const int e = mesh_.element_of(x);
  const TensorBasis basis = tensor_basis(mesh_.degree, mesh_.to_reference(e, x));
  const Eigen::VectorXi& dofs = dofs_.element_scalar_dofs(e);
  const Vec2 dref(2.0 / mesh_.hx, 2.0 / mesh_.hy);
  Mat2 grad = Mat2::Zero();
  for (int i = 0; i < basis.values.size(); ++i)
    for (int c = 0; c < 2; ++c) {
      const double ui = u[2 * dofs[i] + c];
      grad(c, 0) += ui * basis.grads(i, 0) * dref.x();
      grad(c, 1) += ui * basis.grads(i, 1) * dref.y();
    }
  return grad;
}

namespace {

struct BcView {
  bool fix_x, fix_y;
  Vec2 value;
  double beta;
  Vec2 load_direction;
};

// Arc values are live (the moving arc changes per load step); segment values
// were interpolated into the cached point.
BcView bc_view(const AssemblyContext& ctx, const AssemblyContext::BoundaryPoint& bp) {
  const auto& arcs = ctx.arcs();
  if (bp.bc < static_cast<int>(arcs.size())) {
    const DirichletArc& a = arcs[bp.bc];
    return {a.fix_x, a.fix_y, a.value, a.beta, a.load_direction};
  }
  const DirichletSegment& s =
      const_cast<AssemblyContext&>(ctx).segments()[bp.bc - arcs.size()];
  return {s.fix_x, s.fix_y, bp.value, s.beta, s.load_direction};
}

}  // namespace

LinearSystem assemble_elastic(const AssemblyContext& ctx,
                              const Eigen::VectorXd& g_field, double lambda,
                              double mu, const Vec2& body_force) {
  if (g_field.size() != ctx.point_count())
    throw std::invalid_argument(
        "assemble_elastic: degradation missing at some quadrature points");
  const EmbeddingMesh& mesh = ctx.mesh();
  const DofMap& dofs = ctx.dofs();
  const int ne = mesh.element_count();
  const int nb = dofs.functions_per_element();
  const int nbv = 2 * nb;

  std::vector<Eigen::MatrixXd> ke(ne);
  std::vector<Eigen::VectorXd> fe(ne);
#pragma omp parallel for schedule(dynamic, 4)
  for (int e = 0; e < ne; ++e) {
    Eigen::MatrixXd kaa = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::MatrixXd kbb = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::MatrixXd kab = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(nbv);
    for (int k = ctx.element_begin(e); k < ctx.element_end(e); ++k) {
      const double aw = ctx.point_alpha()[k] * ctx.point_weight()[k];
      const double c = g_field[k] * aw;
      const auto cx = ctx.basis_grad_x().col(k);
      const auto cy = ctx.basis_grad_y().col(k);
      kaa.noalias() += (c * (lambda + 2.0 * mu)) * (cx * cx.transpose());
      kaa.noalias() += (c * mu) * (cy * cy.transpose());
      kbb.noalias() += (c * (lambda + 2.0 * mu)) * (cy * cy.transpose());
      kbb.noalias() += (c * mu) * (cx * cx.transpose());
      kab.noalias() += (c * lambda) * (cx * cy.transpose());
      kab.noalias() += (c * mu) * (cy * cx.transpose());
      if (body_force != Vec2::Zero()) {
        const auto nv = ctx.basis_values().col(k);
        for (int i = 0; i < nb; ++i) {
          f[2 * i] += aw * nv[i] * body_force.x();
          f[2 * i + 1] += aw * nv[i] * body_force.y();
        }
      }
    }
    Eigen::MatrixXd k_full(nbv, nbv);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) {
        k_full(2 * i, 2 * j) = kaa(i, j);
        k_full(2 * i + 1, 2 * j + 1) = kbb(i, j);
        k_full(2 * i, 2 * j + 1) = kab(i, j);
        k_full(2 * i + 1, 2 * j) = kab(j, i);
      }
    ke[e] = std::move(k_full);
    fe[e] = std::move(f);
  }

  LinearSystem sys;
  sys.field = "u";
  sys.matrix = ctx.vector_pattern();
  sys.rhs = Eigen::VectorXd::Zero(dofs.vector_count());
  for (int e = 0; e < ne; ++e) {
    const Eigen::VectorXi& ed = dofs.element_scalar_dofs(e);
    for (int i = 0; i < nb; ++i)
      for (int a = 0; a < 2; ++a) {
        const int gi = 2 * ed[i] + a;
        sys.rhs[gi] += fe[e][2 * i + a];
        for (int j = 0; j < nb; ++j)
          for (int b = 0; b < 2; ++b)
            add_entry(sys.matrix, gi, 2 * ed[j] + b, ke[e](2 * i + a, 2 * j + b));
      }
  }

  for (const auto& bp : ctx.boundary_points()) {
    const BcView bc = bc_view(ctx, bp);
    const Eigen::VectorXi& ed = dofs.element_scalar_dofs(bp.element);
    const double bw = bc.beta * bp.weight;
    for (int c = 0; c < 2; ++c) {
      if (!(c == 0 ? bc.fix_x : bc.fix_y)) continue;
      for (int i = 0; i < nb; ++i) {
        const int gi = 2 * ed[i] + c;
        sys.rhs[gi] += bw * bc.value[c] * bp.basis[i];
        for (int j = 0; j < nb; ++j)
          add_entry(sys.matrix, gi, 2 * ed[j] + c, bw * bp.basis[i] * bp.basis[j]);
      }
    }
  }
  return sys;
}

LinearSystem assemble_phase(const AssemblyContext& ctx, int mode,
                            const Eigen::VectorXd& h_field, double l0,
                            double gc, double eta) {
  if (mode != 1 && mode != 2)
    throw std::invalid_argument("assemble_phase: mode must be 1 or 2");
  if (gc <= 0.0 || l0 <= 0.0)
    throw std::invalid_argument("assemble_phase: Gc and l0 must be positive");
  if (h_field.size() != ctx.point_count())
    throw std::invalid_argument("assemble_phase: history size mismatch");
  if (h_field.minCoeff() < 0.0)
    throw std::invalid_argument("assemble_phase: history must be non-negative");
  const DofMap& dofs = ctx.dofs();
  const int ne = ctx.mesh().element_count();
  const int nb = dofs.functions_per_element();

  std::vector<Eigen::MatrixXd> ke(ne);
  std::vector<Eigen::VectorXd> fe(ne);
#pragma omp parallel for schedule(dynamic, 4)
  for (int e = 0; e < ne; ++e) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(nb);
    for (int q = ctx.element_begin(e); q < ctx.element_end(e); ++q) {
      const double aw = ctx.point_alpha()[q] * ctx.point_weight()[q];
      const double react = aw * (4.0 * l0 * (1.0 - eta) * h_field[q] / gc + 1.0);
      const double grad = aw * 4.0 * l0 * l0;
      const auto nv = ctx.basis_values().col(q);
      const auto cx = ctx.basis_grad_x().col(q);
      const auto cy = ctx.basis_grad_y().col(q);
      k.noalias() += react * (nv * nv.transpose());
      k.noalias() += grad * (cx * cx.transpose() + cy * cy.transpose());
      f.noalias() += aw * nv;
    }
    ke[e] = std::move(k);
    fe[e] = std::move(f);
  }

  LinearSystem sys;
  sys.field = mode == 1 ? "s1" : "s2";
  sys.matrix = ctx.scalar_pattern();
  sys.rhs = Eigen::VectorXd::Zero(dofs.scalar_count());
  for (int e = 0; e < ne; ++e) {
    const Eigen::VectorXi& ed = dofs.element_scalar_dofs(e);
    for (int i = 0; i < nb; ++i) {
      sys.rhs[ed[i]] += fe[e][i];
      for (int j = 0; j < nb; ++j) add_entry(sys.matrix, ed[i], ed[j], ke[e](i, j));
    }
  }
  return sys;
}

double reaction_force(const AssemblyContext& ctx, const Eigen::VectorXd& u) {
  double force = 0.0;
  const int nb = ctx.dofs().functions_per_element();
  for (const auto& bp : ctx.boundary_points()) {
    const BcView bc = bc_view(ctx, bp);
    if (bc.load_direction == Vec2::Zero()) continue;
    const Eigen::VectorXi& ed = ctx.dofs().element_scalar_dofs(bp.element);
    Vec2 uh = Vec2::Zero();
    for (int i = 0; i < nb; ++i)
      for (int c = 0; c < 2; ++c) uh[c] += bp.basis[i] * u[2 * ed[i] + c];
    force += bc.beta * bp.weight * (bc.value - uh).dot(bc.load_direction);
  }
  return force;
}

void add_scalar_segment_penalty(LinearSystem& system, const AssemblyContext& ctx,
                                const Segment& segment, double beta,
                                double value) {
  const EmbeddingMesh& mesh = ctx.mesh();
  const int nb = ctx.dofs().functions_per_element();
  const QuadratureRule rule = gauss_legendre(2 * (mesh.degree + 1));
  const Vec2 d = segment.b - segment.a;
  const double len = d.norm();
  if (len <= 0.0) throw std::invalid_argument("segment penalty: zero length");
  std::vector<double> brk{0.0, 1.0};
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(d[axis]) < 1e-14 * len) continue;
    const double h = axis == 0 ? mesh.hx : mesh.hy;
    const int n = axis == 0 ? mesh.nx : mesh.ny;
    for (int i = 0; i <= n; ++i)
      append_sorted_unique(brk, (mesh.origin[axis] + i * h - segment.a[axis]) / d[axis],
                           0.0, 1.0);
  }
  std::sort(brk.begin(), brk.end());
  for (size_t s = 0; s + 1 < brk.size(); ++s) {
    const double mid = 0.5 * (brk[s] + brk[s + 1]);
    const double hw = 0.5 * (brk[s + 1] - brk[s]);
    if (hw <= 0.0) continue;
    for (int g = 0; g < rule.points.size(); ++g) {
      const Vec2 x = segment.a + (mid + hw * rule.points[g]) * d;
      const int e = mesh.element_of(x);
      const Eigen::VectorXd basis =
          tensor_basis(mesh.degree, mesh.to_reference(e, x)).values;
      const Eigen::VectorXi& ed = ctx.dofs().element_scalar_dofs(e);
      const double w = beta * rule.weights[g] * hw * len;
      for (int i = 0; i < nb; ++i) {
        system.rhs[ed[i]] += w * value * basis[i];
        for (int j = 0; j < nb; ++j)
          add_entry(system.matrix, ed[i], ed[j], w * basis[i] * basis[j]);
      }
    }
  }
}

EnergyBreakdown total_energy(const AssemblyContext& ctx, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& s1, const Eigen::VectorXd& s2,
                             const MaterialCard& card) {
  EnergyBreakdown out;
  const Eigen::VectorXd s1q = ctx.sample_scalar(s1);
  const Eigen::VectorXd s2q = ctx.sample_scalar(s2);
  const int nb = ctx.dofs().functions_per_element();
  for (int e = 0; e < ctx.mesh().element_count(); ++e) {
    const Eigen::VectorXi& ed = ctx.dofs().element_scalar_dofs(e);
    Eigen::VectorXd ux(nb), uy(nb), c1(nb), c2(nb);
    for (int i = 0; i < nb; ++i) {
      ux[i] = u[2 * ed[i]];
      uy[i] = u[2 * ed[i] + 1];
      c1[i] = s1[ed[i]];
      c2[i] = s2[ed[i]];
    }
    for (int k = ctx.element_begin(e); k < ctx.element_end(e); ++k) {
      const double aw = ctx.point_alpha()[k] * ctx.point_weight()[k];
      const auto cx = ctx.basis_grad_x().col(k);
      const auto cy = ctx.basis_grad_y().col(k);
      Mat2 grad;
      grad << ux.dot(cx), ux.dot(cy), uy.dot(cx), uy.dot(cy);
      const Mat2 eps = small_strain(grad);
      const double g = degradation(s1q[k], s2q[k], card.eta);
      out.elastic += aw * g * strain_energy(eps, card.lambda, card.mu);
      const Vec2 g1(c1.dot(cx), c1.dot(cy));
      const Vec2 g2(c2.dot(cx), c2.dot(cy));
      const double w1 = 1.0 - s1q[k], w2 = 1.0 - s2q[k];
      out.surface1 += aw * card.gc1 *
                      (w1 * w1 / (4.0 * card.l01) + card.l01 * g1.squaredNorm());
      out.surface2 += aw * card.gc2 *
                      (w2 * w2 / (4.0 * card.l02) + card.l02 * g2.squaredNorm());
    }
  }
  return out;
}

}  // namespace trifrac
