#include "trifrac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trifrac/basis.hpp"

namespace trifrac {

struct ImplicitShape::Node {
  enum Kind { kDisk, kHalfPlane, kCapsule, kUnion, kIntersection, kDifference };
  Kind kind;
  // primitives
  Vec2 p0 = Vec2::Zero(), p1 = Vec2::Zero();
  double scalar = 0.0;  // radius or half-width
  // operators
  std::shared_ptr<const Node> left, right;
};

namespace {

double node_value(const ImplicitShape::Node& n, const Vec2& x) {
  using Node = ImplicitShape::Node;
  switch (n.kind) {
    case Node::kDisk:
      return (x - n.p0).norm() - n.scalar;
    case Node::kHalfPlane:
      return (x - n.p0).dot(n.p1);
    case Node::kCapsule: {
      const Vec2 d = n.p1 - n.p0;
      const double len2 = d.squaredNorm();
      double t = len2 > 0.0 ? (x - n.p0).dot(d) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      return (x - (n.p0 + t * d)).norm() - n.scalar;
    }
    case Node::kUnion:
      return std::min(node_value(*n.left, x), node_value(*n.right, x));
    case Node::kIntersection:
      return std::max(node_value(*n.left, x), node_value(*n.right, x));
    case Node::kDifference:
      return std::max(node_value(*n.left, x), -node_value(*n.right, x));
  }
  return 0.0;
}

// Returns false if unbounded.
bool node_box(const ImplicitShape::Node& n, Box2& box) {
  using Node = ImplicitShape::Node;
  switch (n.kind) {
    case Node::kDisk:
      box = Box2(n.p0 - Vec2::Constant(n.scalar), n.p0 + Vec2::Constant(n.scalar));
      return true;
    case Node::kHalfPlane:
      return false;
    case Node::kCapsule: {
      box = Box2(n.p0.cwiseMin(n.p1) - Vec2::Constant(n.scalar),
                 n.p0.cwiseMax(n.p1) + Vec2::Constant(n.scalar));
      return true;
    }
    case Node::kUnion: {
      Box2 a, b;
      if (!node_box(*n.left, a) || !node_box(*n.right, b)) return false;
      a.extend(b);
      box = a;
      return true;
    }
    case Node::kIntersection: {
      Box2 a, b;
      const bool ba = node_box(*n.left, a), bb = node_box(*n.right, b);
      if (ba && bb)
        box = a.intersection(b);
      else if (ba)
        box = a;
      else if (bb)
        box = b;
      else
        return false;
      return true;
    }
    case Node::kDifference:
      return node_box(*n.left, box);
  }
  return false;
}

void node_segments(const ImplicitShape::Node& n, std::vector<Segment>& out) {
  using Node = ImplicitShape::Node;
  if (n.kind == Node::kCapsule) {
    out.push_back({n.p0, n.p1});
  } else if (n.left) {
    node_segments(*n.left, out);
    node_segments(*n.right, out);
  }
}

std::shared_ptr<const ImplicitShape::Node> make_op(
    ImplicitShape::Node::Kind kind, std::shared_ptr<const ImplicitShape::Node> a,
    std::shared_ptr<const ImplicitShape::Node> b) {
  auto n = std::make_shared<ImplicitShape::Node>();
  n->kind = kind;
  n->left = std::move(a);
  n->right = std::move(b);
  return n;
}

}  // namespace

ImplicitShape ImplicitShape::disk(const Vec2& center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("disk: radius must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Node::kDisk;
  n->p0 = center;
  n->scalar = radius;
  return ImplicitShape(std::move(n));
}

ImplicitShape ImplicitShape::half_plane(const Vec2& point, const Vec2& outward_normal) {
  const double len = outward_normal.norm();
  if (len <= 0.0) throw std::invalid_argument("half_plane: zero normal");
  auto n = std::make_shared<Node>();
  n->kind = Node::kHalfPlane;
  n->p0 = point;
  n->p1 = outward_normal / len;
  return ImplicitShape(std::move(n));
}

ImplicitShape ImplicitShape::capsule(const Vec2& a, const Vec2& b, double half_width) {
  if (half_width <= 0.0) throw std::invalid_argument("capsule: half-width must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Node::kCapsule;
  n->p0 = a;
  n->p1 = b;
  n->scalar = half_width;
  return ImplicitShape(std::move(n));
}

ImplicitShape ImplicitShape::union_of(ImplicitShape a, ImplicitShape b) {
  return ImplicitShape(make_op(Node::kUnion, std::move(a.root_), std::move(b.root_)));
}

ImplicitShape ImplicitShape::intersection_of(ImplicitShape a, ImplicitShape b) {
  return ImplicitShape(make_op(Node::kIntersection, std::move(a.root_), std::move(b.root_)));
}

ImplicitShape ImplicitShape::difference_of(ImplicitShape a, ImplicitShape b) {
  return ImplicitShape(make_op(Node::kDifference, std::move(a.root_), std::move(b.root_)));
}

double ImplicitShape::signed_value(const Vec2& x) const {
  return node_value(*root_, x);
}

Box2 ImplicitShape::bounding_box() const {
  Box2 box;
  if (!node_box(*root_, box))
    throw std::domain_error("bounding_box: shape is unbounded");
  return box;
}

std::vector<Segment> ImplicitShape::cut_segments() const {
  std::vector<Segment> out;
  node_segments(*root_, out);
  return out;
}

double indicator(const ImplicitShape& shape, const Vec2& x, double alpha_fict) {
  if (alpha_fict <= 0.0)
    throw std::invalid_argument("indicator: alpha_fict must be positive");
  return shape.contains(x) ? 1.0 : alpha_fict;
}

void DnbdGeometry::validate() const {
  if (radius <= 0.0) throw std::invalid_argument("dnbd: radius must be positive");
  if (notch_width <= 0.0) throw std::invalid_argument("dnbd: notch width must be positive");
  if (notch_top < 0.0 || notch_bottom < 0.0)
    throw std::invalid_argument("dnbd: notch lengths must be non-negative");
  if (notch_top + notch_bottom >= 2.0 * radius)
    throw std::invalid_argument("dnbd: notches leave no ligament");
  if (arc_length <= 0.0 || arc_length >= M_PI * radius)
    throw std::invalid_argument("dnbd: loading arc length must be in (0, pi*R)");
  if (thickness <= 0.0) throw std::invalid_argument("dnbd: thickness must be positive");
  if (std::abs(notch_offset) / 2.0 + notch_width / 2.0 >= radius)
    throw std::invalid_argument("dnbd: notch offset exceeds the disk");
}

Vec2 DnbdGeometry::notch_axis() const {
  const double a = load_angle_deg * M_PI / 180.0;
  return Vec2(std::sin(a), std::cos(a));
}

namespace {

// Axial rim coordinate of a notch centerline offset by +-delta/2.
double rim_axial(const DnbdGeometry& g) {
  const double h = g.notch_offset / 2.0;
  return std::sqrt(g.radius * g.radius - h * h);
}

}  // namespace

Vec2 DnbdGeometry::top_tip() const {
  const Vec2 t = notch_axis();
  const Vec2 m(t.y(), -t.x());
  return (notch_offset / 2.0) * m + (rim_axial(*this) - notch_top) * t;
}

Vec2 DnbdGeometry::bottom_tip() const {
  const Vec2 t = notch_axis();
  const Vec2 m(t.y(), -t.x());
  return (-notch_offset / 2.0) * m - (rim_axial(*this) - notch_bottom) * t;
}

ImplicitShape build_dnbd(const DnbdGeometry& geom) {
  geom.validate();
  ImplicitShape shape = ImplicitShape::disk(Vec2::Zero(), geom.radius);
  const Vec2 t = geom.notch_axis();
  const Vec2 m(t.y(), -t.x());
  const double w2 = geom.notch_width / 2.0;
  const double s_rim = rim_axial(geom);
  auto add_notch = [&](double sign, double length) {
    if (length <= 0.0) return;
    const Vec2 off = sign * (geom.notch_offset / 2.0) * m;
    const Vec2 inner = off + sign * (s_rim - length + w2) * t;
    const Vec2 outer = off + sign * (geom.radius + geom.notch_width) * t;
    shape = ImplicitShape::difference_of(
        shape, ImplicitShape::capsule(inner, outer, w2));
  };
  add_notch(+1.0, geom.notch_top);
  add_notch(-1.0, geom.notch_bottom);
  return shape;
}

double dnbd_analytic_area(const DnbdGeometry& geom) {
  geom.validate();
  const double R = geom.radius;
  const double w = geom.notch_width;
  const double s_rim = rim_axial(geom);
  // Antiderivative of the rim chord sqrt(R^2 - v^2) across the notch strip.
  auto strip = [R](double v) {
    return 0.5 * (v * std::sqrt(R * R - v * v) + R * R * std::asin(v / R));
  };
  auto cut_area = [&](double length) {
    if (length <= 0.0) return 0.0;
    const double v0 = geom.notch_offset / 2.0 - w / 2.0;
    const double v1 = geom.notch_offset / 2.0 + w / 2.0;
    const double s_in = s_rim - length + w / 2.0;
    return strip(v1) - strip(v0) - w * s_in + 0.5 * M_PI * w * w / 4.0;
  };
  return M_PI * R * R - cut_area(geom.notch_top) - cut_area(geom.notch_bottom);
}

namespace {

bool segment_hits_box(const Segment& s, const Box2& box) {
  // Liang-Barsky clip of the segment against the box.
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = s.b - s.a;
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(d[axis]) < 1e-300) {
      if (s.a[axis] < box.min()[axis] || s.a[axis] > box.max()[axis]) return false;
    } else {
      double ta = (box.min()[axis] - s.a[axis]) / d[axis];
      double tb = (box.max()[axis] - s.a[axis]) / d[axis];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return false;
    }
  }
  return true;
}

struct Partitioner {
  const ImplicitShape& shape;
  const Box2 element;
  int points_per_dir;
  double alpha_fict;
  QuadratureRule rule;
  std::vector<Segment> segments;
  std::vector<IntegrationCell>* out;

  Vec2 to_phys(const Vec2& xi) const {
    return element.min() +
           0.5 * (xi + Vec2::Ones()).cwiseProduct(element.sizes());
  }

  // Conservative kind estimate from corner, grid and Gauss samples plus the
  // capsule-centerline safeguard.
  CellKind classify(const Box2& ref, int remaining) const {
    const Box2 phys(to_phys(ref.min()), to_phys(ref.max()));
    for (const Segment& s : segments)
      if (segment_hits_box(s, phys)) return CellKind::kCut;
    bool any_in = false, any_out = false;
    auto sample = [&](const Vec2& x) {
      (shape.contains(x) ? any_in : any_out) = true;
    };
    const int g = 1 << std::min(remaining + 1, 3);
    for (int i = 0; i <= g; ++i)
      for (int j = 0; j <= g; ++j)
        sample(phys.min() + Vec2(i / double(g) * phys.sizes().x(),
                                 j / double(g) * phys.sizes().y()));
    for (int i = 0; i < points_per_dir && !(any_in && any_out); ++i)
      for (int j = 0; j < points_per_dir; ++j) {
        const Vec2 xi(rule.points[i], rule.points[j]);
        sample(phys.min() +
               0.5 * (xi + Vec2::Ones()).cwiseProduct(phys.sizes()));
      }
    if (any_in && any_out) return CellKind::kCut;
    return any_in ? CellKind::kPhysical : CellKind::kFictitious;
  }

  void emit_leaf(const Box2& ref, CellKind kind) const {
    IntegrationCell cell;
    cell.ref_bounds = ref;
    cell.kind = kind;
    const Vec2 half = 0.5 * ref.sizes();
    const Vec2 mid = ref.center();
    const double scale = half.x() * half.y();
    cell.points.reserve(points_per_dir * points_per_dir);
    for (int i = 0; i < points_per_dir; ++i)
      for (int j = 0; j < points_per_dir; ++j) {
        CellPoint pt;
        pt.xi = mid + half.cwiseProduct(Vec2(rule.points[i], rule.points[j]));
        pt.weight = rule.weights[i] * rule.weights[j] * scale;
        switch (kind) {
          case CellKind::kPhysical:
            pt.alpha = 1.0;
            break;
          case CellKind::kFictitious:
            pt.alpha = alpha_fict;
            break;
          case CellKind::kCut:
            pt.alpha = indicator(shape, to_phys(pt.xi), alpha_fict);
            break;
        }
        cell.points.push_back(pt);
      }
    out->push_back(std::move(cell));
  }

  void recurse(const Box2& ref, int remaining) const {
    const CellKind kind = classify(ref, remaining);
    if (kind != CellKind::kCut || remaining == 0) {
      emit_leaf(ref, kind);
      return;
    }
    const Vec2 mid = ref.center();
    recurse(Box2(ref.min(), mid), remaining - 1);
    recurse(Box2(Vec2(mid.x(), ref.min().y()), Vec2(ref.max().x(), mid.y())),
            remaining - 1);
    recurse(Box2(Vec2(ref.min().x(), mid.y()), Vec2(mid.x(), ref.max().y())),
            remaining - 1);
    recurse(Box2(mid, ref.max()), remaining - 1);
  }
};

}  // namespace

std::vector<IntegrationCell> partition_element(const Box2& element,
                                               const ImplicitShape& shape,
                                               int depth, int points_per_dir,
                                               double alpha_fict) {
  if (depth < 0) throw std::invalid_argument("partition_element: depth must be >= 0");
  if (points_per_dir < 1)
    throw std::invalid_argument("partition_element: need at least one point");
  std::vector<IntegrationCell> cells;
  Partitioner part{shape,      element,
                   points_per_dir, alpha_fict,
                   gauss_legendre(points_per_dir), shape.cut_segments(),
                   &cells};
  part.recurse(Box2(Vec2(-1.0, -1.0), Vec2(1.0, 1.0)), depth);
  return cells;
}

double measure_physical_area(const ImplicitShape& shape,
                             const EmbeddingMesh& mesh, int depth) {
  mesh.validate();
  double area = 0.0;
  const int npts = mesh.degree + 1;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto cells = partition_element(mesh.element_box(e), shape, depth,
                                         npts, 1e-8);
    for (const IntegrationCell& cell : cells)
      for (const CellPoint& pt : cell.points)
        if (pt.alpha == 1.0) area += pt.weight * mesh.jacobian();
  }
  return area;
}

}  // namespace trifrac
