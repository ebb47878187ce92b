#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "trifrac/mesh.hpp"
#include "trifrac/types.hpp"

namespace trifrac {

struct Segment {
  Vec2 a, b;
};

/// Immutable CSG tree over {disk, half-plane, capsule} with
/// {union, difference, intersection}. Classification is exact per node sign
/// and deterministic; boundary points count as inside. Lengths in mm.
class ImplicitShape {
 public:
  static ImplicitShape disk(const Vec2& center, double radius);
  /// Half-plane of material on the side the normal points away from:
  /// inside iff (x - point) . normal <= 0.
  static ImplicitShape half_plane(const Vec2& point, const Vec2& outward_normal);
  static ImplicitShape capsule(const Vec2& a, const Vec2& b, double half_width);
  static ImplicitShape union_of(ImplicitShape a, ImplicitShape b);
  static ImplicitShape intersection_of(ImplicitShape a, ImplicitShape b);
  static ImplicitShape difference_of(ImplicitShape a, ImplicitShape b);

  /// <= 0 inside. Sign-exact, not a true distance in general.
  double signed_value(const Vec2& x) const;
  bool contains(const Vec2& x) const { return signed_value(x) <= 0.0; }

  /// Tight box around the material. Throws if the tree is unbounded
  /// (e.g. a bare half-plane).
  Box2 bounding_box() const;

  /// Centerlines of all capsules that carve material out (used as a cut
  /// safeguard for notches thinner than the sampling grid).
  std::vector<Segment> cut_segments() const;

  struct Node;  // defined in geometry.cpp

 private:
  explicit ImplicitShape(std::shared_ptr<const Node> root)
      : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

/// Finite-cell indicator: 1 in the physical domain, alpha_fict outside.
double indicator(const ImplicitShape& shape, const Vec2& x, double alpha_fict);

/// Double-edge notched Brazilian disk. The notch line passes through the
/// disk center at load_angle_deg from the load (vertical) axis; the notches
/// enter from opposite rim points and may be shifted by +-offset/2
/// perpendicular to the line. Notch tips are semicircular caps of radius
/// notch_width/2, so the notch bottoms sit exactly notch length below the rim.
struct DnbdGeometry {
  double radius = 47.0;
  double notch_top = 37.5;
  double notch_bottom = 37.5;
  double notch_width = 1.1;
  double notch_offset = 0.0;
  double load_angle_deg = 15.0;
  double arc_length = 10.0;   // loading arc on the rim
  double thickness = 20.0;    // out-of-plane, used only for force reporting

  void validate() const;

  /// Unit vector from the center toward the top notch.
  Vec2 notch_axis() const;
  /// Ligament endpoints (deepest material points of the notch cuts).
  Vec2 top_tip() const;
  Vec2 bottom_tip() const;
  double ligament() const { return 2.0 * radius - notch_top - notch_bottom; }
};

ImplicitShape build_dnbd(const DnbdGeometry& geom);

/// Exact physical area of the DNBD shape (disk minus the two rim-clipped
/// capsule cuts).
double dnbd_analytic_area(const DnbdGeometry& geom);

enum class CellKind { kPhysical, kFictitious, kCut };

struct CellPoint {
  Vec2 xi;        // parent-element reference coordinates
  double weight;  // reference measure (all leaves of one element sum to 4)
  double alpha;   // exactly 1 or alpha_fict
};

struct IntegrationCell {
  Box2 ref_bounds;  // in parent-element reference coordinates
  CellKind kind = CellKind::kPhysical;
  std::vector<CellPoint> points;
};

/// Quadtree partition of one element (given by its physical box): cut cells
/// subdivide into 4 children up to `depth`, uncut cells stop early, and each
/// leaf carries a tensor Gauss rule with `points_per_dir` points per
/// direction. Cells crossed by a capsule centerline are always treated as
/// cut so thin notches cannot slip between samples.
std::vector<IntegrationCell> partition_element(const Box2& element,
                                               const ImplicitShape& shape,
                                               int depth, int points_per_dir,
                                               double alpha_fict);

/// Diagnostic: quadtree-integrated physical area covered by the mesh.
double measure_physical_area(const ImplicitShape& shape,
                             const EmbeddingMesh& mesh, int depth);

}  // namespace trifrac
