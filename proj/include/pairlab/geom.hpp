#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "pairlab/common.hpp"
#include "pairlab/interval.hpp"

namespace pairlab {

// ---------------------------------------------------------------------------
// Boundary fragments: oriented segments and circular arcs. The region they
// bound always lies on the LEFT of the travel direction.
// ---------------------------------------------------------------------------

struct Segment {
  Vec2 a, b;
};

struct Arc {
  Vec2 center;
  double radius = 1.0;
  double t0 = 0.0, t1 = 0.0;  // traversed from t0 to t1; t1 > t0 means ccw
};

struct Fragment {
  std::variant<Segment, Arc> g;

  Fragment() = default;
  Fragment(Segment s) : g(s) {}
  Fragment(Arc a) : g(a) {}

  bool is_arc() const { return std::holds_alternative<Arc>(g); }
  const Arc& arc() const { return std::get<Arc>(g); }
  const Segment& seg() const { return std::get<Segment>(g); }

  Vec2 point_at(double u) const;   // u in [0,1]
  Vec2 midpoint() const { return point_at(0.5); }
  Vec2 tangent_at(double u) const;  // unit, travel direction
  Vec2 left_normal_at(double u) const { return tangent_at(u).perp(); }
  double length() const;
  Fragment reversed() const;
  Fragment subfragment(double u0, double u1) const;
};

using FragmentList = std::vector<Fragment>;

double fragments_length(const FragmentList& fs);

// ---------------------------------------------------------------------------
// Sets of finite perimeter (closed analytic family)
// ---------------------------------------------------------------------------

class FinitePerimeterSet;
using SetPtr = std::shared_ptr<const FinitePerimeterSet>;

enum class BoolOp { Union, Intersection, Difference };

struct HalfPlaneSet {
  Vec2 normal;    // unit, points into the set
  double offset;  // set = {p : normal . p >= offset}
};

struct DiscSet {
  Vec2 center;
  double radius;
};

struct PolygonSet {
  std::vector<Vec2> vertices;  // simple, counterclockwise
};

struct Product1DSet {
  IntervalUnion set1d;
  int axis;  // 0: {p.x in set1d}, 1: {p.y in set1d}
};

struct BooleanSet {
  BoolOp op;
  SetPtr lhs, rhs;
};

inline constexpr int kMaxBooleanDepth = 8;

class FinitePerimeterSet {
 public:
  using Variant =
      std::variant<HalfPlaneSet, DiscSet, PolygonSet, Product1DSet, BooleanSet>;

  static FinitePerimeterSet half_plane(Vec2 normal, double offset);
  static FinitePerimeterSet disc(Vec2 center, double radius);
  static FinitePerimeterSet polygon(std::vector<Vec2> vertices);
  static FinitePerimeterSet box(Vec2 lo, Vec2 hi);
  static FinitePerimeterSet product1d(IntervalUnion u, int axis);
  static FinitePerimeterSet boolean(BoolOp op, FinitePerimeterSet a,
                                    FinitePerimeterSet b);

  const Variant& node() const { return v_; }
  int boolean_depth() const { return depth_; }

  enum class Where { Inside, Outside, Boundary };
  Where where(Vec2 p, double tol = kGeomTol) const;

  // One-sided membership: is p + 0+ * dir in the (closed) set? Exact for
  // points on the boundary; equals where()!=Outside elsewhere.
  bool side_contains(Vec2 p, Vec2 dir) const;

  // Intersections of the ray p + s*dir, s in [0, smax], with the set.
  IntervalUnion ray_intervals(Vec2 p, Vec2 dir, double smax) const;

  // Directions (angles at x) where the radial structure of the set within
  // B_r(x) changes: tangencies, vertices, curve/circle crossings.
  void critical_angles(Vec2 x, double r, std::vector<double>& out) const;

  // Axis-aligned bounding box; nullopt when unbounded.
  std::optional<std::pair<Vec2, Vec2>> bbox() const;

  // Affine image q = shift + scale * p (scale > 0). Supported by the whole
  // family since homotheties preserve axis alignment.
  FinitePerimeterSet scaled(Vec2 shift, double scale) const;

  FinitePerimeterSet complement_within(const FinitePerimeterSet& window) const;

 private:
  explicit FinitePerimeterSet(Variant v, int depth)
      : v_(std::move(v)), depth_(depth) {}
  Variant v_;
  int depth_ = 0;
};

// ---------------------------------------------------------------------------
// Probes
// ---------------------------------------------------------------------------

enum class HalfBallSide { Interior, Exterior };

struct BallProbe {
  Vec2 center;
  double r;
};

struct HalfBallProbe {
  Vec2 center;
  double r;
  Vec2 normal;  // unit; Interior side = {(y-x).normal > 0}
  HalfBallSide side;
};

// C_{r,rho}(x, axis): |(y-x).axis| < r, |(y-x).axis_perp| < rho
struct CylinderProbe {
  Vec2 center;
  Vec2 axis;   // unit
  double r;    // axial half-width
  double rho;  // transverse half-width
};

struct BoxProbe {
  Vec2 lo, hi;
};

using Probe = std::variant<BallProbe, HalfBallProbe, CylinderProbe, BoxProbe>;

void validate(const Probe& probe);
FinitePerimeterSet probe_set(const Probe& probe);
double probe_radius_bound(const Probe& probe);

// ---------------------------------------------------------------------------
// Regions: bounded areas described by their oriented boundary fragments.
// ---------------------------------------------------------------------------

struct Region {
  FragmentList boundary;

  double area() const;  // Green's theorem, exact for this family
  bool empty() const { return boundary.empty(); }
};

// Quadrature-ready decomposition: signed fan triangles plus signed circular
// segments; patch areas are exact and sum to the region area.
struct TrianglePatch {
  Vec2 a, b, c;
  double signed_area;
};

struct CircSegmentPatch {
  Vec2 center;
  double radius;
  double t0, t1;  // arc span (<= pi/3 after subdivision)
  double signed_area;
};

struct RegionDecomposition {
  std::vector<TrianglePatch> triangles;
  std::vector<CircSegmentPatch> segments;
  FragmentList boundary;
  double area = 0.0;
};

// ---------------------------------------------------------------------------
// Module operations
// ---------------------------------------------------------------------------

// Oriented boundary of set ∩ window_set, where `window` must be bounded.
Region region_of(const FinitePerimeterSet& set, const Region& window,
                 const FinitePerimeterSet& window_set);

Region region_of_probe(const Probe& probe);

// set ∩ probe with exact areas.
RegionDecomposition clip(const FinitePerimeterSet& set, const Probe& probe);
RegionDecomposition decompose(const Region& region);

Region clip_region(const FinitePerimeterSet& set, const Probe& probe);

// Boundary fragments of ∂*E for a bounded set.
FragmentList reduced_boundary(const FinitePerimeterSet& set);

// H^1(∂*E ∩ window); window omitted = whole plane (set must be bounded).
double perimeter(const FinitePerimeterSet& set,
                 const std::optional<Probe>& window = std::nullopt);

// Measure-theoretic interior unit normal at a boundary point.
Vec2 interior_normal(const FinitePerimeterSet& set, Vec2 x);

enum class PointClass { Interior, Exterior, MeasureBoundary };
PointClass classify_point(const FinitePerimeterSet& set, Vec2 x);

struct DensityEstimate {
  std::vector<std::pair<double, double>> samples;  // (radius, density)
  double liminf_estimate = 0.0;
  double limsup_estimate = 0.0;
};

DensityEstimate density_estimate(const FinitePerimeterSet& set, Vec2 x,
                                 const std::vector<double>& radii);

// Area of set ∩ B_r(x); exact, with a closed form for Product1D sets.
double area_in_ball(const FinitePerimeterSet& set, Vec2 x, double r);

// Split fragments against a set boundary and keep the requested parts.
// include_boundary selects whether pieces lying on ∂B are kept.
FragmentList clip_fragments(const FragmentList& curve,
                            const FinitePerimeterSet& b, bool include_boundary);

// Pieces of `curve` lying on ∂B (used for ledger bookkeeping).
FragmentList fragments_on_boundary(const FragmentList& curve,
                                   const FinitePerimeterSet& b);

// Fragment boolean used by region_of; exposed for tests.
Region fragment_boolean(BoolOp op, const Region& ra,
                        const FinitePerimeterSet& sa, const Region& rb,
                        const FinitePerimeterSet& sb);

// Region of set ∩ [lo,hi] box.
Region region_in_box(const FinitePerimeterSet& set, Vec2 lo, Vec2 hi);

// Boundary pieces of ∂*set within the given box.
FragmentList boundary_within(const FinitePerimeterSet& set, Vec2 lo, Vec2 hi);

// Overlap pieces of two fragment families lying on a common curve
// (same geometric locus); orientation taken from `a`.
FragmentList coincident_overlap(const Fragment& a, const Fragment& b);

// Split f at every intersection with the cutter fragments.
std::vector<Fragment> split_fragment_against(const Fragment& f,
                                             const FragmentList& cutters);

// Does the point lie on the fragment (within a curvature-aware tolerance)?
bool fragment_contains_point(const Fragment& f, Vec2 p);

}  // namespace pairlab
