#include "pairlab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pairlab {

namespace {

constexpr double kMinPieceLength = 1e-13;
constexpr int kMaxSlabs = 4096;

double wrap_to(double t, double lo, double hi) {
  // shift t by multiples of 2*pi into [lo, hi] if possible
  while (t < lo - kGeomTol) t += 2.0 * kPi;
  while (t > hi + kGeomTol) t -= 2.0 * kPi;
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// Fragment basics
// ---------------------------------------------------------------------------

Vec2 Fragment::point_at(double u) const {
  if (is_arc()) {
    const Arc& a = arc();
    double t = a.t0 + u * (a.t1 - a.t0);
    return a.center + a.radius * dir_of(t);
  }
  const Segment& s = seg();
  return s.a + u * (s.b - s.a);
}

Vec2 Fragment::tangent_at(double u) const {
  if (is_arc()) {
    const Arc& a = arc();
    double t = a.t0 + u * (a.t1 - a.t0);
    Vec2 radial = dir_of(t);
    Vec2 tang = radial.perp();
    return (a.t1 >= a.t0) ? tang : -tang;
  }
  const Segment& s = seg();
  return (s.b - s.a).normalized();
}

double Fragment::length() const {
  if (is_arc()) {
    const Arc& a = arc();
    return a.radius * std::abs(a.t1 - a.t0);
  }
  const Segment& s = seg();
  return (s.b - s.a).norm();
}

Fragment Fragment::reversed() const {
  if (is_arc()) {
    Arc a = arc();
    std::swap(a.t0, a.t1);
    return Fragment(a);
  }
  Segment s = seg();
  std::swap(s.a, s.b);
  return Fragment(s);
}

Fragment Fragment::subfragment(double u0, double u1) const {
  if (is_arc()) {
    Arc a = arc();
    double span = a.t1 - a.t0;
    Arc out = a;
    out.t0 = a.t0 + u0 * span;
    out.t1 = a.t0 + u1 * span;
    return Fragment(out);
  }
  const Segment& s = seg();
  return Fragment(Segment{s.a + u0 * (s.b - s.a), s.a + u1 * (s.b - s.a)});
}

double fragments_length(const FragmentList& fs) {
  double L = 0.0;
  for (const auto& f : fs) L += f.length();
  return L;
}

// ---------------------------------------------------------------------------
// Fragment intersections / splitting
// ---------------------------------------------------------------------------

namespace {

// param of p on fragment f, if p lies on it (within tol)
std::optional<double> param_on(const Fragment& f, Vec2 p, double tol = kGeomTol) {
  if (f.is_arc()) {
    const Arc& a = f.arc();
    double d = dist(p, a.center);
    if (std::abs(d - a.radius) > tol) return std::nullopt;
    double th = std::atan2(p.y - a.center.y, p.x - a.center.x);
    double lo = std::min(a.t0, a.t1), hi = std::max(a.t0, a.t1);
    th = wrap_to(th, lo, hi);
    double atol = tol / std::max(a.radius, 1e-6) + 1e-12;
    if (th < lo - atol || th > hi + atol) return std::nullopt;
    double span = a.t1 - a.t0;
    if (std::abs(span) < 1e-15) return std::nullopt;
    return (th - a.t0) / span;
  }
  const Segment& s = f.seg();
  Vec2 d = s.b - s.a;
  double len2 = d.norm2();
  if (len2 == 0.0) return std::nullopt;
  double u = (p - s.a).dot(d) / len2;
  Vec2 q = s.a + u * d;
  if (dist(q, p) > tol) return std::nullopt;
  if (u < -tol || u > 1.0 + tol) return std::nullopt;
  return u;
}

void append_param(std::vector<double>& ps, double u) {
  if (u > 1e-12 && u < 1.0 - 1e-12) ps.push_back(u);
}

// intersection points of nearly-flat huge arcs carry roundoff amplified by
// the radius; accept them with a curvature-aware tolerance
double pair_tol(const Fragment& f, const Fragment& g) {
  double scale = 1.0;
  if (f.is_arc()) scale = std::max(scale, f.arc().radius);
  if (g.is_arc()) scale = std::max(scale, g.arc().radius);
  return kGeomTol * (1.0 + scale);
}

// stable line-circle intersection: params on p(u) = a + u d with |p - c| = R,
// via the closest-approach point (avoids the B^2 - 4AC cancellation)
int line_circle_params(Vec2 a, Vec2 d, Vec2 c, double R, double out[2]) {
  double len2 = d.norm2();
  if (len2 == 0.0) return 0;
  double ustar = (c - a).dot(d) / len2;
  Vec2 q = a + ustar * d;
  double h2 = R * R - (q - c).norm2();
  if (h2 < 0.0) return 0;
  double du = std::sqrt(h2 / len2);
  out[0] = ustar - du;
  out[1] = ustar + du;
  return du == 0.0 ? 1 : 2;
}

// params on f where it must be split because of fragment g
void split_params_against(const Fragment& f, const Fragment& g,
                          std::vector<double>& ps) {
  if (!f.is_arc() && !g.is_arc()) {
    const Segment& s1 = f.seg();
    const Segment& s2 = g.seg();
    Vec2 d1 = s1.b - s1.a, d2 = s2.b - s2.a;
    double denom = d1.cross(d2);
    double scale = std::max(d1.norm(), d2.norm());
    if (std::abs(denom) <= 1e-14 * scale * scale) {
      // parallel; collinear overlap splits at the other's endpoints
      if (std::abs((s2.a - s1.a).cross(d1)) <= kGeomTol * std::max(1.0, d1.norm())) {
        if (auto u = param_on(f, s2.a)) append_param(ps, *u);
        if (auto u = param_on(f, s2.b)) append_param(ps, *u);
      }
      return;
    }
    double u = (s2.a - s1.a).cross(d2) / denom;
    double v = (s2.a - s1.a).cross(d1) / denom;
    if (v >= -1e-12 && v <= 1.0 + 1e-12) append_param(ps, u);
    return;
  }
  if (!f.is_arc() && g.is_arc()) {
    const Segment& s = f.seg();
    const Arc& a = g.arc();
    double ptol = pair_tol(f, g);
    double us[2];
    int n = line_circle_params(s.a, s.b - s.a, a.center, a.radius, us);
    for (int i = 0; i < n; ++i) {
      Vec2 p = s.a + us[i] * (s.b - s.a);
      if (param_on(g, p, ptol)) append_param(ps, us[i]);
    }
    return;
  }
  if (f.is_arc() && !g.is_arc()) {
    const Segment& s = g.seg();
    const Arc& a = f.arc();
    double ptol = pair_tol(f, g);
    double vs[2];
    int n = line_circle_params(s.a, s.b - s.a, a.center, a.radius, vs);
    for (int i = 0; i < n; ++i) {
      if (vs[i] < -1e-12 || vs[i] > 1.0 + 1e-12) continue;
      Vec2 p = s.a + vs[i] * (s.b - s.a);
      if (auto u = param_on(f, p, ptol)) append_param(ps, *u);
    }
    return;
  }
  // arc-arc
  const Arc& a1 = f.arc();
  const Arc& a2 = g.arc();
  double ptol = pair_tol(f, g);
  double D = dist(a1.center, a2.center);
  if (D <= kGeomTol && std::abs(a1.radius - a2.radius) <= kGeomTol) {
    // same circle: split at the other's endpoints
    for (double uu : {0.0, 1.0}) {
      Vec2 p = g.point_at(uu);
      if (auto u = param_on(f, p)) append_param(ps, *u);
    }
    return;
  }
  if (D > a1.radius + a2.radius + kGeomTol) return;
  if (D < std::abs(a1.radius - a2.radius) - kGeomTol) return;
  if (D == 0.0) return;
  double a0 = (a1.radius * a1.radius - a2.radius * a2.radius + D * D) / (2.0 * D);
  double h2 = a1.radius * a1.radius - a0 * a0;
  double h = std::sqrt(std::max(0.0, h2));
  Vec2 u = (a2.center - a1.center) / D;
  for (double sgn : {1.0, -1.0}) {
    Vec2 p = a1.center + a0 * u + sgn * h * u.perp();
    // crude points lose accuracy when one radius is large; polish by
    // alternating projection onto the two circles
    for (int it = 0; it < 6; ++it) {
      Vec2 w2 = p - a2.center;
      double n2 = w2.norm();
      if (n2 > 0.0) p = a2.center + (a2.radius / n2) * w2;
      Vec2 w1 = p - a1.center;
      double n1 = w1.norm();
      if (n1 > 0.0) p = a1.center + (a1.radius / n1) * w1;
    }
    if (!param_on(g, p, ptol)) continue;
    if (auto pu = param_on(f, p, ptol)) append_param(ps, *pu);
    if (h < 1e-12) break;  // tangential: single point
  }
}

std::vector<Fragment> split_fragment(const Fragment& f,
                                     const FragmentList& others) {
  std::vector<double> ps;
  for (const auto& g : others) split_params_against(f, g, ps);
  ps.push_back(0.0);
  ps.push_back(1.0);
  std::sort(ps.begin(), ps.end());
  std::vector<Fragment> pieces;
  double flen = f.length();
  for (size_t i = 0; i + 1 < ps.size(); ++i) {
    if ((ps[i + 1] - ps[i]) * flen < kMinPieceLength) continue;
    pieces.push_back(f.subfragment(ps[i], ps[i + 1]));
  }
  return pieces;
}

}  // namespace

std::vector<Fragment> split_fragment_against(const Fragment& f,
                                             const FragmentList& cutters) {
  return split_fragment(f, cutters);
}

bool fragment_contains_point(const Fragment& f, Vec2 p) {
  double tol = kGeomTol * (1.0 + (f.is_arc() ? f.arc().radius : 0.0));
  return param_on(f, p, tol).has_value();
}

// ---------------------------------------------------------------------------
// FinitePerimeterSet construction
// ---------------------------------------------------------------------------

FinitePerimeterSet FinitePerimeterSet::half_plane(Vec2 normal, double offset) {
  return FinitePerimeterSet(HalfPlaneSet{normal.normalized(), offset}, 0);
}

FinitePerimeterSet FinitePerimeterSet::disc(Vec2 center, double radius) {
  if (!(radius > 0.0)) fail("DegenerateProbe", "disc radius must be positive");
  return FinitePerimeterSet(DiscSet{center, radius}, 0);
}

FinitePerimeterSet FinitePerimeterSet::polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) fail("InvalidPolygon", "need at least 3 vertices");
  double area2 = 0.0;
  size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    Vec2 p = vertices[i], q = vertices[(i + 1) % n];
    area2 += p.cross(q);
  }
  if (std::abs(area2) < 1e-14) fail("InvalidPolygon", "degenerate polygon");
  if (area2 < 0.0) std::reverse(vertices.begin(), vertices.end());
  // simplicity: non-adjacent edges must not intersect
  for (size_t i = 0; i < n; ++i) {
    Segment ei{vertices[i], vertices[(i + 1) % n]};
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      Segment ej{vertices[j], vertices[(j + 1) % n]};
      Vec2 d1 = ei.b - ei.a, d2 = ej.b - ej.a;
      double denom = d1.cross(d2);
      if (std::abs(denom) < 1e-14) continue;
      double u = (ej.a - ei.a).cross(d2) / denom;
      double v = (ej.a - ei.a).cross(d1) / denom;
      if (u > 1e-12 && u < 1.0 - 1e-12 && v > 1e-12 && v < 1.0 - 1e-12)
        fail("InvalidPolygon", "polygon is self-intersecting");
    }
  }
  return FinitePerimeterSet(PolygonSet{std::move(vertices)}, 0);
}

FinitePerimeterSet FinitePerimeterSet::box(Vec2 lo, Vec2 hi) {
  return polygon({{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}});
}

FinitePerimeterSet FinitePerimeterSet::product1d(IntervalUnion u, int axis) {
  if (axis != 0 && axis != 1) fail("BadArgument", "axis must be 0 or 1");
  return FinitePerimeterSet(Product1DSet{std::move(u), axis}, 0);
}

FinitePerimeterSet FinitePerimeterSet::boolean(BoolOp op, FinitePerimeterSet a,
                                               FinitePerimeterSet b) {
  int depth = std::max(a.depth_, b.depth_) + 1;
  if (depth > kMaxBooleanDepth)
    fail("UnsupportedBoolean", "boolean tree exceeds depth bound " +
                                   std::to_string(kMaxBooleanDepth));
  return FinitePerimeterSet(
      BooleanSet{op, std::make_shared<FinitePerimeterSet>(std::move(a)),
                 std::make_shared<FinitePerimeterSet>(std::move(b))},
      depth);
}

// ---------------------------------------------------------------------------
// Membership predicates
// ---------------------------------------------------------------------------

namespace {

// is direction d within the ccw sweep from u to v (inclusive, tol in angle)?
bool dir_in_ccw_range(Vec2 d, Vec2 u, Vec2 v) {
  double au = std::atan2(u.y, u.x);
  double ad = std::atan2(d.y, d.x);
  double av = std::atan2(v.y, v.x);
  double sweep = av - au;
  while (sweep < 0.0) sweep += 2.0 * kPi;
  double off = ad - au;
  while (off < 0.0) off += 2.0 * kPi;
  return off <= sweep + 1e-12;
}

}  // namespace

FinitePerimeterSet::Where FinitePerimeterSet::where(Vec2 p, double tol) const {
  using W = Where;
  if (auto* hp = std::get_if<HalfPlaneSet>(&v_)) {
    double s = hp->normal.dot(p) - hp->offset;
    if (std::abs(s) <= tol) return W::Boundary;
    return s > 0.0 ? W::Inside : W::Outside;
  }
  if (auto* d = std::get_if<DiscSet>(&v_)) {
    double s = dist(p, d->center) - d->radius;
    if (std::abs(s) <= tol) return W::Boundary;
    return s < 0.0 ? W::Inside : W::Outside;
  }
  if (auto* poly = std::get_if<PolygonSet>(&v_)) {
    const auto& vs = poly->vertices;
    size_t n = vs.size();
    for (size_t i = 0; i < n; ++i) {
      Segment e{vs[i], vs[(i + 1) % n]};
      Vec2 d = e.b - e.a;
      double len = d.norm();
      double u = std::clamp((p - e.a).dot(d) / (len * len), 0.0, 1.0);
      if (dist(e.a + u * d, p) <= tol) return W::Boundary;
    }
    bool inside = false;
    for (size_t i = 0; i < n; ++i) {
      Vec2 a = vs[i], b = vs[(i + 1) % n];
      if ((a.y <= p.y) != (b.y <= p.y)) {
        double xc = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
        if (xc > p.x) inside = !inside;
      }
    }
    return inside ? W::Inside : W::Outside;
  }
  if (auto* pr = std::get_if<Product1DSet>(&v_)) {
    double t = pr->axis == 0 ? p.x : p.y;
    switch (pr->set1d.locate(t, tol)) {
      case IntervalUnion::Where::Inside:
        return W::Inside;
      case IntervalUnion::Where::Outside:
        return W::Outside;
      default:
        return W::Boundary;
    }
  }
  const auto& bs = std::get<BooleanSet>(v_);
  W wa = bs.lhs->where(p, tol);
  W wb = bs.rhs->where(p, tol);
  auto val = [](W w) { return w == W::Inside ? 2 : (w == W::Boundary ? 1 : 0); };
  auto from = [](int v) {
    return v == 2 ? W::Inside : (v == 1 ? W::Boundary : W::Outside);
  };
  switch (bs.op) {
    case BoolOp::Union:
      return from(std::max(val(wa), val(wb)));
    case BoolOp::Intersection:
      return from(std::min(val(wa), val(wb)));
    case BoolOp::Difference:
      return from(std::min(val(wa), 2 - val(wb)));
  }
  return W::Outside;
}

bool FinitePerimeterSet::side_contains(Vec2 p, Vec2 dir) const {
  using W = Where;
  if (auto* hp = std::get_if<HalfPlaneSet>(&v_)) {
    double s = hp->normal.dot(p) - hp->offset;
    if (s > kGeomTol) return true;
    if (s < -kGeomTol) return false;
    double d = hp->normal.dot(dir);
    if (std::abs(d) <= 1e-13) return true;  // moving along the boundary line
    return d > 0.0;
  }
  if (auto* dc = std::get_if<DiscSet>(&v_)) {
    double s = dist(p, dc->center) - dc->radius;
    if (s < -kGeomTol) return true;
    if (s > kGeomTol) return false;
    double d = (p - dc->center).dot(dir);
    if (std::abs(d) <= 1e-13 * std::max(1.0, dc->radius)) return false;
    return d < 0.0;
  }
  if (auto* poly = std::get_if<PolygonSet>(&v_)) {
    W w = where(p);
    if (w == W::Inside) return true;
    if (w == W::Outside) return false;
    const auto& vs = poly->vertices;
    size_t n = vs.size();
    // vertex: direction must lie in the interior wedge
    for (size_t i = 0; i < n; ++i) {
      if (dist(p, vs[i]) <= kGeomTol) {
        Vec2 prev = vs[(i + n - 1) % n];
        Vec2 next = vs[(i + 1) % n];
        Vec2 in_dir = (vs[i] - prev).normalized();   // incoming direction
        Vec2 out_dir = (next - vs[i]).normalized();  // outgoing direction
        return dir_in_ccw_range(dir.normalized(), out_dir, -in_dir);
      }
    }
    for (size_t i = 0; i < n; ++i) {
      Segment e{vs[i], vs[(i + 1) % n]};
      Vec2 d = e.b - e.a;
      double len = d.norm();
      double u = std::clamp((p - e.a).dot(d) / (len * len), 0.0, 1.0);
      if (dist(e.a + u * d, p) <= kGeomTol) {
        Vec2 nin = d.perp().normalized();  // interior is left of ccw edges
        double t = nin.dot(dir);
        if (std::abs(t) <= 1e-13) return true;
        return t > 0.0;
      }
    }
    return false;
  }
  if (auto* pr = std::get_if<Product1DSet>(&v_)) {
    double t = pr->axis == 0 ? p.x : p.y;
    double dt = pr->axis == 0 ? dir.x : dir.y;
    auto loc = pr->set1d.locate(t);
    if (loc == IntervalUnion::Where::Inside) return true;
    if (loc == IntervalUnion::Where::Outside) return false;
    if (std::abs(dt) <= 1e-13) return true;
    // find whether the set continues on the +t or -t side of this endpoint
    for (const auto& [a, b] : pr->set1d.intervals()) {
      if (std::abs(t - a) <= kGeomTol && dt > 0.0) return true;
      if (std::abs(t - b) <= kGeomTol && dt < 0.0) return true;
    }
    return false;
  }
  const auto& bs = std::get<BooleanSet>(v_);
  bool a = bs.lhs->side_contains(p, dir);
  bool b = bs.rhs->side_contains(p, dir);
  switch (bs.op) {
    case BoolOp::Union:
      return a || b;
    case BoolOp::Intersection:
      return a && b;
    case BoolOp::Difference:
      return a && !b;
  }
  return false;
}

IntervalUnion FinitePerimeterSet::ray_intervals(Vec2 p, Vec2 dir,
                                                double smax) const {
  if (auto* hp = std::get_if<HalfPlaneSet>(&v_)) {
    double d = hp->normal.dot(dir);
    double s0 = hp->normal.dot(p) - hp->offset;
    if (std::abs(d) <= 1e-14) {
      return s0 >= -kGeomTol ? IntervalUnion::single(0.0, smax)
                             : IntervalUnion();
    }
    double scrit = -s0 / d;
    if (d > 0.0) {
      double lo = std::max(0.0, scrit);
      return lo < smax ? IntervalUnion::single(lo, smax) : IntervalUnion();
    }
    double hi = std::min(smax, scrit);
    return hi > 0.0 ? IntervalUnion::single(0.0, hi) : IntervalUnion();
  }
  if (auto* dc = std::get_if<DiscSet>(&v_)) {
    double sstar = (dc->center - p).dot(dir);
    Vec2 q = p + sstar * dir;
    double h2 = dc->radius * dc->radius - (q - dc->center).norm2();
    if (h2 <= 0.0) return IntervalUnion();
    double sq = std::sqrt(h2);
    double lo = std::max(0.0, sstar - sq), hi = std::min(smax, sstar + sq);
    return hi > lo ? IntervalUnion::single(lo, hi) : IntervalUnion();
  }
  if (auto* poly = std::get_if<PolygonSet>(&v_)) {
    const auto& vs = poly->vertices;
    size_t n = vs.size();
    std::vector<double> hits;
    for (size_t i = 0; i < n; ++i) {
      Vec2 a = vs[i], b = vs[(i + 1) % n];
      Vec2 e = b - a;
      double denom = dir.cross(e);
      if (std::abs(denom) < 1e-14) continue;
      double s = (a - p).cross(e) / denom;
      double v = (a - p).cross(dir) / denom;
      if (v >= 0.0 && v < 1.0 && s > 0.0 && s < smax) hits.push_back(s);
    }
    std::sort(hits.begin(), hits.end());
    bool inside = side_contains(p, dir);
    std::vector<std::pair<double, double>> iv;
    double cur = 0.0;
    for (double s : hits) {
      if (inside) iv.push_back({cur, s});
      inside = !inside;
      cur = s;
    }
    if (inside) iv.push_back({cur, smax});
    return IntervalUnion(std::move(iv));
  }
  if (auto* pr = std::get_if<Product1DSet>(&v_)) {
    double t0 = pr->axis == 0 ? p.x : p.y;
    double dt = pr->axis == 0 ? dir.x : dir.y;
    if (std::abs(dt) <= 1e-14) {
      return pr->set1d.locate(t0) != IntervalUnion::Where::Outside
                 ? IntervalUnion::single(0.0, smax)
                 : IntervalUnion();
    }
    double lo = t0, hi = t0 + dt * smax;
    if (lo > hi) std::swap(lo, hi);
    IntervalUnion reach = pr->set1d.clip(lo, hi);
    // s = (t - t0)/dt
    return reach.affine(-t0 / dt, 1.0 / dt).clip(0.0, smax);
  }
  const auto& bs = std::get<BooleanSet>(v_);
  IntervalUnion a = bs.lhs->ray_intervals(p, dir, smax);
  IntervalUnion b = bs.rhs->ray_intervals(p, dir, smax);
  switch (bs.op) {
    case BoolOp::Union:
      return a.unite(b);
    case BoolOp::Intersection:
      return a.intersect(b);
    case BoolOp::Difference:
      return a.subtract(b);
  }
  return {};
}

void FinitePerimeterSet::critical_angles(Vec2 x, double r,
                                         std::vector<double>& out) const {
  auto add = [&out](double t) {
    out.push_back(std::atan2(std::sin(t), std::cos(t)));
  };
  auto add_point = [&](Vec2 p) {
    if (dist(p, x) <= r * (1.0 + 1e-9)) add(std::atan2(p.y - x.y, p.x - x.x));
  };
  auto line_hits = [&](Vec2 q, Vec2 d) {
    // intersections of the line q + v d with the circle of radius r around x
    double A = d.norm2();
    Vec2 w = q - x;
    double B = 2.0 * d.dot(w);
    double C = w.norm2() - r * r;
    double disc = B * B - 4.0 * A * C;
    if (disc <= 0.0) return;
    double sq = std::sqrt(disc);
    for (double v : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)}) {
      Vec2 p = q + v * d;
      add(std::atan2(p.y - x.y, p.x - x.x));
    }
  };
  if (auto* hp = std::get_if<HalfPlaneSet>(&v_)) {
    Vec2 d{hp->normal.y, -hp->normal.x};
    add(std::atan2(d.y, d.x));
    add(std::atan2(-d.y, -d.x));
    Vec2 q = hp->offset * hp->normal;  // point on the line
    line_hits(q, d);
    return;
  }
  if (auto* dc = std::get_if<DiscSet>(&v_)) {
    double D = dist(x, dc->center);
    if (D > kGeomTol) {
      double tc = std::atan2(dc->center.y - x.y, dc->center.x - x.x);
      if (D > dc->radius + kGeomTol) {
        double a = std::asin(std::min(1.0, dc->radius / D));
        add(tc + a);
        add(tc - a);
      }
    } else {
      // concentric: no angular structure
    }
    if (std::abs(D - dc->radius) <= kGeomTol) {
      // x on the circle: rays tangent to it at x
      Vec2 t = (x - dc->center).perp();
      add(std::atan2(t.y, t.x));
      add(std::atan2(-t.y, -t.x));
    }
    // circle-circle crossing points with the probe circle
    double a0num = dc->radius * dc->radius - r * r;
    if (D > kGeomTol && D < dc->radius + r && D > std::abs(dc->radius - r)) {
      double a0 = (r * r - dc->radius * dc->radius + D * D) / (2.0 * D);
      double h2 = r * r - a0 * a0;
      if (h2 > 0.0) {
        double h = std::sqrt(h2);
        Vec2 u = (dc->center - x) / D;
        add_point(x + a0 * u + h * u.perp());
        add_point(x + a0 * u - h * u.perp());
      }
    }
    (void)a0num;
    return;
  }
  if (auto* poly = std::get_if<PolygonSet>(&v_)) {
    const auto& vs = poly->vertices;
    size_t n = vs.size();
    for (size_t i = 0; i < n; ++i) {
      add_point(vs[i]);
      Vec2 d = vs[(i + 1) % n] - vs[i];
      add(std::atan2(d.y, d.x));
      add(std::atan2(-d.y, -d.x));
      line_hits(vs[i], d);
    }
    return;
  }
  if (auto* pr = std::get_if<Product1DSet>(&v_)) {
    double c = pr->axis == 0 ? x.x : x.y;
    add(pr->axis == 0 ? kPi / 2 : 0.0);
    add(pr->axis == 0 ? -kPi / 2 : kPi);
    for (const auto& [a, b] : pr->set1d.intervals()) {
      for (double t : {a, b}) {
        if (std::abs(t - c) >= r) continue;
        double off = t - c;
        // circle hits of the line {coord = t}
        double h = std::sqrt(std::max(0.0, r * r - off * off));
        if (pr->axis == 0) {
          add(std::atan2(h, off));
          add(std::atan2(-h, off));
        } else {
          add(std::atan2(off, h));
          add(std::atan2(off, -h));
        }
      }
    }
    return;
  }
  const auto& bs = std::get<BooleanSet>(v_);
  bs.lhs->critical_angles(x, r, out);
  bs.rhs->critical_angles(x, r, out);
}

// conservative bbox for bound computations: falls back to the window when
// the set is unbounded
std::optional<std::pair<Vec2, Vec2>> FinitePerimeterSet::bbox() const {
  if (std::holds_alternative<HalfPlaneSet>(v_)) return std::nullopt;
  if (auto* d = std::get_if<DiscSet>(&v_)) {
    Vec2 r{d->radius, d->radius};
    return std::make_pair(d->center - r, d->center + r);
  }
  if (auto* poly = std::get_if<PolygonSet>(&v_)) {
    Vec2 lo = poly->vertices[0], hi = poly->vertices[0];
    for (const auto& v : poly->vertices) {
      lo.x = std::min(lo.x, v.x);
      lo.y = std::min(lo.y, v.y);
      hi.x = std::max(hi.x, v.x);
      hi.y = std::max(hi.y, v.y);
    }
    return std::make_pair(lo, hi);
  }
  if (std::holds_alternative<Product1DSet>(v_)) return std::nullopt;
  const auto& bs = std::get<BooleanSet>(v_);
  auto ba = bs.lhs->bbox();
  auto bb = bs.rhs->bbox();
  switch (bs.op) {
    case BoolOp::Union:
      if (ba && bb) {
        return std::make_pair(
            Vec2{std::min(ba->first.x, bb->first.x),
                 std::min(ba->first.y, bb->first.y)},
            Vec2{std::max(ba->second.x, bb->second.x),
                 std::max(ba->second.y, bb->second.y)});
      }
      return std::nullopt;
    case BoolOp::Intersection: {
      if (ba && bb) {
        Vec2 lo{std::max(ba->first.x, bb->first.x),
                std::max(ba->first.y, bb->first.y)};
        Vec2 hi{std::min(ba->second.x, bb->second.x),
                std::min(ba->second.y, bb->second.y)};
        return std::make_pair(lo, hi);
      }
      if (ba) return ba;
      return bb;
    }
    case BoolOp::Difference:
      return ba;
  }
  return std::nullopt;
}

FinitePerimeterSet FinitePerimeterSet::scaled(Vec2 shift, double scale) const {
  if (!(scale > 0.0)) fail("BadArgument", "scale must be positive");
  if (auto* hp = std::get_if<HalfPlaneSet>(&v_)) {
    return half_plane(hp->normal, hp->offset * scale + hp->normal.dot(shift));
  }
  if (auto* d = std::get_if<DiscSet>(&v_)) {
    return disc(shift + scale * d->center, scale * d->radius);
  }
  if (auto* poly = std::get_if<PolygonSet>(&v_)) {
    std::vector<Vec2> vs;
    vs.reserve(poly->vertices.size());
    for (const auto& v : poly->vertices) vs.push_back(shift + scale * v);
    return polygon(std::move(vs));
  }
  if (auto* pr = std::get_if<Product1DSet>(&v_)) {
    double off = pr->axis == 0 ? shift.x : shift.y;
    return product1d(pr->set1d.affine(off, scale), pr->axis);
  }
  const auto& bs = std::get<BooleanSet>(v_);
  return boolean(bs.op, bs.lhs->scaled(shift, scale),
                 bs.rhs->scaled(shift, scale));
}

FinitePerimeterSet FinitePerimeterSet::complement_within(
    const FinitePerimeterSet& window) const {
  return boolean(BoolOp::Difference, window, *this);
}

// ---------------------------------------------------------------------------
// Probes
// ---------------------------------------------------------------------------

void validate(const Probe& probe) {
  if (auto* b = std::get_if<BallProbe>(&probe)) {
    if (!(b->r > 0.0)) fail("DegenerateProbe", "ball radius must be positive");
  } else if (auto* h = std::get_if<HalfBallProbe>(&probe)) {
    if (!(h->r > 0.0)) fail("DegenerateProbe", "half-ball radius must be positive");
    if (h->normal.norm() == 0.0) fail("DegenerateProbe", "zero normal");
  } else if (auto* c = std::get_if<CylinderProbe>(&probe)) {
    if (!(c->r > 0.0) || !(c->rho > 0.0))
      fail("DegenerateProbe", "cylinder half-widths must be positive");
    if (c->axis.norm() == 0.0) fail("DegenerateProbe", "zero axis");
  } else if (auto* bx = std::get_if<BoxProbe>(&probe)) {
    if (!(bx->hi.x > bx->lo.x) || !(bx->hi.y > bx->lo.y))
      fail("DegenerateProbe", "empty box");
  }
}

FinitePerimeterSet probe_set(const Probe& probe) {
  validate(probe);
  if (auto* b = std::get_if<BallProbe>(&probe))
    return FinitePerimeterSet::disc(b->center, b->r);
  if (auto* h = std::get_if<HalfBallProbe>(&probe)) {
    Vec2 nu = h->normal.normalized();
    if (h->side == HalfBallSide::Exterior) nu = -nu;
    return FinitePerimeterSet::boolean(
        BoolOp::Intersection, FinitePerimeterSet::disc(h->center, h->r),
        FinitePerimeterSet::half_plane(nu, nu.dot(h->center)));
  }
  if (auto* c = std::get_if<CylinderProbe>(&probe)) {
    Vec2 a = c->axis.normalized();
    Vec2 t = a.perp();
    std::vector<Vec2> vs = {
        c->center - c->r * a - c->rho * t, c->center + c->r * a - c->rho * t,
        c->center + c->r * a + c->rho * t, c->center - c->r * a + c->rho * t};
    return FinitePerimeterSet::polygon(std::move(vs));
  }
  const auto& bx = std::get<BoxProbe>(probe);
  return FinitePerimeterSet::box(bx.lo, bx.hi);
}

double probe_radius_bound(const Probe& probe) {
  if (auto* b = std::get_if<BallProbe>(&probe)) return b->r;
  if (auto* h = std::get_if<HalfBallProbe>(&probe)) return h->r;
  if (auto* c = std::get_if<CylinderProbe>(&probe)) return std::hypot(c->r, c->rho);
  const auto& bx = std::get<BoxProbe>(probe);
  return 0.5 * dist(bx.lo, bx.hi);
}

Region region_of_probe(const Probe& probe) {
  validate(probe);
  Region r;
  if (auto* b = std::get_if<BallProbe>(&probe)) {
    for (int k = 0; k < 4; ++k)
      r.boundary.push_back(
          Arc{b->center, b->r, k * kPi / 2.0, (k + 1) * kPi / 2.0});
    return r;
  }
  if (auto* h = std::get_if<HalfBallProbe>(&probe)) {
    Vec2 nu = h->normal.normalized();
    if (h->side == HalfBallSide::Exterior) nu = -nu;
    // half disc {(y-x).nu > 0}: diameter from x - r nu_perp ... wait
    // boundary: diameter segment + half circle, ccw with region on left.
    Vec2 t = nu.perp();  // tangent of the diameter line
    double base = std::atan2(t.y, t.x);
    Vec2 p0 = h->center - h->r * t;
    Vec2 p1 = h->center + h->r * t;
    // region {(y-c).nu > 0}; travelling p0 -> p1 along -t keeps it on left?
    // left of direction d is d.perp(); want d.perp() = nu => d = -nu.perp() = -t... no:
    // d.perp() = nu  =>  d = (nu.y, -nu.x) = -t.  So diameter runs p1 -> p0.
    r.boundary.push_back(Segment{p1, p0});
    // half circle from p0 around through nu side back to p1 (ccw)
    double a0 = std::atan2((p0 - h->center).y, (p0 - h->center).x);
    r.boundary.push_back(Arc{h->center, h->r, a0, a0 + kPi / 2.0});
    r.boundary.push_back(Arc{h->center, h->r, a0 + kPi / 2.0, a0 + kPi});
    (void)base;
    (void)p1;
    return r;
  }
  if (auto* c = std::get_if<CylinderProbe>(&probe)) {
    Vec2 a = c->axis.normalized();
    Vec2 t = a.perp();
    std::vector<Vec2> vs = {
        c->center - c->r * a - c->rho * t, c->center + c->r * a - c->rho * t,
        c->center + c->r * a + c->rho * t, c->center - c->r * a + c->rho * t};
    for (int k = 0; k < 4; ++k)
      r.boundary.push_back(Segment{vs[k], vs[(k + 1) % 4]});
    return r;
  }
  const auto& bx = std::get<BoxProbe>(probe);
  std::vector<Vec2> vs = {
      bx.lo, {bx.hi.x, bx.lo.y}, bx.hi, {bx.lo.x, bx.hi.y}};
  for (int k = 0; k < 4; ++k)
    r.boundary.push_back(Segment{vs[k], vs[(k + 1) % 4]});
  return r;
}

// ---------------------------------------------------------------------------
// Region area (Green's theorem: area = integral of x dy over the boundary)
// ---------------------------------------------------------------------------

double Region::area() const {
  double A = 0.0;
  for (const auto& f : boundary) {
    if (f.is_arc()) {
      const Arc& a = f.arc();
      // x dy = (cx + R cos t)(R cos t) dt
      double cx = a.center.x, R = a.radius;
      double term = cx * R * (std::sin(a.t1) - std::sin(a.t0)) +
                    R * R * trig_moment(2, 0, a.t0, a.t1);
      A += term;
    } else {
      const Segment& s = f.seg();
      A += 0.5 * (s.a.x + s.b.x) * (s.b.y - s.a.y);
    }
  }
  return A;
}

// ---------------------------------------------------------------------------
// Fragment boolean
// ---------------------------------------------------------------------------

namespace {

enum class Role { A, B };

enum class Classified { In, Out, OnLeft, OnRight };

Classified classify_piece(const Fragment& piece, const FinitePerimeterSet& s) {
  Vec2 m = piece.midpoint();
  auto w = s.where(m);
  if (w == FinitePerimeterSet::Where::Inside) return Classified::In;
  if (w == FinitePerimeterSet::Where::Outside) return Classified::Out;
  Vec2 n = piece.left_normal_at(0.5);
  bool bl = s.side_contains(m, n);
  bool br = s.side_contains(m, -n);
  if (bl && br) return Classified::In;
  if (!bl && !br) return Classified::Out;
  return bl ? Classified::OnLeft : Classified::OnRight;
}

void boolean_side(BoolOp op, Role role, const FragmentList& own,
                  const FragmentList& other, const FinitePerimeterSet& other_set,
                  FragmentList& out) {
  for (const auto& f : own) {
    for (const auto& piece : split_fragment(f, other)) {
      Classified c = classify_piece(piece, other_set);
      bool keep = false;
      bool reverse = false;
      if (role == Role::A) {
        switch (op) {
          case BoolOp::Intersection:
            keep = (c == Classified::In) || (c == Classified::OnLeft);
            break;
          case BoolOp::Union:
            keep = (c == Classified::Out) || (c == Classified::OnLeft);
            break;
          case BoolOp::Difference:
            keep = (c == Classified::Out) || (c == Classified::OnRight);
            break;
        }
      } else {
        switch (op) {
          case BoolOp::Intersection:
            keep = (c == Classified::In);
            break;
          case BoolOp::Union:
            keep = (c == Classified::Out);
            break;
          case BoolOp::Difference:
            keep = (c == Classified::In);
            reverse = true;
            break;
        }
      }
      if (keep) out.push_back(reverse ? piece.reversed() : piece);
    }
  }
}

}  // namespace

Region fragment_boolean(BoolOp op, const Region& ra,
                        const FinitePerimeterSet& sa, const Region& rb,
                        const FinitePerimeterSet& sb) {
  Region out;
  boolean_side(op, Role::A, ra.boundary, rb.boundary, sb, out.boundary);
  boolean_side(op, Role::B, rb.boundary, ra.boundary, sa, out.boundary);
  return out;
}

// ---------------------------------------------------------------------------
// region_of: oriented boundary of set ∩ window
// ---------------------------------------------------------------------------

namespace {

std::pair<Vec2, Vec2> window_bbox(const Region& window) {
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& f : window.boundary) {
    for (double u : {0.0, 0.5, 1.0}) {
      Vec2 p = f.point_at(u);
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
    if (f.is_arc()) {
      const Arc& a = f.arc();
      lo.x = std::min(lo.x, a.center.x - a.radius);
      lo.y = std::min(lo.y, a.center.y - a.radius);
      hi.x = std::max(hi.x, a.center.x + a.radius);
      hi.y = std::max(hi.y, a.center.y + a.radius);
    }
  }
  return {lo, hi};
}

// fragments of a straight line clipped to a box, oriented with dir
FragmentList line_in_box(Vec2 q, Vec2 dir, Vec2 lo, Vec2 hi) {
  // find parameter range of the line within the inflated box
  double t0 = -1e300, t1 = 1e300;
  auto clipax = [&](double p0, double d, double a, double b) {
    if (std::abs(d) < 1e-15) return p0 >= a - 1e-9 && p0 <= b + 1e-9;
    double u0 = (a - p0) / d, u1 = (b - p0) / d;
    if (u0 > u1) std::swap(u0, u1);
    t0 = std::max(t0, u0);
    t1 = std::min(t1, u1);
    return true;
  };
  if (!clipax(q.x, dir.x, lo.x, hi.x)) return {};
  if (!clipax(q.y, dir.y, lo.y, hi.y)) return {};
  if (t1 <= t0) return {};
  return {Fragment(Segment{q + t0 * dir, q + t1 * dir})};
}

FragmentList primitive_fragments(const FinitePerimeterSet& set, Vec2 lo,
                                 Vec2 hi) {
  FragmentList out;
  if (auto* hp = std::get_if<HalfPlaneSet>(&set.node())) {
    Vec2 d{hp->normal.y, -hp->normal.x};  // interior on the left
    Vec2 q = hp->offset * hp->normal;
    return line_in_box(q, d, lo, hi);
  }
  if (auto* dc = std::get_if<DiscSet>(&set.node())) {
    for (int k = 0; k < 4; ++k)
      out.push_back(
          Arc{dc->center, dc->radius, k * kPi / 2.0, (k + 1) * kPi / 2.0});
    return out;
  }
  if (auto* poly = std::get_if<PolygonSet>(&set.node())) {
    size_t n = poly->vertices.size();
    for (size_t i = 0; i < n; ++i)
      out.push_back(
          Segment{poly->vertices[i], poly->vertices[(i + 1) % n]});
    return out;
  }
  if (auto* pr = std::get_if<Product1DSet>(&set.node())) {
    double wlo = pr->axis == 0 ? lo.x : lo.y;
    double whi = pr->axis == 0 ? hi.x : hi.y;
    IntervalUnion visible = pr->set1d;  // slab edges within the box extent
    size_t cnt = 0;
    for (const auto& [a, b] : visible.intervals()) {
      if (b < wlo - kGeomTol || a > whi + kGeomTol) continue;
      if (++cnt > kMaxSlabs)
        fail("ResolutionExceeded", "too many slab boundaries in window");
      // left edge at coordinate a (interior on +side), right edge at b
      if (pr->axis == 0) {
        if (a >= wlo - kGeomTol) {
          auto f = line_in_box({a, 0.0}, {0.0, -1.0}, lo, hi);
          out.insert(out.end(), f.begin(), f.end());
        }
        if (b <= whi + kGeomTol) {
          auto f = line_in_box({b, 0.0}, {0.0, 1.0}, lo, hi);
          out.insert(out.end(), f.begin(), f.end());
        }
      } else {
        if (a >= wlo - kGeomTol) {
          auto f = line_in_box({0.0, a}, {1.0, 0.0}, lo, hi);
          out.insert(out.end(), f.begin(), f.end());
        }
        if (b <= whi + kGeomTol) {
          auto f = line_in_box({0.0, b}, {-1.0, 0.0}, lo, hi);
          out.insert(out.end(), f.begin(), f.end());
        }
      }
    }
    return out;
  }
  fail("Internal", "primitive_fragments on boolean node");
}

// pieces of ∂*set inside the closed window, oriented set-on-left
FragmentList real_boundary_in(const FinitePerimeterSet& set,
                              const Region& window,
                              const FinitePerimeterSet& wset) {
  if (auto* bs = std::get_if<BooleanSet>(&set.node())) {
    FragmentList fa = real_boundary_in(*bs->lhs, window, wset);
    FragmentList fb = real_boundary_in(*bs->rhs, window, wset);
    FragmentList out;
    boolean_side(bs->op, Role::A, fa, fb, *bs->rhs, out);
    boolean_side(bs->op, Role::B, fb, fa, *bs->lhs, out);
    return out;
  }
  auto [lo, hi] = window_bbox(window);
  Vec2 margin{0.125 + 0.01 * (hi.x - lo.x), 0.125 + 0.01 * (hi.y - lo.y)};
  lo = lo - margin;
  hi = hi + margin;
  FragmentList prim = primitive_fragments(set, lo, hi);
  FragmentList out;
  // keep pieces inside the window (closed, window-left rule on ∂window)
  boolean_side(BoolOp::Intersection, Role::A, prim, window.boundary, wset, out);
  return out;
}

}  // namespace

Region region_of(const FinitePerimeterSet& set, const Region& window,
                 const FinitePerimeterSet& window_set) {
  Region out;
  out.boundary = real_boundary_in(set, window, window_set);
  // closure pieces: window boundary split against the set's boundary pieces,
  // kept where the set covers them (coincident pieces stay with the set side)
  FragmentList closure;
  boolean_side(BoolOp::Intersection, Role::B, window.boundary, out.boundary,
               set, closure);
  out.boundary.insert(out.boundary.end(), closure.begin(), closure.end());
  return out;
}

Region clip_region(const FinitePerimeterSet& set, const Probe& probe) {
  Region w = region_of_probe(probe);
  return region_of(set, w, probe_set(probe));
}

RegionDecomposition decompose(const Region& region) {
  RegionDecomposition rd;
  rd.boundary = region.boundary;
  if (region.boundary.empty()) return rd;
  Vec2 p0{0.0, 0.0};
  int cnt = 0;
  for (const auto& f : region.boundary) {
    p0 = p0 + f.point_at(0.0);
    ++cnt;
  }
  p0 = p0 / double(cnt);
  for (const auto& f : region.boundary) {
    // subdivide arcs so circular segments stay shallow
    std::vector<Fragment> parts;
    if (f.is_arc()) {
      const Arc& a = f.arc();
      int k = std::max(1, int(std::ceil(std::abs(a.t1 - a.t0) / (kPi / 3.0))));
      for (int i = 0; i < k; ++i)
        parts.push_back(f.subfragment(double(i) / k, double(i + 1) / k));
    } else {
      parts.push_back(f);
    }
    for (const auto& pf : parts) {
      Vec2 a = pf.point_at(0.0), b = pf.point_at(1.0);
      double tri_area = 0.5 * (a - p0).cross(b - p0);
      if (std::abs(tri_area) > 1e-16)
        rd.triangles.push_back(TrianglePatch{p0, a, b, tri_area});
      if (pf.is_arc()) {
        const Arc& arc = pf.arc();
        double span = arc.t1 - arc.t0;
        double seg_area =
            0.5 * arc.radius * arc.radius * (span - std::sin(span));
        rd.segments.push_back(
            CircSegmentPatch{arc.center, arc.radius, arc.t0, arc.t1, seg_area});
      }
    }
  }
  double A = 0.0;
  for (const auto& t : rd.triangles) A += t.signed_area;
  for (const auto& s : rd.segments) A += s.signed_area;
  rd.area = A;
  return rd;
}

RegionDecomposition clip(const FinitePerimeterSet& set, const Probe& probe) {
  return decompose(clip_region(set, probe));
}

// ---------------------------------------------------------------------------
// Reduced boundary / perimeter
// ---------------------------------------------------------------------------

namespace {

Region box_window(Vec2 lo, Vec2 hi) {
  Region r;
  std::vector<Vec2> vs = {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}};
  for (int k = 0; k < 4; ++k)
    r.boundary.push_back(Segment{vs[k], vs[(k + 1) % 4]});
  return r;
}

}  // namespace

Region region_in_box(const FinitePerimeterSet& set, Vec2 lo, Vec2 hi) {
  Region w = box_window(lo, hi);
  FinitePerimeterSet wset = FinitePerimeterSet::box(lo, hi);
  return region_of(set, w, wset);
}

FragmentList reduced_boundary(const FinitePerimeterSet& set) {
  auto bb = set.bbox();
  if (!bb) fail("UnboundedSet", "reduced_boundary requires a bounded set");
  Vec2 margin{1.0 + 0.05 * (bb->second.x - bb->first.x),
              1.0 + 0.05 * (bb->second.y - bb->first.y)};
  Vec2 lo = bb->first - margin, hi = bb->second + margin;
  Region w = box_window(lo, hi);
  FinitePerimeterSet wset = FinitePerimeterSet::box(lo, hi);
  return real_boundary_in(set, w, wset);
}

FragmentList boundary_within(const FinitePerimeterSet& set, Vec2 lo, Vec2 hi) {
  Region w = box_window(lo, hi);
  FinitePerimeterSet wset = FinitePerimeterSet::box(lo, hi);
  return real_boundary_in(set, w, wset);
}

double perimeter(const FinitePerimeterSet& set,
                 const std::optional<Probe>& window) {
  if (!window) {
    return fragments_length(reduced_boundary(set));
  }
  validate(*window);
  FinitePerimeterSet wset = probe_set(*window);
  auto bb = wset.bbox();
  Vec2 margin{1.0, 1.0};
  FragmentList frags;
  {
    Region w = box_window(bb->first - margin, bb->second + margin);
    FinitePerimeterSet ws =
        FinitePerimeterSet::box(bb->first - margin, bb->second + margin);
    frags = real_boundary_in(set, w, ws);
  }
  FragmentList kept = clip_fragments(frags, wset, true);
  return fragments_length(kept);
}

FragmentList clip_fragments(const FragmentList& curve,
                            const FinitePerimeterSet& b,
                            bool include_boundary) {
  // boundary curves of b used only for splitting
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& f : curve) {
    for (double u : {0.0, 0.5, 1.0}) {
      Vec2 p = f.point_at(u);
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
  }
  if (curve.empty()) return {};
  Vec2 margin{1.0, 1.0};
  FragmentList cutters = boundary_within(b, lo - margin, hi + margin);
  FragmentList out;
  for (const auto& f : curve) {
    for (const auto& piece : split_fragment(f, cutters)) {
      auto w = b.where(piece.midpoint());
      if (w == FinitePerimeterSet::Where::Inside)
        out.push_back(piece);
      else if (w == FinitePerimeterSet::Where::Boundary && include_boundary)
        out.push_back(piece);
    }
  }
  return out;
}

FragmentList fragments_on_boundary(const FragmentList& curve,
                                   const FinitePerimeterSet& b) {
  if (curve.empty()) return {};
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& f : curve) {
    for (double u : {0.0, 0.5, 1.0}) {
      Vec2 p = f.point_at(u);
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
  }
  Vec2 margin{1.0, 1.0};
  FragmentList cutters = boundary_within(b, lo - margin, hi + margin);
  FragmentList out;
  for (const auto& f : curve) {
    for (const auto& piece : split_fragment(f, cutters)) {
      if (b.where(piece.midpoint()) == FinitePerimeterSet::Where::Boundary)
        out.push_back(piece);
    }
  }
  return out;
}

FragmentList coincident_overlap(const Fragment& a, const Fragment& b) {
  FragmentList out;
  if (a.is_arc() != b.is_arc()) return out;
  if (a.is_arc()) {
    const Arc& x = a.arc();
    const Arc& y = b.arc();
    if (dist(x.center, y.center) > kGeomTol ||
        std::abs(x.radius - y.radius) > kGeomTol)
      return out;
  } else {
    const Segment& x = a.seg();
    const Segment& y = b.seg();
    Vec2 d = x.b - x.a;
    if (std::abs((y.a - x.a).cross(d)) > kGeomTol * std::max(1.0, d.norm()) ||
        std::abs((y.b - x.a).cross(d)) > kGeomTol * std::max(1.0, d.norm()))
      return out;
  }
  // overlap params of b's extent on a
  std::vector<double> ps{0.0, 1.0};
  for (double uu : {0.0, 1.0}) {
    if (auto u = param_on(a, b.point_at(uu))) {
      if (*u > 1e-12 && *u < 1.0 - 1e-12) ps.push_back(*u);
    }
  }
  std::sort(ps.begin(), ps.end());
  for (size_t i = 0; i + 1 < ps.size(); ++i) {
    Fragment piece = a.subfragment(ps[i], ps[i + 1]);
    if (piece.length() < kMinPieceLength) continue;
    if (param_on(b, piece.midpoint())) out.push_back(piece);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normals / classification / densities
// ---------------------------------------------------------------------------

namespace {

void collect_normal_candidates(const FinitePerimeterSet& set, Vec2 x,
                               std::vector<Vec2>& out, bool& corner) {
  if (auto* hp = std::get_if<HalfPlaneSet>(&set.node())) {
    if (std::abs(hp->normal.dot(x) - hp->offset) <= kGeomTol)
      out.push_back(hp->normal);
    return;
  }
  if (auto* d = std::get_if<DiscSet>(&set.node())) {
    if (std::abs(dist(x, d->center) - d->radius) <= kGeomTol)
      out.push_back((d->center - x).normalized());
    return;
  }
  if (auto* poly = std::get_if<PolygonSet>(&set.node())) {
    const auto& vs = poly->vertices;
    size_t n = vs.size();
    for (const auto& v : vs)
      if (dist(v, x) <= kGeomTol) {
        corner = true;
        return;
      }
    for (size_t i = 0; i < n; ++i) {
      Segment e{vs[i], vs[(i + 1) % n]};
      Vec2 d = e.b - e.a;
      double len2 = d.norm2();
      double u = (x - e.a).dot(d) / len2;
      if (u < 0.0 || u > 1.0) continue;
      if (dist(e.a + u * d, x) <= kGeomTol)
        out.push_back(d.perp().normalized());
    }
    return;
  }
  if (auto* pr = std::get_if<Product1DSet>(&set.node())) {
    double t = pr->axis == 0 ? x.x : x.y;
    for (const auto& [a, b] : pr->set1d.intervals()) {
      if (std::abs(t - a) <= kGeomTol)
        out.push_back(pr->axis == 0 ? Vec2{1, 0} : Vec2{0, 1});
      if (std::abs(t - b) <= kGeomTol)
        out.push_back(pr->axis == 0 ? Vec2{-1, 0} : Vec2{0, -1});
    }
    return;
  }
  const auto& bs = std::get<BooleanSet>(set.node());
  collect_normal_candidates(*bs.lhs, x, out, corner);
  collect_normal_candidates(*bs.rhs, x, out, corner);
}

bool has_product1d(const FinitePerimeterSet& set) {
  if (std::holds_alternative<Product1DSet>(set.node())) return true;
  if (auto* bs = std::get_if<BooleanSet>(&set.node()))
    return has_product1d(*bs->lhs) || has_product1d(*bs->rhs);
  return false;
}

double finest_feature(const FinitePerimeterSet& set) {
  if (auto* pr = std::get_if<Product1DSet>(&set.node())) {
    double m = 1.0;
    for (const auto& [a, b] : pr->set1d.intervals())
      m = std::min(m, b - a);
    return m;
  }
  if (auto* bs = std::get_if<BooleanSet>(&set.node()))
    return std::min(finest_feature(*bs->lhs), finest_feature(*bs->rhs));
  return 1.0;
}

}  // namespace

Vec2 interior_normal(const FinitePerimeterSet& set, Vec2 x) {
  if (set.where(x) != FinitePerimeterSet::Where::Boundary)
    fail("NotOnBoundary", "point is not on the analytic boundary");
  std::vector<Vec2> cands;
  bool corner = false;
  collect_normal_candidates(set, x, cands, corner);
  if (corner) fail("CornerPoint", "no classical normal at a polygon vertex");
  std::vector<Vec2> valid;
  for (const auto& n0 : cands)
    for (const auto& n : {n0, -n0}) {
      if (set.side_contains(x, n) && !set.side_contains(x, -n)) {
        bool dup = false;
        for (const auto& v : valid)
          if (dist(v, n) < 1e-9) dup = true;
        if (!dup) valid.push_back(n);
      }
    }
  if (valid.empty())
    fail("NotOnBoundary", "point is not on the reduced boundary");
  if (valid.size() > 1)
    fail("CornerPoint", "multiple boundary directions meet at this point");
  return valid[0];
}

double area_in_ball(const FinitePerimeterSet& set, Vec2 x, double r) {
  if (auto* pr = std::get_if<Product1DSet>(&set.node())) {
    double c = pr->axis == 0 ? x.x : x.y;
    // chord of the disc over coordinate t: 2 sqrt(r^2 - (t-c)^2)
    auto F = [&](double s) {  // antiderivative of the chord at offset s
      s = std::clamp(s, -r, r);
      return s * std::sqrt(std::max(0.0, r * r - s * s)) +
             r * r * std::asin(std::clamp(s / r, -1.0, 1.0));
    };
    double A = 0.0;
    for (const auto& [a, b] : pr->set1d.intervals()) {
      double lo = std::max(a, c - r), hi = std::min(b, c + r);
      if (hi <= lo) continue;
      A += F(hi - c) - F(lo - c);
    }
    return A;
  }
  return clip_region(set, BallProbe{x, r}).area();
}

DensityEstimate density_estimate(const FinitePerimeterSet& set, Vec2 x,
                                 const std::vector<double>& radii) {
  if (radii.empty()) fail("EmptySchedule", "density_estimate needs radii");
  for (size_t i = 0; i + 1 < radii.size(); ++i)
    if (!(radii[i] > radii[i + 1]) || !(radii[i + 1] > 0.0))
      fail("EmptySchedule", "radii must be positive and strictly decreasing");
  DensityEstimate de;
  for (double r : radii) {
    double d = area_in_ball(set, x, r) / (kPi * r * r);
    de.samples.push_back({r, d});
  }
  size_t tail = de.samples.size() / 2;
  double mn = 2.0, mx = -1.0;
  for (size_t i = tail; i < de.samples.size(); ++i) {
    mn = std::min(mn, de.samples[i].second);
    mx = std::max(mx, de.samples[i].second);
  }
  de.liminf_estimate = mn;
  de.limsup_estimate = mx;
  return de;
}

PointClass classify_point(const FinitePerimeterSet& set, Vec2 x) {
  if (has_product1d(set)) {
    // density-based classification at the stored resolution; for dense
    // interval constructions the stored union is faithful only down to the
    // deepest stored generation, so the radii are floored a few octaves above
    size_t slabs = 0;
    double finest = finest_feature(set);
    std::function<void(const FinitePerimeterSet&)> count =
        [&](const FinitePerimeterSet& s) {
          if (auto* pr = std::get_if<Product1DSet>(&s.node()))
            slabs += pr->set1d.count();
          else if (auto* bs = std::get_if<BooleanSet>(&s.node())) {
            count(*bs->lhs);
            count(*bs->rhs);
          }
        };
    count(set);
    if (slabs <= 64) {
      double res = std::max(finest * 0.25, 1e-9);
      double d = area_in_ball(set, x, res) / (kPi * res * res);
      if (d > 0.999) return PointClass::Interior;
      if (d < 0.001) return PointClass::Exterior;
      return PointClass::MeasureBoundary;
    }
    double floor = std::max(finest * 8.0, 1e-9);
    std::vector<double> radii;
    for (double r = 0.25; r >= floor; r *= 0.5) radii.push_back(r);
    if (radii.size() < 3) radii = {floor * 4, floor * 2, floor};
    double mn = 2.0, mx = -1.0;
    for (size_t i = radii.size() - std::min<size_t>(3, radii.size());
         i < radii.size(); ++i) {
      double d = area_in_ball(set, x, radii[i]) / (kPi * radii[i] * radii[i]);
      mn = std::min(mn, d);
      mx = std::max(mx, d);
    }
    if (mn > 0.999) return PointClass::Interior;
    if (mx < 0.001) return PointClass::Exterior;
    return PointClass::MeasureBoundary;
  }
  auto w = set.where(x);
  if (w == FinitePerimeterSet::Where::Inside) return PointClass::Interior;
  if (w == FinitePerimeterSet::Where::Outside) return PointClass::Exterior;
  std::vector<Vec2> cands;
  bool corner = false;
  collect_normal_candidates(set, x, cands, corner);
  if (corner) return PointClass::MeasureBoundary;
  bool any_in = false, any_out = false;
  for (const auto& n0 : cands)
    for (const auto& n : {n0, -n0}) {
      (set.side_contains(x, n) ? any_in : any_out) = true;
    }
  if (any_in && any_out) return PointClass::MeasureBoundary;
  if (any_in) return PointClass::Interior;
  return PointClass::Exterior;
}

}  // namespace pairlab
