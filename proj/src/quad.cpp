#include "pairlab/quad.hpp"

#include <cmath>

namespace pairlab {

namespace {

int gl_order_for(int degree) {
  int n = degree / 2 + 2;
  return std::max(6, std::min(n, 40));
}

}  // namespace

namespace {

// Arc quadrature: Gauss-Legendre panels of at most pi/8 in angle. For trig
// polynomials of the degrees appearing here this is exact to roundoff, and
// evaluating points first keeps huge blow-up radii well conditioned.
template <typename G>
double arc_panels(const Arc& a, G&& g, int order = 24) {
  double lo = std::min(a.t0, a.t1), hi = std::max(a.t0, a.t1);
  int panels = std::max(1, int(std::ceil((hi - lo) / (kPi / 8.0))));
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    double p0 = lo + (hi - lo) * k / panels;
    double p1 = lo + (hi - lo) * (k + 1) / panels;
    total += gl_integrate(g, p0, p1, order);
  }
  return total;
}

}  // namespace

double integrate_poly_region(const Region& region, const Poly2& f) {
  Poly2 F = f.antider_x();
  double total = 0.0;
  int order = gl_order_for(F.deg_x() + F.deg_y() + 1);
  for (const auto& frag : region.boundary) {
    if (frag.is_arc()) {
      const Arc& a = frag.arc();
      // ∮ F dy with y' = R cos t, signed by traversal direction
      double sgn = a.t1 >= a.t0 ? 1.0 : -1.0;
      total += sgn * arc_panels(a, [&](double t) {
        Vec2 p = a.center + a.radius * dir_of(t);
        return F.eval(p) * a.radius * std::cos(t);
      });
    } else {
      const Segment& s = frag.seg();
      double dy = s.b.y - s.a.y;
      if (dy == 0.0) continue;
      total += dy * gl_integrate(
                        [&](double u) {
                          return F.eval(s.a + u * (s.b - s.a));
                        },
                        0.0, 1.0, order);
    }
  }
  return total;
}

double integrate_poly_fragments(const FragmentList& fs, const Poly2& f) {
  double total = 0.0;
  int order = gl_order_for(f.deg_x() + f.deg_y());
  for (const auto& frag : fs) {
    if (frag.is_arc()) {
      const Arc& a = frag.arc();
      total += arc_panels(a, [&](double t) {
        return f.eval(a.center + a.radius * dir_of(t)) * a.radius;
      });
    } else {
      const Segment& s = frag.seg();
      double len = (s.b - s.a).norm();
      total += len * gl_integrate(
                         [&](double u) {
                           return f.eval(s.a + u * (s.b - s.a));
                         },
                         0.0, 1.0, order);
    }
  }
  return total;
}

double integrate_poly_fragments_normal(const FragmentList& fs, const Poly2& f,
                                       const Vec2Poly& V) {
  double total = 0.0;
  int deg = std::max({f.deg_x() + f.deg_y(), V.x.deg_x() + V.x.deg_y(),
                      V.y.deg_x() + V.y.deg_y()});
  int order = gl_order_for(deg + 1);
  for (const auto& frag : fs) {
    if (frag.is_arc()) {
      const Arc& a = frag.arc();
      // left normal of a ccw arc is -radial; of a cw arc it is +radial
      double nsign = a.t1 >= a.t0 ? -1.0 : 1.0;
      total += arc_panels(a, [&](double t) {
        Vec2 radial = dir_of(t);
        Vec2 p = a.center + a.radius * radial;
        return (f.eval(p) + nsign * V.eval(p).dot(radial)) * a.radius;
      });
    } else {
      const Segment& s = frag.seg();
      double len = (s.b - s.a).norm();
      Vec2 nu = frag.left_normal_at(0.5);
      total += len * gl_integrate(
                         [&](double u) {
                           Vec2 p = s.a + u * (s.b - s.a);
                           return f.eval(p) + V.eval(p).dot(nu);
                         },
                         0.0, 1.0, order);
    }
  }
  return total;
}

namespace {

double triangle_gl(const TrianglePatch& t,
                   const std::function<double(Vec2)>& f, int n) {
  // map [0,1]^2 -> triangle: p = a + u(b-a) + uv(c-b); |J| = u * |cross|
  double cross = (t.b - t.a).cross(t.c - t.a);
  const auto& xs = gl_nodes(n);
  const auto& ws = gl_weights(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = 0.5 + 0.5 * xs[i];
    for (int j = 0; j < n; ++j) {
      double v = 0.5 + 0.5 * xs[j];
      Vec2 p = t.a + u * (t.b - t.a) + u * v * (t.c - t.b);
      total += 0.25 * ws[i] * ws[j] * u * f(p);
    }
  }
  // signed: cross already carries the sign via signed_area = cross/2
  return total * cross;
}

double segment_gl(const CircSegmentPatch& s,
                  const std::function<double(Vec2)>& f, int n) {
  // region between chord and arc; radial coordinates from the center,
  // radius from chord distance d(t) = h / cos(t - tm) out to R
  double tm = 0.5 * (s.t0 + s.t1);
  double half = 0.5 * std::abs(s.t1 - s.t0);
  double h = s.radius * std::cos(half);
  double sgn = s.t1 >= s.t0 ? 1.0 : -1.0;
  const auto& xs = gl_nodes(n);
  const auto& ws = gl_weights(n);
  double lo = std::min(s.t0, s.t1), hi = std::max(s.t0, s.t1);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * xs[i];
    double d = h / std::cos(t - tm);
    for (int j = 0; j < n; ++j) {
      double r = 0.5 * (d + s.radius) + 0.5 * (s.radius - d) * xs[j];
      Vec2 p = s.center + r * dir_of(t);
      total += 0.25 * ws[i] * ws[j] * (hi - lo) * (s.radius - d) * r * f(p);
    }
  }
  return sgn * total;
}

void subdivide(const TrianglePatch& t, std::vector<TrianglePatch>& out) {
  Vec2 ab = 0.5 * (t.a + t.b), bc = 0.5 * (t.b + t.c), ca = 0.5 * (t.c + t.a);
  double q = t.signed_area / 4.0;
  out.push_back({t.a, ab, ca, q});
  out.push_back({ab, t.b, bc, q});
  out.push_back({ca, bc, t.c, q});
  out.push_back({ab, bc, ca, q});
}

void subdivide(const CircSegmentPatch& s, std::vector<TrianglePatch>& tris,
               std::vector<CircSegmentPatch>& segs) {
  // split into the inscribed triangle plus two shallower segments
  double tm = 0.5 * (s.t0 + s.t1);
  Vec2 p0 = s.center + s.radius * dir_of(s.t0);
  Vec2 p1 = s.center + s.radius * dir_of(tm);
  Vec2 p2 = s.center + s.radius * dir_of(s.t1);
  tris.push_back({p0, p1, p2, 0.5 * (p1 - p0).cross(p2 - p0)});
  double h = 0.5 * (s.t1 - s.t0);  // signed half-span
  double sub_area = 0.5 * s.radius * s.radius * (h - std::sin(h));
  segs.push_back({s.center, s.radius, s.t0, tm, sub_area});
  segs.push_back({s.center, s.radius, tm, s.t1, sub_area});
}

}  // namespace

double integrate_smooth(const RegionDecomposition& rd,
                        const std::function<double(Vec2)>& f, double tol,
                        int max_level) {
  std::vector<TrianglePatch> tris = rd.triangles;
  std::vector<CircSegmentPatch> segs = rd.segments;
  const int order = 16;
  auto level_value = [&](const std::vector<TrianglePatch>& ts,
                         const std::vector<CircSegmentPatch>& ss) {
    double v = 0.0;
    for (const auto& t : ts) v += triangle_gl(t, f, order);
    for (const auto& s : ss) v += segment_gl(s, f, order);
    return v;
  };
  double prev = level_value(tris, segs);
  for (int level = 1; level <= max_level; ++level) {
    std::vector<TrianglePatch> nt;
    std::vector<CircSegmentPatch> ns;
    for (const auto& t : tris) subdivide(t, nt);
    for (const auto& s : segs) subdivide(s, nt, ns);
    double cur = level_value(nt, ns);
    if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
    tris = std::move(nt);
    segs = std::move(ns);
    prev = cur;
    if (tris.size() + segs.size() > 300000)
      fail("ToleranceUnreachable", "patch subdivision budget exceeded");
  }
  fail("ToleranceUnreachable", "quadrature did not converge within budget");
}

double integrate_fragments(const FragmentList& fs,
                           const std::function<double(Vec2, Vec2)>& f,
                           double tol) {
  double total = 0.0;
  for (const auto& frag : fs) {
    // panel refinement until two orders agree
    int pieces = frag.is_arc() ? std::max(1, int(std::ceil(
                                        std::abs(frag.arc().t1 - frag.arc().t0) /
                                        (kPi / 4)))) : 1;
    auto value_at = [&](int k) {
      double v = 0.0;
      for (int i = 0; i < k; ++i) {
        double u0 = double(i) / k, u1 = double(i + 1) / k;
        Fragment piece = frag.subfragment(u0, u1);
        double len = piece.length();
        v += len * gl_integrate(
                       [&](double u) {
                         return f(piece.point_at(u), piece.left_normal_at(u));
                       },
                       0.0, 1.0, 16);
      }
      return v;
    };
    double prev = value_at(pieces);
    for (int iter = 0; iter < 8; ++iter) {
      pieces *= 2;
      double cur = value_at(pieces);
      if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) {
        prev = cur;
        break;
      }
      prev = cur;
    }
    total += prev;
  }
  return total;
}

std::vector<CurveNode> curve_nodes(const FragmentList& fs, int per_fragment) {
  std::vector<CurveNode> out;
  const auto& xs = gl_nodes(per_fragment);
  const auto& ws = gl_weights(per_fragment);
  for (const auto& frag : fs) {
    double len = frag.length();
    for (int i = 0; i < per_fragment; ++i) {
      double u = 0.5 + 0.5 * xs[i];
      out.push_back({frag.point_at(u), frag.left_normal_at(u),
                     0.5 * ws[i] * len});
    }
  }
  return out;
}

}  // namespace pairlab
