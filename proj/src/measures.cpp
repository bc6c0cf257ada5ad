#include "pairlab/measures.hpp"

#include <algorithm>
#include <cmath>

namespace pairlab {

// ---------------------------------------------------------------------------
// CantorMeasure1D
// ---------------------------------------------------------------------------

CantorMeasure1D CantorMeasure1D::build(double lambda, int depth) {
  if (!(lambda > 0.0 && lambda < 1.0))
    fail("BadArgument", "lambda must lie in (0,1)");
  if (depth < 0 || depth > 24) fail("DepthTooLarge", "depth must be in [0,24]");
  std::vector<std::pair<double, double>> cur = {{0.0, 1.0}};
  for (int j = 0; j < depth; ++j) {
    std::vector<std::pair<double, double>> next;
    next.reserve(cur.size() * 2);
    for (auto [a, b] : cur) {
      double keep = 0.5 * (1.0 - lambda) * (b - a);
      next.push_back({a, a + keep});
      next.push_back({b - keep, b});
    }
    cur = std::move(next);
  }
  CantorMeasure1D m;
  m.lambda = lambda;
  m.depth = depth;
  m.carriers = IntervalUnion(std::move(cur));
  m.interval_mass = std::pow(0.5, depth);
  return m;
}

double CantorMeasure1D::measure(double a, double b) const {
  if (b < a) std::swap(a, b);
  double tol = kGeomTol;
  double total = 0.0;
  for (const auto& [c, d] : carriers.intervals()) {
    if (d <= a + tol || c >= b - tol) continue;
    bool a_in = a > c + tol && a < d - tol;
    bool b_in = b > c + tol && b < d - tol;
    if (a_in || b_in)
      fail("DepthInsufficient",
           "window endpoint falls strictly inside a surviving interval");
    total += interval_mass;
  }
  return total;
}

double CantorMeasure1D::integrate(
    const std::function<double(double)>& f) const {
  const double g = 0.5 / std::sqrt(3.0);
  double total = 0.0;
  for (const auto& [a, b] : carriers.intervals()) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    total += 0.5 * interval_mass *
             (f(mid - 2.0 * g * half) + f(mid + 2.0 * g * half));
  }
  return total;
}

CantorMeasure1D CantorMeasure1D::affine(double shift, double scale) const {
  CantorMeasure1D out = *this;
  out.carriers = carriers.affine(shift, scale);
  return out;
}

CantorMeasure1D CantorMeasure1D::clipped(double a, double b) const {
  CantorMeasure1D out = *this;
  std::vector<std::pair<double, double>> kept;
  for (const auto& iv : carriers.intervals())
    if (iv.second > a - kGeomTol && iv.first < b + kGeomTol)
      kept.push_back(iv);
  out.carriers = IntervalUnion(std::move(kept));
  return out;
}

// ---------------------------------------------------------------------------
// Test functions
// ---------------------------------------------------------------------------

namespace {

Poly2 radial_bump_poly(Vec2 c, double R, int order) {
  // (1 - ((x-cx)^2 + (y-cy)^2)/R^2)^order
  Poly2 rx = Poly2::x() - Poly2(c.x);
  Poly2 ry = Poly2::y() - Poly2(c.y);
  Poly2 base = Poly2(1.0) - (rx * rx + ry * ry) * (1.0 / (R * R));
  Poly2 out(1.0);
  for (int i = 0; i < order; ++i) out = out * base;
  return out;
}

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return v;
}

// C^order smoothstep on [0,1]
Poly1 smoothstep(int order) {
  // S(s) = s^{order+1} * sum_{m=0}^{order} C(order+m, m) C(2 order+1, order-m) (-s)^m
  std::vector<double> c(2 * order + 2, 0.0);
  for (int m = 0; m <= order; ++m) {
    double coef = binom(order + m, m) * binom(2 * order + 1, order - m) *
                  ((m % 2) ? -1.0 : 1.0);
    c[order + 1 + m] = coef;
  }
  return Poly1(std::move(c));
}

}  // namespace

TestFunction TestFunction::tensor_mollifier(Vec2 center, double radius,
                                            int order) {
  if (!(radius > 0.0)) fail("BadArgument", "mollifier radius must be positive");
  TestFunction f;
  f.support_ = FinitePerimeterSet::disc(center, radius);
  f.pieces_.push_back({f.support_, radial_bump_poly(center, radius, order)});
  f.sup_norm_ = 1.0;
  return f;
}

TestFunction TestFunction::polynomial_bump(const Poly2& q, Vec2 center,
                                           double radius, int order) {
  TestFunction f;
  f.support_ = FinitePerimeterSet::disc(center, radius);
  Poly2 v = q * radial_bump_poly(center, radius, order);
  f.pieces_.push_back({f.support_, v});
  double sup = 0.0;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) {
      Vec2 p = center + Vec2{radius * (i / 20.0 - 1.0), radius * (j / 20.0 - 1.0)};
      if (dist(p, center) <= radius) sup = std::max(sup, std::abs(v.eval(p)));
    }
  f.sup_norm_ = sup;
  return f;
}

TestFunction TestFunction::plateau(Vec2 lo, Vec2 hi, double wing, int order) {
  return plateau_tensor(lo, hi, {wing, wing}, order);
}

TestFunction TestFunction::plateau_tensor(Vec2 lo, Vec2 hi, Vec2 wing,
                                          int order) {
  if (!(wing.x > 0.0) || !(wing.y > 0.0))
    fail("BadArgument", "plateau wings must be positive");
  TestFunction f;
  Poly1 S = smoothstep(order);
  // 1D profile pieces over [lo-w, lo], [lo, hi], [hi, hi+w]
  auto profile = [&](double a, double b, double w) {
    std::vector<std::pair<std::pair<double, double>, Poly1>> ps;
    // rising: S((t - (a-w))/w)
    ps.push_back({{a - w, a}, S.compose_affine(-(a - w) / w, 1.0 / w)});
    ps.push_back({{a, b}, Poly1::constant(1.0)});
    // falling: S(((b+w) - t)/w)
    ps.push_back({{b, b + w}, S.compose_affine((b + w) / w, -1.0 / w)});
    return ps;
  };
  auto px = profile(lo.x, hi.x, wing.x);
  auto py = profile(lo.y, hi.y, wing.y);
  for (const auto& [rx, fx] : px)
    for (const auto& [ry, fy] : py) {
      FinitePerimeterSet cell = FinitePerimeterSet::box(
          {rx.first, ry.first}, {rx.second, ry.second});
      f.pieces_.push_back({cell, fx.as_poly2(0) * fy.as_poly2(1)});
    }
  f.support_ = FinitePerimeterSet::box({lo.x - wing.x, lo.y - wing.y},
                                       {hi.x + wing.x, hi.y + wing.y});
  f.sup_norm_ = 1.0;
  return f;
}

double TestFunction::eval(Vec2 p) const {
  for (const auto& piece : pieces_)
    if (piece.cell.where(p) != FinitePerimeterSet::Where::Outside)
      return piece.value.eval(p);
  return 0.0;
}

Vec2 TestFunction::grad(Vec2 p) const {
  for (const auto& piece : pieces_)
    if (piece.cell.where(p) != FinitePerimeterSet::Where::Outside)
      return {piece.value.dx().eval(p), piece.value.dy().eval(p)};
  return {0.0, 0.0};
}

std::pair<Vec2, Vec2> TestFunction::support_bbox() const {
  auto bb = support_.bbox();
  if (!bb) fail("Internal", "test function support must be bounded");
  return *bb;
}

// ---------------------------------------------------------------------------
// MeasureRep arithmetic
// ---------------------------------------------------------------------------

MeasureRep& MeasureRep::operator+=(const MeasureRep& o) {
  ac.insert(ac.end(), o.ac.begin(), o.ac.end());
  curves.insert(curves.end(), o.curves.begin(), o.curves.end());
  cantor.insert(cantor.end(), o.cantor.begin(), o.cantor.end());
  return *this;
}

MeasureRep MeasureRep::operator*(double s) const {
  MeasureRep out = *this;
  for (auto& a : out.ac) a.density = a.density * s;
  for (auto& c : out.curves) {
    c.density.scalar = c.density.scalar * s;
    c.density.vec = {c.density.vec.x * s, c.density.vec.y * s};
  }
  for (auto& c : out.cantor) c.weight = c.weight * s;
  return out;
}

MeasureRep MeasureRep::lebesgue(const FinitePerimeterSet& support) {
  MeasureRep m;
  m.ac.push_back({Poly2(1.0), support});
  return m;
}

MeasureRep MeasureRep::curve(FragmentList fs, CurveDensity d) {
  MeasureRep m;
  m.curves.push_back({std::move(fs), std::move(d)});
  return m;
}

// ---------------------------------------------------------------------------
// Evaluation helpers
// ---------------------------------------------------------------------------

FinitePerimeterSet window_set(const EvalWindow& w) {
  if (auto* s = std::get_if<FinitePerimeterSet>(&w)) return *s;
  return probe_set(std::get<Probe>(w));
}

namespace {

// bounded region of a ∩ b through a common bounding box
std::optional<Region> intersection_region(const FinitePerimeterSet& a,
                                          const FinitePerimeterSet& b) {
  auto ba = a.bbox();
  auto bb = b.bbox();
  std::optional<std::pair<Vec2, Vec2>> box;
  if (ba && bb) {
    Vec2 lo{std::max(ba->first.x, bb->first.x),
            std::max(ba->first.y, bb->first.y)};
    Vec2 hi{std::min(ba->second.x, bb->second.x),
            std::min(ba->second.y, bb->second.y)};
    if (hi.x <= lo.x || hi.y <= lo.y) return Region{};
    box = std::make_pair(lo, hi);
  } else if (ba) {
    box = ba;
  } else if (bb) {
    box = bb;
  } else {
    fail("UnboundedSet", "measure evaluation window must be bounded");
  }
  Vec2 margin{0.5 + 0.01 * (box->second.x - box->first.x),
              0.5 + 0.01 * (box->second.y - box->first.y)};
  Vec2 lo = box->first - margin, hi = box->second + margin;
  Region rs = region_in_box(a, lo, hi);
  Region rb = region_in_box(b, lo, hi);
  return fragment_boolean(BoolOp::Intersection, rs, a, rb, b);
}

double curve_integral(const FragmentList& fs, const CurveDensity& d) {
  return integrate_poly_fragments_normal(
      fs, d.scalar, d.use_normal ? d.vec : Vec2Poly{});
}

double cantor_part_eval(const CantorLinePart& cp, const FinitePerimeterSet& B,
                        const std::function<double(Vec2)>& extra_weight) {
  const double g = 1.0 / std::sqrt(3.0);
  double total = 0.0;
  double span = cp.t_hi - cp.t_lo;
  if (span <= 0.0) return 0.0;
  for (const auto& [a, b] : cp.profile.carriers.intervals()) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (double node : {mid - g * half, mid + g * half}) {
      Vec2 origin = cp.axis == 0 ? Vec2{node, cp.t_lo} : Vec2{cp.t_lo, node};
      Vec2 tdir = cp.axis == 0 ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
      IntervalUnion slice = B.ray_intervals(origin, tdir, span);
      double inner = 0.0;
      for (const auto& [s0, s1] : slice.intervals()) {
        inner += gl_integrate(
            [&](double s) {
              Vec2 p = origin + s * tdir;
              return cp.weight.eval(p) * (extra_weight ? extra_weight(p) : 1.0);
            },
            s0, s1, 12);
      }
      total += 0.5 * cp.profile.interval_mass * inner;
    }
  }
  return total;
}

double cantor_part_eval_abs(const CantorLinePart& cp,
                            const FinitePerimeterSet& B) {
  const double g = 1.0 / std::sqrt(3.0);
  double total = 0.0;
  double span = cp.t_hi - cp.t_lo;
  if (span <= 0.0) return 0.0;
  for (const auto& [a, b] : cp.profile.carriers.intervals()) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (double node : {mid - g * half, mid + g * half}) {
      Vec2 origin = cp.axis == 0 ? Vec2{node, cp.t_lo} : Vec2{cp.t_lo, node};
      Vec2 tdir = cp.axis == 0 ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
      IntervalUnion slice = B.ray_intervals(origin, tdir, span);
      double inner = 0.0;
      for (const auto& [s0, s1] : slice.intervals()) {
        inner += gl_integrate(
            [&](double s) { return std::abs(cp.weight.eval(origin + s * tdir)); },
            s0, s1, 12);
      }
      total += 0.5 * cp.profile.interval_mass * inner;
    }
  }
  return total;
}

// straddle check for box-like windows (spec: DepthInsufficient)
void check_cantor_resolution(const CantorLinePart& cp, const EvalWindow& w) {
  const BoxProbe* box = nullptr;
  if (auto* p = std::get_if<Probe>(&w)) box = std::get_if<BoxProbe>(p);
  if (!box) return;
  double a = cp.axis == 0 ? box->lo.x : box->lo.y;
  double b = cp.axis == 0 ? box->hi.x : box->hi.y;
  for (const auto& [c, d] : cp.profile.carriers.intervals()) {
    for (double e : {a, b})
      if (e > c + kGeomTol && e < d - kGeomTol)
        fail("DepthInsufficient",
             "window endpoint falls strictly inside a surviving interval");
  }
}

}  // namespace

double eval_on(const MeasureRep& mu, const EvalWindow& window,
               bool include_boundary) {
  FinitePerimeterSet B = window_set(window);
  double total = 0.0;
  for (const auto& part : mu.ac) {
    auto region = intersection_region(part.support, B);
    if (region && !region->empty())
      total += integrate_poly_region(*region, part.density);
  }
  for (const auto& part : mu.curves) {
    FragmentList kept = clip_fragments(part.curve, B, include_boundary);
    total += curve_integral(kept, part.density);
  }
  for (const auto& part : mu.cantor) {
    check_cantor_resolution(part, window);
    total += cantor_part_eval(part, B, nullptr);
  }
  return total;
}

double eval_on_curve(const MeasureRep& mu, const FragmentList& curve) {
  double total = 0.0;
  for (const auto& part : mu.curves) {
    for (const auto& f : part.curve)
      for (const auto& g : curve) {
        FragmentList overlap = coincident_overlap(f, g);
        total += curve_integral(overlap, part.density);
      }
  }
  return total;
}

namespace {

double curve_integral_weighted(const FragmentList& fs, const CurveDensity& d,
                               const Poly2& q) {
  Vec2Poly v = d.use_normal ? Vec2Poly{d.vec.x * q, d.vec.y * q} : Vec2Poly{};
  return integrate_poly_fragments_normal(fs, d.scalar * q, v);
}

// split curve fragments against every cell boundary of phi, and assign each
// piece to one covering cell (piece values agree on shared cell edges)
double curve_against_test(const CurvePart& part, const TestFunction& phi) {
  auto [lo, hi] = phi.support_bbox();
  Vec2 margin{0.5, 0.5};
  FragmentList cutters;
  for (const auto& piece : phi.pieces()) {
    FragmentList b = boundary_within(piece.cell, lo - margin, hi + margin);
    cutters.insert(cutters.end(), b.begin(), b.end());
  }
  double total = 0.0;
  for (const auto& frag : part.curve) {
    for (const auto& piece : split_fragment_against(frag, cutters)) {
      Vec2 m = piece.midpoint();
      for (const auto& cell : phi.pieces()) {
        if (cell.cell.where(m) != FinitePerimeterSet::Where::Outside) {
          total += curve_integral_weighted({piece}, part.density, cell.value);
          break;
        }
      }
    }
  }
  return total;
}

}  // namespace

double pair_test(const MeasureRep& mu, const TestFunction& phi) {
  double total = 0.0;
  for (const auto& part : mu.ac) {
    for (const auto& piece : phi.pieces()) {
      auto region = intersection_region(part.support, piece.cell);
      if (region && !region->empty())
        total += integrate_poly_region(*region, part.density * piece.value);
    }
  }
  for (const auto& part : mu.curves) total += curve_against_test(part, phi);
  for (const auto& part : mu.cantor) {
    // integrate cell by cell so the transverse rule never spans a kink
    for (const auto& piece : phi.pieces()) {
      CantorLinePart weighted = part;
      weighted.weight = part.weight * piece.value;
      total += cantor_part_eval(weighted, piece.cell, nullptr);
    }
  }
  return total;
}

double total_variation(const MeasureRep& mu, const EvalWindow& window) {
  FinitePerimeterSet B = window_set(window);
  double total = 0.0;
  for (const auto& part : mu.ac) {
    if (part.density.is_zero()) continue;
    auto region = intersection_region(part.support, B);
    if (!region || region->empty()) continue;
    // sign inspection on quadrature nodes
    RegionDecomposition rd = decompose(*region);
    bool pos = false, neg = false;
    auto look = [&](Vec2 p) {
      double v = part.density.eval(p);
      if (v > 1e-13) pos = true;
      if (v < -1e-13) neg = true;
    };
    for (const auto& t : rd.triangles)
      for (double u : {0.25, 0.5, 0.75}) look(t.a + u * ((t.b + t.c) * 0.5 - t.a));
    for (const auto& s : rd.segments)
      look(s.center + s.radius * dir_of(0.5 * (s.t0 + s.t1)));
    if (!(pos && neg)) {
      total += std::abs(integrate_poly_region(*region, part.density));
      continue;
    }
    // affine density: split the support by the zero line, exact
    if (part.density.deg_x() <= 1 && part.density.deg_y() <= 1 &&
        part.density.coeff(1, 1) == 0.0) {
      double a = part.density.coeff(1, 0), b = part.density.coeff(0, 1);
      double c = part.density.coeff(0, 0);
      Vec2 n{a, b};
      double nn = n.norm();
      FinitePerimeterSet plus =
          FinitePerimeterSet::half_plane(n / nn, -c / nn);
      auto rplus = intersection_region(part.support, FinitePerimeterSet::boolean(
                                                         BoolOp::Intersection, B, plus));
      auto rminus = intersection_region(
          part.support, FinitePerimeterSet::boolean(
                            BoolOp::Difference, B, plus));
      double vp = rplus && !rplus->empty()
                      ? integrate_poly_region(*rplus, part.density)
                      : 0.0;
      double vm = rminus && !rminus->empty()
                      ? integrate_poly_region(*rminus, part.density)
                      : 0.0;
      total += std::abs(vp) + std::abs(vm);
      continue;
    }
    // general sign-changing density: adaptive quadrature of |density|
    total += integrate_smooth(
        rd, [&](Vec2 p) { return std::abs(part.density.eval(p)); }, 1e-9);
  }
  for (const auto& part : mu.curves) {
    FragmentList kept = clip_fragments(part.curve, B, true);
    for (const auto& f : kept) {
      bool pos = false, neg = false;
      for (double u : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        double v = part.density.value(f.point_at(u), f.left_normal_at(u));
        if (v > 1e-13) pos = true;
        if (v < -1e-13) neg = true;
      }
      if (!(pos && neg)) {
        total += std::abs(curve_integral({f}, part.density));
      } else {
        total += integrate_fragments(
            {f},
            [&](Vec2 p, Vec2 nu) { return std::abs(part.density.value(p, nu)); },
            1e-10);
      }
    }
  }
  for (const auto& part : mu.cantor) {
    total += cantor_part_eval_abs(part, B);
  }
  return total;
}

MeasureRep restrict_measure(const MeasureRep& mu, const FinitePerimeterSet& e) {
  MeasureRep out;
  for (const auto& part : mu.ac)
    out.ac.push_back(
        {part.density,
         FinitePerimeterSet::boolean(BoolOp::Intersection, part.support, e)});
  for (const auto& part : mu.curves) {
    CurvePart cp;
    cp.curve = clip_fragments(part.curve, e, true);
    cp.density = part.density;
    if (!cp.curve.empty()) out.curves.push_back(std::move(cp));
  }
  for (const auto& part : mu.cantor) {
    // restriction kept structural only for axis-aligned boxes
    auto bb = e.bbox();
    if (!bb) fail("UnboundedSet", "cantor restriction window must be bounded");
    CantorLinePart cp = part;
    double alo = part.axis == 0 ? bb->first.x : bb->first.y;
    double ahi = part.axis == 0 ? bb->second.x : bb->second.y;
    cp.profile = part.profile.clipped(alo, ahi);
    double tlo = part.axis == 0 ? bb->first.y : bb->first.x;
    double thi = part.axis == 0 ? bb->second.y : bb->second.x;
    cp.t_lo = std::max(part.t_lo, tlo);
    cp.t_hi = std::min(part.t_hi, thi);
    if (cp.t_hi > cp.t_lo && cp.profile.carriers.count() > 0)
      out.cantor.push_back(std::move(cp));
  }
  return out;
}

MeasureRep pushforward_homothety(const MeasureRep& mu, Vec2 x, double r,
                                 double alpha) {
  if (!(r > 0.0)) fail("BadArgument", "homothety radius must be positive");
  if (alpha < 0.0) fail("BadArgument", "alpha must be nonnegative");
  MeasureRep out;
  FinitePerimeterSet unit = FinitePerimeterSet::disc({0, 0}, 1.0);
  // z = (y - x)/r; substitute y = x + r z into densities
  auto subst = [&](const Poly2& p) {
    return p.compose_affine(x.x, r, 0.0, x.y, 0.0, r);
  };
  for (const auto& part : mu.ac) {
    FinitePerimeterSet mapped =
        part.support.scaled({-x.x / r, -x.y / r}, 1.0 / r);
    out.ac.push_back(
        {subst(part.density) * std::pow(r, 2.0 - alpha),
         FinitePerimeterSet::boolean(BoolOp::Intersection, mapped, unit)});
  }
  for (const auto& part : mu.curves) {
    CurvePart np;
    // clip to B_r(x) at the original (well-conditioned) scale, then map
    FragmentList kept =
        clip_fragments(part.curve, FinitePerimeterSet::disc(x, r), true);
    for (const auto& f : kept) {
      if (f.is_arc()) {
        Arc a = f.arc();
        a.center = (a.center - x) / r;
        a.radius /= r;
        np.curve.push_back(a);
      } else {
        Segment s = f.seg();
        s.a = (s.a - x) / r;
        s.b = (s.b - x) / r;
        np.curve.push_back(s);
      }
    }
    double scale = std::pow(r, 1.0 - alpha);
    np.density.use_normal = part.density.use_normal;
    np.density.scalar = subst(part.density.scalar) * scale;
    np.density.vec = {subst(part.density.vec.x) * scale,
                      subst(part.density.vec.y) * scale};
    if (!np.curve.empty()) out.curves.push_back(std::move(np));
  }
  for (const auto& part : mu.cantor) {
    CantorLinePart np = part;
    double ax_shift = part.axis == 0 ? -x.x / r : -x.y / r;
    np.profile = part.profile.affine(ax_shift, 1.0 / r).clipped(-1.0, 1.0);
    double t_shift = part.axis == 0 ? x.y : x.x;
    np.t_lo = (part.t_lo - t_shift) / r;
    np.t_hi = (part.t_hi - t_shift) / r;
    np.t_lo = std::max(np.t_lo, -1.0);
    np.t_hi = std::min(np.t_hi, 1.0);
    np.weight = subst(part.weight) * std::pow(r, 1.0 - alpha);
    if (np.t_hi > np.t_lo && np.profile.carriers.count() > 0)
      out.cantor.push_back(std::move(np));
  }
  return out;
}

double weakstar_gap(const MeasureRep& mu, const MeasureRep& gamma,
                    const std::vector<TestFunction>& suite) {
  if (suite.empty()) fail("BadArgument", "test suite must be nonempty");
  double gap = 0.0;
  for (const auto& phi : suite) {
    double d = std::abs(pair_test(mu, phi) - pair_test(gamma, phi));
    gap = std::max(gap, d / (1.0 + phi.sup_norm()));
  }
  return gap;
}

std::vector<TestFunction> default_gap_suite() {
  std::vector<TestFunction> suite;
  suite.push_back(TestFunction::tensor_mollifier({0, 0}, 0.5, 3));
  for (int k = 0; k < 7; ++k) {
    double t = 2.0 * kPi * k / 7.0;
    suite.push_back(TestFunction::tensor_mollifier(0.45 * dir_of(t), 0.4, 3));
  }
  suite.push_back(TestFunction::plateau({-0.45, -0.45}, {0.45, 0.45}, 0.2, 2));
  return suite;
}

}  // namespace pairlab
