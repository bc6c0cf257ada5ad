#include "pairlab/scenes.hpp"

#include <algorithm>
#include <cmath>

namespace pairlab {

namespace {

std::pair<Vec2, Vec2> domain_bbox(const FinitePerimeterSet& domain) {
  auto bb = domain.bbox();
  if (!bb) fail("UnboundedSet", "scene domain must be bounded");
  return *bb;
}

void collect_polygon_vertices(const FinitePerimeterSet& set,
                              std::vector<Vec2>& out) {
  if (auto* poly = std::get_if<PolygonSet>(&set.node())) {
    out.insert(out.end(), poly->vertices.begin(), poly->vertices.end());
    return;
  }
  if (auto* bs = std::get_if<BooleanSet>(&set.node())) {
    collect_polygon_vertices(*bs->lhs, out);
    collect_polygon_vertices(*bs->rhs, out);
  }
}

bool fragment_on(const Fragment& f, Vec2 p, double* normal_dir = nullptr) {
  // distance-based membership plus left-normal output
  if (f.is_arc()) {
    const Arc& a = f.arc();
    if (std::abs(dist(p, a.center) - a.radius) > kGeomTol * (1 + a.radius))
      return false;
    double th = std::atan2(p.y - a.center.y, p.x - a.center.x);
    double lo = std::min(a.t0, a.t1), hi = std::max(a.t0, a.t1);
    while (th < lo - kGeomTol) th += 2 * kPi;
    while (th > hi + kGeomTol) th -= 2 * kPi;
    if (th < lo - 1e-9 || th > hi + 1e-9) return false;
    if (normal_dir) *normal_dir = th;
    return true;
  }
  const Segment& s = f.seg();
  Vec2 d = s.b - s.a;
  double len2 = d.norm2();
  if (len2 == 0) return false;
  double u = (p - s.a).dot(d) / len2;
  if (u < -kGeomTol || u > 1 + kGeomTol) return false;
  return dist(s.a + u * d, p) <= kGeomTol * (1 + d.norm());
}

Vec2 fragment_left_normal_at_point(const Fragment& f, Vec2 p) {
  if (f.is_arc()) {
    const Arc& a = f.arc();
    Vec2 radial = (p - a.center).normalized();
    return a.t1 >= a.t0 ? -radial : radial;
  }
  return f.left_normal_at(0.5);
}

}  // namespace

// ---------------------------------------------------------------------------
// DMField
// ---------------------------------------------------------------------------

DMField::DMField(Vec2Poly smooth, std::vector<JumpTerm> jumps,
                 FinitePerimeterSet domain)
    : smooth_(std::move(smooth)),
      jumps_(std::move(jumps)),
      domain_(std::move(domain)) {
  build_cache();
}

DMField DMField::constant(Vec2 a, FinitePerimeterSet domain) {
  return DMField(Vec2Poly::constant(a), {}, std::move(domain));
}

DMField DMField::polynomial(Vec2Poly p, FinitePerimeterSet domain) {
  return DMField(std::move(p), {}, std::move(domain));
}

Vec2 DMField::eval(Vec2 p) const {
  Vec2 v = smooth_.eval(p);
  for (const auto& t : jumps_)
    if (t.region.where(p) == FinitePerimeterSet::Where::Inside)
      v = v + t.coef * t.modulation.eval(p);
  return v;
}

Vec2 DMField::side_value(Vec2 p, Vec2 dir) const {
  Vec2 v = smooth_.eval(p);
  for (const auto& t : jumps_)
    if (t.region.side_contains(p, dir)) v = v + t.coef * t.modulation.eval(p);
  return v;
}

void DMField::build_cache() {
  auto [lo, hi] = domain_bbox(domain_);
  Vec2 margin{0.5, 0.5};

  // absolutely continuous part of Div A
  Poly2 div_smooth = smooth_.divergence();
  if (!div_smooth.is_zero()) divergence_.ac.push_back({div_smooth, domain_});
  for (const auto& t : jumps_) {
    Poly2 div_term = (t.modulation.dx() * t.coef.x) +
                     (t.modulation.dy() * t.coef.y);
    if (!div_term.is_zero())
      divergence_.ac.push_back(
          {div_term, FinitePerimeterSet::boolean(BoolOp::Intersection,
                                                 t.region, domain_)});
  }

  // gather interface fragments with their vector jump densities
  struct Piece {
    Fragment frag;
    Vec2Poly jump;
  };
  std::vector<Piece> raw;
  FragmentList all_frags;
  for (const auto& t : jumps_) {
    FragmentList bd = boundary_within(t.region, lo - margin, hi + margin);
    bd = clip_fragments(bd, domain_, true);
    Vec2Poly j{t.modulation * t.coef.x, t.modulation * t.coef.y};
    for (const auto& f : bd) {
      raw.push_back({f, j});
      all_frags.push_back(f);
    }
  }
  // split everything against everything, then merge coincident pieces
  std::vector<Piece> split;
  for (const auto& r : raw) {
    for (const auto& piece : split_fragment_against(r.frag, all_frags))
      split.push_back({piece, r.jump});
  }
  std::vector<bool> used(split.size(), false);
  std::vector<Piece> merged;
  for (size_t i = 0; i < split.size(); ++i) {
    if (used[i]) continue;
    Piece acc = split[i];
    used[i] = true;
    Vec2 mi = acc.frag.midpoint();
    Vec2 ti = acc.frag.tangent_at(0.5);
    for (size_t j = i + 1; j < split.size(); ++j) {
      if (used[j]) continue;
      if (!fragment_on(split[j].frag, mi)) continue;
      if (!fragment_on(acc.frag, split[j].frag.midpoint())) continue;
      Vec2 tj = split[j].frag.tangent_at(0.5);
      double sgn = ti.dot(tj) > 0 ? 1.0 : -1.0;
      acc.jump = acc.jump + Vec2Poly{split[j].jump.x * sgn, split[j].jump.y * sgn};
      used[j] = true;
    }
    merged.push_back(std::move(acc));
  }
  // keep curves whose normal jump density is not identically zero
  for (auto& m : merged) {
    bool nonzero = false;
    for (double u : {0.05, 0.2, 0.45, 0.65, 0.8, 0.95}) {
      Vec2 p = m.frag.point_at(u);
      Vec2 nu = m.frag.left_normal_at(u);
      if (std::abs(m.jump.eval(p).dot(nu)) > 1e-13) nonzero = true;
    }
    if (!nonzero) continue;
    theta_.push_back({m.frag, m.jump});
    divergence_.curves.push_back(
        {{m.frag}, CurveDensity::normal_component(m.jump)});
  }

  // rigorous upper bound for ||A||_inf: coefficient bounds per term over the
  // term's reach (slightly loose, never an underestimate)
  auto poly_bound = [](const Poly2& p, Vec2 blo, Vec2 bhi) {
    double mx = std::max(std::abs(blo.x), std::abs(bhi.x));
    double my = std::max(std::abs(blo.y), std::abs(bhi.y));
    double s = 0.0;
    for (int i = 0; i <= p.deg_x(); ++i)
      for (int j = 0; j <= p.deg_y(); ++j)
        s += std::abs(p.coeff(i, j)) * std::pow(mx, i) * std::pow(my, j);
    return s;
  };
  double bx = poly_bound(smooth_.x, lo, hi);
  double by = poly_bound(smooth_.y, lo, hi);
  for (const auto& t : jumps_) {
    Vec2 tlo = lo, thi = hi;
    if (auto tb = t.region.bbox()) {
      tlo = {std::max(lo.x, tb->first.x), std::max(lo.y, tb->first.y)};
      thi = {std::min(hi.x, tb->second.x), std::min(hi.y, tb->second.y)};
    }
    double q = poly_bound(t.modulation, tlo, thi);
    bx += std::abs(t.coef.x) * q;
    by += std::abs(t.coef.y) * q;
  }
  sup_norm_ = std::hypot(bx, by);
}

bool DMField::on_jump_set(Vec2 p) const {
  for (const auto& t : theta_)
    if (fragment_on(t.frag, p)) return true;
  return false;
}

DMField::PreciseValue DMField::precise_value(Vec2 p) const {
  std::vector<Vec2> corners;
  for (const auto& t : jumps_) collect_polygon_vertices(t.region, corners);
  for (const auto& c : corners)
    if (dist(c, p) <= kGeomTol)
      fail("CornerPoint", "field value undefined at a polygon vertex");
  for (const auto& t : jumps_) {
    if (t.region.where(p) != FinitePerimeterSet::Where::Boundary) continue;
    Vec2 nu;
    try {
      nu = interior_normal(t.region, p);
    } catch (const Error&) {
      continue;  // cancelled boundary inside a boolean
    }
    PreciseValue pv;
    pv.is_jump = true;
    pv.normal = nu;
    pv.inner = side_value(p, nu);
    pv.outer = side_value(p, -nu);
    if (dist(pv.inner, pv.outer) <= 1e-13) {
      pv.is_jump = false;
      pv.value = pv.inner;
    }
    return pv;
  }
  PreciseValue pv;
  pv.value = eval(p);
  return pv;
}

DMField DMField::operator*(double s) const {
  Vec2Poly sm{smooth_.x * s, smooth_.y * s};
  std::vector<JumpTerm> js;
  for (const auto& t : jumps_)
    js.push_back(JumpTerm{t.coef * s, t.region, t.modulation});
  return DMField(sm, js, domain_);
}

DMField DMField::operator+(const DMField& o) const {
  Vec2Poly sm{smooth_.x + o.smooth_.x, smooth_.y + o.smooth_.y};
  std::vector<JumpTerm> js = jumps_;
  js.insert(js.end(), o.jumps_.begin(), o.jumps_.end());
  return DMField(sm, js, domain_);
}

// ---------------------------------------------------------------------------
// BVFunction
// ---------------------------------------------------------------------------

BVFunction BVFunction::characteristic(FinitePerimeterSet e,
                                      FinitePerimeterSet domain) {
  return piecewise({{std::move(e), Poly2(1.0)}}, std::move(domain));
}

BVFunction BVFunction::smooth(Poly2 p, FinitePerimeterSet domain) {
  BVFunction u(domain);
  u.kind_ = Kind::Piecewise;
  u.pieces_.push_back({domain, std::move(p)});
  u.build_piecewise_cache();
  return u;
}

BVFunction BVFunction::piecewise(std::vector<BVPiece> pieces,
                                 FinitePerimeterSet domain) {
  BVFunction u(std::move(domain));
  u.kind_ = Kind::Piecewise;
  u.pieces_ = std::move(pieces);
  u.build_piecewise_cache();
  return u;
}

BVFunction BVFunction::staircase(double lambda, int depth, int axis,
                                 FinitePerimeterSet domain) {
  if (axis != 0 && axis != 1) fail("BadArgument", "axis must be 0 or 1");
  BVFunction u(std::move(domain));
  u.kind_ = Kind::Staircase;
  u.lambda_ = lambda;
  u.depth_ = depth;
  u.cantor_axis_ = axis;
  CantorMeasure1D gamma = CantorMeasure1D::build(lambda, depth);
  u.carriers_ = gamma.carriers;
  auto [lo, hi] = domain_bbox(u.domain_);
  CantorLinePart cp;
  cp.profile = gamma;
  cp.axis = axis;
  cp.t_lo = axis == 0 ? lo.y : lo.x;
  cp.t_hi = axis == 0 ? hi.y : hi.x;
  cp.weight = Poly2(1.0);
  u.cantor_ = cp;
  u.sup_norm_ = 1.0;
  return u;
}

BVFunction BVFunction::affine_of(double a, double b, const BVFunction& inner) {
  if (!(b > 0.0)) fail("BadArgument", "outer affine map must be increasing");
  BVFunction u = inner;
  if (u.kind_ == Kind::Staircase) {
    u.affine_shift_ = a + b * u.affine_shift_;
    u.affine_scale_ = b * u.affine_scale_;
    if (u.cantor_) u.cantor_->weight = u.cantor_->weight * b;
    u.sup_norm_ = std::abs(u.affine_shift_) + std::abs(u.affine_scale_);
    return u;
  }
  for (auto& piece : u.pieces_)
    piece.value = piece.value * b + Poly2(a);
  // the complement value 0 maps to a; representable only when the pieces
  // tile the domain or a == 0
  if (a != 0.0) {
    fail("UnsupportedScene",
         "affine_of with offset requires re-specifying the piecewise scene");
  }
  u.grad_.clear();
  u.jumps_.clear();
  u.thin_.clear();
  u.build_piecewise_cache();
  return u;
}

void BVFunction::build_piecewise_cache() {
  auto [lo, hi] = domain_bbox(domain_);
  Vec2 margin{0.5, 0.5};
  FragmentList all_bounds;
  std::vector<FragmentList> per_piece;
  for (const auto& piece : pieces_) {
    FragmentList bd = boundary_within(piece.region, lo - margin, hi + margin);
    bd = clip_fragments(bd, domain_, false);  // ∂Ω carries no interior jump
    per_piece.push_back(bd);
    all_bounds.insert(all_bounds.end(), bd.begin(), bd.end());
    if (!piece.value.dx().is_zero() || !piece.value.dy().is_zero())
      grad_.push_back({{piece.value.dx(), piece.value.dy()}, piece.region});
    collect_polygon_vertices(piece.region, thin_);
  }
  for (size_t i = 0; i < pieces_.size(); ++i) {
    for (const auto& frag : per_piece[i]) {
      for (const auto& piece : split_fragment_against(frag, all_bounds)) {
        Vec2 m = piece.midpoint();
        Vec2 nu = piece.left_normal_at(0.5);
        // inner side (left) is piece i
        Poly2 u_in = pieces_[i].value;
        Poly2 u_out(0.0);
        size_t neighbor = pieces_.size();
        for (size_t j = 0; j < pieces_.size(); ++j) {
          if (j == i) continue;
          if (pieces_[j].region.side_contains(m, -nu)) {
            u_out = pieces_[j].value;
            neighbor = j;
            break;
          }
        }
        if (neighbor < i) continue;  // interface already handled from j's side
        Poly2 diff = u_in - u_out;
        bool pos = false, neg = false;
        for (double uu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
          double v = diff.eval(piece.point_at(uu));
          if (v > 1e-13) pos = true;
          if (v < -1e-13) neg = true;
        }
        if (!pos && !neg) continue;  // no jump across this interface
        if (pos && neg)
          fail("UnsupportedScene",
               "jump sign changes along an interface; split the scene");
        if (pos) {
          jumps_.push_back({piece, u_in, u_out});
        } else {
          jumps_.push_back({piece.reversed(), u_out, u_in});
        }
      }
    }
  }
  double sup = 0.0;
  for (const auto& piece : pieces_) {
    auto bb = piece.region.bbox();
    Vec2 plo = bb ? bb->first : lo, phi = bb ? bb->second : hi;
    for (int i = 0; i <= 24; ++i)
      for (int j = 0; j <= 24; ++j) {
        Vec2 p{plo.x + (phi.x - plo.x) * i / 24.0,
               plo.y + (phi.y - plo.y) * j / 24.0};
        sup = std::max(sup, std::abs(piece.value.eval(p)));
      }
  }
  sup_norm_ = sup;
}

double BVFunction::staircase_profile(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const auto& iv = carriers_.intervals();
  double step = std::pow(0.5, depth_);
  size_t k = 0;
  // first carrier whose right end is >= t
  size_t lo = 0, hi = iv.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (iv[mid].second < t)
      lo = mid + 1;
    else
      hi = mid;
  }
  k = lo;
  if (k >= iv.size()) return 1.0;
  if (t <= iv[k].first) return k * step;  // in the gap left of carrier k
  double frac = (t - iv[k].first) / (iv[k].second - iv[k].first);
  return (double(k) + frac) * step;
}

double BVFunction::staircase_inverse(double v) const {
  double n = std::ldexp(v, depth_);  // v * 2^depth
  const auto& iv = carriers_.intervals();
  if (std::abs(n - std::round(n)) < 1e-12) {
    // plateau value: take the midpoint of the gap (the profile "hits" the
    // value there in the symmetric-inverse convention)
    size_t k = size_t(std::llround(n));
    if (k == 0 || k >= iv.size())
      fail("ExceptionalLevel", "level outside profile range");
    return 0.5 * (iv[k - 1].second + iv[k].first);
  }
  double k = std::floor(n);
  size_t idx = size_t(k);
  if (idx >= iv.size()) fail("ExceptionalLevel", "level outside profile range");
  double frac = n - k;
  return iv[idx].first + frac * (iv[idx].second - iv[idx].first);
}

double BVFunction::staircase_profile_integral(const Poly1& f, double a,
                                              double b) const {
  if (kind_ != Kind::Staircase)
    fail("BadArgument", "profile integral is a staircase operation");
  if (b <= a) return 0.0;
  // integral of f * (shift + scale * s(t)): plateaus are constant between
  // carriers, ramps are affine on carriers
  double total = affine_shift_ * f.integrate(a, b);
  const auto& iv = carriers_.intervals();
  double step = std::pow(0.5, depth_);
  double s_total = 0.0;
  // left clamp region t < 0 contributes s = 0
  double cursor = std::max(a, 0.0);
  if (cursor > b) cursor = b;
  for (size_t k = 0; k < iv.size() && cursor < b; ++k) {
    auto [c, d] = iv[k];
    // plateau before carrier k at value k*step
    double plo = cursor, phi = std::min(b, c);
    if (phi > plo) s_total += double(k) * step * f.integrate(plo, phi);
    cursor = std::max(cursor, c);
    if (cursor >= b) break;
    // ramp on the carrier: s = k*step + (t-c)/(d-c)*step
    double rlo = std::max(cursor, c), rhi = std::min(b, d);
    if (rhi > rlo) {
      Poly1 ramp = Poly1(std::vector<double>{
                       double(k) * step - c / (d - c) * step, step / (d - c)});
      s_total += (f * ramp).integrate(rlo, rhi);
    }
    cursor = std::max(cursor, std::min(b, d));
  }
  // right clamp region t > 1 contributes s = 1
  if (cursor < b) {
    double plo = std::max(cursor, 1.0);
    if (b > plo) s_total += f.integrate(plo, b);
    // plateau between the last carrier and 1 is value 1 as well
    if (plo > cursor) s_total += f.integrate(cursor, plo);
  }
  total += affine_scale_ * s_total;
  return total;
}

double BVFunction::eval(Vec2 p) const {
  if (kind_ == Kind::Staircase) {
    double t = cantor_axis_ == 0 ? p.x : p.y;
    return affine_shift_ + affine_scale_ * staircase_profile(t);
  }
  for (const auto& piece : pieces_)
    if (piece.region.where(p) == FinitePerimeterSet::Where::Inside)
      return piece.value.eval(p);
  return 0.0;
}

double BVFunction::side_value(Vec2 p, Vec2 dir) const {
  if (kind_ == Kind::Staircase) return eval(p);
  for (const auto& piece : pieces_)
    if (piece.region.side_contains(p, dir)) return piece.value.eval(p);
  return 0.0;
}

double BVFunction::tilde(Vec2 p) const {
  if (kind_ == Kind::Staircase) return eval(p);
  if (on_jump(p))
    fail("NotOnBoundary", "no approximate limit at a jump point");
  for (const auto& piece : pieces_)
    if (piece.region.where(p) != FinitePerimeterSet::Where::Outside)
      return piece.value.eval(p);
  return 0.0;
}

bool BVFunction::on_jump(Vec2 p) const {
  for (const auto& j : jumps_)
    if (fragment_on(j.frag, p)) return true;
  return false;
}

std::pair<double, double> BVFunction::jump_values(Vec2 p) const {
  for (const auto& j : jumps_)
    if (fragment_on(j.frag, p))
      return {j.minus.eval(p), j.plus.eval(p)};
  fail("NotOnBoundary", "point is not on the jump set");
}

Vec2 BVFunction::jump_normal(Vec2 p) const {
  for (const auto& j : jumps_)
    if (fragment_on(j.frag, p)) return fragment_left_normal_at_point(j.frag, p);
  fail("NotOnBoundary", "point is not on the jump set");
}

double BVFunction::representative(Vec2 p, double lambda) const {
  if (lambda < 0.0 || lambda > 1.0)
    fail("BadArgument", "lambda must lie in [0,1]");
  for (const auto& s : thin_)
    if (dist(s, p) <= kGeomTol)
      fail("ThinSingularPoint", "representative undefined on S_u \\ J_u");
  for (const auto& j : jumps_)
    if (fragment_on(j.frag, p))
      return (1.0 - lambda) * j.minus.eval(p) + lambda * j.plus.eval(p);
  return tilde(p);
}

MeasureRep BVFunction::variation_measure() const {
  MeasureRep out;
  for (const auto& [g, region] : grad_) {
    if (g.x.dx().is_zero() && g.x.dy().is_zero() && g.y.dx().is_zero() &&
        g.y.dy().is_zero()) {
      double mag = Vec2{g.x.coeff(0, 0), g.y.coeff(0, 0)}.norm();
      out.ac.push_back({Poly2(mag), region});
    } else {
      fail("UnsupportedScene",
           "|Du| requires constant gradients per piece in this family");
    }
  }
  for (const auto& j : jumps_)
    out.curves.push_back({{j.frag}, CurveDensity::of_poly(j.plus - j.minus)});
  if (cantor_) {
    CantorLinePart cp = *cantor_;
    // |D^c u|: weight magnitude
    bool neg = cp.weight.coeff(0, 0) < 0;
    if (neg) cp.weight = cp.weight * -1.0;
    out.cantor.push_back(cp);
  }
  return out;
}

double BVFunction::variation_total(const EvalWindow& w) const {
  return eval_on(variation_measure(), w, true);
}

FinitePerimeterSet BVFunction::level_set(double t) const {
  if (kind_ == Kind::Staircase) {
    double v = (t - affine_shift_) / affine_scale_;
    if (v <= 0.0 || v >= 1.0)
      fail("ExceptionalLevel", "level outside the staircase range");
    double xcut = staircase_inverse(v);
    Vec2 nu = cantor_axis_ == 0 ? Vec2{1, 0} : Vec2{0, 1};
    return FinitePerimeterSet::boolean(
        BoolOp::Intersection, FinitePerimeterSet::half_plane(nu, xcut),
        domain_);
  }
  if (is_exceptional_level(t))
    fail("ExceptionalLevel", "level equals a plateau value of the scene");
  std::optional<FinitePerimeterSet> acc;
  for (const auto& piece : pieces_) {
    const Poly2& v = piece.value;
    std::optional<FinitePerimeterSet> part;
    if (v.dx().is_zero() && v.dy().is_zero()) {
      if (v.coeff(0, 0) > t) part = piece.region;
    } else if (v.deg_x() <= 1 && v.deg_y() <= 1 && v.coeff(1, 1) == 0.0) {
      Vec2 n{v.coeff(1, 0), v.coeff(0, 1)};
      double nn = n.norm();
      FinitePerimeterSet hp = FinitePerimeterSet::half_plane(
          n / nn, (t - v.coeff(0, 0)) / nn);
      part = FinitePerimeterSet::boolean(BoolOp::Intersection, piece.region, hp);
    } else {
      fail("UnsupportedScene", "level sets need affine piece values");
    }
    if (part) acc = acc ? FinitePerimeterSet::boolean(BoolOp::Union, *acc, *part)
                        : *part;
  }
  if (t < 0.0) {
    // the zero complement belongs to the superlevel set
    FinitePerimeterSet comp = domain_;
    acc = acc ? FinitePerimeterSet::boolean(BoolOp::Union, *acc, comp) : comp;
  }
  if (!acc) {
    // empty superlevel set
    return FinitePerimeterSet::boolean(BoolOp::Difference, domain_, domain_);
  }
  return FinitePerimeterSet::boolean(BoolOp::Intersection, *acc, domain_);
}

bool BVFunction::is_exceptional_level(double t) const {
  if (kind_ == Kind::Staircase) {
    double v = (t - affine_shift_) / affine_scale_;
    if (v <= 0.0 || v >= 1.0) return true;
    double n = std::ldexp(v, depth_);
    return std::abs(n - std::round(n)) < 1e-12;
  }
  for (const auto& piece : pieces_) {
    const Poly2& v = piece.value;
    if (v.dx().is_zero() && v.dy().is_zero() &&
        std::abs(v.coeff(0, 0) - t) < 1e-12)
      return true;
  }
  return std::abs(t) < 1e-12;  // complement plateau
}

std::vector<double> BVFunction::exceptional_levels_hint() const {
  std::vector<double> out;
  if (kind_ == Kind::Staircase) {
    // dyadic plateau values at the stored depth
    int n = 1 << std::min(depth_, 6);
    for (int k = 0; k <= n; ++k)
      out.push_back(affine_shift_ + affine_scale_ * double(k) / n);
    return out;
  }
  out.push_back(0.0);
  for (const auto& piece : pieces_) {
    const Poly2& v = piece.value;
    if (v.dx().is_zero() && v.dy().is_zero()) out.push_back(v.coeff(0, 0));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<double, double> BVFunction::value_range() const {
  if (kind_ == Kind::Staircase)
    return {std::min(affine_shift_, affine_shift_ + affine_scale_),
            std::max(affine_shift_, affine_shift_ + affine_scale_)};
  double lo = 0.0, hi = 0.0;
  auto [dlo, dhi] = domain_bbox(domain_);
  for (const auto& piece : pieces_) {
    auto bb = piece.region.bbox();
    Vec2 plo = bb ? bb->first : dlo, phi = bb ? bb->second : dhi;
    for (int i = 0; i <= 16; ++i)
      for (int j = 0; j <= 16; ++j) {
        Vec2 p{plo.x + (phi.x - plo.x) * i / 16.0,
               plo.y + (phi.y - plo.y) * j / 16.0};
        if (piece.region.where(p) == FinitePerimeterSet::Where::Outside)
          continue;
        double v = piece.value.eval(p);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Coarea identity
// ---------------------------------------------------------------------------

FragmentList level_boundary(const BVFunction& u, double t,
                            const EvalWindow& window) {
  FinitePerimeterSet W = window_set(window);
  auto wb = W.bbox();
  if (!wb) fail("UnboundedSet", "level boundary window must be bounded");
  Vec2 margin{0.5, 0.5};
  FinitePerimeterSet Et = u.level_set(t);
  FragmentList bd = boundary_within(Et, wb->first - margin, wb->second + margin);
  bd = clip_fragments(bd, W, true);
  // the statement lives in the open domain: drop pieces on ∂Ω
  return clip_fragments(bd, u.domain(), false);
}

CoareaCheck coarea_check(const BVFunction& u, const Poly2& g,
                         const EvalWindow& window, int t_nodes) {
  FinitePerimeterSet W = window_set(window);
  auto wb = W.bbox();
  if (!wb) fail("UnboundedSet", "coarea window must be bounded");

  CoareaCheck out;
  // lhs: ∫ g d|Du|
  {
    MeasureRep var = u.variation_measure();
    MeasureRep weighted;
    for (auto& a : var.ac) weighted.ac.push_back({a.density * g, a.support});
    for (auto& c : var.curves) {
      CurveDensity d = c.density;
      d.scalar = d.scalar * g;
      d.vec = {d.vec.x * g, d.vec.y * g};
      weighted.curves.push_back({c.curve, d});
    }
    for (auto& c : var.cantor) {
      CantorLinePart cp = c;
      cp.weight = cp.weight * g;
      weighted.cantor.push_back(cp);
    }
    out.lhs = eval_on(weighted, window, true);
  }

  // rhs: ∫ dt ∫_{∂*{u>t} ∩ W} g dH¹
  auto level_contrib = [&](double t) {
    return integrate_poly_fragments(level_boundary(u, t, window), g);
  };
  auto [v0, v1] = u.value_range();
  if (v1 - v0 < 1e-15) {
    out.rhs = 0.0;
  } else if (u.cantor_part().has_value()) {
    // dyadic midpoint nodes; plateau values sit at node boundaries
    int n = t_nodes;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      double t = v0 + (v1 - v0) * (k + 0.5) / n;
      sum += level_contrib(t);
    }
    out.rhs = sum * (v1 - v0) / n;
  } else {
    // Gauss nodes in t; exceptional plateau values are avoided by the nodes
    int order = std::min(t_nodes, 48);
    out.rhs = gl_integrate(
        [&](double t) {
          return u.is_exceptional_level(t) ? 0.0 : level_contrib(t);
        },
        v0, v1, order);
  }
  out.residual = std::abs(out.lhs - out.rhs) / (1.0 + std::abs(out.lhs));
  return out;
}

}  // namespace pairlab
