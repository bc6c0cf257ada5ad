#include "pairlab/pairing.hpp"

#include <algorithm>
#include <cmath>

namespace pairlab {

namespace {

Vec2Poly term_poly(const JumpTerm& t) {
  return {t.modulation * t.coef.x, t.modulation * t.coef.y};
}

// one-sided field polynomial at a point (side selected by dir)
Vec2Poly field_side_poly(const DMField& a, Vec2 p, Vec2 dir) {
  Vec2Poly v = a.smooth_part();
  for (const auto& t : a.jump_terms())
    if (t.region.side_contains(p, dir)) v = v + term_poly(t);
  return v;
}

// interface fragments of the field within a bounding box
FragmentList field_interfaces(const DMField& a, Vec2 lo, Vec2 hi) {
  FragmentList out;
  for (const auto& t : a.jump_terms()) {
    FragmentList bd = boundary_within(t.region, lo, hi);
    out.insert(out.end(), bd.begin(), bd.end());
  }
  return out;
}

FragmentList bv_interfaces(const BVFunction& u, Vec2 lo, Vec2 hi) {
  FragmentList out;
  for (const auto& j : u.jumps()) out.push_back(j.frag);
  for (const auto& piece : u.pieces()) {
    FragmentList bd = boundary_within(piece.region, lo, hi);
    out.insert(out.end(), bd.begin(), bd.end());
  }
  return out;
}

std::pair<Vec2, Vec2> scene_box(const DMField& a) {
  auto bb = a.domain().bbox();
  if (!bb) fail("UnboundedSet", "scene domain must be bounded");
  return {bb->first - Vec2{0.5, 0.5}, bb->second + Vec2{0.5, 0.5}};
}

// u value as a polynomial approached from direction dir (piecewise scenes)
Poly2 u_side_poly(const BVFunction& u, Vec2 p, Vec2 dir) {
  if (u.is_staircase())
    fail("UnsupportedScene", "polynomial side values need piecewise scenes");
  for (const auto& piece : u.pieces())
    if (piece.region.side_contains(p, dir)) return piece.value;
  return Poly2(0.0);
}

// u^λ along a curve piece as a polynomial
Poly2 u_lambda_poly(const BVFunction& u, const Fragment& piece, double lambda) {
  Vec2 mid = piece.midpoint();
  for (const auto& j : u.jumps()) {
    if (fragment_contains_point(j.frag, mid))
      return j.minus * (1.0 - lambda) + j.plus * lambda;
  }
  if (u.is_staircase())
    fail("UnsupportedScene",
         "staircase representative along curves is not polynomial");
  Vec2 nu = piece.left_normal_at(0.5);
  // continuous across the curve: either side gives the trace
  return u_side_poly(u, mid, nu);
}

bool region_is_box(const FinitePerimeterSet& s, Vec2* lo, Vec2* hi) {
  auto bb = s.bbox();
  if (!bb) return false;
  Vec2 margin{0.5, 0.5};
  Region r = region_in_box(s, bb->first - margin, bb->second + margin);
  double area = r.area();
  double box_area =
      (bb->second.x - bb->first.x) * (bb->second.y - bb->first.y);
  if (std::abs(area - box_area) > 1e-12 * (1.0 + box_area)) return false;
  *lo = bb->first;
  *hi = bb->second;
  return true;
}

// ∫∫_R u(x) g(x, y) dx dy where u is a staircase scene and R must be a box
double staircase_area_integral(const BVFunction& u, const Poly2& g,
                               const FinitePerimeterSet& region) {
  Vec2 lo, hi;
  if (!region_is_box(region, &lo, &hi))
    fail("UnsupportedScene",
         "staircase volume terms need axis-aligned box regions");
  int axis = u.cantor_axis();
  // integrate out the transverse coordinate exactly
  double tlo = axis == 0 ? lo.y : lo.x;
  double thi = axis == 0 ? hi.y : hi.x;
  double alo = axis == 0 ? lo.x : lo.y;
  double ahi = axis == 0 ? hi.x : hi.y;
  Poly2 G = axis == 0 ? g.antider_y() : g.antider_x();
  // G(alo..ahi axis coord) difference at transverse ends -> 1D poly in axis
  int deg = g.deg_x() + g.deg_y() + 1;
  std::vector<double> samples(deg + 1);
  // reconstruct the 1D polynomial by interpolation on Chebyshev-ish nodes
  // (degrees are small; a direct coefficient extraction is simpler)
  Poly1 f;
  {
    // f(t) = G(t, thi) - G(t, tlo) expressed in the axis coordinate
    // build by expanding powers of the fixed transverse values
    std::vector<double> c(std::max(G.deg_x(), G.deg_y()) + 2, 0.0);
    for (int i = 0; i <= G.deg_x(); ++i)
      for (int j = 0; j <= G.deg_y(); ++j) {
        double v = G.coeff(i, j);
        if (v == 0.0) continue;
        if (axis == 0)
          c[i] += v * (std::pow(thi, j) - std::pow(tlo, j));
        else
          c[j] += v * (std::pow(thi, i) - std::pow(tlo, i));
      }
    f = Poly1(std::move(c));
  }
  (void)samples;
  return u.staircase_profile_integral(f, alo, ahi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Representative-weighted measures
// ---------------------------------------------------------------------------

MeasureRep weight_by_representative(const MeasureRep& mu, const BVFunction& u,
                                    double lambda) {
  MeasureRep out;
  for (const auto& part : mu.ac) {
    if (u.is_staircase())
      fail("UnsupportedScene",
           "weighting AC parts by a staircase needs the box path");
    for (const auto& piece : u.pieces()) {
      out.ac.push_back(
          {part.density * piece.value,
           FinitePerimeterSet::boolean(BoolOp::Intersection, part.support,
                                       piece.region)});
    }
    // the complement carries u = 0 and contributes nothing
  }
  if (!mu.cantor.empty())
    fail("UnsupportedScene", "divergence measures carry no Cantor part here");
  for (const auto& part : mu.curves) {
    // split against the jump set and piece boundaries of u
    Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    for (const auto& f : part.curve)
      for (double t : {0.0, 0.5, 1.0}) {
        Vec2 p = f.point_at(t);
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
      }
    FragmentList cutters = bv_interfaces(u, lo - Vec2{1, 1}, hi + Vec2{1, 1});
    for (const auto& frag : part.curve) {
      for (const auto& piece : split_fragment_against(frag, cutters)) {
        Poly2 w = u_lambda_poly(u, piece, lambda);
        CurveDensity d = part.density;
        d.scalar = d.scalar * w;
        d.vec = {d.vec.x * w, d.vec.y * w};
        out.curves.push_back({{piece}, d});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distributional pairing
// ---------------------------------------------------------------------------

double pairing_distributional(const DMField& a, const BVFunction& u,
                              const TestFunction& phi, double lambda) {
  // -∫ u^λ φ dDiv A
  double term1 = 0.0;
  const MeasureRep& div = a.divergence();
  if (u.is_staircase()) {
    // AC part of Div A against the staircase, cell by cell
    for (const auto& part : div.ac) {
      if (part.density.is_zero()) continue;
      for (const auto& piece : phi.pieces()) {
        FinitePerimeterSet cell = FinitePerimeterSet::boolean(
            BoolOp::Intersection, part.support, piece.cell);
        term1 += staircase_area_integral(u, part.density * piece.value, cell);
      }
    }
    // curve parts: u is continuous, u^λ = u along the curve
    for (const auto& part : div.curves) {
      for (const auto& frag : part.curve) {
        term1 += integrate_fragments(
            {frag},
            [&](Vec2 p, Vec2 nu) {
              return part.density.value(p, nu) * u.eval(p) * phi.eval(p);
            },
            1e-11);
      }
    }
  } else {
    MeasureRep weighted = weight_by_representative(div, u, lambda);
    term1 = pair_test(weighted, phi);
  }

  // -∫ u A·∇φ dx
  double term2 = 0.0;
  for (const auto& piece : phi.pieces()) {
    Poly2 gx = piece.value.dx(), gy = piece.value.dy();
    struct Part {
      Poly2 integrand;
      FinitePerimeterSet region;
    };
    std::vector<Part> parts;
    parts.push_back({a.smooth_part().x * gx + a.smooth_part().y * gy,
                     a.domain()});
    for (const auto& t : a.jump_terms())
      parts.push_back({t.modulation * (gx * t.coef.x + gy * t.coef.y),
                       FinitePerimeterSet::boolean(BoolOp::Intersection,
                                                   t.region, a.domain())});
    for (const auto& part : parts) {
      if (part.integrand.is_zero()) continue;
      FinitePerimeterSet cell = FinitePerimeterSet::boolean(
          BoolOp::Intersection, part.region, piece.cell);
      if (u.is_staircase()) {
        term2 += staircase_area_integral(u, part.integrand, cell);
      } else {
        for (const auto& up : u.pieces()) {
          auto bb = piece.cell.bbox();
          Region reg = region_in_box(
              FinitePerimeterSet::boolean(BoolOp::Intersection, cell, up.region),
              bb->first - Vec2{0.5, 0.5}, bb->second + Vec2{0.5, 0.5});
          if (!reg.empty())
            term2 += integrate_poly_region(reg, part.integrand * up.value);
        }
      }
    }
  }
  return -term1 - term2;
}

// ---------------------------------------------------------------------------
// Analytic pairing
// ---------------------------------------------------------------------------

MeasureRep pairing_analytic(const DMField& a, const BVFunction& u) {
  MeasureRep out;
  auto [lo, hi] = scene_box(a);

  // absolutely continuous part: A · ∇u
  for (const auto& [grad, region] : u.grad_pieces()) {
    Poly2 base = a.smooth_part().x * grad.x + a.smooth_part().y * grad.y;
    if (!base.is_zero())
      out.ac.push_back({base, FinitePerimeterSet::boolean(
                                  BoolOp::Intersection, region, a.domain())});
    for (const auto& t : a.jump_terms()) {
      Poly2 inner = t.modulation * (grad.x * t.coef.x + grad.y * t.coef.y);
      if (inner.is_zero()) continue;
      FinitePerimeterSet support = FinitePerimeterSet::boolean(
          BoolOp::Intersection, region,
          FinitePerimeterSet::boolean(BoolOp::Intersection, t.region,
                                      a.domain()));
      out.ac.push_back({inner, support});
    }
  }

  // jump part: Tr*(A, J_u) (u+ - u-) H^1 ⌊ J_u
  FragmentList cutters = field_interfaces(a, lo, hi);
  for (const auto& j : u.jumps()) {
    for (const auto& piece : split_fragment_against(j.frag, cutters)) {
      Vec2 mid = piece.midpoint();
      Vec2 nu = piece.left_normal_at(0.5);
      Vec2Poly inner = field_side_poly(a, mid, nu);
      Vec2Poly outer = field_side_poly(a, mid, -nu);
      Vec2Poly star{(inner.x + outer.x) * 0.5, (inner.y + outer.y) * 0.5};
      Poly2 amp = j.plus - j.minus;
      out.curves.push_back(
          {{piece},
           CurveDensity::normal_component({star.x * amp, star.y * amp})});
    }
  }

  // Cantor part: trace density along the staircase support
  if (u.cantor_part()) {
    CantorLinePart cp = *u.cantor_part();
    int axis = u.cantor_axis();
    // the field must be approximately continuous across the support strip
    Vec2Poly cont = a.smooth_part();
    Vec2 strip_lo = axis == 0 ? Vec2{0.0, cp.t_lo} : Vec2{cp.t_lo, 0.0};
    Vec2 strip_hi = axis == 0 ? Vec2{1.0, cp.t_hi} : Vec2{cp.t_hi, 1.0};
    for (const auto& t : a.jump_terms()) {
      int inside = 0, outside = 0;
      for (int i = 0; i <= 3; ++i)
        for (int k = 0; k <= 3; ++k) {
          Vec2 p{strip_lo.x + (strip_hi.x - strip_lo.x) * i / 3.0,
                 strip_lo.y + (strip_hi.y - strip_lo.y) * k / 3.0};
          (t.region.where(p) == FinitePerimeterSet::Where::Inside ? inside
                                                                  : outside)++;
        }
      if (inside && outside)
        fail("UnsupportedScene",
             "field jumps across the Cantor support strip");
      if (inside) cont = cont + term_poly(t);
    }
    Poly2 theta = axis == 0 ? cont.x : cont.y;
    cp.weight = cp.weight * theta;
    out.cantor.push_back(std::move(cp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

namespace {

Vec2 nu_u_at(const DMField& a, const BVFunction& u, Vec2 x) {
  (void)a;
  if (u.on_jump(x)) return u.jump_normal(x);
  if (u.cantor_part()) {
    int axis = u.cantor_axis();
    double t = axis == 0 ? x.x : x.y;
    if (t >= -kGeomTol && t <= 1.0 + kGeomTol)
      return axis == 0 ? Vec2{1, 0} : Vec2{0, 1};
  }
  // diffuse point: direction of the gradient
  for (const auto& [grad, region] : u.grad_pieces()) {
    if (region.where(x) != FinitePerimeterSet::Where::Outside) {
      Vec2 g = grad.eval(x);
      if (g.norm() > 1e-13) return g.normalized();
    }
  }
  fail("NotOnBoundary", "point does not lie on the support of |Du|");
}

}  // namespace

ThetaSample theta_density(const DMField& a, const BVFunction& u, Vec2 x,
                          TraceMethod method, const RadiusSchedule& sched) {
  ThetaSample s;
  s.point = x;
  s.method = method;
  Vec2 nu = nu_u_at(a, u, x);
  switch (method) {
    case TraceMethod::Analytic: {
      Vec2 inner = a.side_value(x, nu);
      Vec2 outer = a.side_value(x, -nu);
      s.value = 0.5 * (inner + outer).dot(nu);
      break;
    }
    case TraceMethod::HalfBall: {
      auto tr = halfball_traces(a, x, nu, sched);
      s.value = tr.star;
      s.converged = tr.plus.converged && tr.minus.converged;
      break;
    }
    case TraceMethod::Cylinder: {
      auto ct = cyl_trace(a, x, nu, sched);
      s.value = ct.outer.value;
      s.converged = ct.converged;
      s.method_invalid = a.on_jump_set(x) && u.on_jump(x);
      break;
    }
  }
  return s;
}

double theta_lambda(const DMField& a, const BVFunction& u, Vec2 x,
                    double lambda, TraceMethod method,
                    const RadiusSchedule& sched) {
  Vec2 nu = nu_u_at(a, u, x);
  double trp, trm;
  if (method == TraceMethod::HalfBall) {
    auto tr = halfball_traces(a, x, nu, sched);
    if (!tr.plus.converged || !tr.minus.converged)
      fail("NotConverged", "half-ball traces did not converge");
    trp = tr.plus.value;
    trm = tr.minus.value;
  } else {
    trp = a.side_value(x, nu).dot(nu);
    trm = a.side_value(x, -nu).dot(nu);
  }
  return (1.0 - lambda) * trp + lambda * trm;
}

// ---------------------------------------------------------------------------
// Gauss-Green ledgers
// ---------------------------------------------------------------------------

namespace {

double boundary_trace_integral(const DMField& a, const BVFunction& u,
                               const FinitePerimeterSet& e, GGVariant variant,
                               TraceMethod method, const RadiusSchedule& sched) {
  auto [lo, hi] = scene_box(a);
  FragmentList boundary = reduced_boundary(e);
  FragmentList cutters = field_interfaces(a, lo, hi);
  if (!u.is_staircase()) {
    FragmentList uc = bv_interfaces(u, lo, hi);
    cutters.insert(cutters.end(), uc.begin(), uc.end());
  }
  double total = 0.0;
  for (const auto& frag : boundary) {
    for (const auto& piece : split_fragment_against(frag, cutters)) {
      // hypothesis check for the cylindrical route: Θ_A must not overlap
      // where the one-sided values of u are nonzero (Theorem 4.9 scope)
      if (method == TraceMethod::Cylinder) {
        Vec2 mid = piece.midpoint();
        Vec2 nu = piece.left_normal_at(0.5);
        bool on_theta = a.on_jump_set(mid);
        double ui = u.side_value(mid, nu), ue = u.side_value(mid, -nu);
        if (on_theta && (std::abs(ui) > 1e-13 || std::abs(ue) > 1e-13))
          fail("HypothesisViolated",
               "cylindrical traces are invalid on Θ_A with nonzero u traces");
      }
      for (const auto& node : curve_nodes({piece}, 16)) {
        Vec2 nu = node.normal;  // interior normal of E
        double uval = variant == GGVariant::Interior
                          ? u.side_value(node.p, nu)
                          : u.side_value(node.p, -nu);
        if (std::abs(uval) < 1e-15) continue;
        double tr = 0.0;
        switch (method) {
          case TraceMethod::Analytic:
            tr = variant == GGVariant::Interior
                     ? a.side_value(node.p, nu).dot(nu)
                     : a.side_value(node.p, -nu).dot(nu);
            break;
          case TraceMethod::HalfBall: {
            auto est = halfball_traces(a, node.p, nu, sched);
            if (variant == GGVariant::Interior) {
              if (!est.plus.converged)
                fail("NotConverged", "half-ball trace failed on ∂*E");
              tr = est.plus.value;
            } else {
              if (!est.minus.converged)
                fail("NotConverged", "half-ball trace failed on ∂*E");
              tr = est.minus.value;
            }
            break;
          }
          case TraceMethod::Cylinder: {
            auto ct = cyl_trace(a, node.p, nu, sched);
            if (!ct.converged)
              fail("NotConverged", "cylindrical trace failed on ∂*E");
            tr = ct.outer.value;
            break;
          }
        }
        total += node.w * uval * tr;
      }
    }
  }
  return total;
}

}  // namespace

GaussGreenLedger gauss_green(const DMField& a, const BVFunction& u,
                             const FinitePerimeterSet& e, GGVariant variant,
                             TraceMethod method, const RadiusSchedule& sched) {
  GaussGreenLedger ledger;
  ledger.variant = variant;
  ledger.method = method;
  bool include_boundary = variant == GGVariant::Closure;

  if (u.is_staircase()) {
    // volume term with the continuous representative of the staircase
    double t1 = 0.0;
    const MeasureRep& div = a.divergence();
    for (const auto& part : div.ac) {
      FinitePerimeterSet support =
          FinitePerimeterSet::boolean(BoolOp::Intersection, part.support, e);
      t1 += staircase_area_integral(u, part.density, support);
    }
    for (const auto& part : div.curves) {
      FragmentList kept = clip_fragments(part.curve, e, include_boundary);
      t1 += integrate_fragments(
          kept,
          [&](Vec2 p, Vec2 nu) { return part.density.value(p, nu) * u.eval(p); },
          1e-11);
    }
    ledger.volume = t1;
  } else {
    MeasureRep weighted = weight_by_representative(a.divergence(), u, 0.5);
    ledger.volume = eval_on(weighted, EvalWindow{e}, include_boundary);
  }
  ledger.pairing =
      eval_on(pairing_analytic(a, u), EvalWindow{e}, include_boundary);
  ledger.boundary = boundary_trace_integral(a, u, e, variant, method, sched);
  double scale = std::max(
      {std::abs(ledger.volume), std::abs(ledger.pairing), std::abs(ledger.boundary)});
  ledger.residual =
      std::abs(ledger.volume + ledger.pairing + ledger.boundary) / (1.0 + scale);
  return ledger;
}

ZeroExtensionLedger zero_extension_gauss_green(const DMField& a,
                                               const BVFunction& u,
                                               TraceMethod method,
                                               const RadiusSchedule& sched) {
  ZeroExtensionLedger out;
  const FinitePerimeterSet& omega = a.domain();
  auto [lo, hi] = scene_box(a);

  // hypothesis: H^1(Θ_A ∩ J_u) = 0 — check analytically on the scene
  for (const auto& t : a.jump_set())
    for (const auto& j : u.jumps()) {
      FragmentList overlap = coincident_overlap(t.frag, j.frag);
      if (fragments_length(overlap) > 1e-12)
        fail("HypothesisViolated", "Θ_A ∩ J_u has positive length");
    }

  // volume and pairing terms over the open domain
  if (u.is_staircase()) {
    double t1 = 0.0;
    for (const auto& part : a.divergence().ac)
      t1 += staircase_area_integral(
          u, part.density,
          FinitePerimeterSet::boolean(BoolOp::Intersection, part.support, omega));
    for (const auto& part : a.divergence().curves) {
      FragmentList kept = clip_fragments(part.curve, omega, false);
      t1 += integrate_fragments(
          kept,
          [&](Vec2 p, Vec2 nu) { return part.density.value(p, nu) * u.eval(p); },
          1e-11);
    }
    out.volume = t1;
  } else {
    MeasureRep weighted = weight_by_representative(a.divergence(), u, 0.5);
    out.volume = eval_on(weighted, EvalWindow{omega}, false);
  }
  MeasureRep pairing = pairing_analytic(a, u);
  out.pairing = eval_on(pairing, EvalWindow{omega}, false);

  // spot-check that the cylindrical average reproduces the pairing density
  {
    double dev = 0.0;
    int checked = 0;
    for (const auto& part : pairing.curves) {
      if (checked >= 3) break;
      Vec2 p = part.curve.front().midpoint();
      ThetaSample cylv = theta_density(a, u, p, TraceMethod::Cylinder, sched);
      ThetaSample anav = theta_density(a, u, p, TraceMethod::Analytic, sched);
      if (cylv.converged && !cylv.method_invalid)
        dev = std::max(dev, std::abs(cylv.value - anav.value));
      ++checked;
    }
    for (const auto& [grad, region] : u.grad_pieces()) {
      if (checked >= 5) break;
      auto bb = region.bbox();
      if (!bb) continue;
      Vec2 p = 0.5 * (bb->first + bb->second);
      if (region.where(p) != FinitePerimeterSet::Where::Inside) continue;
      if (grad.eval(p).norm() < 1e-12) continue;
      ThetaSample cylv = theta_density(a, u, p, TraceMethod::Cylinder, sched);
      ThetaSample anav = theta_density(a, u, p, TraceMethod::Analytic, sched);
      if (cylv.converged) dev = std::max(dev, std::abs(cylv.value - anav.value));
      ++checked;
    }
    out.cyl_check = dev;
  }

  // boundary term with the zero extension of A across ∂Ω
  DMField extended = [&] {
    FinitePerimeterSet big = FinitePerimeterSet::box(lo - Vec2{1.5, 1.5},
                                                     hi + Vec2{1.5, 1.5});
    std::vector<JumpTerm> terms;
    if (!a.smooth_part().x.is_zero() || !a.smooth_part().y.is_zero()) {
      terms.push_back(JumpTerm{{1.0, 0.0}, omega, a.smooth_part().x});
      terms.push_back(JumpTerm{{0.0, 1.0}, omega, a.smooth_part().y});
    }
    for (const auto& t : a.jump_terms())
      terms.push_back(JumpTerm{
          t.coef,
          FinitePerimeterSet::boolean(BoolOp::Intersection, t.region, omega),
          t.modulation});
    return DMField(Vec2Poly{}, std::move(terms), big);
  }();

  FragmentList boundary = reduced_boundary(omega);
  double b = 0.0;
  for (const auto& frag : boundary) {
    FragmentList cutters = field_interfaces(a, lo, hi);
    if (!u.is_staircase()) {
      FragmentList uc = bv_interfaces(u, lo, hi);
      cutters.insert(cutters.end(), uc.begin(), uc.end());
    }
    for (const auto& piece : split_fragment_against(frag, cutters)) {
      for (const auto& node : curve_nodes({piece}, 16)) {
        Vec2 nu = node.normal;  // interior normal of Ω
        double ui = u.side_value(node.p, nu);
        if (std::abs(ui) < 1e-15) continue;
        double tr = 0.0;
        if (method == TraceMethod::Analytic) {
          tr = extended.side_value(node.p, nu).dot(nu);
        } else {
          auto est = halfball_traces(extended, node.p, nu, sched);
          if (!est.plus.converged)
            fail("NotConverged", "half-ball trace failed on ∂Ω");
          tr = est.plus.value;
        }
        b += node.w * ui * tr;
      }
    }
  }
  out.boundary = b;
  double scale =
      std::max({std::abs(out.volume), std::abs(out.pairing), std::abs(out.boundary)});
  out.residual =
      std::abs(out.volume + out.pairing + out.boundary) / (1.0 + scale);
  return out;
}

// ---------------------------------------------------------------------------
// Coarea for the pairing
// ---------------------------------------------------------------------------

CoareaPairing coarea_pairing_check(const DMField& a, const BVFunction& u,
                                   const EvalWindow& window, int t_nodes) {
  CoareaPairing out;
  out.lhs = eval_on(pairing_analytic(a, u), window, true);

  auto [lo, hi] = scene_box(a);
  FragmentList cutters = field_interfaces(a, lo, hi);
  auto level_pairing = [&](double t) {
    double total = 0.0;
    for (const auto& frag : level_boundary(u, t, window)) {
      for (const auto& piece : split_fragment_against(frag, cutters)) {
        Vec2 mid = piece.midpoint();
        Vec2 nu = piece.left_normal_at(0.5);
        Vec2Poly star = field_side_poly(a, mid, nu);
        Vec2Poly outerp = field_side_poly(a, mid, -nu);
        star = {(star.x + outerp.x) * 0.5, (star.y + outerp.y) * 0.5};
        total += integrate_poly_fragments_normal({piece}, Poly2(0.0), star);
      }
    }
    return total;
  };

  auto [v0, v1] = u.value_range();
  if (v1 - v0 < 1e-15) {
    out.rhs = 0.0;
  } else if (u.cantor_part()) {
    int n = t_nodes;
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
      sum += level_pairing(v0 + (v1 - v0) * (k + 0.5) / n);
    out.rhs = sum * (v1 - v0) / n;
  } else {
    int order = std::min(t_nodes, 48);
    out.rhs = gl_integrate(
        [&](double t) {
          return u.is_exceptional_level(t) ? 0.0 : level_pairing(t);
        },
        v0, v1, order);
  }
  out.residual = std::abs(out.lhs - out.rhs) / (1.0 + std::abs(out.lhs));

  // Proposition-style density transfer at sampled level points
  double transfer = 0.0;
  for (int k = 1; k <= 3; ++k) {
    double t = v0 + (v1 - v0) * (k - 0.382) / 3.0;
    if (u.is_exceptional_level(t)) continue;
    FragmentList bd = level_boundary(u, t, window);
    if (bd.empty()) continue;
    Vec2 p = bd.front().midpoint();
    BVFunction chi = BVFunction::characteristic(u.level_set(t), u.domain());
    double theta_u = theta_density(a, u, p, TraceMethod::Analytic).value;
    double theta_chi = theta_density(a, chi, p, TraceMethod::Analytic).value;
    transfer = std::max(transfer, std::abs(theta_u - theta_chi));
  }
  out.theta_transfer = transfer;
  return out;
}

// ---------------------------------------------------------------------------
// Tangent blow-ups
// ---------------------------------------------------------------------------

BlowupCheck tangent_blowup_check(const DMField& a, const BVFunction& u, Vec2 x,
                                 double alpha, const RadiusSchedule& sched,
                                 const std::vector<TestFunction>& suite,
                                 TangentNormalization norm) {
  BlowupCheck out;
  if (!u.on_jump(x))
    fail("NotOnBoundary", "blow-up point must lie on the jump set");
  Vec2 nu = u.jump_normal(x);
  auto [um, up] = u.jump_values(x);
  double star = theta_density(a, u, x, TraceMethod::Analytic).value;
  out.trace_star = star;
  if (std::abs(star) < 1e-12)
    fail("ZeroTrace", "tangent statement requires Tr*(x) != 0");

  // jump part of the pairing
  MeasureRep full = pairing_analytic(a, u);
  MeasureRep jump_part;
  jump_part.curves = full.curves;

  // candidate: Tr*(x) (u+ - u-) H^1 ⌊ (ν^⊥ ∩ B_1), oriented with ν on the left
  Vec2 d{nu.y, -nu.x};
  MeasureRep candidate = MeasureRep::curve(
      {Fragment(Segment{-1.0 * d, d})},
      CurveDensity::constant(star * (up - um)));

  double mass_scale = 1.0;
  if (norm == TangentNormalization::MassOnBall)
    candidate = candidate * (1.0 / (std::abs(star * (up - um)) * 2.0));

  for (double r : sched.radii()) {
    MeasureRep blow;
    if (norm == TangentNormalization::RadiusPower) {
      blow = pushforward_homothety(jump_part, x, r, alpha);
    } else {
      double mass = total_variation(jump_part, Probe{BallProbe{x, r}});
      blow = pushforward_homothety(jump_part, x, r, 0.0) * (1.0 / mass);
    }
    out.gaps.push_back({r, weakstar_gap(blow, candidate, suite)});
  }
  (void)mass_scale;
  out.final_gap = out.gaps.back().second;
  out.monotone_tail = true;
  size_t n = out.gaps.size();
  for (size_t i = n >= 4 ? n - 4 : 0; i + 1 < n; ++i)
    if (!(out.gaps[i + 1].second < out.gaps[i].second)) out.monotone_tail = false;
  return out;
}

}  // namespace pairlab
