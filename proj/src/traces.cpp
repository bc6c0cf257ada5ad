#include "pairlab/traces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pairlab {

std::vector<double> RadiusSchedule::radii() const {
  std::vector<double> out;
  double r = r0;
  for (int i = 0; i < n; ++i, r *= q) out.push_back(r);
  return out;
}

std::vector<double> RadiusSchedule::rho_radii() const {
  std::vector<double> out;
  double r = rho0;
  for (int i = 0; i < n_rho; ++i, r *= q_rho) out.push_back(r);
  return out;
}

void RadiusSchedule::validate() const {
  if (!(r0 > 0.0) || !(q > 0.0 && q < 1.0) || n < 4)
    fail("BadArgument", "schedule needs r0 > 0, q in (0,1), n >= 4");
  if (r0 * std::pow(q, n) < 1e-10)
    fail("BadArgument", "schedule drops below the 1e-10 machine-precision floor");
  if (!(rho0 > 0.0) || !(q_rho > 0.0 && q_rho < 1.0) || n_rho < 4)
    fail("BadArgument", "rho schedule needs rho0 > 0, q in (0,1), n >= 4");
}

// ---------------------------------------------------------------------------
// Extrapolation
// ---------------------------------------------------------------------------

TraceEstimate extrapolate(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 4)
    fail("InsufficientSamples", "extrapolation needs at least 4 samples");
  std::sort(samples.begin(), samples.end(),
            [](auto& a, auto& b) { return a.first > b.first; });
  TraceEstimate est;
  est.samples = samples;

  size_t m = std::max<size_t>(4, samples.size() / 2);
  m = std::min(m, samples.size());
  std::vector<std::pair<double, double>> fit(samples.end() - m, samples.end());

  double vfin = fit.back().second;
  double spread = 0.0;
  for (auto& [r, v] : fit) spread = std::max(spread, std::abs(v - vfin));
  if (spread <= 1e-10 * (1.0 + std::abs(vfin))) {
    // constant to quadrature noise
    est.value = vfin;
    est.order = std::numeric_limits<double>::infinity();
    est.error_estimate = spread;
    est.converged = true;
    return est;
  }

  double rmax = fit.front().first;
  auto lsq = [&](double p, double* Lout, double* Cout) {
    // v = L + C (r/rmax)^p, normal equations in (L, C)
    double s11 = 0, s1x = 0, sxx = 0, s1v = 0, sxv = 0;
    for (auto& [r, v] : fit) {
      double xr = std::pow(r / rmax, p);
      s11 += 1.0;
      s1x += xr;
      sxx += xr * xr;
      s1v += v;
      sxv += xr * v;
    }
    double det = s11 * sxx - s1x * s1x;
    if (std::abs(det) < 1e-14) return std::numeric_limits<double>::infinity();
    double L = (sxx * s1v - s1x * sxv) / det;
    double C = (s11 * sxv - s1x * s1v) / det;
    double rss = 0.0;
    for (auto& [r, v] : fit) {
      double xr = std::pow(r / rmax, p);
      double e = v - L - C * xr;
      rss += e * e;
    }
    if (Lout) *Lout = L;
    if (Cout) *Cout = C;
    return std::sqrt(rss / fit.size());
  };

  double best_p = 1.0, best_res = std::numeric_limits<double>::infinity();
  for (double p = 0.25; p <= 4.0 + 1e-9; p += 0.05) {
    double res = lsq(p, nullptr, nullptr);
    if (res < best_res) {
      best_res = res;
      best_p = p;
    }
  }
  // golden-section style refinement around the grid optimum
  double lo = std::max(0.1, best_p - 0.05), hi = best_p + 0.05;
  for (int it = 0; it < 48; ++it) {
    double p1 = lo + (hi - lo) / 3.0, p2 = hi - (hi - lo) / 3.0;
    if (lsq(p1, nullptr, nullptr) < lsq(p2, nullptr, nullptr))
      hi = p2;
    else
      lo = p1;
  }
  best_p = 0.5 * (lo + hi);
  double L = 0, C = 0;
  double res = lsq(best_p, &L, &C);

  est.value = L;
  est.order = best_p;
  double rfin = fit.back().first;
  est.error_estimate = std::abs(C) * std::pow(rfin / rmax, best_p) + res;
  bool fit_ok = res < 1e-3 * (1.0 + std::abs(L)) && best_p >= 0.5 - 1e-3;
  bool noise_floor = res <= 1e-8 * (1.0 + std::abs(L));
  est.converged = fit_ok || noise_floor;
  return est;
}

// ---------------------------------------------------------------------------
// Half-ball averages (polar integration)
// ---------------------------------------------------------------------------

namespace {

// ∫ over the ray segment [s0,s1] of F(x + s e)·e * s ds for a polynomial F
double ray_term(const Vec2Poly& F, Vec2 x, Vec2 e, double s0, double s1) {
  int deg = std::max(F.x.deg_x() + F.x.deg_y(), F.y.deg_x() + F.y.deg_y()) + 1;
  int order = std::max(4, deg / 2 + 2);
  return gl_integrate(
      [&](double s) {
        Vec2 p = x + s * e;
        return F.eval(p).dot(e) * s;
      },
      s0, s1, order);
}

struct AngularPanelIntegrator {
  const DMField& a;
  Vec2 x;
  double r;

  double integrand(double theta) const {
    Vec2 e = dir_of(theta);
    double total = ray_term(a.smooth_part(), x, e, 0.0, r);
    for (const auto& t : a.jump_terms()) {
      Vec2Poly F{t.modulation * t.coef.x, t.modulation * t.coef.y};
      IntervalUnion iv = t.region.ray_intervals(x, e, r);
      for (const auto& [s0, s1] : iv.intervals())
        total += ray_term(F, x, e, s0, s1);
    }
    return total;
  }

  double panel(double t0, double t1, int order) const {
    return gl_integrate([&](double t) { return integrand(t); }, t0, t1, order);
  }
};

double polar_field_integral(const DMField& a, Vec2 x, double r, double theta0,
                            double theta1) {
  // critical directions where the radial structure changes
  std::vector<double> crit;
  a.domain().critical_angles(x, r, crit);
  for (const auto& t : a.jump_terms()) t.region.critical_angles(x, r, crit);
  std::vector<double> cuts = {theta0, theta1};
  for (double c : crit) {
    double t = c;
    while (t < theta0 - kGeomTol) t += 2.0 * kPi;
    while (t > theta1 + kGeomTol) t -= 2.0 * kPi;
    if (t > theta0 + 1e-12 && t < theta1 - 1e-12) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double u, double v) { return v - u < 1e-12; }),
             cuts.end());

  AngularPanelIntegrator integ{a, x, r};
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double t0 = cuts[i], t1 = cuts[i + 1];
    // split long panels so Gauss order stays adequate
    int pieces = std::max(1, int(std::ceil((t1 - t0) / (kPi / 4))));
    for (int k = 0; k < pieces; ++k) {
      double u0 = t0 + (t1 - t0) * k / pieces;
      double u1 = t0 + (t1 - t0) * (k + 1) / pieces;
      double v16 = integ.panel(u0, u1, 16);
      double v24 = integ.panel(u0, u1, 24);
      if (std::abs(v24 - v16) <= 1e-13 * (1.0 + std::abs(v24))) {
        total += v24;
        continue;
      }
      // adaptive bisection
      struct Item {
        double a, b, coarse;
      };
      std::vector<Item> stack{{u0, u1, v24}};
      int budget = 4096;
      double acc = 0.0;
      while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        double mid = 0.5 * (it.a + it.b);
        double l = integ.panel(it.a, mid, 24);
        double rr = integ.panel(mid, it.b, 24);
        if (std::abs(l + rr - it.coarse) <=
            1e-13 * (1.0 + std::abs(l + rr)) || (it.b - it.a) < 1e-9) {
          acc += l + rr;
          continue;
        }
        if (--budget <= 0)
          fail("QuadratureBudget", "angular panel refinement exhausted");
        stack.push_back({it.a, mid, l});
        stack.push_back({mid, it.b, rr});
      }
      total += acc;
    }
  }
  return total;
}

}  // namespace

double halfball_average(const DMField& a, Vec2 x, Vec2 nu, double r,
                        HalfBallSide side) {
  if (!(r > 0.0)) fail("DegenerateProbe", "half-ball radius must be positive");
  Vec2 unit = nu.normalized();
  double tnu = std::atan2(unit.y, unit.x);
  double t0 = side == HalfBallSide::Interior ? tnu - kPi / 2 : tnu + kPi / 2;
  double t1 = t0 + kPi;
  // N/(omega_{N-1} r^N) with N = 2, omega_1 = 2
  return polar_field_integral(a, x, r, t0, t1) / (r * r);
}

HalfBallTraces halfball_traces(const DMField& a, Vec2 x, Vec2 nu,
                               const RadiusSchedule& sched) {
  sched.validate();
  std::vector<std::pair<double, double>> inner, outer;
  for (double r : sched.radii()) {
    inner.push_back({r, halfball_average(a, x, nu, r, HalfBallSide::Interior)});
    outer.push_back({r, halfball_average(a, x, nu, r, HalfBallSide::Exterior)});
  }
  HalfBallTraces tr;
  tr.plus = extrapolate(inner);
  tr.minus = extrapolate(outer);
  tr.minus.value = -tr.minus.value;
  for (auto& s : tr.minus.samples) s.second = -s.second;
  tr.star = 0.5 * (tr.plus.value + tr.minus.value);
  double bound = a.sup_norm() * (1.0 + 1e-9) + 1e-9;
  if (std::abs(tr.plus.value) > bound) tr.plus.converged = false;
  if (std::abs(tr.minus.value) > bound) tr.minus.converged = false;
  return tr;
}

// ---------------------------------------------------------------------------
// Cylindrical averages
// ---------------------------------------------------------------------------

double cyl_integral(const DMField& a, Vec2 x, Vec2 zeta, double r, double rho) {
  Vec2 unit = zeta.normalized();
  CylinderProbe probe{x, unit, r, rho};
  validate(Probe{probe});
  double total = 0.0;
  {
    Region reg = clip_region(a.domain(), probe);
    total += integrate_poly_region(
        reg, a.smooth_part().x * unit.x + a.smooth_part().y * unit.y);
  }
  for (const auto& t : a.jump_terms()) {
    FinitePerimeterSet inter = FinitePerimeterSet::boolean(
        BoolOp::Intersection, t.region, a.domain());
    Region reg = clip_region(inter, probe);
    total += integrate_poly_region(
        reg, t.modulation * (t.coef.x * unit.x + t.coef.y * unit.y));
  }
  return total;
}

double cyl_average(const DMField& a, Vec2 x, Vec2 zeta, double r, double rho) {
  return cyl_integral(a, x, zeta, r, rho) / (4.0 * r * rho);
}

CylTrace cyl_trace(const DMField& a, Vec2 x, Vec2 zeta,
                   const RadiusSchedule& sched) {
  sched.validate();
  CylTrace out;
  std::vector<std::pair<double, double>> outer_samples;
  bool all_inner = true;
  for (double rho : sched.rho_radii()) {
    double rcap = sched.couple_scale * rho * rho;
    double r0 = std::min(sched.r0, rcap);
    std::vector<std::pair<double, double>> inner_samples;
    double r = r0;
    for (int i = 0; i < sched.n; ++i, r *= sched.q)
      inner_samples.push_back({r, cyl_average(a, x, zeta, r, rho)});
    TraceEstimate inner = extrapolate(std::move(inner_samples));
    all_inner = all_inner && inner.converged;
    outer_samples.push_back({rho, inner.value});
    out.inner.push_back(std::move(inner));
  }
  out.outer = extrapolate(std::move(outer_samples));
  out.converged = all_inner && out.outer.converged;
  return out;
}

// ---------------------------------------------------------------------------
// Identities
// ---------------------------------------------------------------------------

double trace_jump_check(const DMField& a, const FragmentList& sigma,
                        const RadiusSchedule& sched, int nodes_per_fragment) {
  double lhs = eval_on_curve(a.divergence(), sigma);
  double rhs = 0.0;
  for (const auto& node : curve_nodes(sigma, nodes_per_fragment)) {
    HalfBallTraces tr = halfball_traces(a, node.p, node.normal, sched);
    if (!tr.plus.converged || !tr.minus.converged)
      fail("NotConverged", "half-ball trace did not converge on the curve");
    rhs += node.w * (tr.plus.value - tr.minus.value);
  }
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

HyperplaneAverage hyperplane_average_identity(const DMField& a, Vec2 x,
                                              Vec2 nu, double rho,
                                              const RadiusSchedule& sched) {
  sched.validate();
  Vec2 unit = nu.normalized();
  Vec2 tang = unit.perp();
  HyperplaneAverage out;
  // lhs: Gauss quadrature of half-ball Tr^+ along T ∩ B_rho(x)
  const int nodes = 20;
  const auto& xs = gl_nodes(nodes);
  const auto& ws = gl_weights(nodes);
  for (int i = 0; i < nodes; ++i) {
    Vec2 p = x + rho * xs[i] * tang;
    HalfBallTraces tr = halfball_traces(a, p, unit, sched);
    if (!tr.plus.converged)
      fail("NotConverged", "half-ball trace did not converge on the line");
    out.lhs += rho * ws[i] * tr.plus.value;
  }
  // rhs: one-sided cylinder {0 < (y-x)·nu < r, |(y-x)·t| < rho}
  std::vector<std::pair<double, double>> samples;
  for (double r : sched.radii()) {
    std::vector<Vec2> corners = {x - rho * tang, x + rho * tang,
                                 x + rho * tang + r * unit,
                                 x - rho * tang + r * unit};
    FinitePerimeterSet box = FinitePerimeterSet::polygon(corners);
    double integral = 0.0;
    {
      auto bb = box.bbox();
      Region reg = region_in_box(
          FinitePerimeterSet::boolean(BoolOp::Intersection, a.domain(), box),
          bb->first - Vec2{0.5, 0.5}, bb->second + Vec2{0.5, 0.5});
      integral += integrate_poly_region(
          reg, a.smooth_part().x * unit.x + a.smooth_part().y * unit.y);
    }
    for (const auto& t : a.jump_terms()) {
      auto bb = box.bbox();
      FinitePerimeterSet inter =
          FinitePerimeterSet::boolean(BoolOp::Intersection, t.region, box);
      Region reg = region_in_box(inter, bb->first - Vec2{0.5, 0.5},
                                 bb->second + Vec2{0.5, 0.5});
      integral += integrate_poly_region(
          reg, t.modulation * (t.coef.x * unit.x + t.coef.y * unit.y));
    }
    samples.push_back({r, integral / r});
  }
  out.rhs_fit = extrapolate(std::move(samples));
  if (!out.rhs_fit.converged)
    fail("NotConverged", "one-sided cylinder limit did not converge");
  out.rhs = out.rhs_fit.value;
  out.residual = std::abs(out.lhs - out.rhs) /
                 (1.0 + std::max(std::abs(out.lhs), std::abs(out.rhs)));
  return out;
}

}  // namespace pairlab
