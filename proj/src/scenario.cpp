#include "pairlab/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>

namespace pairlab {

namespace {

FinitePerimeterSet big_domain() {
  return FinitePerimeterSet::box({-4, -4}, {4, 4});
}

void add_check(ScenarioReport& rep, const std::string& id, double value,
               double threshold, const std::string& note = "") {
  CheckRecord r{id, value, threshold, std::abs(value) <= threshold, note};
  rep.pass = rep.pass && r.pass;
  rep.records.push_back(std::move(r));
}

void add_flag(ScenarioReport& rep, const std::string& id, bool ok,
              const std::string& note = "") {
  CheckRecord r{id, ok ? 1.0 : 0.0, 1.0, ok, note};
  // value 1 means the flagged condition held
  rep.pass = rep.pass && ok;
  rep.records.push_back(std::move(r));
}

Table trace_table(const TraceEstimate& est) {
  Table t;
  t.columns = {"radius", "average", "fit"};
  double rmax = est.samples.empty() ? 1.0 : est.samples.front().first;
  for (const auto& [r, v] : est.samples) {
    double fit = est.value;
    if (std::isfinite(est.order) && !est.samples.empty()) {
      // reconstruct the fitted correction magnitude for diagnostics
      fit = est.value + (v - est.value);  // sample shown against the limit
      (void)rmax;
    }
    t.rows.push_back({r, v, est.value});
    (void)fit;
  }
  return t;
}

// -------------------------------------------------------------------------
// scenarios
// -------------------------------------------------------------------------

ScenarioReport scenario_example_4_1(double ts) {
  ScenarioReport rep;
  rep.name = "example-4-1";
  Vec2 a{0.0, 1.0};
  DMField A(Vec2Poly{}, {JumpTerm{a, FinitePerimeterSet::disc({0, 0}, 1.0)}},
            big_domain());
  BVFunction u = BVFunction::characteristic(FinitePerimeterSet::disc({0, 0}, 1.0),
                                            big_domain());
  RadiusSchedule sched;
  Table theta_tab;
  theta_tab.columns = {"angle", "halfball", "expected", "cylinder"};
  for (int k = 0; k < 8; ++k) {
    double t = 2.0 * kPi * (k + 0.5) / 8.0;
    Vec2 x = dir_of(t);
    Vec2 nu = -x;
    double expect = 0.5 * a.dot(nu);
    ThetaSample hb = theta_density(A, u, x, TraceMethod::HalfBall, sched);
    ThetaSample cy = theta_density(A, u, x, TraceMethod::Cylinder, sched);
    theta_tab.rows.push_back({t, hb.value, expect, cy.value});
    add_check(rep, "theta-halfball-p" + std::to_string(k), hb.value - expect,
              1e-4 * ts, "half-ball density vs a.nu/2");
    add_check(rep, "theta-cylinder-p" + std::to_string(k), cy.value, 1e-3 * ts,
              "cylindrical trace vanishes on the jump circle");
    add_flag(rep, "cylinder-flagged-p" + std::to_string(k), cy.method_invalid,
             "MethodInvalidHere on Theta_A ∩ J_u");
  }
  for (double r : {0.1, 0.01}) {
    double rho = 0.6;
    Vec2 x{1.0, 0.0};
    Vec2 nu{-1.0, 0.0};
    double got = cyl_integral(A, x, nu, r, rho);
    double closed =
        (std::acos(1 - r) - (1 - r) * std::sqrt(2 * r - r * r)) * a.dot(nu);
    add_check(rep, "cyl-integral-closed-form-r" + std::to_string(r),
              got - closed, 1e-10 * ts, "segment-area formula");
  }
  // convergence table at the first sampled point
  auto tr = halfball_traces(A, dir_of(2.0 * kPi * 0.5 / 8.0),
                            -dir_of(2.0 * kPi * 0.5 / 8.0), sched);
  rep.tables["halfball-convergence"] = trace_table(tr.plus);
  rep.tables["theta-samples"] = theta_tab;
  return rep;
}

ScenarioReport scenario_halfball_exactness(double ts) {
  ScenarioReport rep;
  rep.name = "halfball-exactness";
  Vec2 a{0.8, -1.1};
  DMField C = DMField::constant(a, big_domain());
  for (double th : {0.0, 1.2}) {
    Vec2 nu = dir_of(th);
    for (double r : {0.2, 0.02, 0.002}) {
      double vi = halfball_average(C, {0.1, 0.2}, nu, r, HalfBallSide::Interior);
      add_check(rep, "constant-interior", vi - a.dot(nu), 1e-12 * ts,
                "constant field half-ball average is exact");
      double ve = halfball_average(C, {0.1, 0.2}, nu, r, HalfBallSide::Exterior);
      add_check(rep, "constant-exterior", ve + a.dot(nu), 1e-12 * ts, "");
    }
  }
  Vec2 b{0.4, 1.7};
  DMField H(Vec2Poly{},
            {JumpTerm{b, FinitePerimeterSet::half_plane({0, 1}, 0.0)}},
            big_domain());
  RadiusSchedule sched;
  auto tr = halfball_traces(H, {0, 0}, {0, 1}, sched);
  add_flag(rep, "hyperplane-converged", tr.plus.converged && tr.minus.converged);
  add_check(rep, "hyperplane-trace-plus", tr.plus.value - b.y, 1e-6 * ts,
            "Tr+ equals a.e2");
  add_check(rep, "hyperplane-trace-minus", tr.minus.value, 1e-6 * ts,
            "Tr- vanishes");
  rep.tables["halfball-convergence"] = trace_table(tr.plus);
  return rep;
}

ScenarioReport scenario_trace_jump_gallery(double ts) {
  ScenarioReport rep;
  rep.name = "trace-jump-gallery";
  RadiusSchedule sched;
  struct Scene {
    std::string id;
    DMField field;
    FragmentList sigma;
  };
  std::vector<Scene> scenes;
  scenes.push_back({"hyperplane",
                    DMField(Vec2Poly{},
                            {JumpTerm{{0.5, 1.2},
                                      FinitePerimeterSet::half_plane({0, 1}, 0.0)}},
                            big_domain()),
                    {Fragment(Segment{{-0.5, 0.0}, {0.5, 0.0}})}});
  scenes.push_back({"double-jump",
                    DMField(Vec2Poly{},
                            {JumpTerm{{0.0, 1.3},
                                      FinitePerimeterSet::half_plane({0, 1}, 0.0)},
                             JumpTerm{{0.0, -0.4},
                                      FinitePerimeterSet::half_plane({0, -1}, 0.0)}},
                            big_domain()),
                    {Fragment(Segment{{-0.4, 0.0}, {0.7, 0.0}})}});
  scenes.push_back({"disc-quarter",
                    DMField(Vec2Poly{},
                            {JumpTerm{{0.0, 1.0},
                                      FinitePerimeterSet::disc({0, 0}, 1.0)}},
                            big_domain()),
                    {Fragment(Arc{{0, 0}, 1.0, 0.0, kPi / 2})}});
  scenes.push_back({"square-edge",
                    DMField(Vec2Poly{},
                            {JumpTerm{{0.3, 0.9},
                                      FinitePerimeterSet::box({0, 0}, {1, 1})}},
                            big_domain()),
                    {Fragment(Segment{{0.2, 0.0}, {0.8, 0.0}})}});
  scenes.push_back({"smooth",
                    DMField::polynomial({Poly2::x() * Poly2::x(), Poly2::y()},
                                        big_domain()),
                    {Fragment(Segment{{-0.3, 0.1}, {0.4, 0.5}})}});
  for (const auto& s : scenes) {
    double res = trace_jump_check(s.field, s.sigma, sched);
    add_check(rep, "trace-jump-" + s.id, res, 1e-5 * ts,
              "Div A(Sigma) vs integrated trace jump");
  }
  return rep;
}

ScenarioReport scenario_gauss_green_gallery(double ts) {
  ScenarioReport rep;
  rep.name = "gauss-green-gallery";
  RadiusSchedule sched;
  BVFunction one = BVFunction::smooth(Poly2(1.0), big_domain());

  {  // identity field over a disc, u = 1
    DMField A = DMField::polynomial({Poly2::x(), Poly2::y()}, big_domain());
    auto l = gauss_green(A, one, FinitePerimeterSet::disc({0, 0}, 1.3),
                         GGVariant::Interior, TraceMethod::Analytic, sched);
    add_check(rep, "disc-identity-analytic", l.residual, 1e-6 * ts, "");
    auto lh = gauss_green(A, one, FinitePerimeterSet::disc({0, 0}, 1.3),
                          GGVariant::Interior, TraceMethod::HalfBall, sched);
    add_check(rep, "disc-identity-halfball", lh.residual, 1e-4 * ts, "");
  }
  {  // disc jump field over its own disc, u = 1, both variants
    DMField A(Vec2Poly{},
              {JumpTerm{{0.4, 1.0}, FinitePerimeterSet::disc({0, 0}, 1.0)}},
              big_domain());
    for (auto v : {GGVariant::Interior, GGVariant::Closure}) {
      auto l = gauss_green(A, one, FinitePerimeterSet::disc({0, 0}, 1.0), v,
                           TraceMethod::Analytic, sched);
      std::string tag = v == GGVariant::Interior ? "interior" : "closure";
      add_check(rep, "disc-jump-" + tag, l.residual, 1e-6 * ts, "");
    }
  }
  {  // polynomial field over the unit square
    DMField A = DMField::polynomial({Poly2::x() * Poly2::x(), Poly2(0.0)},
                                    big_domain());
    auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
    auto l = gauss_green(A, one, square, GGVariant::Interior,
                         TraceMethod::Analytic, sched);
    add_check(rep, "square-poly-analytic", l.residual, 1e-6 * ts, "");
    add_check(rep, "square-poly-volume", l.volume - 1.0, 1e-9 * ts,
              "int 2x over the unit square");
    auto lh = gauss_green(A, one, square, GGVariant::Interior,
                          TraceMethod::HalfBall, sched);
    add_check(rep, "square-poly-halfball", lh.residual, 1e-4 * ts, "");
  }
  {  // half-disc with a BV function carrying jumps
    auto halfdisc = FinitePerimeterSet::boolean(
        BoolOp::Intersection, FinitePerimeterSet::disc({0, 0}, 1.0),
        FinitePerimeterSet::half_plane({0, 1}, 0.0));
    DMField A(Vec2Poly{{Poly2(0.3)}, {Poly2(0.2)}},
              {JumpTerm{{0.0, 0.8}, FinitePerimeterSet::disc({0, 0}, 1.0)}},
              big_domain());
    BVFunction u = BVFunction::characteristic(
        FinitePerimeterSet::half_plane({0, 1}, -0.3), big_domain());
    for (auto v : {GGVariant::Interior, GGVariant::Closure}) {
      std::string tag = v == GGVariant::Interior ? "interior" : "closure";
      auto l = gauss_green(A, u, halfdisc, v, TraceMethod::Analytic, sched);
      add_check(rep, "halfdisc-" + tag + "-analytic", l.residual, 1e-6 * ts, "");
    }
    auto lh = gauss_green(A, u, halfdisc, GGVariant::Interior,
                          TraceMethod::HalfBall, sched);
    add_check(rep, "halfdisc-halfball", lh.residual, 1e-4 * ts, "");
  }
  return rep;
}

ScenarioReport scenario_coarea_gallery(double ts) {
  ScenarioReport rep;
  rep.name = "coarea-gallery";
  {  // affine scene, exact
    DMField A = DMField::constant({1.0, 0.0}, big_domain());
    auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
    BVFunction u = BVFunction::smooth(Poly2::x(), square);
    auto c = coarea_pairing_check(A, u, Probe{BoxProbe{{0, 0}, {1, 1}}}, 48);
    add_check(rep, "pairing-affine", c.residual, 1e-9 * ts, "");
    add_check(rep, "theta-transfer-affine", c.theta_transfer, 1e-9 * ts, "");
    auto b = coarea_check(u, Poly2(1.0), Probe{BoxProbe{{0, 0}, {1, 1}}}, 48);
    add_check(rep, "bv-affine", b.residual, 1e-9 * ts, "");
  }
  {  // characteristic scene
    DMField A(Vec2Poly{},
              {JumpTerm{{0.0, 1.0}, FinitePerimeterSet::disc({0, 0}, 1.0)}},
              big_domain());
    BVFunction u = BVFunction::characteristic(
        FinitePerimeterSet::disc({0, 0}, 1.0), big_domain());
    auto c = coarea_pairing_check(A, u, Probe{BallProbe{{0, 0}, 2.0}}, 16);
    add_check(rep, "pairing-characteristic", c.residual, 1e-9 * ts, "");
    auto b = coarea_check(u, Poly2(1.0), EvalWindow{big_domain()}, 16);
    add_check(rep, "bv-characteristic", b.residual, 1e-9 * ts, "");
  }
  {  // staircase at depth 12 with 2^12 dyadic nodes
    DMField A = DMField::constant({1.0, 0.0}, big_domain());
    auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
    BVFunction u = BVFunction::staircase(1.0 / 3.0, 12, 0, square);
    auto c = coarea_pairing_check(A, u, Probe{BoxProbe{{0, 0}, {1, 1}}}, 1 << 12);
    add_check(rep, "pairing-staircase", c.residual, 1e-3 * ts, "");
    auto b = coarea_check(u, Poly2(1.0), Probe{BoxProbe{{0, 0}, {1, 1}}}, 1 << 12);
    add_check(rep, "bv-staircase", b.residual, 1e-3 * ts, "");
    Table t;
    t.columns = {"lhs", "rhs", "residual"};
    t.rows.push_back({c.lhs, c.rhs, c.residual});
    rep.tables["coarea-staircase"] = t;
  }
  return rep;
}

ScenarioReport scenario_method_agreement(double ts) {
  ScenarioReport rep;
  rep.name = "method-agreement";
  struct Pair {
    std::string id;
    DMField field;
    BVFunction u;
    TestFunction phi;
  };
  std::vector<Pair> pairs;
  auto dom = big_domain();
  auto mk_phi = [](Vec2 c, double R, int k) {
    return TestFunction::tensor_mollifier(c, R, k);
  };
  DMField smoothA = DMField::polynomial({Poly2::x(), Poly2::y() * 0.5}, dom);
  DMField discA(Vec2Poly{},
                {JumpTerm{{0.3, 0.9}, FinitePerimeterSet::disc({0, 0}, 1.0)}},
                dom);
  DMField boxA(Vec2Poly{{Poly2(0.2)}, {Poly2(0.0)}},
               {JumpTerm{{1.0, 0.4}, FinitePerimeterSet::box({-0.5, -0.5}, {0.6, 0.4})}},
               dom);
  BVFunction affine = BVFunction::smooth(Poly2::x(), dom);
  BVFunction chi_disc =
      BVFunction::characteristic(FinitePerimeterSet::disc({0, 0}, 1.0), dom);
  BVFunction chi_half = BVFunction::characteristic(
      FinitePerimeterSet::half_plane({0, 1}, 0.1), dom);
  pairs.push_back({"smooth-affine", smoothA, affine, mk_phi({0.2, 0.1}, 1.2, 3)});
  pairs.push_back({"smooth-chidisc", smoothA, chi_disc, mk_phi({-0.2, 0.3}, 1.0, 2)});
  pairs.push_back({"disc-affine", discA, affine, mk_phi({0.3, -0.2}, 1.1, 3)});
  pairs.push_back({"disc-chidisc", discA, chi_disc, mk_phi({0.0, 0.0}, 1.5, 3)});
  pairs.push_back({"disc-chihalf", discA, chi_half, mk_phi({0.1, 0.2}, 1.2, 4)});
  pairs.push_back({"box-affine", boxA, affine, mk_phi({0.0, -0.1}, 1.0, 3)});
  pairs.push_back({"box-chidisc", boxA, chi_disc, mk_phi({0.1, 0.0}, 1.3, 2)});
  pairs.push_back({"box-chihalf", boxA, chi_half, mk_phi({-0.1, 0.1}, 1.1, 3)});
  pairs.push_back(
      {"smooth-chihalf", smoothA, chi_half, mk_phi({0.25, -0.15}, 0.9, 3)});
  for (const auto& p : pairs) {
    double lhs = pairing_distributional(p.field, p.u, p.phi);
    double rhs = pair_test(pairing_analytic(p.field, p.u), p.phi);
    add_check(rep, "agree-" + p.id, lhs - rhs, 1e-5 * ts * (1.0 + std::abs(rhs)),
              "distributional vs analytic pairing");
  }
  {  // the Cantor-part scene; both routes equal 1
    DMField A = DMField::constant({1.0, 0.0}, dom);
    BVFunction u = BVFunction::staircase(1.0 / 3.0, 12, 0, dom);
    double h = 0.3;
    TestFunction phi = TestFunction::plateau_tensor(
        {-0.2, h / 2}, {1.2, 1.0 - h / 2}, {0.3, h}, 2);
    double lhs = pairing_distributional(A, u, phi);
    double rhs = pair_test(pairing_analytic(A, u), phi);
    add_check(rep, "agree-cantor", lhs - rhs, 1e-5 * ts, "");
    add_check(rep, "cantor-mass-distributional", lhs - 1.0, 1e-3 * ts, "");
    add_check(rep, "cantor-mass-analytic", rhs - 1.0, 1e-3 * ts, "");
  }
  return rep;
}

ScenarioReport scenario_lambda_affinity(double ts) {
  ScenarioReport rep;
  rep.name = "lambda-affinity";
  Vec2 a{0.0, 1.3}, b{0.0, -0.4};
  DMField A(Vec2Poly{},
            {JumpTerm{a, FinitePerimeterSet::half_plane({0, 1}, 0.0)},
             JumpTerm{b, FinitePerimeterSet::half_plane({0, -1}, 0.0)}},
            big_domain());
  BVFunction u = BVFunction::characteristic(
      FinitePerimeterSet::half_plane({0, 1}, 0.0), big_domain());
  Vec2 x{0.2, 0.0};
  RadiusSchedule sched;
  Table tab;
  tab.columns = {"lambda", "theta-analytic", "theta-halfball"};
  for (TraceMethod m : {TraceMethod::Analytic, TraceMethod::HalfBall}) {
    std::string tag = m == TraceMethod::Analytic ? "analytic" : "halfball";
    double t0 = theta_lambda(A, u, x, 0.0, m, sched);
    double t1 = theta_lambda(A, u, x, 1.0, m, sched);
    double th = theta_lambda(A, u, x, 0.5, m, sched);
    double tol = (m == TraceMethod::Analytic ? 1e-12 : 1e-6) * ts;
    add_check(rep, "endpoint-plus-" + tag, t0 - a.y, tol, "theta_0 = Tr+");
    add_check(rep, "endpoint-minus-" + tag, t1 - b.y, tol, "theta_1 = Tr-");
    add_check(rep, "collinearity-" + tag, t0 - 2 * th + t1, 1e-9 * ts,
              "theta_lambda affine in lambda");
    double star = theta_density(A, u, x, m, sched).value;
    add_check(rep, "midpoint-star-" + tag, th - star, tol,
              "theta_{1/2} equals Tr*");
  }
  for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    tab.rows.push_back({lam,
                        theta_lambda(A, u, x, lam, TraceMethod::Analytic, sched),
                        theta_lambda(A, u, x, lam, TraceMethod::HalfBall, sched)});
  }
  rep.tables["lambda-sweep"] = tab;
  return rep;
}

ScenarioReport scenario_cantor_dim(double ts) {
  ScenarioReport rep;
  rep.name = "cantor-dim";
  Table tab;
  tab.columns = {"lambda", "estimate", "closed_form"};
  for (auto lam : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
    auto est = box_dimension(lam, 4, 14);
    tab.rows.push_back({lam.convert_to<double>(), est.estimate, est.closed_form});
    add_check(rep, "dimension-lambda-" + std::to_string(lam.convert_to<double>()),
              est.estimate - est.closed_form, 0.05 * ts,
              "box dimension vs log2/log(2/(1-lambda))");
  }
  rep.tables["dimensions"] = tab;
  {  // exact interval lengths, rational equality
    auto c = CantorConstruction::build(Rational(1, 2), 8);
    bool exact = true;
    for (int j = 0; j < 8; ++j)
      for (const auto& iv : c.removed()[j])
        exact = exact && (iv.length() == c.removed_length(j));
    Rational removed_total = 0;
    for (int j = 0; j < 8; ++j)
      removed_total += Rational(1 << j) * c.removed_length(j);
    exact = exact && (removed_total + c.surviving_length(8) == Rational(1));
    add_flag(rep, "exact-lengths", exact,
             "removed lengths lambda (1-lambda)^j / 2^j in rational arithmetic");
  }
  {  // divergence-free field pairs to < 1e-10 on the suite
    auto cf = field_from_construction(3, 8);
    std::vector<TestFunction> suite = {
        TestFunction::tensor_mollifier({3.0, 0.0}, 1.5, 3),
        TestFunction::tensor_mollifier({5.0, 0.5}, 1.2, 2),
        TestFunction::polynomial_bump(Poly2::x(), {4.5, -0.3}, 1.4, 3),
        TestFunction::tensor_mollifier({2.5, 0.1}, 0.8, 4),
        TestFunction::plateau({2.2, -0.8}, {4.8, 0.8}, 0.4, 2)};
    double worst = 0.0;
    for (const auto& phi : suite)
      worst = std::max(worst, std::abs(pair_test(cf.field.divergence(), phi)));
    add_check(rep, "div-free-pairing", worst, 1e-10 * ts,
              "distributional divergence of the fat-Cantor field");
    add_flag(rep, "jump-set-empty", cf.field.jump_set().empty(), "");
  }
  {  // density window at a Cantor point
    auto c = CantorConstruction::build(Rational(1, 2), 16);
    std::vector<Rational> radii;
    for (int k = 4; k <= 16; ++k) radii.push_back(Rational(1, 1 << k));
    std::vector<int> addr;
    for (int i = 0; i < 16; ++i) addr.push_back(i % 2);
    auto dw = density_window(c, c.point_at_address(addr), radii);
    add_flag(rep, "density-bounded-away", dw.min_density > 0.05 &&
                                              dw.max_density < 0.95,
             "0 < liminf <= limsup < 1 at a Cantor point");
    Table dt;
    dt.columns = {"radius", "density"};
    for (auto& [r, d] : dw.samples) dt.rows.push_back({r, d});
    rep.tables["density-window"] = dt;
  }
  return rep;
}

ScenarioReport scenario_tangent_disc(double ts) {
  ScenarioReport rep;
  rep.name = "tangent-disc";
  Vec2 a{0.0, 1.0};
  DMField A(Vec2Poly{}, {JumpTerm{a, FinitePerimeterSet::disc({0, 0}, 1.0)}},
            big_domain());
  BVFunction u = BVFunction::characteristic(FinitePerimeterSet::disc({0, 0}, 1.0),
                                            big_domain());
  RadiusSchedule sched;
  auto suite = default_gap_suite();
  auto chk = tangent_blowup_check(A, u, {0.0, -1.0}, 1.0, sched, suite);
  add_flag(rep, "monotone-tail", chk.monotone_tail,
           "gap decreases over the finest 4 radii");
  add_check(rep, "final-gap", chk.final_gap, 1e-3 * ts,
            "weak-* gap to Tr* (u+-u-) H^1 on the tangent line");
  add_check(rep, "trace-star", chk.trace_star - 0.5, 1e-9 * ts, "");
  Table t;
  t.columns = {"radius", "gap"};
  for (auto& [r, g] : chk.gaps) t.rows.push_back({r, g});
  rep.tables["blowup-gaps"] = t;

  // flat scene: exact at every radius
  DMField C = DMField::constant({0.2, 0.9}, big_domain());
  BVFunction uh = BVFunction::characteristic(
      FinitePerimeterSet::half_plane({0, 1}, 0.0), big_domain());
  auto flat = tangent_blowup_check(C, uh, {0.0, 0.0}, 1.0, sched, suite);
  double worst = 0.0;
  for (auto& [r, g] : flat.gaps) worst = std::max(worst, g);
  add_check(rep, "flat-scene-exact", worst, 1e-10 * ts,
            "half-plane blow-up equals the candidate at every radius");
  return rep;
}

ScenarioReport scenario_zero_extension(double ts) {
  ScenarioReport rep;
  rep.name = "zero-extension";
  RadiusSchedule sched;
  {
    DMField A = DMField::polynomial({Poly2::x(), Poly2::y() * 0.5},
                                    FinitePerimeterSet::disc({0, 0}, 1.0));
    BVFunction u = BVFunction::smooth(Poly2::x() + Poly2(0.7),
                                      FinitePerimeterSet::disc({0, 0}, 1.0));
    auto z = zero_extension_gauss_green(A, u, TraceMethod::Analytic, sched);
    add_check(rep, "disc-smooth-analytic", z.residual, 1e-6 * ts, "");
    add_check(rep, "disc-smooth-cyl-check", z.cyl_check, 1e-5 * ts,
              "sampled Cyl agrees with the pairing density");
    auto zh = zero_extension_gauss_green(A, u, TraceMethod::HalfBall, sched);
    add_check(rep, "disc-smooth-halfball", zh.residual, 1e-4 * ts, "");
  }
  {
    auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
    DMField A = DMField::constant({1.0, 0.0}, square);
    BVFunction u = BVFunction::smooth(Poly2::x(), square);
    auto z = zero_extension_gauss_green(A, u, TraceMethod::Analytic, sched);
    add_check(rep, "square-affine-analytic", z.residual, 1e-6 * ts, "");
    add_check(rep, "square-affine-pairing", z.pairing - 1.0, 1e-9 * ts,
              "int Cyl d|Du| equals 1");
  }
  return rep;
}

ScenarioReport scenario_property_suite(double ts) {
  ScenarioReport rep;
  rep.name = "property-suite";
  auto dom = big_domain();
  RadiusSchedule sched;

  {  // linearity of averages in the field
    DMField A(Vec2Poly{},
              {JumpTerm{{1.0, 0.0}, FinitePerimeterSet::disc({0, 0}, 1.0)}},
              dom);
    DMField B(Vec2Poly{},
              {JumpTerm{{0.5, -0.7}, FinitePerimeterSet::half_plane({0, 1}, 0.0)}},
              dom);
    DMField C = A * 0.7 + B * (-1.3);
    Vec2 x{0.3, 0.0};
    Vec2 nu = dir_of(0.4);
    double worst = 0.0;
    for (double r : {0.2, 0.05}) {
      double lhs = halfball_average(C, x, nu, r, HalfBallSide::Interior);
      double rhs = 0.7 * halfball_average(A, x, nu, r, HalfBallSide::Interior) -
                   1.3 * halfball_average(B, x, nu, r, HalfBallSide::Interior);
      worst = std::max(worst, std::abs(lhs - rhs));
      worst = std::max(
          worst, std::abs(cyl_average(C, x, nu, r, 0.3) -
                          (0.7 * cyl_average(A, x, nu, r, 0.3) -
                           1.3 * cyl_average(B, x, nu, r, 0.3))));
    }
    add_check(rep, "linearity", worst, 1e-12 * ts, "averages linear in A");
  }
  {  // trace bound
    DMField A(Vec2Poly{},
              {JumpTerm{{0.0, 1.0}, FinitePerimeterSet::disc({0, 0}, 1.0)}},
              dom);
    double worst = 0.0;
    for (double th : {0.2, 1.1, 2.7, 4.4}) {
      Vec2 x = dir_of(th);
      auto tr = halfball_traces(A, x, -x, sched);
      worst = std::max(worst, std::abs(tr.plus.value) - A.sup_norm());
      worst = std::max(worst, std::abs(tr.minus.value) - A.sup_norm());
    }
    add_check(rep, "trace-bound", std::max(worst, 0.0), 1e-6 * ts,
              "|Tr| <= ||A||_inf");
  }
  {  // orientation flip
    DMField A(Vec2Poly{},
              {JumpTerm{{0.3, 1.2}, FinitePerimeterSet::disc({0, 0}, 1.0)}},
              dom);
    Vec2 x = dir_of(0.8);
    auto tr = halfball_traces(A, x, -x, sched);
    auto fl = halfball_traces(A, x, x, sched);
    double worst = std::max(std::abs(fl.plus.value + tr.minus.value),
                            std::abs(fl.minus.value + tr.plus.value));
    add_check(rep, "orientation-flip", worst, 1e-9 * ts,
              "halfball_traces(-nu) = (-Tr-, -Tr+)");
  }
  {  // restriction consistency
    MeasureRep mu;
    mu.ac.push_back({Poly2::x() + Poly2(1.5),
                     FinitePerimeterSet::disc({0, 0}, 1.5)});
    FragmentList circle;
    for (int k = 0; k < 4; ++k)
      circle.push_back(Arc{{0, 0}, 1.0, k * kPi / 2, (k + 1) * kPi / 2});
    mu.curves.push_back({circle, CurveDensity::constant(1.0)});
    FinitePerimeterSet e = FinitePerimeterSet::box({-1, -1}, {0.5, 2});
    FinitePerimeterSet b = FinitePerimeterSet::disc({0.2, 0.3}, 0.9);
    double lhs = eval_on(restrict_measure(mu, e), EvalWindow{b});
    double rhs = eval_on(
        mu, EvalWindow{FinitePerimeterSet::boolean(BoolOp::Intersection, e, b)});
    add_check(rep, "restriction-consistency", lhs - rhs, 1e-11 * ts, "");
  }
  {  // clip additivity
    auto disc = FinitePerimeterSet::disc({0.2, 0.1}, 0.8);
    Vec2 x{0.4, -0.1};
    Vec2 nu = dir_of(1.1);
    double whole = clip(disc, BallProbe{x, 0.5}).area;
    double i = clip(disc, HalfBallProbe{x, 0.5, nu, HalfBallSide::Interior}).area;
    double e = clip(disc, HalfBallProbe{x, 0.5, nu, HalfBallSide::Exterior}).area;
    add_check(rep, "clip-additivity", whole - i - e, 1e-12 * ts * (1.0 + whole),
              "");
  }
  {  // orientation convention of jumps: u^i = u^+
    BVFunction u = BVFunction::characteristic(
        FinitePerimeterSet::disc({0, 0}, 1.0), dom);
    bool ok = true;
    for (double t : {0.3, 1.2, 2.9, 4.0}) {
      Vec2 p = dir_of(t);
      ok = ok && u.representative(p, 1.0) >= u.representative(p, 0.0);
    }
    add_flag(rep, "jump-orientation", ok, "u^i = u^+ on J_u");
  }
  {  // density bound for converged theta samples
    DMField A(Vec2Poly{},
              {JumpTerm{{0.0, 1.0}, FinitePerimeterSet::disc({0, 0}, 1.0)}},
              dom);
    BVFunction u = BVFunction::characteristic(
        FinitePerimeterSet::disc({0, 0}, 1.0), dom);
    double worst = 0.0;
    for (double t : {0.4, 1.6, 3.3}) {
      auto s = theta_density(A, u, dir_of(t), TraceMethod::HalfBall, sched);
      if (s.converged)
        worst = std::max(worst, std::abs(s.value) - A.sup_norm());
    }
    add_check(rep, "theta-bound", std::max(worst, 0.0), 1e-6 * ts,
              "|theta| <= ||A||_inf");
  }
  return rep;
}

using ScenarioFn = ScenarioReport (*)(double);

struct Entry {
  const char* name;
  const char* summary;
  ScenarioFn fn;
};

const Entry kScenarios[] = {
    {"example-4-1",
     "jump-circle scene: half-ball density a.nu/2 vs vanishing cylindrical "
     "trace, with the exact segment-area formula",
     scenario_example_4_1},
    {"halfball-exactness",
     "constant fields averaged exactly; hyperplane-jump traces after "
     "extrapolation",
     scenario_halfball_exactness},
    {"trace-jump-gallery",
     "Div A restricted to a curve equals the integrated trace jump on five "
     "scenes",
     scenario_trace_jump_gallery},
    {"gauss-green-gallery",
     "interior/closure Gauss-Green ledgers on disc, square and half-disc "
     "scenes with analytic and half-ball traces",
     scenario_gauss_green_gallery},
    {"coarea-gallery",
     "level-set disintegration of |Du| and of the pairing, including the "
     "staircase scene at depth 12",
     scenario_coarea_gallery},
    {"method-agreement",
     "distributional vs analytic pairing on ten scene/test-function pairs "
     "plus the Cantor-part scene",
     scenario_method_agreement},
    {"lambda-affinity",
     "lambda-weighted densities are affine with endpoints Tr+ and Tr-",
     scenario_lambda_affinity},
    {"cantor-dim",
     "fat-Cantor constructions: exact removed lengths, box dimensions, "
     "density windows, divergence-free field",
     scenario_cantor_dim},
    {"tangent-disc",
     "blow-ups of the jump pairing converge to Tr* (u+-u-) H^1 on the "
     "tangent line",
     scenario_tangent_disc},
    {"zero-extension",
     "Gauss-Green with the zero extension across the domain boundary",
     scenario_zero_extension},
    {"property-suite",
     "linearity, trace bounds, orientation flips, restriction consistency, "
     "clip additivity",
     scenario_property_suite},
};

}  // namespace

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& e : kScenarios) out.push_back(e.name);
  return out;
}

std::string scenario_summary(const std::string& name) {
  for (const auto& e : kScenarios)
    if (name == e.name) return e.summary;
  fail("UnknownScenario", "no scenario named " + name);
}

bool has_scenario(const std::string& name) {
  for (const auto& e : kScenarios)
    if (name == e.name) return true;
  return false;
}

ScenarioReport run_scenario(const std::string& name, double tol_scale) {
  for (const auto& e : kScenarios) {
    if (name != e.name) continue;
    auto start = std::chrono::steady_clock::now();
    ScenarioReport rep = e.fn(tol_scale);
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return rep;
  }
  fail("UnknownScenario", "no scenario named " + name);
}

std::string schedule_hash(const RadiusSchedule& sched) {
  // FNV-1a over the schedule parameters
  auto mix = [](uint64_t h, uint64_t v) {
    h ^= v;
    return h * 1099511628211ULL;
  };
  uint64_t h = 1469598103934665603ULL;
  auto bits = [](double d) {
    uint64_t u;
    static_assert(sizeof(u) == sizeof(d));
    std::memcpy(&u, &d, sizeof(u));
    return u;
  };
  h = mix(h, bits(sched.r0));
  h = mix(h, bits(sched.q));
  h = mix(h, uint64_t(sched.n));
  h = mix(h, bits(sched.rho0));
  h = mix(h, bits(sched.q_rho));
  h = mix(h, uint64_t(sched.n_rho));
  h = mix(h, bits(sched.couple_scale));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pairlab
