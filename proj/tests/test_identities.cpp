// Cross-cutting identities: trace identity on jump curves, gap bounds
// between curve and tangent-line averages, level-set trace carriers.

#include <cmath>

#include "doctest.h"
#include "pairlab/pairing.hpp"

using namespace pairlab;

namespace {

FinitePerimeterSet big_domain() {
  return FinitePerimeterSet::box({-4, -4}, {4, 4});
}

}  // namespace

TEST_CASE("trace identity: Div A on a curve equals the analytic trace jump") {
  Vec2 a{0.3, 1.1};
  DMField A(Vec2Poly{}, {JumpTerm{a, FinitePerimeterSet::disc({0, 0}, 1.0)}},
            big_domain());
  // quarter circle window
  FragmentList sigma = {Fragment(Arc{{0, 0}, 1.0, kPi / 6, kPi / 2})};
  double lhs = eval_on_curve(A.divergence(), sigma);
  // rhs from one-sided field values (precise_field jump pairs)
  double rhs = integrate_fragments(
      sigma,
      [&](Vec2 p, Vec2 nu) {
        auto pv = A.precise_value(p);
        REQUIRE(pv.is_jump);
        return (pv.inner - pv.outer).dot(nu);
      },
      1e-12);
  CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
}

TEST_CASE("trace bound: |Div A|(Sigma) <= 2 ||A||_inf H^1(Sigma)") {
  Vec2 a{0.6, -1.4};
  DMField A(Vec2Poly{{Poly2(0.2)}, {Poly2::x()}},
            {JumpTerm{a, FinitePerimeterSet::disc({0, 0}, 1.0)}}, big_domain());
  for (const auto& t : A.jump_set()) {
    FragmentList sigma = {t.frag};
    double mass = std::abs(eval_on_curve(A.divergence(), sigma));
    CHECK(mass <= 2.0 * A.sup_norm() * fragments_length(sigma) + 1e-12);
  }
}

TEST_CASE("gap bound: curve vs tangent-line trace averages shrink together") {
  // smooth-boundary scene with Div A absolutely continuous: the discrepancy
  // between traces averaged over the circle and over its tangent line must
  // decrease with the window (Div A puts no mass near the curve)
  DMField A = DMField::polynomial({Poly2::x() * Poly2::y(), Poly2::y() + Poly2(0.4)},
                                  big_domain());
  Vec2 x{0.0, -1.0};
  Vec2 nu{0.0, 1.0};  // interior normal of the unit disc at x
  RadiusSchedule sched;
  std::vector<double> rhos = {0.4, 0.2, 0.1, 0.05, 0.025};
  std::vector<double> gaps;
  for (double rho : rhos) {
    // curve average over the circle arc within B_rho(x)
    double tmax = 2.0 * std::asin(rho / 2.0);
    FragmentList arc = {
        Fragment(Arc{{0, 0}, 1.0, -kPi / 2 - tmax, -kPi / 2 + tmax})};
    double curve_len = fragments_length(arc);
    double curve_avg = 0.0;
    for (const auto& node : curve_nodes(arc, 12)) {
      auto tr = halfball_traces(A, node.p, node.normal, sched);
      curve_avg += node.w * tr.plus.value;
    }
    curve_avg /= curve_len;
    // tangent-line average over T_x ∩ B_rho(x)
    Vec2 tang = nu.perp();
    double line_avg = 0.0;
    const auto& xs = gl_nodes(12);
    const auto& ws = gl_weights(12);
    for (int i = 0; i < 12; ++i) {
      Vec2 p = x + rho * xs[i] * tang;
      auto tr = halfball_traces(A, p, nu, sched);
      line_avg += 0.5 * ws[i] * tr.plus.value;
    }
    gaps.push_back(std::abs(curve_avg - line_avg));
  }
  for (size_t i = gaps.size() / 2; i + 1 < gaps.size(); ++i)
    CHECK(gaps[i + 1] < gaps[i]);
  CHECK(gaps.back() < 1e-3);
}

TEST_CASE("cylindrical trace equals both half-ball traces away from Theta_A") {
  Vec2 a{0.0, 1.0};
  DMField A(Vec2Poly{{Poly2(0.3)}, {Poly2::x() * 0.5}},
            {JumpTerm{a, FinitePerimeterSet::disc({0, 0}, 1.0)}}, big_domain());
  RadiusSchedule sched;
  // points strictly inside / outside the jump circle
  for (Vec2 x : {Vec2{0.3, 0.1}, Vec2{1.6, 0.4}}) {
    Vec2 zeta = dir_of(0.7);
    REQUIRE_FALSE(A.on_jump_set(x));
    auto hb = halfball_traces(A, x, zeta, sched);
    auto cy = cyl_trace(A, x, zeta, sched);
    REQUIRE(hb.plus.converged);
    REQUIRE(cy.converged);
    CHECK(std::abs(hb.plus.value - hb.minus.value) <= 1e-4);
    CHECK(std::abs(cy.outer.value - hb.plus.value) <= 1e-4);
  }
}

TEST_CASE("Cantor density via the level-set trace carrier") {
  // θ(A, Du, x) on the staircase support equals Tr*(A, ∂*{u > ũ(x)})(x),
  // with the superlevel set entering as the trace carrier
  DMField A = DMField::polynomial({Poly2::x() + Poly2(0.5), Poly2::y()},
                                  big_domain());
  auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
  BVFunction u = BVFunction::staircase(0.5, 12, 0, square);
  REQUIRE(u.cantor_part().has_value());
  const auto& carriers = u.cantor_part()->profile.carriers.intervals();
  int tested = 0;
  for (size_t k : {size_t(0), carriers.size() / 3, carriers.size() - 1}) {
    // a point a third of the way into a surviving interval has a
    // non-dyadic value, so its superlevel set is regular
    auto [ca, cb] = carriers[k];
    Vec2 x{ca + (cb - ca) / 3.0, 0.4};
    double ut = u.eval(x);
    REQUIRE_FALSE(u.is_exceptional_level(ut));
    FinitePerimeterSet carrier = u.level_set(ut);
    Vec2 nu = interior_normal(carrier, x);
    double tr_star = 0.5 * (A.side_value(x, nu) + A.side_value(x, -nu)).dot(nu);
    double theta = theta_density(A, u, x, TraceMethod::Analytic).value;
    CHECK(theta == doctest::Approx(tr_star).epsilon(1e-12));
    ++tested;
  }
  CHECK(tested == 3);
}

TEST_CASE("blow-up with mass normalization on the ball") {
  Vec2 a{0.0, 1.0};
  DMField A(Vec2Poly{}, {JumpTerm{a, FinitePerimeterSet::disc({0, 0}, 1.0)}},
            big_domain());
  BVFunction u = BVFunction::characteristic(FinitePerimeterSet::disc({0, 0}, 1.0),
                                            big_domain());
  RadiusSchedule sched;
  auto chk = tangent_blowup_check(A, u, {0.0, -1.0}, 1.0, sched,
                                  default_gap_suite(),
                                  TangentNormalization::MassOnBall);
  CHECK(chk.final_gap <= 1e-3);
}
