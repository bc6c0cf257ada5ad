#include <cmath>

#include "doctest.h"
#include "pairlab/scenes.hpp"

using namespace pairlab;

namespace {

FinitePerimeterSet big_domain() {
  return FinitePerimeterSet::box({-4, -4}, {4, 4});
}

// independent oracle: ⟨Div A, φ⟩ = -∫ A·∇φ dx, integrated piece by piece
// with exact polynomial quadrature over clipped regions
double distributional_divergence(const DMField& a, const TestFunction& phi) {
  double total = 0.0;
  for (const auto& piece : phi.pieces()) {
    Poly2 gx = piece.value.dx(), gy = piece.value.dy();
    // smooth part over domain ∩ cell
    {
      auto bb = piece.cell.bbox();
      Region r = region_in_box(
          FinitePerimeterSet::boolean(BoolOp::Intersection, a.domain(),
                                      piece.cell),
          bb->first - Vec2{0.5, 0.5}, bb->second + Vec2{0.5, 0.5});
      total -= integrate_poly_region(
          r, a.smooth_part().x * gx + a.smooth_part().y * gy);
    }
    for (const auto& t : a.jump_terms()) {
      auto bb = piece.cell.bbox();
      FinitePerimeterSet cell_in_domain = FinitePerimeterSet::boolean(
          BoolOp::Intersection, a.domain(), piece.cell);
      Region r = region_in_box(
          FinitePerimeterSet::boolean(BoolOp::Intersection, t.region,
                                      cell_in_domain),
          bb->first - Vec2{0.5, 0.5}, bb->second + Vec2{0.5, 0.5});
      total -= integrate_poly_region(
          r, t.modulation * (gx * t.coef.x + gy * t.coef.y));
    }
  }
  return total;
}

std::vector<TestFunction> five_test_functions() {
  std::vector<TestFunction> fs;
  fs.push_back(TestFunction::tensor_mollifier({0, 0}, 1.5, 3));
  fs.push_back(TestFunction::tensor_mollifier({0.5, 0.2}, 1.0, 2));
  fs.push_back(TestFunction::tensor_mollifier({-0.4, -0.6}, 1.2, 4));
  fs.push_back(TestFunction::polynomial_bump(Poly2::x() + Poly2(0.5), {0.2, -0.1},
                                             1.3, 3));
  // composed plateau coefficients are large; its integrals carry ~1e-8 noise
  fs.push_back(TestFunction::plateau({-0.6, -0.6}, {0.6, 0.6}, 0.4, 2));
  return fs;
}

void check_divergence_identity(const DMField& a) {
  auto fs = five_test_functions();
  for (size_t i = 0; i < fs.size(); ++i) {
    double lhs = pair_test(a.divergence(), fs[i]);
    double rhs = distributional_divergence(a, fs[i]);
    double tol = i + 1 == fs.size() ? 5e-8 : 1e-11 * (1.0 + std::abs(rhs));
    CHECK(std::abs(lhs - rhs) <= tol);
  }
}

}  // namespace

TEST_CASE("divergence: hyperplane jump field carries (a.e2) H^1 on the axis") {
  Vec2 a{0.7, 1.3};
  DMField A(Vec2Poly{}, {JumpTerm{a, FinitePerimeterSet::half_plane({0, 1}, 0.0)}},
            big_domain());
  // distributional identity against five test functions
  check_divergence_identity(A);
  // the jump set is the axis, density a.e2
  REQUIRE(A.jump_set().size() > 0);
  double mass = eval_on(A.divergence(), Probe{BoxProbe{{-1, -1}, {1, 1}}});
  CHECK(mass == doctest::Approx(2.0 * a.y).epsilon(1e-12));
}

TEST_CASE("divergence: identity field has Div A = 2 Lebesgue") {
  DMField A = DMField::polynomial({Poly2::x(), Poly2::y()}, big_domain());
  CHECK(A.jump_set().empty());
  double v = eval_on(A.divergence(), Probe{BallProbe{{0.3, 0.2}, 0.8}});
  CHECK(v == doctest::Approx(2.0 * kPi * 0.64).epsilon(1e-12));
  check_divergence_identity(A);
}

TEST_CASE("divergence: disc jump field and its jump set") {
  Vec2 a{0.0, 1.0};
  DMField A(Vec2Poly{}, {JumpTerm{a, FinitePerimeterSet::disc({0, 0}, 1.0)}},
            big_domain());
  REQUIRE_FALSE(A.jump_set().empty());
  // Div A = (a·ν) H^1 on the circle; total over the plane is zero by symmetry
  double total = eval_on(A.divergence(), EvalWindow{big_domain()});
  CHECK(total == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  // upper half circle: ∫ a·ν = -∫_0^pi sin t dt = -2 (interior normal -e(t))
  double upper = eval_on(A.divergence(),
                         Probe{BoxProbe{{-2, 1e-9}, {2, 2}}});
  CHECK(upper == doctest::Approx(-2.0).epsilon(1e-10));
  check_divergence_identity(A);
}

TEST_CASE("divergence: opposite coefficients cancel the jump") {
  Vec2 a{0.4, 0.9};
  auto up = FinitePerimeterSet::half_plane({0, 1}, 0.0);
  auto down = FinitePerimeterSet::half_plane({0, -1}, 0.0);
  DMField A(Vec2Poly{}, {JumpTerm{a, up}, JumpTerm{a, down}}, big_domain());
  CHECK(A.jump_set().empty());  // constant field overall
  CHECK(A.divergence().curves.empty());
}

TEST_CASE("divergence: vertical slab field is divergence free") {
  IntervalUnion u({{0.1, 0.3}, {0.5, 0.6}});
  DMField A(Vec2Poly{},
            {JumpTerm{{0.0, 1.0}, FinitePerimeterSet::product1d(u, 0)}},
            big_domain());
  CHECK(A.jump_set().empty());
  for (const auto& phi : five_test_functions())
    CHECK(std::abs(pair_test(A.divergence(), phi)) < 1e-12);
}

TEST_CASE("precise_value examples") {
  Vec2 a{1.0, 2.0};
  DMField A(Vec2Poly{}, {JumpTerm{a, FinitePerimeterSet::disc({0, 0}, 1.0)}},
            big_domain());
  auto v = A.precise_value({0.5, 0.0});
  CHECK_FALSE(v.is_jump);
  CHECK(v.value.x == doctest::Approx(1.0));
  CHECK(v.value.y == doctest::Approx(2.0));

  auto w = A.precise_value({1.0, 0.0});
  CHECK(w.is_jump);
  CHECK(w.normal.x == doctest::Approx(-1.0));
  CHECK(w.inner.x == doctest::Approx(1.0));
  CHECK(w.outer.norm() == doctest::Approx(0.0).scale(1.0));

  DMField P = DMField::polynomial({Poly2::x() * 2.0, Poly2::y()}, big_domain());
  auto z = P.precise_value({0.3, -0.7});
  CHECK_FALSE(z.is_jump);
  CHECK(z.value.x == doctest::Approx(0.6));
}

TEST_CASE("field corner points are rejected") {
  DMField A(Vec2Poly{},
            {JumpTerm{{1, 0}, FinitePerimeterSet::box({0, 0}, {1, 1})}},
            big_domain());
  CHECK_THROWS_WITH_AS(A.precise_value({0.0, 0.0}),
                       doctest::Contains("CornerPoint"), Error);
}

TEST_CASE("derivative: characteristic of a disc") {
  double R = 0.8;
  BVFunction u = BVFunction::characteristic(FinitePerimeterSet::disc({0, 0}, R),
                                            big_domain());
  CHECK(u.variation_total(EvalWindow{big_domain()}) ==
        doctest::Approx(2 * kPi * R).epsilon(1e-12));
  REQUIRE(u.jumps().size() > 0);
  // orientation: u+ = 1 inside, u- = 0 outside, ν points inward
  Vec2 x{R, 0.0};
  auto [um, up] = u.jump_values(x);
  CHECK(um == doctest::Approx(0.0).scale(1.0));
  CHECK(up == doctest::Approx(1.0));
  Vec2 nu = u.jump_normal(x);
  CHECK(nu.x == doctest::Approx(-1.0));
}

TEST_CASE("derivative: affine function on the unit square") {
  auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
  BVFunction u = BVFunction::smooth(Poly2::x(), square);
  CHECK(u.jumps().empty());
  CHECK(u.variation_total(EvalWindow{square}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("derivative: staircase carries unit Cantor mass") {
  auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
  BVFunction u = BVFunction::staircase(1.0 / 3.0, 12, 0, square);
  CHECK(u.jumps().empty());
  CHECK(u.grad_pieces().empty());
  REQUIRE(u.cantor_part().has_value());
  CHECK(u.variation_total(EvalWindow{square}) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("representative values") {
  BVFunction u = BVFunction::characteristic(FinitePerimeterSet::disc({0, 0}, 1.0),
                                            big_domain());
  CHECK(u.representative({1.0, 0.0}, 0.5) == doctest::Approx(0.5));
  CHECK(u.representative({1.0, 0.0}, 0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(u.representative({1.0, 0.0}, 1.0) == doctest::Approx(1.0));
  BVFunction v = BVFunction::smooth(Poly2::x(), big_domain());
  CHECK(v.representative({0.37, 0.1}, 0.5) == doctest::Approx(0.37));
  // orientation convention: λ=1 side dominates λ=0 side
  for (double t : {0.3, 1.2, 2.9}) {
    Vec2 p = dir_of(t);
    CHECK(u.representative(p, 1.0) >= u.representative(p, 0.0));
  }
}

TEST_CASE("thin singular points are rejected") {
  BVFunction u = BVFunction::characteristic(FinitePerimeterSet::box({0, 0}, {1, 1}),
                                            big_domain());
  CHECK_THROWS_WITH_AS(u.representative({0.0, 0.0}, 0.5),
                       doctest::Contains("ThinSingularPoint"), Error);
}

TEST_CASE("level sets") {
  auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
  BVFunction u = BVFunction::smooth(Poly2::x(), square);
  FinitePerimeterSet e = u.level_set(0.3);
  CHECK(e.where({0.5, 0.5}) == FinitePerimeterSet::Where::Inside);
  CHECK(e.where({0.2, 0.5}) == FinitePerimeterSet::Where::Outside);
  // boundary relative to the open domain: the slab cut only
  FragmentList bd = level_boundary(u, 0.3, Probe{BoxProbe{{0.25, 0.0}, {0.35, 1.0}}});
  CHECK(fragments_length(bd) == doctest::Approx(1.0).epsilon(1e-12));

  BVFunction chi = BVFunction::characteristic(FinitePerimeterSet::disc({0, 0}, 1.0),
                                              big_domain());
  FinitePerimeterSet l = chi.level_set(0.5);
  CHECK(l.where({0.9, 0.0}) == FinitePerimeterSet::Where::Inside);

  BVFunction s = BVFunction::staircase(0.5, 10, 0, square);
  // plateau level: symmetric-inverse convention puts the cut at the gap
  // midpoint, which is 1/2 for every lambda
  FinitePerimeterSet half = s.level_set(0.5);
  CHECK(half.where({0.51, 0.5}) == FinitePerimeterSet::Where::Inside);
  CHECK(half.where({0.49, 0.5}) == FinitePerimeterSet::Where::Outside);
  // just above the plateau value the cut jumps to the right survivor block
  FinitePerimeterSet above = s.level_set(0.5 + 1e-7);
  CHECK(above.where({0.76, 0.5}) == FinitePerimeterSet::Where::Inside);
  CHECK(above.where({0.74, 0.5}) == FinitePerimeterSet::Where::Outside);
  CHECK_THROWS_WITH_AS(s.level_set(1.5), doctest::Contains("ExceptionalLevel"),
                       Error);
}

TEST_CASE("level-set normals align with ν_u") {
  auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
  BVFunction u = BVFunction::smooth(Poly2::x(), square);
  for (int k = 1; k < 100; ++k) {
    double t = k / 100.0;
    if (u.is_exceptional_level(t)) continue;
    FinitePerimeterSet e = u.level_set(t);
    Vec2 n = interior_normal(e, {t, 0.5});
    CHECK(std::abs(n.x - 1.0) < 1e-10);
    CHECK(std::abs(n.y) < 1e-10);
  }
}

TEST_CASE("coarea: affine scene is exact") {
  auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
  BVFunction u = BVFunction::smooth(Poly2::x(), square);
  auto c = coarea_check(u, Poly2(1.0), Probe{BoxProbe{{0, 0}, {1, 1}}}, 48);
  CHECK(c.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.residual < 1e-9);
}

TEST_CASE("coarea: characteristic of the disc") {
  BVFunction u = BVFunction::characteristic(FinitePerimeterSet::disc({0, 0}, 1.0),
                                            big_domain());
  auto c = coarea_check(u, Poly2(1.0), EvalWindow{big_domain()}, 16);
  CHECK(c.lhs == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(c.rhs == doctest::Approx(2 * kPi).epsilon(1e-10));
  CHECK(c.residual < 1e-9);
}

TEST_CASE("coarea: staircase at depth 12 with dyadic nodes") {
  auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
  BVFunction u = BVFunction::staircase(1.0 / 3.0, 12, 0, square);
  auto c = coarea_check(u, Poly2(1.0), Probe{BoxProbe{{0, 0}, {1, 1}}}, 1 << 12);
  CHECK(c.lhs == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c.residual < 1e-3);
}

TEST_CASE("affine_of rescales the staircase") {
  auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
  BVFunction u = BVFunction::staircase(0.5, 8, 0, square);
  BVFunction v = BVFunction::affine_of(0.25, 2.0, u);
  CHECK(v.eval({0.5, 0.5}) == doctest::Approx(1.25));  // central plateau
  CHECK(v.eval({2.0, 0.5}) == doctest::Approx(2.25));  // clamped right tail
  CHECK(v.variation_total(EvalWindow{square}) == doctest::Approx(2.0).epsilon(1e-10));
}
