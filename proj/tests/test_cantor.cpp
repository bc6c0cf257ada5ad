#include <cmath>

#include "doctest.h"
#include "pairlab/cantor.hpp"
#include "pairlab/traces.hpp"

using namespace pairlab;

TEST_CASE("construction: removed lengths are exact rationals") {
  for (auto lam : {Rational(1, 2), Rational(3, 4), Rational(1, 3)}) {
    auto c = CantorConstruction::build(lam, 6);
    for (int j = 0; j < 6; ++j) {
      // the closed form λ(1-λ)^j / 2^j, exactly
      Rational expect = c.removed_length(j);
      for (const auto& iv : c.removed()[j]) CHECK(iv.length() == expect);
      CHECK(c.removed()[j].size() == size_t(1) << j);
    }
    // mass conservation at every depth: removed + surviving == 1 exactly
    Rational removed_total = 0;
    for (int j = 0; j < 6; ++j)
      removed_total += Rational(1 << j) * c.removed_length(j);
    CHECK(removed_total + c.surviving_length(6) == Rational(1));
    CHECK(c.total_removed() == removed_total);
    // 2^d survivors of equal length (1-λ)^d / 2^d
    CHECK(c.survivors().size() == size_t(64));
    Rational slen = c.surviving_length(6) / 64;
    for (const auto& iv : c.survivors()) CHECK(iv.length() == slen);
  }
}

TEST_CASE("construction: lambda=1/2 milestones") {
  auto c = CantorConstruction::build(Rational(1, 2), 3);
  CHECK(c.removed_length(0) == Rational(1, 2));
  CHECK(c.surviving_length(1) == Rational(1, 2));
  CHECK(c.surviving_length(3) == Rational(1, 8));
}

TEST_CASE("box dimension: closed form within 0.05 at depth 14") {
  struct Case {
    Rational lam;
    double expect;
  };
  std::vector<Case> cases = {{Rational(1, 4), std::log(2.0) / std::log(8.0 / 3.0)},
                             {Rational(1, 2), 0.5},
                             {Rational(3, 4), 1.0 / 3.0}};
  for (const auto& cs : cases) {
    auto est = box_dimension(cs.lam, 4, 14);
    CHECK(std::abs(est.estimate - cs.expect) <= 0.05);
    CHECK(est.closed_form == doctest::Approx(cs.expect).epsilon(1e-12));
  }
  CHECK_THROWS_WITH_AS(box_dimension(Rational(1, 2), 4, 6),
                       doctest::Contains("InsufficientDepths"), Error);
}

TEST_CASE("box dimension: approaches 1 as lambda = 2^-m shrinks") {
  double prev = 0.0;
  for (int m = 1; m <= 5; ++m) {
    auto est = box_dimension(Rational(1, 1 << m), 4, 12);
    CHECK(est.estimate > prev);
    prev = est.estimate;
  }
  CHECK(prev > 0.8);
}

TEST_CASE("density window: boundary points of the even union") {
  auto c = CantorConstruction::build(Rational(1, 2), 16);
  std::vector<Rational> radii;
  for (int k = 4; k <= 16; ++k) radii.push_back(Rational(1, 1 << k));

  // left endpoint of [0,1] is a Cantor point
  auto d0 = density_window(c, Rational(0), radii);
  CHECK(d0.min_density > 0.0);
  CHECK(d0.max_density < 1.0);

  // a deep Cantor point with alternating address
  std::vector<int> addr;
  for (int i = 0; i < 16; ++i) addr.push_back(i % 2);
  auto dc = density_window(c, c.point_at_address(addr), radii);
  CHECK(dc.min_density > 0.05);
  CHECK(dc.max_density < 0.95);

  // a point deep inside the first removed interval sees density -> 1
  auto din = density_window(c, Rational(1, 2), radii);
  CHECK(din.samples.back().second == doctest::Approx(1.0));

  CHECK_THROWS_WITH_AS(density_window(c, Rational(0), {Rational(1, 1LL << 33)}),
                       doctest::Contains("ResolutionExceeded"), Error);
}

TEST_CASE("density window agrees with the 2D extrusion classification") {
  auto c = CantorConstruction::build(Rational(1, 2), 14);
  auto set = FinitePerimeterSet::product1d(c.even_removed_f(), 0);
  // Cantor points classify as measure-theoretic boundary of the extrusion
  std::vector<int> addr = {0, 1, 0, 1, 1, 0, 0, 1};
  double x = c.point_at_address(addr).convert_to<double>();
  CHECK(classify_point(set, {x, 0.3}) == PointClass::MeasureBoundary);
  CHECK(classify_point(set, {0.5, -1.0}) == PointClass::Interior);
  CHECK(classify_point(set, {2.5, 0.0}) == PointClass::Exterior);
}

TEST_CASE("fat-Cantor field: divergence-free with empty jump set") {
  auto cf = field_from_construction(3, 8);
  CHECK(cf.field.jump_set().empty());
  CHECK(cf.field.divergence().curves.empty());
  CHECK(cf.field.divergence().ac.empty());
  std::vector<TestFunction> suite = {
      TestFunction::tensor_mollifier({3.0, 0.0}, 1.5, 3),
      TestFunction::tensor_mollifier({5.0, 0.5}, 1.2, 2),
      TestFunction::polynomial_bump(Poly2::x(), {4.5, -0.3}, 1.4, 3),
      TestFunction::tensor_mollifier({2.5, 0.1}, 0.8, 4),
      TestFunction::plateau({2.2, -0.8}, {4.8, 0.8}, 0.4, 2),
  };
  for (const auto& phi : suite)
    CHECK(std::abs(pair_test(cf.field.divergence(), phi)) < 1e-10);
}

TEST_CASE("fat-Cantor field: half-ball traces agree across vertical lines") {
  auto cf = field_from_construction(2, 6);
  RadiusSchedule sched;
  sched.r0 = 0.05;
  // points on slab edges of F (vertical jump lines of χ_F with zero normal
  // jump): Tr+ = Tr- by the trace identity with vanishing divergence
  const auto& iv = cf.f_union.intervals();
  REQUIRE(iv.size() >= 2);
  for (size_t k : {size_t(0), iv.size() / 2}) {
    Vec2 x{iv[k].first, 0.25};
    auto tr = halfball_traces(cf.field, x, {1, 0}, sched);
    CHECK(tr.plus.converged);
    CHECK(tr.minus.converged);
    CHECK(std::abs(tr.plus.value - tr.minus.value) <= 1e-6);
  }
}

TEST_CASE("fat-Cantor field: sample of S_A classifies as measure boundary") {
  auto cf = field_from_construction(2, 10);
  // x-coordinate of a Cantor point of the first block (lambda = 1/2)
  auto c = CantorConstruction::build(Rational(1, 2), 10);
  std::vector<int> addr = {1, 0, 1, 0, 1};
  double x = 2.0 + c.point_at_address(addr).convert_to<double>();
  CHECK(classify_point(cf.f_set, {x, 0.7}) == PointClass::MeasureBoundary);
}
