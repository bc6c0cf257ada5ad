#include <cmath>

#include "doctest.h"
#include "pairlab/traces.hpp"

using namespace pairlab;

namespace {

FinitePerimeterSet big_domain() {
  return FinitePerimeterSet::box({-4, -4}, {4, 4});
}

RadiusSchedule default_sched() { return RadiusSchedule{}; }

DMField disc_field(Vec2 a) {
  return DMField(Vec2Poly{}, {JumpTerm{a, FinitePerimeterSet::disc({0, 0}, 1.0)}},
                 big_domain());
}

DMField halfplane_field(Vec2 a) {
  return DMField(Vec2Poly{},
                 {JumpTerm{a, FinitePerimeterSet::half_plane({0, 1}, 0.0)}},
                 big_domain());
}

}  // namespace

TEST_CASE("extrapolate: synthetic sequences") {
  std::vector<std::pair<double, double>> s;
  for (int k = 0; k < 10; ++k) {
    double r = 0.1 * std::pow(0.5, k);
    s.push_back({r, 3.0 + r});
  }
  auto e = extrapolate(s);
  CHECK(e.converged);
  CHECK(e.value == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(e.order == doctest::Approx(1.0).epsilon(0.05));

  s.clear();
  for (int k = 0; k < 8; ++k) s.push_back({0.1 * std::pow(0.5, k), 2.5});
  e = extrapolate(s);
  CHECK(e.converged);
  CHECK(e.value == doctest::Approx(2.5));
  CHECK(std::isinf(e.order));

  s.clear();
  for (int k = 0; k < 10; ++k) {
    double r = 0.1 * std::pow(0.5, k);
    s.push_back({r, std::sqrt(r) / 0.05});
  }
  e = extrapolate(s);
  CHECK(e.converged);
  CHECK(e.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  CHECK(e.order == doctest::Approx(0.5).epsilon(0.02));

  CHECK_THROWS_WITH_AS(extrapolate({{0.1, 1.0}, {0.05, 1.0}}),
                       doctest::Contains("InsufficientSamples"), Error);
}

TEST_CASE("halfball_average: constant fields are exact at every radius") {
  Vec2 a{0.8, -1.1};
  DMField A = DMField::constant(a, big_domain());
  for (double th : {0.0, 0.7, 2.1}) {
    Vec2 nu = dir_of(th);
    for (double r : {0.3, 0.05, 0.007}) {
      double vi = halfball_average(A, {0.2, -0.1}, nu, r, HalfBallSide::Interior);
      double ve = halfball_average(A, {0.2, -0.1}, nu, r, HalfBallSide::Exterior);
      CHECK(std::abs(vi - a.dot(nu)) <= 1e-12);
      CHECK(std::abs(ve + a.dot(nu)) <= 1e-12);
    }
  }
}

TEST_CASE("halfball_average: disc field seen from a boundary point") {
  Vec2 a{1.0, 0.7};
  DMField A = disc_field(a);
  Vec2 x{1.0, 0.0};
  Vec2 nu{-1.0, 0.0};
  // the disc lies entirely on the interior side of its tangent line, so the
  // exterior average vanishes identically (segment-area bound: zero area)
  for (double r : {0.1, 0.05, 0.025, 0.0125}) {
    double v = std::abs(halfball_average(A, x, nu, r, HalfBallSide::Exterior));
    CHECK(v <= 1e-15);
  }
  // the interior average misses only the curvature sliver: error O(r)
  double prev = 1.0;
  for (double r : {0.1, 0.05, 0.025, 0.0125}) {
    double v = halfball_average(A, x, nu, r, HalfBallSide::Interior);
    double err = std::abs(v - a.dot(nu));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("halfball_traces: hyperplane jump (criterion-2 scene)") {
  Vec2 a{0.4, 1.7};
  DMField A = halfplane_field(a);
  auto tr = halfball_traces(A, {0, 0}, {0, 1}, default_sched());
  REQUIRE(tr.plus.converged);
  REQUIRE(tr.minus.converged);
  CHECK(std::abs(tr.plus.value - a.y) <= 1e-6);
  CHECK(std::abs(tr.minus.value) <= 1e-6);
  CHECK(tr.star == doctest::Approx(a.y / 2).epsilon(1e-6));
}

TEST_CASE("halfball_traces: disc scene reproduces the half-density") {
  Vec2 a{0.0, 1.0};
  DMField A = disc_field(a);
  Vec2 x{1.0, 0.0};
  Vec2 nu{-1.0, 0.0};
  auto tr = halfball_traces(A, x, nu, default_sched());
  REQUIRE(tr.plus.converged);
  REQUIRE(tr.minus.converged);
  CHECK(std::abs(tr.plus.value - a.dot(nu)) <= 1e-5);
  CHECK(std::abs(tr.minus.value) <= 1e-5);
  CHECK(std::abs(tr.star - 0.5 * a.dot(nu)) <= 1e-5);
}

TEST_CASE("halfball_traces: smooth fields give A(x)·ν on both sides") {
  DMField A = DMField::polynomial(
      {Poly2::x() * 0.5 + Poly2(0.2), Poly2::y() * Poly2::x()}, big_domain());
  Vec2 x{0.4, -0.3};
  for (double th : {0.3, 1.9}) {
    Vec2 nu = dir_of(th);
    auto tr = halfball_traces(A, x, nu, default_sched());
    double expect = A.eval(x).dot(nu);
    REQUIRE(tr.plus.converged);
    REQUIRE(tr.minus.converged);
    CHECK(std::abs(tr.plus.value - expect) <= 1e-6);
    CHECK(std::abs(tr.minus.value - expect) <= 1e-6);
  }
}

TEST_CASE("halfball_traces: orientation flip swaps and negates") {
  Vec2 a{0.3, 1.2};
  DMField A = disc_field(a);
  Vec2 x = dir_of(0.8);
  Vec2 nu = -x;
  auto tr = halfball_traces(A, x, nu, default_sched());
  auto fl = halfball_traces(A, x, -nu, default_sched());
  CHECK(std::abs(fl.plus.value + tr.minus.value) <= 1e-9);
  CHECK(std::abs(fl.minus.value + tr.plus.value) <= 1e-9);
  CHECK(std::abs(fl.star + tr.star) <= 1e-9);
}

TEST_CASE("halfball averages are linear in the field") {
  Vec2 a{1.0, 0.0}, b{0.5, -0.7};
  DMField A = disc_field(a);
  DMField B = halfplane_field(b);
  DMField C = A * 0.7 + B * (-1.3);
  Vec2 x{0.3, 0.0};
  Vec2 nu = dir_of(0.4);
  for (double r : {0.2, 0.05}) {
    double lhs = halfball_average(C, x, nu, r, HalfBallSide::Interior);
    double rhs = 0.7 * halfball_average(A, x, nu, r, HalfBallSide::Interior) -
                 1.3 * halfball_average(B, x, nu, r, HalfBallSide::Interior);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("trace bound: |Tr| <= ||A||_inf") {
  Vec2 a{0.0, 1.0};
  DMField A = disc_field(a);
  for (double th : {0.2, 1.1, 2.7, 4.4}) {
    Vec2 x = dir_of(th);
    auto tr = halfball_traces(A, x, -x, default_sched());
    CHECK(std::abs(tr.plus.value) <= A.sup_norm() + 1e-6);
    CHECK(std::abs(tr.minus.value) <= A.sup_norm() + 1e-6);
  }
}

TEST_CASE("cyl_integral: the closed form of the tangent cylinder scene") {
  Vec2 a{0.0, 1.0};
  DMField A = disc_field(a);
  for (double r : {0.1, 0.01}) {
    double rho = 0.6;
    Vec2 x{1.0, 0.0};
    Vec2 nu{-1.0, 0.0};
    double got = cyl_integral(A, x, nu, r, rho);
    double expect = (std::acos(1 - r) - (1 - r) * std::sqrt(2 * r - r * r)) *
                    a.dot(nu);
    CHECK(std::abs(got - expect) <= 1e-10);
  }
}

TEST_CASE("cyl_average: constant and hyperplane scenes") {
  Vec2 a{0.9, -0.4};
  DMField A = DMField::constant(a, big_domain());
  Vec2 zeta = dir_of(1.1);
  CHECK(cyl_average(A, {0.1, 0.2}, zeta, 0.05, 0.2) ==
        doctest::Approx(a.dot(zeta)).epsilon(1e-12));

  DMField H = halfplane_field({0.3, 1.4});
  CHECK(cyl_average(H, {0, 0}, {0, 1}, 0.07, 0.3) ==
        doctest::Approx(1.4 / 2).epsilon(1e-12));
}

TEST_CASE("cyl_trace: constant, counterexample, and smooth scenes") {
  RadiusSchedule sched;
  Vec2 a{0.0, 1.0};

  DMField C = DMField::constant({0.6, 0.8}, big_domain());
  auto ct = cyl_trace(C, {0.1, -0.2}, dir_of(0.5), sched);
  CHECK(ct.converged);
  CHECK(ct.outer.value ==
        doctest::Approx(Vec2{0.6, 0.8}.dot(dir_of(0.5))).epsilon(1e-8));

  // the paper's counterexample scene: inner limit vanishes like sqrt(r)/rho
  DMField A = disc_field(a);
  Vec2 x{0.0, 1.0};
  auto tr = cyl_trace(A, x, -x, sched);
  CHECK(std::abs(tr.outer.value) <= 1e-3);
  for (const auto& inner : tr.inner) {
    CHECK(inner.converged);
    CHECK(std::abs(inner.value) <= 1e-5);
    CHECK(inner.order == doctest::Approx(0.5).epsilon(0.02));
  }

  DMField P = DMField::polynomial(
      {Poly2::x() + Poly2(0.3), Poly2::y() * 0.5}, big_domain());
  Vec2 p{0.2, 0.4};
  Vec2 zeta = dir_of(2.0);
  auto pt = cyl_trace(P, p, zeta, sched);
  CHECK(pt.converged);
  CHECK(std::abs(pt.outer.value - P.eval(p).dot(zeta)) <= 1e-6);
}

TEST_CASE("trace_jump_check: hyperplane, smooth, and quarter circle") {
  RadiusSchedule sched;
  Vec2 a{0.5, 1.2};
  DMField H = halfplane_field(a);
  FragmentList seg = {Fragment(Segment{{-0.5, 0.0}, {0.5, 0.0}})};
  CHECK(trace_jump_check(H, seg, sched) <= 1e-6);

  DMField P = DMField::polynomial({Poly2::x(), Poly2::y()}, big_domain());
  FragmentList seg2 = {Fragment(Segment{{-0.3, 0.1}, {0.4, 0.5}})};
  CHECK(trace_jump_check(P, seg2, sched) <= 1e-6);

  DMField D = disc_field({0.0, 1.0});
  FragmentList quarter = {Fragment(Arc{{0, 0}, 1.0, 0.0, kPi / 2})};
  CHECK(trace_jump_check(D, quarter, sched) <= 1e-5);
}

TEST_CASE("hyperplane_average_identity") {
  RadiusSchedule sched;
  Vec2 a{0.4, 0.9};
  DMField C = DMField::constant(a, big_domain());
  auto h = hyperplane_average_identity(C, {0.2, 0.0}, {0, 1}, 0.5, sched);
  CHECK(h.lhs == doctest::Approx(2 * 0.5 * a.y).epsilon(1e-10));
  CHECK(h.residual <= 1e-9);

  DMField H = halfplane_field(a);
  auto h2 = hyperplane_average_identity(H, {0.0, 0.0}, {0, 1}, 0.4, sched);
  CHECK(h2.lhs == doctest::Approx(2 * 0.4 * a.y).epsilon(1e-6));
  CHECK(h2.residual <= 1e-6);

  DMField P = DMField::polynomial(
      {Poly2::x() * Poly2::x(), Poly2::y() + Poly2(0.2)}, big_domain());
  auto h3 = hyperplane_average_identity(P, {0.1, 0.3}, dir_of(0.9), 0.3, sched);
  CHECK(h3.residual <= 1e-6);
}
