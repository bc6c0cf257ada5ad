#include <cmath>
#include <random>

#include "doctest.h"
#include "pairlab/geom.hpp"
#include "pairlab/quad.hpp"

using namespace pairlab;

namespace {

// independent arc-length oracle: sample the circle finely and accumulate
// chord lengths of the part inside the probe set
double arc_length_oracle(Vec2 center, double R,
                         const FinitePerimeterSet& window, int n = 2000000) {
  double L = 0.0;
  Vec2 prev = center + Vec2{R, 0.0};
  for (int i = 1; i <= n; ++i) {
    double t = 2.0 * kPi * i / n;
    Vec2 p = center + R * dir_of(t);
    Vec2 mid = 0.5 * (prev + p);
    if (window.where(mid) == FinitePerimeterSet::Where::Inside)
      L += dist(prev, p);
    prev = p;
  }
  return L;
}

}  // namespace

TEST_CASE("clip: half plane against ball") {
  auto hp = FinitePerimeterSet::half_plane({0, 1}, 0.0);
  for (double r : {0.5, 1.0, 2.0}) {
    auto rd = clip(hp, BallProbe{{0, 0}, r});
    CHECK(rd.area == doctest::Approx(kPi * r * r / 2).epsilon(1e-12));
  }
}

TEST_CASE("clip: cylinder alone has area 4 r rho") {
  auto big = FinitePerimeterSet::box({-10, -10}, {10, 10});
  Vec2 axis = Vec2{1.0, 2.0}.normalized();
  auto rd = clip(big, CylinderProbe{{0.3, -0.2}, axis, 0.25, 0.75});
  CHECK(rd.area == doctest::Approx(4 * 0.25 * 0.75).epsilon(1e-13));
}

TEST_CASE("clip: disc against tangent cylinder (circular segment area)") {
  auto disc = FinitePerimeterSet::disc({0, 0}, 1.0);
  for (double r : {0.1, 0.01}) {
    double rho = 0.6;  // >= sqrt(2r - r^2) for both radii
    auto rd = clip(disc, CylinderProbe{{1.0, 0.0}, {-1.0, 0.0}, r, rho});
    double expected = std::acos(1.0 - r) - (1.0 - r) * std::sqrt(2 * r - r * r);
    CHECK(rd.area == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("clip: patch areas sum to region area") {
  auto disc = FinitePerimeterSet::disc({0.2, 0.1}, 0.8);
  auto rd = clip(disc, BallProbe{{0.9, 0.1}, 0.5});
  double patch_sum = 0.0;
  for (const auto& t : rd.triangles) patch_sum += t.signed_area;
  for (const auto& s : rd.segments) patch_sum += s.signed_area;
  CHECK(patch_sum == doctest::Approx(rd.area).epsilon(1e-12));
  CHECK(rd.area > 0.0);
}

TEST_CASE("clip: empty intersection gives empty decomposition") {
  auto disc = FinitePerimeterSet::disc({10, 10}, 0.5);
  auto rd = clip(disc, BallProbe{{0, 0}, 1.0});
  CHECK(rd.area == doctest::Approx(0.0));
  CHECK(rd.triangles.empty());
  CHECK(rd.segments.empty());
}

TEST_CASE("clip additivity: ball = interior half + exterior half") {
  std::mt19937 rng(20240517);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 24; ++trial) {
    FinitePerimeterSet set = [&] {
      switch (trial % 3) {
        case 0:
          return FinitePerimeterSet::disc({U(rng), U(rng)}, 0.4 + 0.5 * std::abs(U(rng)));
        case 1:
          return FinitePerimeterSet::half_plane({U(rng), 1.0 + 0.2 * U(rng)},
                                                0.3 * U(rng));
        default:
          return FinitePerimeterSet::box({-0.8 + 0.1 * U(rng), -0.7},
                                         {0.6, 0.9 + 0.1 * U(rng)});
      }
    }();
    Vec2 x{0.4 * U(rng), 0.4 * U(rng)};
    double r = 0.3 + 0.4 * std::abs(U(rng));
    Vec2 nu = Vec2{U(rng), U(rng) + 1.5}.normalized();
    double whole = clip(set, BallProbe{x, r}).area;
    double inner =
        clip(set, HalfBallProbe{x, r, nu, HalfBallSide::Interior}).area;
    double outer =
        clip(set, HalfBallProbe{x, r, nu, HalfBallSide::Exterior}).area;
    CHECK(whole ==
          doctest::Approx(inner + outer).epsilon(1e-12).scale(1.0 + whole));
  }
}

TEST_CASE("perimeter: basic closed forms") {
  auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
  CHECK(perimeter(square) == doctest::Approx(4.0).epsilon(1e-13));
  auto disc = FinitePerimeterSet::disc({0.3, -0.2}, 1.7);
  CHECK(perimeter(disc) == doctest::Approx(2 * kPi * 1.7).epsilon(1e-13));
}

TEST_CASE("perimeter: disc boundary inside a small ball, vs arc oracle") {
  auto disc = FinitePerimeterSet::disc({0, 0}, 1.0);
  Probe w = BallProbe{{1.0, 0.0}, 0.5};
  double got = perimeter(disc, w);
  double oracle = arc_length_oracle({0, 0}, 1.0, probe_set(w));
  CHECK(got == doctest::Approx(oracle).epsilon(1e-5));
  // closed form: the circle enters the ball where |e(t) - (1,0)| = 0.5
  double tmax = std::acos(1.0 - 0.5 * 0.5 / 2.0);
  CHECK(got == doctest::Approx(2 * tmax).epsilon(1e-12));
}

TEST_CASE("perimeter: disjoint union adds") {
  auto a = FinitePerimeterSet::disc({-3, 0}, 1.0);
  auto b = FinitePerimeterSet::box({2, -1}, {3, 1});
  auto u = FinitePerimeterSet::boolean(BoolOp::Union, a, b);
  CHECK(perimeter(u) ==
        doctest::Approx(perimeter(a) + perimeter(b)).epsilon(1e-12));
}

TEST_CASE("perimeter: shared edge of adjoining boxes is not reduced boundary") {
  auto a = FinitePerimeterSet::box({0, 0}, {1, 1});
  auto b = FinitePerimeterSet::box({1, 0}, {2, 1});
  auto u = FinitePerimeterSet::boolean(BoolOp::Union, a, b);
  CHECK(perimeter(u) == doctest::Approx(6.0).epsilon(1e-12));
  auto i = FinitePerimeterSet::boolean(BoolOp::Intersection, a, b);
  CHECK(perimeter(i) == doctest::Approx(0.0));
}

TEST_CASE("interior_normal: closed family examples") {
  auto disc = FinitePerimeterSet::disc({0, 0}, 1.0);
  Vec2 n = interior_normal(disc, {1.0, 0.0});
  CHECK(n.x == doctest::Approx(-1.0));
  CHECK(n.y == doctest::Approx(0.0).scale(1.0));

  auto hp = FinitePerimeterSet::half_plane({0, 1}, 0.0);
  n = interior_normal(hp, {3.0, 0.0});
  CHECK(n.x == doctest::Approx(0.0).scale(1.0));
  CHECK(n.y == doctest::Approx(1.0));

  auto square = FinitePerimeterSet::box({0, 0}, {1, 1});
  n = interior_normal(square, {0.5, 0.0});
  CHECK(n.x == doctest::Approx(0.0).scale(1.0));
  CHECK(n.y == doctest::Approx(1.0));

  CHECK_THROWS_WITH_AS(interior_normal(square, {0.0, 0.0}),
                       doctest::Contains("CornerPoint"), Error);
  CHECK_THROWS_WITH_AS(interior_normal(square, {0.5, 0.5}),
                       doctest::Contains("NotOnBoundary"), Error);
}

TEST_CASE("interior_normal: unit length and complement flip") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto window = FinitePerimeterSet::box({-20, -20}, {20, 20});
  for (int trial = 0; trial < 12; ++trial) {
    Vec2 c{U(rng), U(rng)};
    double R = 0.5 + std::abs(U(rng));
    auto disc = FinitePerimeterSet::disc(c, R);
    double t = kPi * U(rng);
    Vec2 x = c + R * dir_of(t);
    Vec2 n = interior_normal(disc, x);
    CHECK(std::abs(n.norm() - 1.0) < 1e-14);
    Vec2 nc = interior_normal(disc.complement_within(window), x);
    CHECK(dist(n, -nc) < 1e-12);
  }
}

TEST_CASE("classify_point: closed family") {
  auto disc = FinitePerimeterSet::disc({0, 0}, 1.0);
  CHECK(classify_point(disc, {0.5, 0.0}) == PointClass::Interior);
  CHECK(classify_point(disc, {2.0, 0.0}) == PointClass::Exterior);
  CHECK(classify_point(disc, {1.0, 0.0}) == PointClass::MeasureBoundary);

  auto hp = FinitePerimeterSet::half_plane({0, 1}, 0.0);
  CHECK(classify_point(hp, {5.0, 0.0}) == PointClass::MeasureBoundary);

  auto sq = FinitePerimeterSet::box({0, 0}, {1, 1});
  CHECK(classify_point(sq, {0.0, 0.0}) == PointClass::MeasureBoundary);

  // cancelled internal edge: union covering both sides is interior
  auto lower = FinitePerimeterSet::half_plane({0, -1}, 0.0);
  auto both = FinitePerimeterSet::boolean(BoolOp::Union, hp, lower);
  CHECK(classify_point(both, {0.3, 0.0}) == PointClass::Interior);
}

TEST_CASE("density_estimate: interior and flat boundary") {
  auto disc = FinitePerimeterSet::disc({0, 0}, 1.0);
  std::vector<double> radii;
  for (int k = 2; k <= 10; ++k) radii.push_back(std::pow(2.0, -k));
  auto de = density_estimate(disc, {0.2, 0.1}, radii);
  CHECK(de.liminf_estimate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(de.limsup_estimate == doctest::Approx(1.0).epsilon(1e-12));

  auto hp = FinitePerimeterSet::half_plane({0, 1}, 0.25);
  de = density_estimate(hp, {0.7, 0.25}, radii);
  CHECK(de.liminf_estimate == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(de.limsup_estimate == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(density_estimate(disc, {0, 0}, {}),
                       doctest::Contains("EmptySchedule"), Error);
}

TEST_CASE("classify_point interior implies density tail 1") {
  auto set = FinitePerimeterSet::boolean(
      BoolOp::Difference, FinitePerimeterSet::box({-1, -1}, {1, 1}),
      FinitePerimeterSet::disc({0.4, 0.2}, 0.3));
  std::vector<Vec2> pts = {{-0.5, -0.5}, {0.9, 0.9}, {0.0, -0.6}};
  std::vector<double> radii;
  for (int k = 4; k <= 12; ++k) radii.push_back(std::pow(2.0, -k));
  for (Vec2 p : pts) {
    REQUIRE(classify_point(set, p) == PointClass::Interior);
    auto de = density_estimate(set, p, radii);
    CHECK(de.liminf_estimate == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("product1d: slab areas and classification") {
  IntervalUnion u({{0.0, 0.25}, {0.5, 0.75}});
  auto set = FinitePerimeterSet::product1d(u, 0);
  auto rd = clip(set, BoxProbe{{-1, 0}, {1, 2}});
  CHECK(rd.area == doctest::Approx(0.5 * 2.0).epsilon(1e-13));
  CHECK(classify_point(set, {0.1, 5.0}) == PointClass::Interior);
  CHECK(classify_point(set, {0.4, -3.0}) == PointClass::Exterior);
  CHECK(classify_point(set, {0.5, 0.0}) == PointClass::MeasureBoundary);

  // chord-exact ball area against the generic fragment path
  double a1 = area_in_ball(set, {0.3, 1.0}, 0.6);
  auto rd2 = clip(set, BallProbe{{0.3, 1.0}, 0.6});
  CHECK(a1 == doctest::Approx(rd2.area).epsilon(1e-12));
}

TEST_CASE("region integration: polynomials over clipped regions") {
  // integral of x^2 over the unit disc = pi/4
  auto disc = FinitePerimeterSet::disc({0, 0}, 1.0);
  Region r = clip_region(disc, BallProbe{{0, 0}, 2.0});
  Poly2 x2 = Poly2::x() * Poly2::x();
  CHECK(integrate_poly_region(r, x2) == doctest::Approx(kPi / 4).epsilon(1e-13));

  // integral of x*y over [0,1]^2 = 1/4
  auto sq = FinitePerimeterSet::box({0, 0}, {1, 1});
  Region rs = clip_region(sq, BoxProbe{{-2, -2}, {2, 2}});
  CHECK(integrate_poly_region(rs, Poly2::x() * Poly2::y()) ==
        doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("smooth quadrature agrees with exact polynomial route") {
  auto disc = FinitePerimeterSet::disc({0.1, -0.3}, 0.9);
  auto rd = clip(disc, HalfBallProbe{{0.1, -0.3}, 1.2, {0, 1},
                                     HalfBallSide::Interior});
  Poly2 f = Poly2::x() * Poly2::y() * Poly2::y() + Poly2::constant(0.7);
  double exact = integrate_poly_region(
      clip_region(disc, HalfBallProbe{{0.1, -0.3}, 1.2, {0, 1},
                                      HalfBallSide::Interior}),
      f);
  double smooth = integrate_smooth(
      rd, [&](Vec2 p) { return f.eval(p); }, 1e-12);
  CHECK(smooth == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("ray intervals: boolean structure along rays") {
  auto ring = FinitePerimeterSet::boolean(
      BoolOp::Difference, FinitePerimeterSet::disc({0, 0}, 1.0),
      FinitePerimeterSet::disc({0, 0}, 0.5));
  auto iv = ring.ray_intervals({0, 0}, {1, 0}, 2.0);
  REQUIRE(iv.count() == 1);
  CHECK(iv.intervals()[0].first == doctest::Approx(0.5));
  CHECK(iv.intervals()[0].second == doctest::Approx(1.0));
}
