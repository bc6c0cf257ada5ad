#pragma once

#include <functional>
#include <optional>

#include "pairlab/geom.hpp"
#include "pairlab/poly.hpp"
#include "pairlab/quad.hpp"

namespace pairlab {

// ---------------------------------------------------------------------------
// Components of a signed Radon measure
// ---------------------------------------------------------------------------

struct ACPart {
  Poly2 density;
  FinitePerimeterSet support;
};

// density along an oriented curve: scalar(p) + vec(p)·ν(p), ν = left normal
struct CurveDensity {
  Poly2 scalar;
  Vec2Poly vec;
  bool use_normal = false;

  double value(Vec2 p, Vec2 nu) const {
    double v = scalar.eval(p);
    if (use_normal) v += vec.eval(p).dot(nu);
    return v;
  }
  static CurveDensity constant(double c) { return {Poly2(c), {}, false}; }
  static CurveDensity of_poly(Poly2 p) { return {std::move(p), {}, false}; }
  static CurveDensity normal_component(Vec2Poly v) {
    return {Poly2(0.0), std::move(v), true};
  }
};

struct CurvePart {
  FragmentList curve;
  CurveDensity density;
};

// Uniform dyadic interval measure: each carrier interval holds equal mass.
// Constructed from the fat-Cantor generation tree; stays meaningful under
// affine pushforwards.
struct CantorMeasure1D {
  double lambda = 0.5;
  int depth = 0;
  IntervalUnion carriers;      // 2^depth disjoint intervals
  double interval_mass = 1.0;  // mass per carrier

  static CantorMeasure1D build(double lambda, int depth);

  double total_mass() const { return interval_mass * double(carriers.count()); }
  // exact measure of [a,b]; endpoints strictly inside a carrier are not
  // resolvable at this depth
  double measure(double a, double b) const;
  // integral of f; two-node Gauss rule per carrier (exact for cubic f on
  // each carrier, error <= mass * Lip(f) * carrier length in general)
  double integrate(const std::function<double(double)>& f) const;
  CantorMeasure1D affine(double shift, double scale) const;
  CantorMeasure1D clipped(double a, double b) const;
};

// profile (along `axis`) ⊗ weighted Lebesgue on the transverse interval
struct CantorLinePart {
  CantorMeasure1D profile;
  int axis = 0;          // coordinate carrying the profile
  double t_lo = 0.0;     // transverse extent
  double t_hi = 1.0;
  Poly2 weight;          // evaluated at the point (default 1)

  CantorLinePart() : weight(1.0) {}
};

// ---------------------------------------------------------------------------
// Test functions: piecewise polynomials with compact support
// ---------------------------------------------------------------------------

struct TestPiece {
  FinitePerimeterSet cell;
  Poly2 value;
};

class TestFunction {
 public:
  // (1 - |y-c|^2/R^2)^order on the disc, zero outside
  static TestFunction tensor_mollifier(Vec2 center, double radius, int order);
  // q(y) * (1 - |y-c|^2/R^2)^order
  static TestFunction polynomial_bump(const Poly2& q, Vec2 center,
                                      double radius, int order);
  // tensor product plateau: 1 on [lo,hi], smooth polynomial decay to 0 over
  // a margin of width `wing` on each side (C^order). Composed smoothstep
  // coefficients grow like (1/wing)^(2 order + 1); keep wings moderate and
  // the order low where integrals matter beyond ~1e-8.
  static TestFunction plateau(Vec2 lo, Vec2 hi, double wing, int order);
  static TestFunction plateau_tensor(Vec2 lo, Vec2 hi, Vec2 wing, int order);

  double eval(Vec2 p) const;
  Vec2 grad(Vec2 p) const;
  const std::vector<TestPiece>& pieces() const { return pieces_; }
  const FinitePerimeterSet& support() const { return support_; }
  double sup_norm() const { return sup_norm_; }
  std::pair<Vec2, Vec2> support_bbox() const;

 private:
  std::vector<TestPiece> pieces_;
  FinitePerimeterSet support_ = FinitePerimeterSet::disc({0, 0}, 1.0);
  double sup_norm_ = 1.0;
};

// ---------------------------------------------------------------------------
// MeasureRep and operations
// ---------------------------------------------------------------------------

struct MeasureRep {
  std::vector<ACPart> ac;
  std::vector<CurvePart> curves;
  std::vector<CantorLinePart> cantor;

  MeasureRep& operator+=(const MeasureRep& o);
  MeasureRep operator*(double s) const;

  static MeasureRep lebesgue(const FinitePerimeterSet& support);
  static MeasureRep curve(FragmentList fs, CurveDensity d);
};

// window for measure evaluation: an analytic set or a probe
using EvalWindow = std::variant<FinitePerimeterSet, Probe>;

FinitePerimeterSet window_set(const EvalWindow& w);

// mu(B). Pieces of curve components lying on ∂B are included when
// include_boundary is set (closed window), excluded otherwise (open window).
double eval_on(const MeasureRep& mu, const EvalWindow& window,
               bool include_boundary = true);

// mu restricted to a curve window: sum over curve components of the density
// integral over the overlap (AC and Cantor components contribute nothing).
double eval_on_curve(const MeasureRep& mu, const FragmentList& curve);

// ∫ φ dμ
double pair_test(const MeasureRep& mu, const TestFunction& phi);

// |mu|(window)
double total_variation(const MeasureRep& mu, const EvalWindow& window);

// restriction mu ⌊ E (structural)
MeasureRep restrict_measure(const MeasureRep& mu, const FinitePerimeterSet& e);

// r^{-alpha} * pushforward of mu under y -> (y-x)/r, restricted to B_1.
MeasureRep pushforward_homothety(const MeasureRep& mu, Vec2 x, double r,
                                 double alpha);

// max over the suite of |∫φ dμ − ∫φ dγ| / (1 + ||φ||_inf)
double weakstar_gap(const MeasureRep& mu, const MeasureRep& gamma,
                    const std::vector<TestFunction>& suite);

// fixed reproducible suite: 8 tensor mollifiers at fixed centers in B_1
// plus a wide cutoff that is ≡ 1 well inside B_1
std::vector<TestFunction> default_gap_suite();

}  // namespace pairlab
