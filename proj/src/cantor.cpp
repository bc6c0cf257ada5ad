#include "pairlab/cantor.hpp"

#include <algorithm>
#include <cmath>

namespace pairlab {

namespace {

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace

Rational CantorConstruction::rational_of(double x) {
  // every finite double is an exact dyadic rational
  Rational r(x);
  return r;
}

CantorConstruction CantorConstruction::build(const Rational& lambda,
                                             int depth) {
  if (!(lambda > 0 && lambda < 1))
    fail("BadArgument", "lambda must lie in (0,1)");
  if (depth < 1 || depth > 24)
    fail("DepthTooLarge", "construction depth must be in [1,24]");
  CantorConstruction c;
  c.lambda_ = lambda;
  c.depth_ = depth;
  std::vector<RationalInterval> cur = {{Rational(0), Rational(1)}};
  Rational keep_ratio = (1 - lambda) / 2;
  for (int j = 0; j < depth; ++j) {
    std::vector<RationalInterval> next;
    std::vector<RationalInterval> gone;
    next.reserve(cur.size() * 2);
    gone.reserve(cur.size());
    for (const auto& iv : cur) {
      Rational keep = keep_ratio * iv.length();
      RationalInterval left{iv.a, iv.a + keep};
      RationalInterval right{iv.b - keep, iv.b};
      gone.push_back({left.b, right.a});
      next.push_back(left);
      next.push_back(right);
    }
    c.removed_.push_back(std::move(gone));
    cur = std::move(next);
  }
  c.survivors_ = std::move(cur);
  return c;
}

Rational CantorConstruction::removed_length(int gen) const {
  if (gen < 0 || gen >= depth_) fail("BadArgument", "generation out of range");
  Rational num = lambda_;
  Rational base = 1 - lambda_;
  for (int j = 0; j < gen; ++j) num *= base;
  Rational den = 1;
  for (int j = 0; j < gen; ++j) den *= 2;
  return num / den;
}

Rational CantorConstruction::surviving_length(int gens) const {
  Rational v = 1;
  Rational base = 1 - lambda_;
  for (int j = 0; j < gens; ++j) v *= base;
  return v;
}

Rational CantorConstruction::total_removed() const {
  return 1 - surviving_length(depth_);
}

std::vector<RationalInterval> CantorConstruction::even_removed() const {
  std::vector<RationalInterval> out;
  for (size_t j = 0; j < removed_.size(); j += 2)
    out.insert(out.end(), removed_[j].begin(), removed_[j].end());
  std::sort(out.begin(), out.end(),
            [](const RationalInterval& x, const RationalInterval& y) {
              return x.a < y.a;
            });
  return out;
}

IntervalUnion CantorConstruction::even_removed_f() const {
  std::vector<std::pair<double, double>> iv;
  for (const auto& r : even_removed())
    iv.push_back({to_double(r.a), to_double(r.b)});
  return IntervalUnion(std::move(iv));
}

IntervalUnion CantorConstruction::survivors_f() const {
  std::vector<std::pair<double, double>> iv;
  for (const auto& r : survivors_)
    iv.push_back({to_double(r.a), to_double(r.b)});
  return IntervalUnion(std::move(iv));
}

Rational CantorConstruction::point_at_address(
    const std::vector<int>& bits) const {
  RationalInterval iv{Rational(0), Rational(1)};
  Rational keep_ratio = (1 - lambda_) / 2;
  for (int b : bits) {
    Rational keep = keep_ratio * iv.length();
    if (b == 0)
      iv = {iv.a, iv.a + keep};
    else
      iv = {iv.b - keep, iv.b};
  }
  return iv.a;
}

BoxDimensionEstimate box_dimension(const Rational& lambda, int depth_min,
                                   int depth_max) {
  if (depth_max - depth_min + 1 < 4)
    fail("InsufficientDepths", "box dimension needs at least 4 depths");
  BoxDimensionEstimate out;
  // at depth j the survivor cover has 2^j intervals of mesh (1-λ)^j / 2^j
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  Rational base = 1 - lambda;
  for (int j = depth_min; j <= depth_max; ++j) {
    Rational mesh = 1;
    for (int k = 0; k < j; ++k) mesh *= base / 2;
    double count = std::ldexp(1.0, j);
    double x = -std::log(to_double(mesh));
    double y = std::log(count);
    out.table.push_back({j, count, to_double(mesh)});
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  out.estimate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.closed_form =
      std::log(2.0) / std::log(2.0 / (1.0 - to_double(Rational(lambda))));
  return out;
}

DensityWindowResult density_window(const CantorConstruction& c,
                                   const Rational& x,
                                   const std::vector<Rational>& radii) {
  if (radii.empty()) fail("EmptySchedule", "density window needs radii");
  Rational resolution = c.surviving_length(c.depth());
  Rational den = 1;
  for (int j = 0; j < c.depth(); ++j) den *= 2;
  resolution /= den;  // survivor length at full depth
  auto evens = c.even_removed();
  DensityWindowResult out;
  for (const auto& r : radii) {
    if (r < resolution)
      fail("ResolutionExceeded",
           "radius below the stored construction resolution");
    Rational lo = x - r, hi = x + r;
    Rational mass = 0;
    for (const auto& iv : evens) {
      Rational a = std::max(iv.a, lo, [](const Rational& u, const Rational& v) {
        return u < v;
      });
      Rational b = std::min(iv.b, hi, [](const Rational& u, const Rational& v) {
        return u < v;
      });
      if (b > a) mass += b - a;
    }
    double density = to_double(mass / (2 * r));
    out.samples.push_back({to_double(r), density});
    out.min_density = std::min(out.min_density, density);
    out.max_density = std::max(out.max_density, density);
  }
  return out;
}

CantorField field_from_construction(int m_max, int depth) {
  if (m_max < 1 || m_max > 8)
    fail("BadArgument", "the truncated union supports m_max in [1,8]");
  std::vector<std::pair<double, double>> blocks;
  for (int m = 1; m <= m_max; ++m) {
    Rational lam = Rational(1) / Rational(1 << m);
    CantorConstruction c = CantorConstruction::build(lam, depth);
    for (const auto& iv : c.even_removed())
      blocks.push_back(
          {2.0 * m + to_double(iv.a), 2.0 * m + to_double(iv.b)});
  }
  IntervalUnion f(std::move(blocks));
  CantorField out{
      DMField(Vec2Poly{},
              {JumpTerm{{0.0, 1.0}, FinitePerimeterSet::product1d(f, 0)}},
              FinitePerimeterSet::box({0.0, -2.0}, {2.0 * m_max + 2.0, 2.0})),
      f, FinitePerimeterSet::product1d(f, 0)};
  return out;
}

}  // namespace pairlab
