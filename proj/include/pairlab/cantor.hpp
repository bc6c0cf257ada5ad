#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "pairlab/scenes.hpp"

namespace pairlab {

using Rational = boost::multiprecision::cpp_rational;

struct RationalInterval {
  Rational a, b;
  Rational length() const { return b - a; }
};

// Fat-Cantor construction: at generation j, remove from each of the 2^j
// intervals the middle proportion λ. Removed intervals have exact length
// λ(1-λ)^j / 2^j; survivors after generation j have total length (1-λ)^j.
class CantorConstruction {
 public:
  static CantorConstruction build(const Rational& lambda, int depth);
  static Rational rational_of(double x);  // doubles are exact dyadics

  const Rational& lambda() const { return lambda_; }
  int depth() const { return depth_; }

  // removed intervals, indexed by generation (0-based), 2^j per generation
  const std::vector<std::vector<RationalInterval>>& removed() const {
    return removed_;
  }
  // surviving intervals after `depth` generations (cover of C_λ)
  const std::vector<RationalInterval>& survivors() const { return survivors_; }

  Rational removed_length(int gen) const;      // λ(1-λ)^gen / 2^gen
  Rational surviving_length(int gens) const;   // (1-λ)^gens
  Rational total_removed() const;              // 1 - (1-λ)^depth

  // union of even-generation removed intervals (E_λ at this resolution)
  std::vector<RationalInterval> even_removed() const;
  IntervalUnion even_removed_f() const;
  IntervalUnion survivors_f() const;

  // Cantor point from a binary address (0 = left branch, 1 = right branch);
  // the returned point is the left endpoint of the addressed survivor, a
  // genuine point of C_λ
  Rational point_at_address(const std::vector<int>& bits) const;

 private:
  Rational lambda_;
  int depth_ = 0;
  std::vector<std::vector<RationalInterval>> removed_;
  std::vector<RationalInterval> survivors_;
};

// least-squares slope of log(count) vs -log(mesh) over survivor covers
struct BoxDimensionEstimate {
  double estimate = 0.0;
  std::vector<std::tuple<int, double, double>> table;  // (depth, count, mesh)
  double closed_form = 0.0;                            // log 2 / log(2/(1-λ))
};

BoxDimensionEstimate box_dimension(const Rational& lambda, int depth_min,
                                   int depth_max);

// |E_λ ∩ (x-r, x+r)| / (2r) per radius, in exact rational arithmetic
struct DensityWindowResult {
  std::vector<std::pair<double, double>> samples;  // (radius, density)
  double min_density = 1.0;
  double max_density = 0.0;
};

DensityWindowResult density_window(const CantorConstruction& c,
                                   const Rational& x,
                                   const std::vector<Rational>& radii);

// the divergence-free field of the fat-Cantor example:
// A(x1, x2) = (0, χ_F(x1)) with F the truncated union of shifted even-
// generation sets, F = ∪_{m=1..m_max} (2m + E_{2^{-m}})
struct CantorField {
  DMField field;
  IntervalUnion f_union;
  FinitePerimeterSet f_set;
};

CantorField field_from_construction(int m_max, int depth);

}  // namespace pairlab
