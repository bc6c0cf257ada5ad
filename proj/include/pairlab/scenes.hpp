#pragma once

#include <optional>

#include "pairlab/measures.hpp"

namespace pairlab {

// ---------------------------------------------------------------------------
// Divergence-measure fields A = P + sum_k c_k Q_k χ_{E_k}
// ---------------------------------------------------------------------------

struct JumpTerm {
  Vec2 coef;                   // c_k
  FinitePerimeterSet region;   // E_k
  Poly2 modulation;            // Q_k

  JumpTerm(Vec2 c, FinitePerimeterSet e, Poly2 q = Poly2(1.0))
      : coef(c), region(std::move(e)), modulation(std::move(q)) {}
};

// curve carrying a normal jump of the field, with the vector jump density;
// Tr^+ - Tr^- at a point p of the curve is jump(p)·ν(p), ν = left normal
struct FieldJumpCurve {
  Fragment frag;
  Vec2Poly jump;
};

class DMField {
 public:
  DMField(Vec2Poly smooth, std::vector<JumpTerm> jumps,
          FinitePerimeterSet domain);

  static DMField constant(Vec2 a, FinitePerimeterSet domain);
  static DMField polynomial(Vec2Poly p, FinitePerimeterSet domain);

  const FinitePerimeterSet& domain() const { return domain_; }
  const Vec2Poly& smooth_part() const { return smooth_; }
  const std::vector<JumpTerm>& jump_terms() const { return jumps_; }

  // pointwise value away from jump curves
  Vec2 eval(Vec2 p) const;
  // one-sided value approached from direction dir
  Vec2 side_value(Vec2 p, Vec2 dir) const;

  struct PreciseValue {
    bool is_jump = false;
    Vec2 value;          // Lebesgue-point value when !is_jump
    Vec2 inner, outer;   // one-sided values when is_jump
    Vec2 normal;         // orientation of the jump curve at p
  };
  PreciseValue precise_value(Vec2 p) const;

  // Div A as a measure (cached): AC part + normal-jump curve parts
  const MeasureRep& divergence() const { return divergence_; }
  // Θ_A: curves where |Div A| has positive H^1 density
  const std::vector<FieldJumpCurve>& jump_set() const { return theta_; }
  bool on_jump_set(Vec2 p) const;

  double sup_norm() const { return sup_norm_; }

  DMField operator*(double s) const;
  DMField operator+(const DMField& o) const;  // same domain

 private:
  Vec2Poly smooth_;
  std::vector<JumpTerm> jumps_;
  FinitePerimeterSet domain_;
  MeasureRep divergence_;
  std::vector<FieldJumpCurve> theta_;
  double sup_norm_ = 0.0;
  void build_cache();
};

// ---------------------------------------------------------------------------
// BV functions from the closed family
// ---------------------------------------------------------------------------

struct BVPiece {
  FinitePerimeterSet region;
  Poly2 value;
};

// oriented so that the left normal of frag points into the u+ side
struct BVJump {
  Fragment frag;
  Poly2 plus;
  Poly2 minus;
};

class BVFunction {
 public:
  static BVFunction characteristic(FinitePerimeterSet e,
                                   FinitePerimeterSet domain);
  // value 0 outside the listed pieces
  static BVFunction piecewise(std::vector<BVPiece> pieces,
                              FinitePerimeterSet domain);
  // globally defined polynomial (no jumps inside the domain)
  static BVFunction smooth(Poly2 p, FinitePerimeterSet domain);
  // clamped Cantor staircase along `axis`: 0 below 0, monotone on [0,1], 1 above
  static BVFunction staircase(double lambda, int depth, int axis,
                              FinitePerimeterSet domain);
  // outer affine map a + b*u (monotone, b > 0)
  static BVFunction affine_of(double a, double b, const BVFunction& inner);

  const FinitePerimeterSet& domain() const { return domain_; }
  double eval(Vec2 p) const;
  double side_value(Vec2 p, Vec2 dir) const;

  // approximate limit at a point of approximate continuity
  double tilde(Vec2 p) const;
  // u^λ: tilde off S_u, (1-λ) u^- + λ u^+ on J_u; λ=1/2 gives u*
  double representative(Vec2 p, double lambda) const;

  bool on_jump(Vec2 p) const;
  std::pair<double, double> jump_values(Vec2 p) const;  // (u^-, u^+)
  Vec2 jump_normal(Vec2 p) const;                       // ν_u at a jump point

  // derivative structure
  const std::vector<std::pair<Vec2Poly, FinitePerimeterSet>>& grad_pieces()
      const {
    return grad_;
  }
  const std::vector<BVJump>& jumps() const { return jumps_; }
  const std::optional<CantorLinePart>& cantor_part() const { return cantor_; }
  int cantor_axis() const { return cantor_axis_; }

  // |Du| and Du·e_i as scalar measures
  MeasureRep variation_measure() const;
  double variation_total(const EvalWindow& w) const;

  // {u > t} within the supported family
  FinitePerimeterSet level_set(double t) const;
  bool is_exceptional_level(double t) const;
  std::vector<double> exceptional_levels_hint() const;  // finite description
  std::pair<double, double> value_range() const;

  const std::vector<Vec2>& thin_singular_points() const { return thin_; }
  double sup_norm() const { return sup_norm_; }
  bool is_staircase() const { return kind_ == Kind::Staircase; }
  const std::vector<BVPiece>& pieces() const { return pieces_; }
  // ∫_a^b f(t) u_profile(t) dt for the clamped staircase profile, exact at
  // the stored depth (plateaus and affine ramps integrated in closed form)
  double staircase_profile_integral(const Poly1& f, double a, double b) const;

 private:
  enum class Kind { Piecewise, Staircase };
  Kind kind_ = Kind::Piecewise;
  FinitePerimeterSet domain_;
  std::vector<BVPiece> pieces_;
  // staircase data
  double lambda_ = 0.5;
  int depth_ = 0;
  int cantor_axis_ = 0;
  IntervalUnion carriers_;
  double affine_shift_ = 0.0, affine_scale_ = 1.0;  // outer map a + b u
  // caches
  std::vector<std::pair<Vec2Poly, FinitePerimeterSet>> grad_;
  std::vector<BVJump> jumps_;
  std::optional<CantorLinePart> cantor_;
  std::vector<Vec2> thin_;
  double sup_norm_ = 0.0;

  BVFunction(FinitePerimeterSet domain) : domain_(std::move(domain)) {}
  void build_piecewise_cache();
  double staircase_profile(double t) const;
  double staircase_inverse(double v) const;
};

// coarea identity data for a scene
struct CoareaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

// ∂*{u > t} ∩ window, relative to the open scene domain (pieces on ∂Ω are
// not part of the level-set boundary). Fragments oriented with the interior
// normal of the superlevel set on the left, which equals ν_u.
FragmentList level_boundary(const BVFunction& u, double t,
                            const EvalWindow& window);

// ∫ g d|Du| over the window vs the level-set disintegration.
CoareaCheck coarea_check(const BVFunction& u, const Poly2& g,
                         const EvalWindow& window, int t_nodes = 64);

}  // namespace pairlab
