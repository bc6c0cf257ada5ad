#pragma once

#include "pairlab/traces.hpp"

namespace pairlab {

enum class TraceMethod { Analytic, HalfBall, Cylinder };

// ---------------------------------------------------------------------------
// The pairing (A, Du)
// ---------------------------------------------------------------------------

// -∫ u^λ φ dDiv A - ∫ u A·∇φ dx  (λ = 1/2 gives the standard pairing)
double pairing_distributional(const DMField& a, const BVFunction& u,
                              const TestFunction& phi, double lambda = 0.5);

// analytic decomposition: ac parts carry A·∇u, curve parts carry
// Tr*(A)(u+ - u-) on J_u, the cantor part carries the trace density on the
// staircase support
MeasureRep pairing_analytic(const DMField& a, const BVFunction& u);

// u^λ dμ as a structural measure (exact piecewise-polynomial weighting)
MeasureRep weight_by_representative(const MeasureRep& mu, const BVFunction& u,
                                    double lambda);

// ---------------------------------------------------------------------------
// Densities θ(A, Du, ·)
// ---------------------------------------------------------------------------

struct ThetaSample {
  Vec2 point;
  double value = 0.0;
  TraceMethod method = TraceMethod::Analytic;
  bool converged = true;
  bool method_invalid = false;  // cylinder method on Θ_A ∩ J_u
};

ThetaSample theta_density(const DMField& a, const BVFunction& u, Vec2 x,
                          TraceMethod method,
                          const RadiusSchedule& sched = {});

// θ_λ = (1-λ) Tr^+ + λ Tr^-
double theta_lambda(const DMField& a, const BVFunction& u, Vec2 x,
                    double lambda, TraceMethod method,
                    const RadiusSchedule& sched = {});

// ---------------------------------------------------------------------------
// Gauss-Green ledgers
// ---------------------------------------------------------------------------

enum class GGVariant { Interior, Closure };

struct GaussGreenLedger {
  double volume = 0.0;    // ∫ u* dDiv A
  double pairing = 0.0;   // (A, Du) evaluated on the same set
  double boundary = 0.0;  // ∫_{∂*E} u^{i|e} Tr^{+|-} dH¹
  double residual = 0.0;  // |volume + pairing + boundary| / (1 + max |term|)
  GGVariant variant = GGVariant::Interior;
  TraceMethod method = TraceMethod::Analytic;
};

GaussGreenLedger gauss_green(const DMField& a, const BVFunction& u,
                             const FinitePerimeterSet& e, GGVariant variant,
                             TraceMethod method,
                             const RadiusSchedule& sched = {});

// Gauss-Green for the zero extension across ∂Ω, Ω = a.domain():
// ∫_Ω u* dDiv A + ∫_Ω Cyl[A·ν_u] d|Du| = -∫_{∂Ω} u^i Tr^+(Â, ∂Ω) dH¹
struct ZeroExtensionLedger {
  double volume = 0.0;
  double pairing = 0.0;   // ∫ Cyl[A·ν_u] d|Du| (equals the pairing mass)
  double boundary = 0.0;
  double residual = 0.0;
  double cyl_check = 0.0;  // max deviation of sampled Cyl from the density
};

ZeroExtensionLedger zero_extension_gauss_green(const DMField& a,
                                               const BVFunction& u,
                                               TraceMethod method,
                                               const RadiusSchedule& sched = {});

// ---------------------------------------------------------------------------
// Coarea disintegration of the pairing
// ---------------------------------------------------------------------------

struct CoareaPairing {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double theta_transfer = 0.0;  // max |θ(A,Du,x) - θ(A,Dχ_{E_t},x)| sampled
};

CoareaPairing coarea_pairing_check(const DMField& a, const BVFunction& u,
                                   const EvalWindow& window, int t_nodes = 64);

// ---------------------------------------------------------------------------
// Tangent blow-ups of the jump part
// ---------------------------------------------------------------------------

enum class TangentNormalization { RadiusPower, MassOnBall };

struct BlowupCheck {
  std::vector<std::pair<double, double>> gaps;  // (r, weak-* gap)
  double final_gap = 0.0;
  bool monotone_tail = false;  // decreasing over the finest 4 radii
  double trace_star = 0.0;
};

BlowupCheck tangent_blowup_check(
    const DMField& a, const BVFunction& u, Vec2 x, double alpha,
    const RadiusSchedule& sched, const std::vector<TestFunction>& suite,
    TangentNormalization norm = TangentNormalization::RadiusPower);

}  // namespace pairlab
