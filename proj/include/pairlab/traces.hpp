#pragma once

#include "pairlab/scenes.hpp"

namespace pairlab {

// geometric radius schedule r0, r0 q, ..., r0 q^(n-1)
struct RadiusSchedule {
  double r0 = 0.1;
  double q = 0.5;
  int n = 10;
  // cylindrical averages: outer rho schedule plus the r <= scale * rho^2
  // coupling that keeps the inner limit dominant
  double rho0 = 0.1;
  double q_rho = 0.5;
  int n_rho = 6;
  double couple_scale = 1.0;

  std::vector<double> radii() const;
  std::vector<double> rho_radii() const;
  void validate() const;
};

struct TraceEstimate {
  double value = 0.0;
  std::vector<std::pair<double, double>> samples;  // (radius, average)
  double order = 0.0;             // fitted p; +inf for constant sequences
  double error_estimate = 0.0;
  bool converged = false;
};

// least-squares fit v(r) = L + C r^p over the finest half of the samples
TraceEstimate extrapolate(std::vector<std::pair<double, double>> samples);

// (N/(omega_{N-1} r^N)) ∫_{B_r^side(x,nu)} A(y)·(y-x)/|y-x| dy  with N=2
double halfball_average(const DMField& a, Vec2 x, Vec2 nu, double r,
                        HalfBallSide side);

struct HalfBallTraces {
  TraceEstimate plus;   // Tr^+
  TraceEstimate minus;  // Tr^-
  double star = 0.0;    // (Tr^+ + Tr^-)/2
};

HalfBallTraces halfball_traces(const DMField& a, Vec2 x, Vec2 nu,
                               const RadiusSchedule& sched);

// exact ∫_{C_{r,rho}(x,zeta)} A·zeta dy and its normalized average
double cyl_integral(const DMField& a, Vec2 x, Vec2 zeta, double r, double rho);
double cyl_average(const DMField& a, Vec2 x, Vec2 zeta, double r, double rho);

// Cyl[A·zeta](x): inner limit r -> 0 at each rho, then rho -> 0
struct CylTrace {
  TraceEstimate outer;                  // final estimate over rho
  std::vector<TraceEstimate> inner;     // one per rho
  bool converged = false;
};
CylTrace cyl_trace(const DMField& a, Vec2 x, Vec2 zeta,
                   const RadiusSchedule& sched);

// | Div A(Σ) - ∫_Σ (Tr^+ - Tr^-) dH^1 | / (1 + |Div A(Σ)|), traces sampled
// at Gauss nodes with half-ball schedules
double trace_jump_check(const DMField& a, const FragmentList& sigma,
                        const RadiusSchedule& sched, int nodes_per_fragment = 8);

// ∫_{T∩B_rho(x)} Tr^+ dH^1 vs lim_r (1/r) ∫ over the one-sided cylinder
struct HyperplaneAverage {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  TraceEstimate rhs_fit;
};
HyperplaneAverage hyperplane_average_identity(const DMField& a, Vec2 x, Vec2 nu,
                                              double rho,
                                              const RadiusSchedule& sched);

}  // namespace pairlab
