#pragma once

#include <functional>

#include "pairlab/geom.hpp"
#include "pairlab/poly.hpp"

namespace pairlab {

// Area integral of a polynomial over a region, by Green's theorem on the
// boundary fragments. Exact up to roundoff.
double integrate_poly_region(const Region& region, const Poly2& f);

// Line integral of a polynomial with respect to arc length.
double integrate_poly_fragments(const FragmentList& fs, const Poly2& f);

// Line integral of f(p) + V(p)·ν(p) where ν is the left normal of the
// oriented fragments. Exact for polynomial f, V.
double integrate_poly_fragments_normal(const FragmentList& fs, const Poly2& f,
                                       const Vec2Poly& V);

// Adaptive area quadrature for smooth non-polynomial integrands:
// Gauss-Legendre order 16 per patch, dyadic patch subdivision until two
// consecutive refinement levels agree within tol.
double integrate_smooth(const RegionDecomposition& rd,
                        const std::function<double(Vec2)>& f, double tol,
                        int max_level = 7);

// Adaptive line quadrature; callback receives point and left normal.
double integrate_fragments(const FragmentList& fs,
                           const std::function<double(Vec2, Vec2)>& f,
                           double tol);

// Gauss nodes (point, left normal, weight) along fragments, n per fragment.
struct CurveNode {
  Vec2 p;
  Vec2 normal;
  double w;
};
std::vector<CurveNode> curve_nodes(const FragmentList& fs, int per_fragment);

}  // namespace pairlab
