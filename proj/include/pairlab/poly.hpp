#pragma once

#include <initializer_list>
#include <vector>

#include "pairlab/common.hpp"

namespace pairlab {

// Dense bivariate polynomial sum c[i][j] x^i y^j. Degrees stay small (<= ~12)
// in every scene, so dense storage is fine.
class Poly2 {
 public:
  Poly2() : c_(1, std::vector<double>(1, 0.0)) {}
  explicit Poly2(double v) : c_(1, std::vector<double>(1, v)) {}

  static Poly2 constant(double v) { return Poly2(v); }
  static Poly2 x() {
    Poly2 p;
    p.set(1, 0, 1.0);
    return p;
  }
  static Poly2 y() {
    Poly2 p;
    p.set(0, 1, 1.0);
    return p;
  }
  static Poly2 monomial(int i, int j, double v) {
    Poly2 p;
    p.set(i, j, v);
    return p;
  }

  int deg_x() const { return int(c_.size()) - 1; }
  int deg_y() const { return int(c_.empty() ? 0 : c_[0].size()) - 1; }

  double coeff(int i, int j) const {
    if (i < 0 || j < 0 || i > deg_x() || j > deg_y()) return 0.0;
    return c_[i][j];
  }
  void set(int i, int j, double v) {
    ensure(i, j);
    c_[i][j] = v;
  }
  void add(int i, int j, double v) {
    ensure(i, j);
    c_[i][j] += v;
  }

  double eval(Vec2 p) const;
  Poly2 operator+(const Poly2& o) const;
  Poly2 operator-(const Poly2& o) const;
  Poly2 operator*(const Poly2& o) const;
  Poly2 operator*(double s) const;
  Poly2 operator-() const { return *this * -1.0; }
  Poly2& operator+=(const Poly2& o) { return *this = *this + o; }
  Poly2& operator-=(const Poly2& o) { return *this = *this - o; }

  Poly2 dx() const;
  Poly2 dy() const;
  Poly2 antider_x() const;   // d/dx of result == *this
  Poly2 antider_y() const;

  // Substitute x -> ax + bx*X + cx*Y, y -> ay + by*X + cy*Y.
  Poly2 compose_affine(double ax, double bx, double cx, double ay, double by,
                       double cy) const;

  bool is_zero(double tol = 0.0) const;

  // Coefficients of cos^a sin^b obtained by substituting
  // x = cx + R cos t, y = cy + R sin t. Used for exact arc integrals.
  std::vector<std::vector<double>> on_circle(Vec2 center, double R) const;

 private:
  void ensure(int i, int j);
  std::vector<std::vector<double>> c_;
};

inline Poly2 operator*(double s, const Poly2& p) { return p * s; }

// Polynomial plane vector field.
struct Vec2Poly {
  Poly2 x, y;

  Vec2Poly() = default;
  Vec2Poly(Poly2 px, Poly2 py) : x(std::move(px)), y(std::move(py)) {}
  static Vec2Poly constant(Vec2 v) { return {Poly2(v.x), Poly2(v.y)}; }

  Vec2 eval(Vec2 p) const { return {x.eval(p), y.eval(p)}; }
  Poly2 divergence() const { return x.dx() + y.dy(); }
  Poly2 dot(const Vec2Poly& o) const { return x * o.x + y * o.y; }
  Vec2Poly operator*(const Poly2& s) const { return {x * s, y * s}; }
  Vec2Poly operator+(const Vec2Poly& o) const { return {x + o.x, y + o.y}; }
  Vec2Poly compose_affine(double ax, double bx, double cx, double ay, double by,
                          double cy) const {
    return {x.compose_affine(ax, bx, cx, ay, by, cy),
            y.compose_affine(ax, bx, cx, ay, by, cy)};
  }
};

// 1D polynomial helpers for per-axis factors (tensor cutoffs, staircase work).
class Poly1 {
 public:
  Poly1() : c_(1, 0.0) {}
  explicit Poly1(std::vector<double> c) : c_(std::move(c)) {
    if (c_.empty()) c_.assign(1, 0.0);
  }
  static Poly1 constant(double v) { return Poly1(std::vector<double>{v}); }
  static Poly1 t() { return Poly1(std::vector<double>{0.0, 1.0}); }

  int degree() const { return int(c_.size()) - 1; }
  double coeff(int i) const { return i >= 0 && i <= degree() ? c_[i] : 0.0; }
  double eval(double t) const;
  Poly1 derivative() const;
  Poly1 antiderivative() const;
  double integrate(double a, double b) const;
  Poly1 operator*(const Poly1& o) const;
  Poly1 operator+(const Poly1& o) const;
  Poly1 operator-(const Poly1& o) const;
  Poly1 operator*(double s) const;
  // substitute t -> a + b*t
  Poly1 compose_affine(double a, double b) const;
  // promote to a bivariate polynomial in the given axis (0 => x, 1 => y)
  Poly2 as_poly2(int axis) const;

 private:
  std::vector<double> c_;
};

}  // namespace pairlab
