#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pairlab {

// Error with a stable machine-readable code ("DegenerateProbe", "NotConverged", ...)
// plus a human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
  throw Error(code, what);
}

inline constexpr double kGeomTol = 1e-12;   // points within this of a boundary are on it
inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double xx, double yy) : x(xx), y(yy) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
  Vec2 normalized() const {
    double n = norm();
    if (n == 0.0) fail("DegenerateVector", "cannot normalize zero vector");
    return {x / n, y / n};
  }
  // counterclockwise rotation by 90 degrees
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }
inline Vec2 dir_of(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Gauss-Legendre nodes/weights on [-1,1], cached per order.
const std::vector<double>& gl_nodes(int n);
const std::vector<double>& gl_weights(int n);

// Integrate f over [a,b] with an n-point Gauss-Legendre rule.
template <typename F>
double gl_integrate(F&& f, double a, double b, int n) {
  const auto& xs = gl_nodes(n);
  const auto& ws = gl_weights(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += ws[i] * f(mid + half * xs[i]);
  return s * half;
}

// Definite integral of cos^m(t) sin^n(t) over [t0,t1], by the standard
// power-reduction recurrences. Exact up to roundoff for moderate m,n.
double trig_moment(int m, int n, double t0, double t1);

}  // namespace pairlab
