#include "pairlab/poly.hpp"

#include <algorithm>

namespace pairlab {

void Poly2::ensure(int i, int j) {
  if (int(c_.size()) <= i) c_.resize(i + 1);
  size_t cols = std::max<size_t>(j + 1, c_[0].size());
  for (auto& row : c_)
    if (row.size() < cols) row.resize(cols, 0.0);
}

double Poly2::eval(Vec2 p) const {
  // Horner in x of Horner-in-y rows.
  double acc = 0.0;
  for (int i = deg_x(); i >= 0; --i) {
    double row = 0.0;
    for (int j = deg_y(); j >= 0; --j) row = row * p.y + c_[i][j];
    acc = acc * p.x + row;
  }
  return acc;
}

Poly2 Poly2::operator+(const Poly2& o) const {
  Poly2 r = *this;
  for (int i = 0; i <= o.deg_x(); ++i)
    for (int j = 0; j <= o.deg_y(); ++j)
      if (o.c_[i][j] != 0.0) r.add(i, j, o.c_[i][j]);
  return r;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o * -1.0; }

Poly2 Poly2::operator*(const Poly2& o) const {
  Poly2 r;
  for (int i = 0; i <= deg_x(); ++i)
    for (int j = 0; j <= deg_y(); ++j) {
      if (c_[i][j] == 0.0) continue;
      for (int k = 0; k <= o.deg_x(); ++k)
        for (int l = 0; l <= o.deg_y(); ++l)
          if (o.c_[k][l] != 0.0) r.add(i + k, j + l, c_[i][j] * o.c_[k][l]);
    }
  return r;
}

Poly2 Poly2::operator*(double s) const {
  Poly2 r = *this;
  for (auto& row : r.c_)
    for (auto& v : row) v *= s;
  return r;
}

Poly2 Poly2::dx() const {
  Poly2 r;
  for (int i = 1; i <= deg_x(); ++i)
    for (int j = 0; j <= deg_y(); ++j)
      if (c_[i][j] != 0.0) r.add(i - 1, j, i * c_[i][j]);
  return r;
}

Poly2 Poly2::dy() const {
  Poly2 r;
  for (int i = 0; i <= deg_x(); ++i)
    for (int j = 1; j <= deg_y(); ++j)
      if (c_[i][j] != 0.0) r.add(i, j - 1, j * c_[i][j]);
  return r;
}

Poly2 Poly2::antider_x() const {
  Poly2 r;
  for (int i = 0; i <= deg_x(); ++i)
    for (int j = 0; j <= deg_y(); ++j)
      if (c_[i][j] != 0.0) r.add(i + 1, j, c_[i][j] / (i + 1));
  return r;
}

Poly2 Poly2::antider_y() const {
  Poly2 r;
  for (int i = 0; i <= deg_x(); ++i)
    for (int j = 0; j <= deg_y(); ++j)
      if (c_[i][j] != 0.0) r.add(i, j + 1, c_[i][j] / (j + 1));
  return r;
}

Poly2 Poly2::compose_affine(double ax, double bx, double cx, double ay,
                            double by, double cy) const {
  // Powers of the two affine images, built incrementally.
  Poly2 X;
  X.set(0, 0, ax);
  X.add(1, 0, bx);
  X.add(0, 1, cx);
  Poly2 Y;
  Y.set(0, 0, ay);
  Y.add(1, 0, by);
  Y.add(0, 1, cy);

  std::vector<Poly2> xp(deg_x() + 1), yp(deg_y() + 1);
  xp[0] = Poly2(1.0);
  for (int i = 1; i <= deg_x(); ++i) xp[i] = xp[i - 1] * X;
  yp[0] = Poly2(1.0);
  for (int j = 1; j <= deg_y(); ++j) yp[j] = yp[j - 1] * Y;

  Poly2 r;
  for (int i = 0; i <= deg_x(); ++i)
    for (int j = 0; j <= deg_y(); ++j)
      if (c_[i][j] != 0.0) r += xp[i] * yp[j] * c_[i][j];
  return r;
}

bool Poly2::is_zero(double tol) const {
  for (const auto& row : c_)
    for (double v : row)
      if (std::abs(v) > tol) return false;
  return true;
}

std::vector<std::vector<double>> Poly2::on_circle(Vec2 center, double R) const {
  int n = deg_x() + deg_y();
  std::vector<std::vector<double>> T(n + 1, std::vector<double>(n + 1, 0.0));
  // (cx + R c)^i (cy + R s)^j expanded by binomials.
  std::vector<std::vector<double>> binom(n + 2, std::vector<double>(n + 2, 0.0));
  for (int i = 0; i <= n + 1; ++i) {
    binom[i][0] = 1.0;
    for (int j = 1; j <= i; ++j)
      binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0.0);
  }
  for (int i = 0; i <= deg_x(); ++i)
    for (int j = 0; j <= deg_y(); ++j) {
      double cij = c_[i][j];
      if (cij == 0.0) continue;
      for (int a = 0; a <= i; ++a) {
        double ca = binom[i][a] * std::pow(center.x, i - a) * std::pow(R, a);
        for (int b = 0; b <= j; ++b) {
          double cb = binom[j][b] * std::pow(center.y, j - b) * std::pow(R, b);
          T[a][b] += cij * ca * cb;
        }
      }
    }
  return T;
}

double Poly1::eval(double t) const {
  double acc = 0.0;
  for (int i = degree(); i >= 0; --i) acc = acc * t + c_[i];
  return acc;
}

Poly1 Poly1::derivative() const {
  if (degree() == 0) return Poly1();
  std::vector<double> d(degree());
  for (int i = 1; i <= degree(); ++i) d[i - 1] = i * c_[i];
  return Poly1(std::move(d));
}

Poly1 Poly1::antiderivative() const {
  std::vector<double> d(degree() + 2, 0.0);
  for (int i = 0; i <= degree(); ++i) d[i + 1] = c_[i] / (i + 1);
  return Poly1(std::move(d));
}

double Poly1::integrate(double a, double b) const {
  Poly1 F = antiderivative();
  return F.eval(b) - F.eval(a);
}

Poly1 Poly1::operator*(const Poly1& o) const {
  std::vector<double> d(degree() + o.degree() + 1, 0.0);
  for (int i = 0; i <= degree(); ++i)
    for (int j = 0; j <= o.degree(); ++j) d[i + j] += c_[i] * o.c_[j];
  return Poly1(std::move(d));
}

Poly1 Poly1::operator+(const Poly1& o) const {
  std::vector<double> d(std::max(degree(), o.degree()) + 1, 0.0);
  for (int i = 0; i < int(d.size()); ++i) d[i] = coeff(i) + o.coeff(i);
  return Poly1(std::move(d));
}

Poly1 Poly1::operator-(const Poly1& o) const { return *this + o * -1.0; }

Poly1 Poly1::operator*(double s) const {
  std::vector<double> d = c_;
  for (auto& v : d) v *= s;
  return Poly1(std::move(d));
}

Poly1 Poly1::compose_affine(double a, double b) const {
  Poly1 r;
  Poly1 lin(std::vector<double>{a, b});
  Poly1 pw = Poly1::constant(1.0);
  r = Poly1::constant(c_[0]);
  for (int i = 1; i <= degree(); ++i) {
    pw = pw * lin;
    r = r + pw * c_[i];
  }
  return r;
}

Poly2 Poly1::as_poly2(int axis) const {
  Poly2 r;
  for (int i = 0; i <= degree(); ++i) {
    if (c_[i] == 0.0) continue;
    if (axis == 0)
      r.add(i, 0, c_[i]);
    else
      r.add(0, i, c_[i]);
  }
  return r;
}

}  // namespace pairlab
