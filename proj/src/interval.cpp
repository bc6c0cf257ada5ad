#include "pairlab/interval.hpp"

#include <algorithm>

namespace pairlab {

IntervalUnion::IntervalUnion(std::vector<std::pair<double, double>> iv)
    : iv_(std::move(iv)) {
  normalize();
}

void IntervalUnion::normalize() {
  for (auto& p : iv_)
    if (p.second < p.first) std::swap(p.first, p.second);
  iv_.erase(std::remove_if(iv_.begin(), iv_.end(),
                           [](auto& p) { return p.second <= p.first; }),
            iv_.end());
  std::sort(iv_.begin(), iv_.end());
  std::vector<std::pair<double, double>> out;
  for (auto& p : iv_) {
    if (!out.empty() && p.first <= out.back().second) {
      out.back().second = std::max(out.back().second, p.second);
    } else {
      out.push_back(p);
    }
  }
  iv_ = std::move(out);
}

double IntervalUnion::measure() const {
  double m = 0.0;
  for (auto& p : iv_) m += p.second - p.first;
  return m;
}

double IntervalUnion::measure_within(double a, double b) const {
  double m = 0.0;
  for (auto& p : iv_) {
    double lo = std::max(a, p.first), hi = std::min(b, p.second);
    if (hi > lo) m += hi - lo;
  }
  return m;
}

IntervalUnion::Where IntervalUnion::locate(double t, double tol) const {
  for (auto& p : iv_) {
    if (std::abs(t - p.first) <= tol || std::abs(t - p.second) <= tol)
      return Where::Boundary;
    if (t > p.first && t < p.second) return Where::Inside;
  }
  return Where::Outside;
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& o) const {
  auto iv = iv_;
  iv.insert(iv.end(), o.iv_.begin(), o.iv_.end());
  return IntervalUnion(std::move(iv));
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& o) const {
  std::vector<std::pair<double, double>> out;
  size_t i = 0, j = 0;
  while (i < iv_.size() && j < o.iv_.size()) {
    double lo = std::max(iv_[i].first, o.iv_[j].first);
    double hi = std::min(iv_[i].second, o.iv_[j].second);
    if (hi > lo) out.push_back({lo, hi});
    if (iv_[i].second < o.iv_[j].second)
      ++i;
    else
      ++j;
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::subtract(const IntervalUnion& o) const {
  std::vector<std::pair<double, double>> out;
  for (auto [a, b] : iv_) {
    double cur = a;
    for (auto& q : o.iv_) {
      if (q.second <= cur) continue;
      if (q.first >= b) break;
      if (q.first > cur) out.push_back({cur, std::min(q.first, b)});
      cur = std::max(cur, q.second);
      if (cur >= b) break;
    }
    if (cur < b) out.push_back({cur, b});
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::clip(double a, double b) const {
  return intersect(IntervalUnion::single(a, b));
}

IntervalUnion IntervalUnion::complement_within(double a, double b) const {
  return IntervalUnion::single(a, b).subtract(*this);
}

IntervalUnion IntervalUnion::affine(double a, double b) const {
  std::vector<std::pair<double, double>> out;
  out.reserve(iv_.size());
  for (auto [lo, hi] : iv_) out.push_back({a + b * lo, a + b * hi});
  return IntervalUnion(std::move(out));
}

}  // namespace pairlab
