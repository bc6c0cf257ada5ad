#include "pairlab/common.hpp"

#include <map>
#include <mutex>

namespace pairlab {

namespace {

struct GLRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton iteration on Legendre polynomials; standard construction.
GLRule make_gl(int n) {
  GLRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    p0 = 1.0;
    p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

std::map<int, GLRule>& gl_cache() {
  static std::map<int, GLRule> cache;
  return cache;
}

std::mutex& gl_mutex() {
  static std::mutex m;
  return m;
}

const GLRule& gl_rule(int n) {
  std::lock_guard<std::mutex> lock(gl_mutex());
  auto& cache = gl_cache();
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gl(n)).first;
  return it->second;
}

}  // namespace

const std::vector<double>& gl_nodes(int n) { return gl_rule(n).nodes; }
const std::vector<double>& gl_weights(int n) { return gl_rule(n).weights; }

double trig_moment(int m, int n, double t0, double t1) {
  if (m < 0 || n < 0) fail("BadArgument", "trig_moment needs m,n >= 0");
  if (m == 0 && n == 0) return t1 - t0;
  auto c = [](double t) { return std::cos(t); };
  auto s = [](double t) { return std::sin(t); };
  if (m >= 1) {
    if (m == 1) {
      // d/dt [sin^{n+1}/(n+1)] = cos sin^n
      return (std::pow(s(t1), n + 1) - std::pow(s(t0), n + 1)) / (n + 1);
    }
    // int cos^m sin^n = [cos^{m-1} sin^{n+1}]/(m+n) + (m-1)/(m+n) int cos^{m-2} sin^n
    double boundary = (std::pow(c(t1), m - 1) * std::pow(s(t1), n + 1) -
                       std::pow(c(t0), m - 1) * std::pow(s(t0), n + 1)) /
                      (m + n);
    return boundary + double(m - 1) / (m + n) * trig_moment(m - 2, n, t0, t1);
  }
  // m == 0, n >= 1
  if (n == 1) return c(t0) - c(t1);
  double boundary =
      (-c(t1) * std::pow(s(t1), n - 1) + c(t0) * std::pow(s(t0), n - 1)) / n;
  return boundary + double(n - 1) / n * trig_moment(0, n - 2, t0, t1);
}

}  // namespace pairlab
