#include "symrmt/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "symrmt/error.hpp"

namespace symrmt {

namespace {

QuadratureRule build_gauss_legendre(std::size_t n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(std::size_t n) {
  require(n >= 1, "gauss_legendre: need at least one node");
  static std::mutex mutex;
  static std::map<std::size_t, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  const QuadratureRule& ref = gauss_legendre(n);
  QuadratureRule out;
  out.nodes.resize(n);
  out.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < n; ++i) {
    out.nodes[i] = mid + half * ref.nodes[i];
    out.weights[i] = half * ref.weights[i];
  }
  return out;
}

QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels,
                                        std::size_t order) {
  require(panels >= 1, "composite_gauss_legendre: need at least one panel");
  QuadratureRule out;
  out.nodes.reserve(panels * order);
  out.weights.reserve(panels * order);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const QuadratureRule piece = gauss_legendre(order, lo, lo + width);
    out.nodes.insert(out.nodes.end(), piece.nodes.begin(), piece.nodes.end());
    out.weights.insert(out.weights.end(), piece.weights.begin(), piece.weights.end());
  }
  return out;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

}  // namespace symrmt
