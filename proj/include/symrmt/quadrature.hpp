#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace symrmt {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss–Legendre rule on [-1, 1] (Newton iteration on the
/// three-term recurrence; nodes accurate to ~1e-15).
const QuadratureRule& gauss_legendre(std::size_t n);

/// Gauss–Legendre rule mapped onto [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// Composite rule: `panels` equal panels on [a, b], `order` nodes each.
QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels,
                                        std::size_t order);

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);

}  // namespace symrmt
