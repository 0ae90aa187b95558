#include "symrmt/grid.hpp"

#include "symrmt/error.hpp"

namespace symrmt {

RadialGridFunction::RadialGridFunction(std::vector<double> origin, std::vector<double> spacing,
                                       std::vector<std::size_t> counts)
    : origin_(std::move(origin)), spacing_(std::move(spacing)), counts_(std::move(counts)) {
  require(!origin_.empty(), "grid: need at least one axis");
  require(origin_.size() == spacing_.size() && origin_.size() == counts_.size(),
          "grid: origin, spacing and counts must have equal length");
  std::size_t total = 1;
  strides_.assign(origin_.size(), 1);
  for (std::size_t a = origin_.size(); a-- > 0;) {
    require(spacing_[a] > 0.0, "grid: spacing must be positive");
    require(counts_[a] >= 1, "grid: empty axis");
    strides_[a] = total;
    total *= counts_[a];
  }
  values_.assign(total, 0.0);
}

RadialGridFunction RadialGridFunction::sample(
    std::vector<double> origin, std::vector<double> spacing, std::vector<std::size_t> counts,
    const std::function<double(std::span<const double>)>& f) {
  RadialGridFunction g(std::move(origin), std::move(spacing), std::move(counts));
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto q = g.point(k);
    g.values_[k] = f(q);
  }
  return g;
}

std::vector<std::size_t> RadialGridFunction::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(dim());
  for (std::size_t a = 0; a < dim(); ++a) {
    idx[a] = flat / strides_[a];
    flat %= strides_[a];
  }
  return idx;
}

std::vector<double> RadialGridFunction::point(std::size_t flat) const {
  const auto idx = unflatten(flat);
  std::vector<double> q(dim());
  for (std::size_t a = 0; a < dim(); ++a)
    q[a] = origin_[a] + spacing_[a] * static_cast<double>(idx[a]);
  return q;
}

bool RadialGridFunction::on_boundary(std::size_t flat) const {
  const auto idx = unflatten(flat);
  for (std::size_t a = 0; a < dim(); ++a)
    if (idx[a] == 0 || idx[a] + 1 == counts_[a]) return true;
  return false;
}

RadialGridFunction RadialGridFunction::interior() const {
  std::vector<double> o(dim());
  std::vector<std::size_t> c(dim());
  for (std::size_t a = 0; a < dim(); ++a) {
    require(counts_[a] >= 3, "grid: need at least three nodes per axis for a stencil");
    o[a] = origin_[a] + spacing_[a];
    c[a] = counts_[a] - 2;
  }
  return RadialGridFunction(std::move(o), spacing_, std::move(c));
}

}  // namespace symrmt
