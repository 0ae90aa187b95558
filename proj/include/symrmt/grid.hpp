#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace symrmt {

/// Values on a uniform tensor-product grid in radial coordinates. Node
/// (i_1, ..., i_n) sits at origin[a] + i_a * spacing[a]; values are stored
/// with the last axis varying fastest.
class RadialGridFunction {
 public:
  RadialGridFunction() = default;
  RadialGridFunction(std::vector<double> origin, std::vector<double> spacing,
                     std::vector<std::size_t> counts);

  /// Samples f on the grid.
  static RadialGridFunction sample(std::vector<double> origin, std::vector<double> spacing,
                                   std::vector<std::size_t> counts,
                                   const std::function<double(std::span<const double>)>& f);

  std::size_t dim() const noexcept { return origin_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& origin() const noexcept { return origin_; }
  const std::vector<double>& spacing() const noexcept { return spacing_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  std::size_t stride(std::size_t axis) const noexcept { return strides_[axis]; }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double& operator[](std::size_t flat) { return values_[flat]; }
  double operator[](std::size_t flat) const { return values_[flat]; }

  /// Multi-index of a flat index.
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  /// Coordinates of a flat index.
  std::vector<double> point(std::size_t flat) const;
  /// True when the node touches the box boundary along any axis.
  bool on_boundary(std::size_t flat) const;

  /// Grid with one node removed from each end of every axis (same spacing).
  RadialGridFunction interior() const;

 private:
  std::vector<double> origin_;
  std::vector<double> spacing_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> strides_;
  std::vector<double> values_;
};

}  // namespace symrmt
