#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "symrmt/cartan.hpp"
#include "symrmt/grid.hpp"
#include "symrmt/roots.hpp"

namespace symrmt {

/// I: 1/xi^2, II: a^2/sinh^2(a xi), III: a^2/sin^2(a xi).
enum class PotentialType { I, II, III };

const char* to_string(PotentialType t) noexcept;
PotentialType parse_potential_type(const std::string& name);
Curvature curvature_of(PotentialType t) noexcept;

double potential_function(PotentialType t, double xi, double a = 1.0);

/// g^2 per root kind, indexed by RootKind.
using Couplings = std::array<double, 3>;

/// g_alpha^2 = m_alpha (m_alpha + 2 m_{2alpha} - 2) |alpha|^2 / 8, with
/// m_{2alpha} = 0 when 2 alpha is not a root.
Couplings root_value_couplings(const RootSystem& rs);

struct CSModel {
  RootSystem roots;
  PotentialType type = PotentialType::II;
  double a = 1.0;
  Couplings g2{0.0, 0.0, 0.0};

  /// Model at the root-value couplings.
  static CSModel at_root_values(RootSystem rs, PotentialType type, double a = 1.0);

  double coupling(RootKind k) const { return g2[static_cast<int>(k)]; }
  bool at_root_values() const;
  /// sum over positive roots g_alpha^2 v(q^alpha); throws Domain on a singular point.
  double potential(std::span<const double> q) const;
  /// rho^2 a^2 with sign +, - for II, III and zero for I.
  double rho_shift() const;
};

/// -1/2 sum d^2 f (central differences) + V f on the interior grid.
RadialGridFunction cs_apply(const CSModel& model, const RadialGridFunction& f);

/// -1/2 J^{1/2} (Delta'_B + rho_shift) J^{-1/2} f on the interior grid.
RadialGridFunction cs_radial_side(const CSModel& model, const RadialGridFunction& f);

/// max |H f - (-1/2) J^{1/2} (Delta'_B +- rho^2) J^{-1/2} f| / max |f| over the
/// interior grid. Throws NotAtRootValues off the root values.
double op_mapping_residual(const CSModel& model, const RadialGridFunction& f);

struct ConvergencePoint {
  double h;
  double residual;
};

struct ConvergenceStudy {
  std::vector<ConvergencePoint> points;
  double slope;  // least-squares slope of log residual against log h
};

/// Residuals of op_mapping_residual for f sampled on the box [lo, hi] at each h.
ConvergenceStudy op_mapping_convergence(const CSModel& model, const std::vector<double>& lo,
                                        const std::vector<double>& hi,
                                        const std::vector<double>& hs,
                                        const std::function<double(std::span<const double>)>& f);

}  // namespace symrmt
