#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symrmt/grid.hpp"
#include "symrmt/roots.hpp"

namespace symrmt {

enum class CartanClass { A, AI, AII, AIII, B, C, CI, CII, D, DIII_even, DIII_odd, BDI };
enum class Curvature { Positive, Zero, Negative };

const char* to_string(CartanClass c) noexcept;
const char* to_string(Curvature c) noexcept;
CartanClass parse_cartan_class(const std::string& name);
const std::vector<CartanClass>& all_cartan_classes();

/// Static row data: multiplicity formulas as printed (m_s may depend on p - q).
struct CatalogRow {
  CartanClass cartan_class;
  std::string inherited_family;   // e.g. "A_{N-1}"
  std::string restricted_family;  // e.g. "BC_q (p>q) / C_q (p=q)"
  std::string compact_name;       // G/K (G)
  std::string noncompact_name;    // G*/K (G^C/G)
  std::string m_o, m_l, m_s;      // formulas
  std::array<std::string, 3> tags;  // ensemble tags X+, X0, X- ("" when empty)
  bool uses_pq;                   // parametrized by (p, q) rather than N
};

const std::vector<CatalogRow>& catalog_rows();
const CatalogRow& catalog_row(CartanClass c);

struct CatalogParams {
  int n = 0;  // N for classes parametrized by N
  int p = 0;
  int q = 0;
};

struct SymmetricSpaceEntry {
  CartanClass cartan_class;
  std::string compact_name;
  std::string noncompact_name;
  Family family;
  int rank;
  Multiplicities mult;
  Curvature curvature;
  std::string tag;

  RootSystem root_system() const;
  /// (m_s + m_l - 1)/2, shared by the Laguerre lambda and Jacobi rho.
  double laguerre_lambda() const noexcept { return 0.5 * (mult.m_s + mult.m_l - 1); }
  double jacobi_sigma() const noexcept { return 0.5 * (mult.m_l - 1); }
};

/// Returns the {positive, zero, negative} curvature triplet.
std::array<SymmetricSpaceEntry, 3> catalog_lookup(CartanClass c, const CatalogParams& params);

/// log J for the given curvature: sum_alpha m_alpha log f(|q^alpha|) with
/// f(x) = x, sinh(a x)/a, sin(a x)/a for zero, negative, positive curvature.
double log_radial_jacobian(const RootSystem& rs, Curvature curv, std::span<const double> q,
                           double a = 1.0);
double radial_jacobian(const RootSystem& rs, Curvature curv, std::span<const double> q,
                       double a = 1.0);

/// J^{-1} sum_i d_i (J d_i f) by central flux differences; the output lives on
/// the interior grid (one node dropped per side).
RadialGridFunction radial_laplace_beltrami(
    const std::function<double(std::span<const double>)>& log_j, const RadialGridFunction& f);
RadialGridFunction radial_laplace_beltrami(const RootSystem& rs, Curvature curv,
                                           const RadialGridFunction& f, double a = 1.0);

}  // namespace symrmt
