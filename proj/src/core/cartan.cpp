#include "symrmt/cartan.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "symrmt/error.hpp"
#include "symrmt/parallel.hpp"

namespace symrmt {

const char* to_string(CartanClass c) noexcept {
  switch (c) {
    case CartanClass::A: return "A";
    case CartanClass::AI: return "AI";
    case CartanClass::AII: return "AII";
    case CartanClass::AIII: return "AIII";
    case CartanClass::B: return "B";
    case CartanClass::C: return "C";
    case CartanClass::CI: return "CI";
    case CartanClass::CII: return "CII";
    case CartanClass::D: return "D";
    case CartanClass::DIII_even: return "DIII-even";
    case CartanClass::DIII_odd: return "DIII-odd";
    case CartanClass::BDI: return "BDI";
  }
  return "?";
}

const char* to_string(Curvature c) noexcept {
  switch (c) {
    case Curvature::Positive: return "positive";
    case Curvature::Zero: return "zero";
    case Curvature::Negative: return "negative";
  }
  return "?";
}

const std::vector<CartanClass>& all_cartan_classes() {
  static const std::vector<CartanClass> all{
      CartanClass::A,  CartanClass::AI,  CartanClass::AII, CartanClass::AIII,
      CartanClass::B,  CartanClass::C,   CartanClass::CI,  CartanClass::CII,
      CartanClass::D,  CartanClass::DIII_even, CartanClass::DIII_odd, CartanClass::BDI};
  return all;
}

CartanClass parse_cartan_class(const std::string& name) {
  for (CartanClass c : all_cartan_classes())
    if (name == to_string(c)) return c;
  if (name == "DIII_even") return CartanClass::DIII_even;
  if (name == "DIII_odd") return CartanClass::DIII_odd;
  fail(ErrorCode::InvalidArgument,
       "unknown Cartan class '" + name +
           "' (expected one of A, AI, AII, AIII, B, C, CI, CII, D, DIII-even, DIII-odd, BDI)");
}

const std::vector<CatalogRow>& catalog_rows() {
  static const std::vector<CatalogRow> rows{
      {CartanClass::A, "A_{N-1}", "A_{N-1}", "SU(N)", "SL(N,C)/SU(N)", "2", "0", "0",
       {"C+_{2,0,0}", "G0_{2,0,0}", "T-_{2,0,0}"}, false},
      {CartanClass::AI, "A_{N-1}", "A_{N-1}", "SU(N)/SO(N)", "SL(N,R)/SO(N)", "1", "0", "0",
       {"C+_{1,0,0}", "G0_{1,0,0}", "T-_{1,0,0}"}, false},
      {CartanClass::AII, "A_{N-1}", "A_{N-1}", "SU(2N)/USp(2N)", "SU*(2N)/USp(2N)", "4", "0", "0",
       {"C+_{4,0,0}", "G0_{4,0,0}", "T-_{4,0,0}"}, false},
      {CartanClass::AIII, "A_{N-1}", "BC_q (p>q) / C_q (p=q)", "SU(p+q)/SU(p)xSU(q)xU(1)",
       "SU(p,q)/SU(p)xSU(q)xU(1)", "2", "1", "2(p-q)",
       {"S+_{2,1,0}", "chi0_{2,1,2nu}", "T-_{2,1,0}"}, true},
      {CartanClass::B, "B_N", "B_N", "SO(2N+1)", "SO(2N+1,C)/SO(2N+1)", "2", "0", "2",
       {"", "P0_{2,0,2}", ""}, false},
      {CartanClass::C, "C_N", "C_N", "USp(2N)", "Sp(2N,C)/USp(2N)", "2", "2", "0",
       {"B+_{2,2,0}", "B0_{2,2,0}", "T-_{2,2,0}"}, false},
      {CartanClass::CI, "C_N", "C_N", "USp(2N)/SU(N)xU(1)", "Sp(2N,R)/SU(N)xU(1)", "1", "1", "0",
       {"B+_{1,1,0}", "B0_{1,1,0}", "T-_{1,1,0}"}, false},
      {CartanClass::CII, "C_N", "BC_q (p>q) / C_q (p=q)", "USp(2p+2q)/USp(2p)xUSp(2q)",
       "USp(2p,2q)/USp(2p)xUSp(2q)", "4", "3", "4(p-q)",
       {"", "chi0_{4,3,4nu}", "T-_{4,3,0}"}, true},
      {CartanClass::D, "D_N", "D_N", "SO(2N)", "SO(2N,C)/SO(2N)", "2", "0", "0",
       {"B+_{2,0,0}", "B0_{2,0,0}", "T-_{2,0,0}"}, false},
      {CartanClass::DIII_even, "D_N", "C_N", "SO(4N)/SU(2N)xU(1)", "SO*(4N)/SU(2N)xU(1)", "4", "1",
       "0", {"B+_{4,1,0}", "B0_{4,1,0}", "T-_{4,1,0}"}, false},
      {CartanClass::DIII_odd, "D_N", "BC_N", "SO(4N+2)/SU(2N+1)xU(1)", "SO*(4N+2)/SU(2N+1)xU(1)",
       "4", "1", "4", {"", "P0_{4,1,4}", ""}, false},
      {CartanClass::BDI, "B_N (p+q=2N+1) / D_N (p+q=2N)", "B_q (p>q) / D_q (p=q)",
       "SO(p+q)/SO(p)xSO(q)", "SO(p,q)/SO(p)xSO(q)", "1", "0", "p-q",
       {"", "chi0_{1,0,nu}", "T-_{1,0,0}"}, true},
  };
  return rows;
}

const CatalogRow& catalog_row(CartanClass c) {
  for (const auto& r : catalog_rows())
    if (r.cartan_class == c) return r;
  fail(ErrorCode::InvalidArgument, "catalog: class not found");
}

RootSystem SymmetricSpaceEntry::root_system() const { return build_root_system(family, rank, mult); }

std::array<SymmetricSpaceEntry, 3> catalog_lookup(CartanClass c, const CatalogParams& params) {
  const CatalogRow& row = catalog_row(c);
  Family family = Family::A;
  int rank = 0;
  Multiplicities m;
  if (row.uses_pq) {
    if (params.q < 1 || params.p < params.q)
      fail(ErrorCode::InvalidArgument, std::string("catalog: class ") + to_string(c) +
                                           " requires p >= q >= 1 (got p=" +
                                           std::to_string(params.p) +
                                           ", q=" + std::to_string(params.q) + ")");
    const int nu = params.p - params.q;
    rank = params.q;
    switch (c) {
      case CartanClass::AIII:
        family = nu > 0 ? Family::BC : Family::C;
        m = {2, 1, 2 * nu};
        break;
      case CartanClass::CII:
        family = nu > 0 ? Family::BC : Family::C;
        m = {4, 3, 4 * nu};
        break;
      default:  // BDI
        family = nu > 0 ? Family::B : Family::D;
        m = {1, 0, nu};
        break;
    }
  } else {
    const int n = params.n;
    const bool a_type = c == CartanClass::A || c == CartanClass::AI || c == CartanClass::AII;
    const int min_n = (a_type || c == CartanClass::D) ? 2 : 1;
    if (n < min_n)
      fail(ErrorCode::InvalidArgument, std::string("catalog: class ") + to_string(c) +
                                           " requires N >= " + std::to_string(min_n));
    rank = a_type ? n - 1 : n;
    switch (c) {
      case CartanClass::A: family = Family::A; m = {2, 0, 0}; break;
      case CartanClass::AI: family = Family::A; m = {1, 0, 0}; break;
      case CartanClass::AII: family = Family::A; m = {4, 0, 0}; break;
      case CartanClass::B: family = Family::B; m = {2, 0, 2}; break;
      case CartanClass::C: family = Family::C; m = {2, 2, 0}; break;
      case CartanClass::CI: family = Family::C; m = {1, 1, 0}; break;
      case CartanClass::D: family = Family::D; m = {2, 0, 0}; break;
      case CartanClass::DIII_even: family = Family::C; m = {4, 1, 0}; break;
      case CartanClass::DIII_odd: family = Family::BC; m = {4, 1, 4}; break;
      default: fail(ErrorCode::InvalidArgument, "catalog: unexpected class");
    }
  }
  std::array<SymmetricSpaceEntry, 3> out;
  const Curvature curv[3] = {Curvature::Positive, Curvature::Zero, Curvature::Negative};
  for (int k = 0; k < 3; ++k)
    out[static_cast<std::size_t>(k)] = {c,    row.compact_name, row.noncompact_name, family, rank,
                                        m,    curv[k],          row.tags[static_cast<std::size_t>(k)]};
  return out;
}

double log_radial_jacobian(const RootSystem& rs, Curvature curv, std::span<const double> q,
                           double a) {
  require(q.size() == rs.ambient_dim(), "radial_jacobian: dimension mismatch");
  require(a > 0.0, "radial_jacobian: scale a must be positive");
  double s = 0.0;
  for (const auto& r : rs.positive_roots()) {
    if (r.multiplicity == 0) continue;
    double x = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) x += q[i] * r.vector[i];
    x = std::abs(x);
    if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "radial_jacobian: non-finite point");
    if (x == 0.0) fail(ErrorCode::ChamberBoundary, "radial_jacobian: point on a chamber wall");
    double f = 0.0;
    switch (curv) {
      case Curvature::Zero: f = std::log(x); break;
      case Curvature::Negative: {
        const double ax = a * x;
        // log(sinh(ax)/a) without overflow for large arguments
        f = ax > 20.0 ? ax - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * ax)) - std::log(a)
                      : std::log(std::sinh(ax) / a);
        break;
      }
      case Curvature::Positive: {
        const double ax = a * x;
        if (!(ax < std::numbers::pi))
          fail(ErrorCode::Domain, "radial_jacobian: a*q^alpha outside (0, pi) for positive curvature");
        f = std::log(std::sin(ax) / a);
        break;
      }
    }
    s += r.multiplicity * f;
  }
  return s;
}

double radial_jacobian(const RootSystem& rs, Curvature curv, std::span<const double> q, double a) {
  return std::exp(log_radial_jacobian(rs, curv, q, a));
}

RadialGridFunction radial_laplace_beltrami(
    const std::function<double(std::span<const double>)>& log_j, const RadialGridFunction& f) {
  RadialGridFunction out = f.interior();
  const std::size_t dim = f.dim();
  parallel_for(out.size(), [&](std::size_t k) {
    const auto idx = out.unflatten(k);
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dim; ++a) flat += (idx[a] + 1) * f.stride(a);
    std::vector<double> q = f.point(flat);
    const double l0 = log_j(q);
    const double f0 = f[flat];
    double acc = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
      const double h = f.spacing()[a];
      const double qa = q[a];
      q[a] = qa + 0.5 * h;
      const double rp = std::exp(log_j(q) - l0);
      q[a] = qa - 0.5 * h;
      const double rm = std::exp(log_j(q) - l0);
      q[a] = qa;
      acc += (rp * (f[flat + f.stride(a)] - f0) - rm * (f0 - f[flat - f.stride(a)])) / (h * h);
    }
    if (!std::isfinite(acc))
      fail(ErrorCode::Numerical, "radial_laplace_beltrami: non-finite stencil value");
    out[k] = acc;
  });
  return out;
}

RadialGridFunction radial_laplace_beltrami(const RootSystem& rs, Curvature curv,
                                           const RadialGridFunction& f, double a) {
  require(f.dim() == rs.ambient_dim(), "radial_laplace_beltrami: grid dimension mismatch");
  return radial_laplace_beltrami(
      [&](std::span<const double> q) { return log_radial_jacobian(rs, curv, q, a); }, f);
}

}  // namespace symrmt
