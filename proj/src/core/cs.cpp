#include "symrmt/cs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symrmt/error.hpp"
#include "symrmt/parallel.hpp"

namespace symrmt {

const char* to_string(PotentialType t) noexcept {
  switch (t) {
    case PotentialType::I: return "I";
    case PotentialType::II: return "II";
    case PotentialType::III: return "III";
  }
  return "?";
}

PotentialType parse_potential_type(const std::string& name) {
  if (name == "I" || name == "i" || name == "1" || name == "rational") return PotentialType::I;
  if (name == "II" || name == "ii" || name == "2" || name == "hyperbolic") return PotentialType::II;
  if (name == "III" || name == "iii" || name == "3" || name == "trigonometric")
    return PotentialType::III;
  fail(ErrorCode::InvalidArgument, "unknown potential type '" + name + "' (expected I, II or III)");
}

Curvature curvature_of(PotentialType t) noexcept {
  switch (t) {
    case PotentialType::I: return Curvature::Zero;
    case PotentialType::II: return Curvature::Negative;
    case PotentialType::III: return Curvature::Positive;
  }
  return Curvature::Zero;
}

double potential_function(PotentialType t, double xi, double a) {
  switch (t) {
    case PotentialType::I:
      if (xi == 0.0) fail(ErrorCode::Domain, "potential singular at xi = 0");
      return 1.0 / (xi * xi);
    case PotentialType::II: {
      if (xi == 0.0) fail(ErrorCode::Domain, "potential singular at xi = 0");
      const double sh = std::sinh(a * xi);
      return a * a / (sh * sh);
    }
    case PotentialType::III: {
      const double ax = a * xi;
      if (!(std::abs(ax) > 0.0 && std::abs(ax) < std::numbers::pi))
        fail(ErrorCode::Domain, "type III potential needs 0 < a |xi| < pi");
      const double sn = std::sin(ax);
      return a * a / (sn * sn);
    }
  }
  return 0.0;
}

Couplings root_value_couplings(const RootSystem& rs) {
  Couplings g{0.0, 0.0, 0.0};
  for (const Root& r : rs.positive_roots()) {
    const double m = r.multiplicity;
    const double m2 = rs.doubled_multiplicity(r);
    g[static_cast<int>(r.kind)] = m * (m + 2.0 * m2 - 2.0) * r.norm2() / 8.0;
  }
  return g;
}

CSModel CSModel::at_root_values(RootSystem rs, PotentialType type, double a) {
  require(std::isfinite(a) && a > 0.0, "scale a must be positive");
  CSModel m;
  m.g2 = root_value_couplings(rs);
  m.roots = std::move(rs);
  m.type = type;
  m.a = a;
  return m;
}

bool CSModel::at_root_values() const {
  const auto ref = root_value_couplings(roots);
  for (const Root& r : roots.positive_roots()) {
    const int k = static_cast<int>(r.kind);
    if (std::abs(g2[k] - ref[k]) > 1e-12 * std::max(1.0, std::abs(ref[k]))) return false;
  }
  return true;
}

double CSModel::potential(std::span<const double> q) const {
  require(q.size() == roots.ambient_dim(), "point dimension does not match the root system");
  const std::vector<double> qv(q.begin(), q.end());
  double v = 0.0;
  for (const Root& r : roots.positive_roots()) {
    const double g = coupling(r.kind);
    if (g == 0.0) continue;
    v += g * potential_function(type, q_dot_alpha(qv, r.vector), a);
  }
  return v;
}

double CSModel::rho_shift() const {
  if (type == PotentialType::I) return 0.0;
  const auto rho = rho_vector(roots);
  double r2 = 0.0;
  for (double x : rho) r2 += x * x;
  r2 *= a * a;
  return type == PotentialType::II ? r2 : -r2;
}

namespace {

void check_grid(const CSModel& model, const RadialGridFunction& f) {
  require(f.dim() == model.roots.ambient_dim(), "grid dimension does not match the root system");
  for (std::size_t ax = 0; ax < f.dim(); ++ax)
    require(f.counts()[ax] >= 3, "grid needs at least three nodes per axis");
}

}  // namespace

RadialGridFunction cs_apply(const CSModel& model, const RadialGridFunction& f) {
  check_grid(model, f);
  RadialGridFunction out = f.interior();
  const std::size_t d = f.dim();
  parallel_for(out.size(), [&](std::size_t i) {
    auto idx = out.unflatten(i);
    std::size_t flat = 0;
    for (std::size_t ax = 0; ax < d; ++ax) flat += (idx[ax] + 1) * f.stride(ax);
    double lap = 0.0;
    for (std::size_t ax = 0; ax < d; ++ax) {
      const double h = f.spacing()[ax];
      const std::size_t s = f.stride(ax);
      lap += (f[flat + s] - 2.0 * f[flat] + f[flat - s]) / (h * h);
    }
    const auto p = out.point(i);
    out[i] = -0.5 * lap + model.potential(p) * f[flat];
  });
  return out;
}

RadialGridFunction cs_radial_side(const CSModel& model, const RadialGridFunction& f) {
  check_grid(model, f);
  const Curvature curv = curvature_of(model.type);
  RadialGridFunction g(f.origin(), f.spacing(), f.counts());
  parallel_for(g.size(), [&](std::size_t i) {
    const auto p = g.point(i);
    g[i] = std::exp(-0.5 * log_radial_jacobian(model.roots, curv, p, model.a)) * f[i];
  });
  RadialGridFunction lb = radial_laplace_beltrami(model.roots, curv, g, model.a);
  const double shift = model.rho_shift();
  const std::size_t d = f.dim();
  parallel_for(lb.size(), [&](std::size_t i) {
    auto idx = lb.unflatten(i);
    std::size_t flat = 0;
    for (std::size_t ax = 0; ax < d; ++ax) flat += (idx[ax] + 1) * f.stride(ax);
    const auto p = lb.point(i);
    const double sj = std::exp(0.5 * log_radial_jacobian(model.roots, curv, p, model.a));
    lb[i] = -0.5 * (sj * lb[i] + shift * f[flat]);
  });
  return lb;
}

double op_mapping_residual(const CSModel& model, const RadialGridFunction& f) {
  if (!model.at_root_values())
    fail(ErrorCode::NotAtRootValues, "mapping undefined off root values");
  const auto lhs = cs_apply(model, f);
  const auto rhs = cs_radial_side(model, f);
  double res = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) res = std::max(res, std::abs(lhs[i] - rhs[i]));
  for (double v : f.values()) scale = std::max(scale, std::abs(v));
  return scale > 0.0 ? res / scale : res;
}

ConvergenceStudy op_mapping_convergence(const CSModel& model, const std::vector<double>& lo,
                                        const std::vector<double>& hi,
                                        const std::vector<double>& hs,
                                        const std::function<double(std::span<const double>)>& f) {
  const std::size_t d = model.roots.ambient_dim();
  require(lo.size() == d && hi.size() == d, "box dimension does not match the root system");
  require(hs.size() >= 2, "at least two step sizes are required");
  ConvergenceStudy study;
  for (double h : hs) {
    require(std::isfinite(h) && h > 0.0, "step sizes must be positive");
    std::vector<double> spacing(d, h);
    std::vector<std::size_t> counts(d);
    for (std::size_t ax = 0; ax < d; ++ax) {
      require(hi[ax] > lo[ax], "box must have positive extent");
      counts[ax] = static_cast<std::size_t>(std::llround((hi[ax] - lo[ax]) / h)) + 1;
    }
    const auto grid = RadialGridFunction::sample(lo, spacing, counts, f);
    study.points.push_back({h, op_mapping_residual(model, grid)});
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(study.points.size());
  for (const auto& p : study.points) {
    const double x = std::log(p.h), y = std::log(p.residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  study.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return study;
}

}  // namespace symrmt
