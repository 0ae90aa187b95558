#include "symrmt/dmpk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "symrmt/cartan.hpp"
#include "symrmt/ensembles.hpp"
#include "symrmt/error.hpp"
#include "symrmt/parallel.hpp"
#include "symrmt/quadrature.hpp"
#include "symrmt/roots.hpp"

namespace symrmt {

namespace {

constexpr double kPi = std::numbers::pi;

void check_beta(int beta) {
  require(beta == 1 || beta == 2 || beta == 4, "beta must be one of {1, 2, 4}");
}

void check_s_points(const std::vector<double>& s) {
  require(!s.empty(), "at least one s value is required");
  double prev = -1.0;
  for (double v : s) {
    require(std::isfinite(v) && v >= 0.0 && v > prev,
            "s values must be non-negative and increasing");
    prev = v;
  }
}

double csch2(double x) {
  const double sh = std::sinh(x);
  return 1.0 / (sh * sh);
}

double coth(double x) { return 1.0 / std::tanh(x); }

// Uniform in (0, 1) from a counter.
double counter_uniform(std::uint64_t key) {
  return (static_cast<double>(splitmix64(key) >> 11) + 0.5) * 0x1.0p-53;
}

double counter_normal(std::uint64_t key, std::uint64_t i) {
  const double u1 = counter_uniform(key + 2 * i);
  const double u2 = counter_uniform(key + 2 * i + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

RootSystem dmpk_root_system(int beta, int n) {
  Multiplicities m;
  m.m_o = n > 1 ? beta : 0;
  m.m_l = 1;
  return build_root_system(Family::C, n, m);
}

double rho_squared(int beta, int n) {
  double r2 = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double r = beta * (n - i) + 1.0;
    r2 += r * r;
  }
  return r2;
}

}  // namespace

double dmpk_gamma(int beta, int n) { return beta * n + 2.0 - beta; }

double lambda_from_T(double t) {
  if (!(t > 0.0 && t <= 1.0)) fail(ErrorCode::Domain, "transmission must lie in (0, 1]");
  return (1.0 - t) / t;
}

double T_from_lambda(double lambda) {
  if (!(lambda >= 0.0)) fail(ErrorCode::Domain, "lambda must be non-negative");
  return 1.0 / (1.0 + lambda);
}

double x_from_lambda(double lambda) {
  if (!(lambda >= 0.0)) fail(ErrorCode::Domain, "lambda must be non-negative");
  return std::asinh(std::sqrt(lambda));
}

double lambda_from_x(double x) {
  const double sh = std::sinh(x);
  return sh * sh;
}

double conductance(std::span<const double> lambda) {
  double g = 0.0;
  for (double l : lambda) g += 1.0 / (1.0 + l);
  return g;
}

double DMPKState::conductance() const { return symrmt::conductance(lambda); }

ConductanceStats conductance_stats(const std::vector<DMPKState>& ensemble) {
  ConductanceStats st;
  st.samples = ensemble.size();
  if (ensemble.empty()) return st;
  // Sorted reduction: statistics do not depend on walker labels.
  std::vector<double> g;
  g.reserve(ensemble.size());
  for (const auto& e : ensemble) g.push_back(e.conductance());
  std::sort(g.begin(), g.end());
  double sum = 0.0;
  for (double v : g) sum += v;
  st.mean = sum / static_cast<double>(g.size());
  double ss = 0.0;
  for (double v : g) ss += (v - st.mean) * (v - st.mean);
  if (g.size() > 1) {
    st.variance = ss / static_cast<double>(g.size() - 1);
    st.stderr_ = std::sqrt(st.variance / static_cast<double>(g.size()));
  }
  return st;
}

// ---------------------------------------------------------------------------
// Exact beta = 2 solution

double conical_legendre(double tau, double xi, std::size_t nodes) {
  if (!(xi >= 0.0)) fail(ErrorCode::Domain, "conical function needs xi >= 0");
  if (xi == 0.0) return 1.0;
  // t = xi (1 - u^2) on u in [0, 1]; cosh xi - cosh t = 2 sinh((xi+t)/2) sinh(xi u^2/2).
  const std::size_t n = std::max(nodes, static_cast<std::size_t>(0.75 * tau * xi) + 48);
  const auto& rule = gauss_legendre(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double u = 0.5 * (rule.nodes[k] + 1.0);
    const double w = 0.5 * xi * u * u;
    const double t = xi - 2.0 * w;
    const double ratio = u / std::sqrt(std::sinh(w));
    sum += rule.weights[k] * std::cos(tau * t) * ratio / std::sqrt(std::sinh(0.5 * (xi + t)));
  }
  // (2/pi) * (1/2 from du) * 2 xi / 2
  return sum * xi / std::numbers::pi;
}

ExactBeta2::ExactBeta2(int n, double s, const ExactOptions& opts)
    : n_(n), s_(s), opts_(opts) {
  require(n >= 1 && n <= 4, "exact solution needs 1 <= N <= 4");
  require(std::isfinite(s) && s > 0.0, "s must be positive");
  require(opts.k_factor > 0.0 && opts.k_panels > 0 && opts.k_order > 0,
          "invalid k quadrature");
  k_max_ = opts.k_factor * std::sqrt(static_cast<double>(n) / s);
  const auto rule = composite_gauss_legendre(0.0, k_max_, opts.k_panels, opts.k_order);
  k_nodes_ = rule.nodes;
  k_weights_.assign(n, std::vector<double>(rule.size()));
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double k = rule.nodes[j];
    const double base = rule.weights[j] * std::exp(-k * k * s / (4.0 * n)) *
                        std::tanh(0.5 * kPi * k);
    double kp = k;  // k^{2m-1}
    for (int m = 0; m < n; ++m) {
      k_weights_[m][j] = base * kp;
      kp *= k * k;
    }
  }
  // q_0 = 1, q_{j+1}(a) = (3/2 + j - a) q_j(a) + a q_j'(a).
  q_poly_.assign(n, {});
  q_poly_[0] = {1.0};
  for (int j = 0; j + 1 < n; ++j) {
    const auto& q = q_poly_[j];
    std::vector<double> nq(q.size() + 1, 0.0);
    for (std::size_t c = 0; c < q.size(); ++c) {
      nq[c] += (1.5 + j) * q[c];
      nq[c + 1] -= q[c];
      nq[c] += c * q[c];
    }
    q_poly_[j + 1] = std::move(nq);
  }
}

std::vector<double> ExactBeta2::columns_mehler_fock(double x, double* cancellation) const {
  if (!(x >= 0.0)) fail(ErrorCode::Domain, "x must be non-negative");
  std::vector<double> out(n_, 0.0), mag(n_, 0.0);
  for (std::size_t j = 0; j < k_nodes_.size(); ++j) {
    const double p = conical_legendre(0.5 * k_nodes_[j], 2.0 * x, opts_.conical_nodes);
    for (int m = 0; m < n_; ++m) {
      out[m] += k_weights_[m][j] * p;
      mag[m] += std::abs(k_weights_[m][j] * p);
    }
  }
  if (cancellation) {
    double c = 1.0;
    for (int m = 0; m < n_; ++m)
      c = std::max(c, out[m] != 0.0 ? mag[m] / std::abs(out[m])
                                    : std::numeric_limits<double>::infinity());
    *cancellation = c;
  }
  return out;
}

std::vector<double> ExactBeta2::columns_heat_kernel(double x) const {
  if (!(x >= 0.0)) fail(ErrorCode::Domain, "x must be non-negative");
  const double t = s_ / n_;
  const double rho = 2.0 * x;
  const double r_max = std::sqrt(rho * rho + 240.0 * t) + 1.0;
  const auto rule = composite_gauss_legendre(0.0, std::sqrt(r_max - rho), opts_.heat_panels,
                                             opts_.heat_order);
  std::vector<double> acc(n_, 0.0);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double v = rule.nodes[k];
    const double r = rho + v * v;
    const double a = r * r / (4.0 * t);
    const double base = rule.weights[k] * 2.0 * v * r * std::exp(-a) /
                        std::sqrt(2.0 * std::sinh(0.5 * (r + rho)) * std::sinh(0.5 * v * v));
    for (int m = 0; m < n_; ++m) {
      double q = 0.0;
      for (std::size_t c = q_poly_[m].size(); c-- > 0;) q = q * a + q_poly_[m][c];
      acc[m] += base * q;
    }
  }
  const double c0 = 2.0 * kPi * std::sqrt(2.0) * std::pow(4.0 * kPi, -1.5);
  std::vector<double> out(n_);
  for (int m = 0; m < n_; ++m) {
    const int mm = m + 1;
    out[m] = std::pow(4.0, mm) * c0 * std::pow(t, -0.5 - mm) * acc[m];
  }
  return out;
}

std::vector<double> ExactBeta2::columns(double x) const {
  switch (opts_.method) {
    case ColumnMethod::MehlerFock: return columns_mehler_fock(x);
    case ColumnMethod::HeatKernel: return columns_heat_kernel(x);
    case ColumnMethod::Auto: break;
  }
  double cancellation = 0.0;
  auto out = columns_mehler_fock(x, &cancellation);
  if (!(cancellation <= opts_.cancellation_limit)) return columns_heat_kernel(x);
  return out;
}

double ExactBeta2::density_from_columns(std::span<const double> x,
                                        const std::vector<std::vector<double>>& cols) const {
  require(static_cast<int>(x.size()) == n_ && static_cast<int>(cols.size()) == n_,
          "dimension mismatch");
  double pre = 1.0;
  for (int i = 0; i < n_; ++i) {
    pre *= std::sinh(2.0 * x[i]);
    for (int j = i + 1; j < n_; ++j) pre *= lambda_from_x(x[j]) - lambda_from_x(x[i]);
  }
  Eigen::MatrixXd f(n_, n_);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) f(r, c) = cols[c][r];  // row m, column x_n
  const double sign = (n_ * (n_ - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * pre * f.determinant();
}

double ExactBeta2::density(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == n_, "dimension mismatch");
  for (int i = 0; i < n_; ++i) {
    if (!(x[i] > 0.0) || (i > 0 && !(x[i] > x[i - 1])))
      fail(ErrorCode::ChamberBoundary, "x must satisfy 0 < x_1 < ... < x_N");
  }
  std::vector<std::vector<double>> cols;
  cols.reserve(n_);
  for (double xi : x) cols.push_back(columns(xi));
  return density_from_columns(x, cols);
}

double exact_beta2_density(int n, double s, std::span<const double> x, const ExactOptions& opts) {
  return ExactBeta2(n, s, opts).density(x);
}

ExactMoments exact_beta2_moments(int n, double s, const ExactOptions& opts) {
  require(n >= 1 && n <= 4, "exact moments support 1 <= N <= 4");
  require(std::isfinite(s) && s >= 0.0, "s must be non-negative");
  if (s == 0.0) {
    ExactMoments ballistic;
    ballistic.norm = 1.0;
    ballistic.mean_g = n;
    return ballistic;
  }
  ExactBeta2 exact(n, s, opts);
  const double gamma = dmpk_gamma(2, n);
  double x_max = opts.x_max;
  if (x_max <= 0.0) {
    const double rate = (2.0 * (n - 1) + 1.0) / gamma;
    x_max = 1.0 + rate * s + 6.0 * std::sqrt(s / gamma);
  }
  const auto rule = composite_gauss_legendre(0.0, x_max, opts.x_panels, opts.x_order);
  const std::size_t m = rule.size();
  std::vector<std::vector<double>> table(m);
  parallel_for(m, [&](std::size_t i) { table[i] = exact.columns(rule.nodes[i]); });

  ExactMoments out;
  out.x_max = x_max;
  std::vector<double> x(n);
  std::vector<std::vector<double>> cols(n);
  auto eval = [&](const std::vector<std::size_t>& idx, double& p, double& g) {
    for (int a = 0; a < n; ++a) {
      x[a] = rule.nodes[idx[a]];
      cols[a] = table[idx[a]];
    }
    p = exact.density_from_columns(x, cols);
    g = 0.0;
    for (double xa : x) g += 1.0 / (1.0 + lambda_from_x(xa));
  };

  if (n <= 2) {
    double z = 0.0, z1 = 0.0, z2 = 0.0;
    std::vector<std::size_t> idx(n, 0);
    const std::size_t total = n == 1 ? m : m * m;
    for (std::size_t t = 0; t < total; ++t) {
      idx[0] = t % m;
      if (n == 2) idx[1] = t / m;
      double w = rule.weights[idx[0]];
      if (n == 2) w *= rule.weights[idx[1]];
      double p, g;
      eval(idx, p, g);
      z += w * p;
      z1 += w * p * g;
      z2 += w * p * g * g;
    }
    if (!(std::abs(z) > 0.0)) fail(ErrorCode::Numerical, "vanishing normalization");
    out.norm = z;
    out.mean_g = z1 / z;
    out.var_g = z2 / z - out.mean_g * out.mean_g;
    return out;
  }

  // Monte Carlo over tensor nodes: uniform index tuples, weight prod w.
  require(opts.mc_samples >= 100, "mc_samples must be at least 100");
  Rng rng(derive_seed(opts.seed, 0));
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::vector<std::size_t> idx(n);
  double sw = 0.0, swg = 0.0, swg2 = 0.0, sww = 0.0, swwg = 0.0, swwgg = 0.0;
  const std::size_t ns = opts.mc_samples;
  for (std::size_t t = 0; t < ns; ++t) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      idx[a] = pick(rng);
      w *= rule.weights[idx[a]] * m;
    }
    double p, g;
    eval(idx, p, g);
    const double wp = w * p;
    sw += wp;
    swg += wp * g;
    swg2 += wp * g * g;
    sww += wp * wp;
    swwg += wp * wp * g;
    swwgg += wp * wp * g * g;
  }
  if (!(std::abs(sw) > 0.0)) fail(ErrorCode::Numerical, "vanishing normalization");
  out.norm = sw / ns;
  out.mean_g = swg / sw;
  out.var_g = swg2 / sw - out.mean_g * out.mean_g;
  // Delta method for the ratio estimator.
  const double mu = out.mean_g;
  const double num = swwgg - 2.0 * mu * swwg + mu * mu * sww;
  out.stderr_g = std::sqrt(std::max(0.0, num)) / std::abs(sw);
  return out;
}

// ---------------------------------------------------------------------------
// SDE oracle

std::vector<double> dmpk_log_jacobian_gradient(int beta, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = 2.0 * coth(2.0 * x[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      v += beta * (coth(x[i] - x[j]) + coth(x[i] + x[j]));
    }
    g[i] = v;
  }
  return g;
}

namespace {

// 2 coth(2x) - 1/x without cancellation near zero.
double regular_single(double x) {
  if (x < 1e-3) {
    const double x2 = x * x;
    return x * (4.0 / 3.0 - 16.0 / 45.0 * x2);
  }
  return 2.0 * coth(2.0 * x) - 1.0 / x;
}

// One trajectory. The 1/x part of the single-particle drift is integrated
// exactly as a two-dimensional Bessel step, the rest by Euler-Maruyama.
struct Walker {
  int n;
  int beta;
  double gamma;
  double diff;  // 1 / (2 gamma)
  const SdeOptions* opts;
  std::uint64_t bridge_seed;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> scratch;  // two bridge increments of 2n per depth

  double gap_scale(const std::vector<double>& v) const {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) d = std::min(d, v[i] - v[i - 1]);
    return d;
  }

  bool ordered(const std::vector<double>& v) const {
    if (!(v[0] > 0.0) || !std::isfinite(v[n - 1])) return false;
    for (int i = 1; i < n; ++i)
      if (!(v[i] > v[i - 1])) return false;
    return true;
  }

  void euler(double h, const double* dw) {
    for (int i = 0; i < n; ++i) {
      double r = regular_single(x[i]);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        r += beta * (coth(x[i] - x[j]) + coth(x[i] + x[j]));
      }
      const double a = x[i] + diff * r * h + dw[i];
      const double b = dw[n + i];
      y[i] = std::hypot(a, b);
    }
  }

  // Advances x over a step of length h; dw holds 2n increments (n driving, n auxiliary).
  void advance(double h, const double* dw, std::uint64_t base, int depth, std::uint64_t pos) {
    const double d = gap_scale(x);
    bool split = depth < opts->min_level || (h > opts->eta * gamma * d * d && depth < opts->max_depth);
    if (!split) {
      euler(h, dw);
      if (ordered(y)) {
        x.swap(y);
        return;
      }
      if (depth >= opts->max_depth) {
        // Reflect at the coincidence wall once the step can no longer be refined.
        std::sort(y.begin(), y.end());
        if (ordered(y)) {
          x.swap(y);
          return;
        }
        std::ostringstream os;
        os << "walker collision not resolved after " << depth << " bisections (x =";
        for (double v : x) os << ' ' << v;
        os << ", h = " << h << ")";
        fail(ErrorCode::Numerical, os.str());
      }
    }
    const std::uint64_t key =
        derive_seed(derive_seed(derive_seed(bridge_seed, base), depth + 1), pos);
    double* w1 = scratch.data() + static_cast<std::size_t>(depth) * 4 * n;
    double* w2 = w1 + 2 * n;
    const double sd = std::sqrt(0.25 * h / gamma);
    for (int i = 0; i < 2 * n; ++i) {
      w1[i] = 0.5 * dw[i] + sd * counter_normal(key, i);
      w2[i] = dw[i] - w1[i];
    }
    advance(0.5 * h, w1, base, depth + 1, 2 * pos);
    advance(0.5 * h, w2, base, depth + 1, 2 * pos + 1);
  }
};

}  // namespace

std::vector<std::vector<DMPKState>> mc_dmpk_evolve(const SdeOptions& opts) {
  check_beta(opts.beta);
  require(opts.n >= 1 && opts.n <= 64, "N must lie in [1, 64]");
  require(opts.walkers >= 1, "at least one walker is required");
  require(std::isfinite(opts.dt) && opts.dt > 0.0, "dt must be positive");
  require(opts.eta > 0.0, "eta must be positive");
  require(opts.min_level >= 0 && opts.min_level <= opts.max_depth && opts.max_depth <= 62,
          "invalid bisection levels");
  require(opts.epsilon > 0.0, "epsilon must be positive");
  check_s_points(opts.s_points);

  const std::size_t nk = opts.s_points.size();
  std::vector<std::vector<DMPKState>> out(nk, std::vector<DMPKState>(opts.walkers));
  const double gamma = dmpk_gamma(opts.beta, opts.n);

  parallel_for(
      opts.walkers,
      [&](std::size_t w) {
        const std::uint64_t ws = derive_seed(opts.seed, w);
        Rng rng(ws);
        std::normal_distribution<double> normal(0.0, 1.0);
        Walker wk{opts.n, opts.beta, gamma, 0.5 / gamma, &opts, splitmix64(ws ^ 0x5bd1e995ULL),
                  {}, {}, {}};
        wk.x.resize(opts.n);
        wk.y.resize(opts.n);
        wk.scratch.resize(static_cast<std::size_t>(opts.max_depth + 1) * 4 * opts.n);
        for (int i = 0; i < opts.n; ++i) wk.x[i] = x_from_lambda((i + 1) * opts.epsilon);
        std::uint64_t base = 0;
        double s_prev = 0.0;
        std::vector<double> dw(2 * opts.n);
        for (std::size_t k = 0; k < nk; ++k) {
          const double len = opts.s_points[k] - s_prev;
          const auto steps = static_cast<std::size_t>(std::ceil(len / opts.dt - 1e-9));
          const double h = steps > 0 ? len / steps : 0.0;
          const double sd = std::sqrt(h / gamma);
          for (std::size_t t = 0; t < steps; ++t, ++base) {
            for (int i = 0; i < 2 * opts.n; ++i) dw[i] = sd * normal(rng);
            wk.advance(h, dw.data(), base, 0, 0);
          }
          s_prev = opts.s_points[k];
          DMPKState& st = out[k][w];
          st.n = opts.n;
          st.beta = opts.beta;
          st.s = opts.s_points[k];
          st.lambda.resize(opts.n);
          for (int i = 0; i < opts.n; ++i) st.lambda[i] = lambda_from_x(wk.x[i]);
        }
      },
      opts.threads);
  return out;
}

// ---------------------------------------------------------------------------
// Transfer-matrix products

std::vector<double> lambdas_from_transfer(const Eigen::MatrixXcd& m) {
  const Eigen::Index dim = m.rows();
  require(dim == m.cols() && dim % 2 == 0 && dim > 0, "transfer matrix must be 2N x 2N");
  const Eigen::Index n = dim / 2;
  const Eigen::MatrixXcd a = m.adjoint() * m;
  // (M^+M)^{-1} = Sigma_z M^+M Sigma_z for flux-conserving M.
  Eigen::MatrixXcd b = a;
  b.topRightCorner(n, n) *= -1.0;
  b.bottomLeftCorner(n, n) *= -1.0;
  Eigen::MatrixXcd q = 0.25 * (a + b - 2.0 * Eigen::MatrixXcd::Identity(dim, dim));
  q = 0.5 * (q + q.adjoint()).eval();
  const auto ev = hermitean_eigenvalues(q);
  const double scale = std::max(1.0, ev.back());
  std::vector<double> lambda(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a0 = ev[2 * i], a1 = ev[2 * i + 1];
    if (std::abs(a0 - a1) > 1e-7 * scale)
      fail(ErrorCode::Numerical, "transfer eigenvalues are not paired");
    lambda[i] = std::max(0.0, 0.5 * (a0 + a1));
  }
  return lambda;
}

std::vector<std::vector<DMPKState>> mc_transfer_product(const SliceOptions& opts) {
  require(opts.n >= 1 && opts.n <= 64, "N must lie in [1, 64]");
  require(opts.wires >= 1, "at least one wire is required");
  require(std::isfinite(opts.delta_s) && opts.delta_s > 0.0, "delta_s must be positive");
  require(opts.reorthogonalize_every >= 1, "reorthogonalization period must be positive");
  check_s_points(opts.s_points);

  const std::size_t nk = opts.s_points.size();
  std::vector<std::size_t> slices(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    const double r = opts.s_points[k] / opts.delta_s;
    slices[k] = static_cast<std::size_t>(std::llround(r));
    require(std::abs(r - slices[k]) < 1e-6 * std::max(1.0, r),
            "s values must be multiples of delta_s");
  }
  std::vector<std::vector<DMPKState>> out(nk, std::vector<DMPKState>(opts.wires));
  const int dim = 2 * opts.n;

  parallel_for(
      opts.wires,
      [&](std::size_t w) {
        Rng rng(derive_seed(opts.seed, w));
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
        std::size_t done = 0;
        for (std::size_t k = 0; k < nk; ++k) {
          for (; done < slices[k]; ++done) {
            const auto slice = sample_transfer_slice(opts.n, opts.delta_s, rng, opts.mean_lambda);
            m = slice.m * m;
            if ((done + 1) % static_cast<std::size_t>(opts.reorthogonalize_every) == 0) {
              const auto lam = lambdas_from_transfer(m);
              const double lmax = lam.back();
              const double cond = std::pow(std::sqrt(1.0 + lmax) + std::sqrt(lmax), 2);
              if (!(cond <= 1e14)) fail(ErrorCode::Numerical, "transfer product is ill-conditioned");
              m = gamma_matrix(lam);
            }
          }
          DMPKState& st = out[k][w];
          st.n = opts.n;
          st.beta = 2;
          st.s = opts.s_points[k];
          st.lambda = lambdas_from_transfer(m);
        }
      },
      opts.threads);
  return out;
}

// ---------------------------------------------------------------------------
// Schroedinger form

double dmpk_sqrtj_potential(int beta, std::span<const double> x) {
  check_beta(beta);
  const std::size_t n = x.size();
  const auto g = dmpk_log_jacobian_gradient(beta, x);
  double w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double h = -4.0 * csch2(2.0 * x[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      h -= beta * (csch2(x[i] - x[j]) + csch2(x[i] + x[j]));
    }
    w += 0.5 * h + 0.25 * g[i] * g[i];
  }
  return w;
}

double dmpk_u_constant(int beta, int n) {
  check_beta(beta);
  return -rho_squared(beta, n) / (2.0 * dmpk_gamma(beta, n));
}

double dmpk_extracted_u(int beta, std::span<const double> x) {
  double w = dmpk_sqrtj_potential(beta, x);
  for (double xi : x) w += csch2(2.0 * xi);
  return -w / (2.0 * dmpk_gamma(beta, static_cast<int>(x.size())));
}

double dmpk_interaction(int beta, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  double w = dmpk_sqrtj_potential(beta, x);
  for (double xi : x) w += csch2(2.0 * xi);
  return (w - rho_squared(beta, n)) / (2.0 * dmpk_gamma(beta, n));
}

DecouplingResult schrodinger_decoupled_check(int beta, const RadialGridFunction& grid,
                                             const TestFunction& tf) {
  check_beta(beta);
  const int n = static_cast<int>(grid.dim());
  require(n >= 1, "grid must have at least one axis");
  for (std::size_t a = 0; a < grid.dim(); ++a)
    require(grid.origin()[a] > 0.0, "grid must lie in x > 0");
  const auto rs = dmpk_root_system(beta, n);
  const double gamma = dmpk_gamma(beta, n);
  const double u0 = dmpk_u_constant(beta, n);
  auto log_j = [&](std::span<const double> q) {
    return log_radial_jacobian(rs, Curvature::Negative, q, 1.0);
  };

  RadialGridFunction g(grid.origin(), grid.spacing(), grid.counts());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.point(i);
    g[i] = std::exp(-0.5 * log_j(p)) * tf.f(p);
  }
  const auto lb = radial_laplace_beltrami(log_j, g);

  double max_res = 0.0, max_f = 0.0;
  double su = 0.0, suu = 0.0;
  for (std::size_t i = 0; i < lb.size(); ++i) {
    const auto p = lb.point(i);
    const double f = tf.f(p);
    const double lhs = std::exp(0.5 * log_j(p)) * lb[i] / (2.0 * gamma);
    double pot = 0.0;
    for (double xi : p) pot += csch2(2.0 * xi);
    const double rhs = (tf.laplacian(p) + pot * f) / (2.0 * gamma) + u0 * f -
                       dmpk_interaction(beta, p) * f;
    max_res = std::max(max_res, std::abs(lhs - rhs));
    max_f = std::max(max_f, std::abs(f));
    // shifted by the expected constant so the variance does not cancel
    const double du = dmpk_extracted_u(beta, p) - u0;
    su += du;
    suu += du * du;
  }
  const double cnt = static_cast<double>(lb.size());
  DecouplingResult r;
  r.max_residual = max_f > 0.0 ? max_res / max_f : max_res;
  const double shift = su / cnt;
  r.u_mean = u0 + shift;
  const double var = std::max(0.0, suu / cnt - shift * shift);
  r.u_rel_std = std::sqrt(var) / std::abs(r.u_mean);
  return r;
}

}  // namespace symrmt
