#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "symrmt/grid.hpp"

namespace symrmt {

/// gamma = beta N + 2 - beta.
double dmpk_gamma(int beta, int n);

double lambda_from_T(double t);
double T_from_lambda(double lambda);
double x_from_lambda(double lambda);
double lambda_from_x(double x);

struct DMPKState {
  int n = 0;
  int beta = 2;
  double s = 0.0;
  std::vector<double> lambda;  // ascending

  double gamma() const { return dmpk_gamma(beta, n); }
  /// G / G0 = sum_n T_n.
  double conductance() const;
};

double conductance(std::span<const double> lambda);

struct ConductanceStats {
  double mean = 0.0;
  double variance = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};
ConductanceStats conductance_stats(const std::vector<DMPKState>& ensemble);

/// P_{-1/2 + i tau}(cosh xi) = (2/pi) int_0^xi cos(tau t) / sqrt(2 (cosh xi - cosh t)) dt
/// with t = xi (1 - u^2), by Gauss-Legendre on at least `nodes` points (more
/// when tau xi is large).
double conical_legendre(double tau, double xi, std::size_t nodes = 128);

/// Evaluation of the determinant columns F_m(x).
///   MehlerFock: the k-integral over conical functions.
///   HeatKernel: the same function written through the closed-form heat
///     kernel of the hyperbolic plane, 4^m (-d/dT)^{m-1} H(T, 2x) with T = s/N,
///     H = 2 pi sqrt(2) (4 pi T)^{-3/2} int_rho^inf r e^{-r^2/4T} / sqrt(cosh r - cosh rho) dr.
///   Auto: MehlerFock unless its sum cancels by more than cancellation_limit.
enum class ColumnMethod { Auto, MehlerFock, HeatKernel };

struct ExactOptions {
  ColumnMethod method = ColumnMethod::Auto;
  double cancellation_limit = 1e7;
  std::size_t heat_panels = 4;
  std::size_t heat_order = 32;
  double k_factor = 12.0;        // k_max = k_factor sqrt(N / s)
  std::size_t k_panels = 25;     // composite rule on [0, k_max]
  std::size_t k_order = 16;
  std::size_t conical_nodes = 128;
  double x_max = 0.0;            // 0: automatic cut-off for moments
  std::size_t x_panels = 40;
  std::size_t x_order = 8;
  std::size_t mc_samples = 200000;  // importance sampling for N >= 3
  std::uint64_t seed = 1;
};

/// Precomputed k-quadrature for fixed (N, s).
class ExactBeta2 {
 public:
  ExactBeta2(int n, double s, const ExactOptions& opts = {});

  int n() const noexcept { return n_; }
  double s() const noexcept { return s_; }
  double k_max() const noexcept { return k_max_; }

  /// F_m(x) = int dk exp(-k^2 s / 4N) tanh(pi k / 2) k^{2m-1} P_{(ik-1)/2}(cosh 2x), m = 1..N.
  std::vector<double> columns(double x) const;
  /// Columns by the k-integral; `cancellation` receives max_m sum|terms| / |sum|.
  std::vector<double> columns_mehler_fock(double x, double* cancellation = nullptr) const;
  std::vector<double> columns_heat_kernel(double x) const;
  /// Unnormalized density at a chamber point 0 < x_1 < ... < x_N, including
  /// the sign (-1)^{N(N-1)/2} that makes it positive.
  double density(std::span<const double> x) const;
  /// Same, from precomputed columns (any order of x; symmetric).
  double density_from_columns(std::span<const double> x,
                              const std::vector<std::vector<double>>& cols) const;

 private:
  int n_;
  double s_;
  double k_max_;
  ExactOptions opts_;
  std::vector<double> k_nodes_;
  std::vector<std::vector<double>> k_weights_;  // per m
  std::vector<std::vector<double>> q_poly_;     // (-d/dT)^j polynomials in a = r^2/4T
};

double exact_beta2_density(int n, double s, std::span<const double> x,
                           const ExactOptions& opts = {});

struct ExactMoments {
  double norm = 0.0;
  double mean_g = 0.0;
  double var_g = 0.0;
  double stderr_g = 0.0;  // zero for quadrature (N <= 2)
  double x_max = 0.0;
};
/// <G/G0> and var(G/G0) with numeric normalization: tensor quadrature for
/// N <= 2, importance-sampled ratio for N = 3, 4.
ExactMoments exact_beta2_moments(int n, double s, const ExactOptions& opts = {});

struct SdeOptions {
  int n = 2;
  int beta = 2;
  std::vector<double> s_points{1.0};
  std::size_t walkers = 1000;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  int min_level = 0;    // forced bisections of every base step
  double eta = 0.05;    // local step bound h <= eta gamma gap^2
  int max_depth = 60;   // bisection limit; deeper collisions are reflected
  double epsilon = 1e-8;  // ballistic start lambda_i = i epsilon
  unsigned threads = 0;
};

/// Integrates dx_i = (1/2gamma) d_i ln J ds + sqrt(1/gamma) dW_i with
/// J = prod |sinh^2 x_i - sinh^2 x_j|^beta prod sinh 2x_k, lambda = sinh^2 x.
/// The 1/x_i part of d_i ln J is stepped exactly (two-dimensional Bessel
/// step), the remainder by Euler-Maruyama. Base steps are bisected along a
/// Brownian bridge while the step is large compared with the smallest gap or
/// the ordering would break.
/// Returns ensembles at each requested s, in order.
std::vector<std::vector<DMPKState>> mc_dmpk_evolve(const SdeOptions& opts);

/// d_i ln J at x.
std::vector<double> dmpk_log_jacobian_gradient(int beta, std::span<const double> x);

struct SliceOptions {
  int n = 2;
  std::vector<double> s_points{1.0};
  double delta_s = 0.005;
  std::size_t wires = 1000;
  std::uint64_t seed = 1;
  int reorthogonalize_every = 32;
  double mean_lambda = 0.0;  // 0: delta_s
  unsigned threads = 0;
};

/// Lambda_i from the eigenvalues of Q = (M^+M + (M^+M)^{-1} - 2) / 4.
std::vector<double> lambdas_from_transfer(const Eigen::MatrixXcd& m);

/// Products of beta = 2 thin slices; ensembles at each requested s.
std::vector<std::vector<DMPKState>> mc_transfer_product(const SliceOptions& opts);

/// W(x) = (Laplacian J^{1/2}) / J^{1/2} from analytic derivatives of ln J.
double dmpk_sqrtj_potential(int beta, std::span<const double> x);
/// U(x) = -(W(x) + sum_i sinh^{-2} 2x_i) / (2 gamma); constant at beta = 2.
double dmpk_extracted_u(int beta, std::span<const double> x);
/// -(rho^2) / (2 gamma) with rho_i = beta (N - i) + 1.
double dmpk_u_constant(int beta, int n);
/// (W(x) + sum_i sinh^{-2} 2x_i - rho^2) / (2 gamma): the pair interaction left
/// after removing the single-particle terms; zero at beta = 2.
double dmpk_interaction(int beta, std::span<const double> x);

struct TestFunction {
  std::function<double(std::span<const double>)> f;
  std::function<double(std::span<const double>)> laplacian;
};

struct DecouplingResult {
  double max_residual;  // max |LHS - RHS| / max |f|
  double u_mean;
  double u_rel_std;
};
/// Compares J^{1/2} (1/2gamma) J^{-1} sum d J d J^{-1/2} f (flux differences)
/// with (-H0 + U) f, H0 = -(1/2gamma) sum (d^2 + sinh^{-2} 2x_i), on the grid.
DecouplingResult schrodinger_decoupled_check(int beta, const RadialGridFunction& grid,
                                             const TestFunction& tf);

}  // namespace symrmt
