#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symrmt/parallel.hpp"

namespace symrmt {

enum class EnsembleKind { Gaussian, Circular, Chiral, TransferSlice };

const char* to_string(EnsembleKind k) noexcept;
EnsembleKind parse_ensemble_kind(const std::string& name);

/// Gaussian density exp(-beta N tr H^2 / (2 v^2)); for beta = 4 the trace runs
/// over quaternion entries (half the trace of the 2N x 2N complex embedding).
/// Per real component:
///   diagonal          v^2 / (beta N)
///   off-diagonal      v^2 / (2 beta N)   (beta components per entry)
/// which gives <sum lambda^2> = v^2 (beta N + 2 - beta) / (2 beta) and a
/// semicircle of radius sqrt(2) v for large N.
/// Chiral: H = [[0, W], [W^+, 0]] with W of size p x q drawn with the
/// off-diagonal variance above at N = p + q.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Gaussian;
  int beta = 2;
  int n = 0;  // matrix size (gaussian, circular) or channel count (transfer)
  int p = 0;  // chiral blocks
  int q = 0;
  double v = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  /// Size of the complex matrix handed to the eigensolver.
  int matrix_dim() const;
};

struct Spectrum {
  std::vector<double> levels;  // ascending; eigenphases in (-pi, pi] for circular
  int degeneracy_stride = 1;   // 2 when Kramers pairs were folded
};

/// Haar unitary from QR of a complex Ginibre matrix with R's diagonal phases fixed to 1.
Eigen::MatrixXcd haar_unitary(int n, Rng& rng);

Eigen::MatrixXd sample_goe(int n, double v, Rng& rng);
Eigen::MatrixXcd sample_gaussian(const EnsembleSpec& spec, Rng& rng);
Eigen::MatrixXcd sample_circular(const EnsembleSpec& spec, Rng& rng);
Eigen::MatrixXcd sample_chiral(const EnsembleSpec& spec, Rng& rng);
/// The p x q (or 2p x 2q for beta = 4) off-diagonal block of a chiral matrix.
Eigen::MatrixXcd sample_chiral_block(const EnsembleSpec& spec, Rng& rng);

struct TransferSlice {
  Eigen::MatrixXcd m;         // 2N x 2N
  std::vector<double> lambda;  // slice parameters
};

/// M = diag(u, u') Gamma(lambda) diag(v, v') with Haar u, u', v, v' and
/// lambda_i ~ Exponential(mean_lambda). mean_lambda <= 0 selects delta_s.
TransferSlice sample_transfer_slice(int n, double delta_s, Rng& rng, double mean_lambda = 0.0);
/// Gamma(lambda) = [[sqrt(1+lambda), sqrt(lambda)], [sqrt(lambda), sqrt(1+lambda)]] blockwise.
Eigen::MatrixXcd gamma_matrix(const std::vector<double>& lambda);
/// max |M^+ Sigma_z M - Sigma_z|.
double flux_residual(const Eigen::MatrixXcd& m);

/// Symplectic dual Z A^T Z^{-1} with Z = I (x) [[0, 1], [-1, 0]].
Eigen::MatrixXcd symplectic_dual(const Eigen::MatrixXcd& a);

/// Ascending eigenvalues of a hermitean matrix; throws when ||H - H^+|| > 1e-8 ||H||.
std::vector<double> hermitean_eigenvalues(const Eigen::MatrixXcd& h);
std::vector<double> hermitean_eigenvalues(const Eigen::MatrixXd& h);
/// Ascending eigenphases in (-pi, pi]; throws when ||U^+ U - I|| > 1e-8.
std::vector<double> unitary_eigenphases(const Eigen::MatrixXcd& u);
/// Folds Kramers pairs (sorted input, optionally periodic for phases); throws
/// when partners differ by more than tol.
std::vector<double> fold_pairs(const std::vector<double>& sorted, bool periodic, double tol = 1e-8);

/// Spectrum of draw `index` with seed derive_seed(spec.seed, index).
Spectrum sample_spectrum(const EnsembleSpec& spec, std::uint64_t index);
std::vector<Spectrum> sample_spectra(const EnsembleSpec& spec, std::size_t draws,
                                     unsigned threads = 0);

}  // namespace symrmt
