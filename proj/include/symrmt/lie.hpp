#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace symrmt {

/// Real structure constants C^k_{ij} of [X_i, X_j] = C^k_{ij} X_k.
class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * dim_ + j) * dim_ + k];
  }
  /// Sets C^k_{ij} and C^k_{ji} = -C^k_{ij} together.
  void set(std::size_t i, std::size_t j, std::size_t k, double value);

  double antisymmetry_residual() const;
  double jacobi_residual() const;

  /// Expands every commutator [B_i, B_j] in the basis by least squares.
  /// The basis must be linearly independent over R and closed under brackets.
  static StructureConstants from_matrices(const std::vector<Eigen::MatrixXcd>& basis);

 private:
  std::size_t dim_ = 0;
  std::vector<double> c_;
};

struct Signature {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;
  bool operator==(const Signature&) const = default;
};

struct KillingForm {
  Eigen::MatrixXd g;
  Eigen::VectorXd eigenvalues;
  Signature signature;
};

/// g_{ij} = sum_{r,s} C^r_{is} C^s_{jr}. Eigenvalues with
/// |e| < 1e-10 max|e| count as zero.
KillingForm killing_form(const StructureConstants& sc);

/// Negative definite check; throws NonSemisimple on a degenerate form.
bool is_compact(const KillingForm& kf);

/// Basis change Y_k = c_k X_k with c_k in {1, i}; the resulting constants
/// (c_i c_j / c_k) C^k_{ij} must stay real.
StructureConstants weyl_trick(const StructureConstants& sc, const std::vector<bool>& multiply_by_i);

/// Relabels the basis: new index a refers to old index order[a].
StructureConstants permuted(const StructureConstants& sc, const std::vector<std::size_t>& order);
Eigen::MatrixXd permuted(const Eigen::MatrixXd& g, const std::vector<std::size_t>& order);

/// Coefficients phi_0..phi_n of det(sum_i t^i rho(X_i) - lambda I) =
/// sum_k (-lambda)^{n-k} phi_k, from determinants at n+1 nodes.
std::vector<std::complex<double>> secular_casimir_coefficients(
    const std::vector<Eigen::MatrixXcd>& rep, const std::vector<double>& t);

/// Number of functionally independent phi_k (k >= 1) at t, from the rank of
/// their finite-difference gradient matrix.
int independent_secular_invariants(const std::vector<Eigen::MatrixXcd>& rep,
                                   const std::vector<double>& t);

/// C = g^{ij} rho(X_i) rho(X_j).
Eigen::MatrixXcd quadratic_casimir(const StructureConstants& sc,
                                   const std::vector<Eigen::MatrixXcd>& rep);

/// max_i ||[C, rho(X_i)]||_max.
double quadratic_casimir_check(const StructureConstants& sc,
                               const std::vector<Eigen::MatrixXcd>& rep);

namespace fixtures {

/// [L_i, L_j] = 1/2 eps_{ijk} L_k.
StructureConstants so3();
/// [L_i, L_j] = -1/sqrt2 eps_{ijk} L_k.
StructureConstants so3_normalized();
/// Basis (Sigma_1, Sigma_2, Sigma_3) with C^3_12 = C^1_23 = -1/sqrt2, C^2_31 = 1/sqrt2.
StructureConstants so21();
/// Basis (J, P_1, P_2) with [J, P_i] = -eps^{ij} P_j; normalized scales J by 1/sqrt2.
StructureConstants e2(bool normalized);
/// [X_a, X_b] = -eps_{abc} X_c, X_a = i J_a.
StructureConstants su2();
/// One-dimensional abelian algebra.
StructureConstants abelian1();

/// Defining representation matching so3(): (L_i)_{jk} = -1/2 eps_{ijk}.
std::vector<Eigen::MatrixXcd> so3_defining();
/// Spin-j representation X_a = i J_a of su2(), dimension 2j+1 (two_j = 2j).
std::vector<Eigen::MatrixXcd> su2_spin(int two_j);
/// X_k = i T_k / 2 built from the Gell-Mann matrices, k = 1..8.
std::vector<Eigen::MatrixXcd> su3_gell_mann();
/// Indices (0-based) of the real generators {X_2, X_5, X_7} and the rest.
std::vector<std::size_t> su3_k_indices();
std::vector<std::size_t> su3_p_indices();

}  // namespace fixtures

struct FixtureResult {
  std::string name;
  bool pass;
  double error;
  std::string detail;
};

/// Runs the Killing-form, compactness, Weyl-trick, secular and Casimir fixtures.
std::vector<FixtureResult> run_lie_fixtures();

}  // namespace symrmt
