#include "symrmt/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "symrmt/error.hpp"

namespace symrmt {

namespace {

using cd = std::complex<double>;

/// 2x2 complex block of the quaternion a0 + a1 tau1 + a2 tau2 + a3 tau3, tau_k = -i sigma_k.
Eigen::Matrix2cd quaternion_block(double a0, double a1, double a2, double a3) {
  Eigen::Matrix2cd b;
  b(0, 0) = cd(a0, -a3);
  b(0, 1) = cd(-a2, -a1);
  b(1, 0) = cd(a2, -a1);
  b(1, 1) = cd(a0, a3);
  return b;
}

/// Fills an r x c block of beta-type entries, each real component N(0, sd^2).
Eigen::MatrixXcd gaussian_block(int beta, int rows, int cols, double sd, Rng& rng) {
  std::normal_distribution<double> g(0.0, sd);
  if (beta == 4) {
    Eigen::MatrixXcd w(2 * rows, 2 * cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        const double a0 = g(rng), a1 = g(rng), a2 = g(rng), a3 = g(rng);
        w.block<2, 2>(2 * i, 2 * j) = quaternion_block(a0, a1, a2, a3);
      }
    return w;
  }
  Eigen::MatrixXcd w(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = g(rng);
      const double im = beta == 2 ? g(rng) : 0.0;
      w(i, j) = cd(re, im);
    }
  return w;
}

}  // namespace

const char* to_string(EnsembleKind k) noexcept {
  switch (k) {
    case EnsembleKind::Gaussian: return "gaussian";
    case EnsembleKind::Circular: return "circular";
    case EnsembleKind::Chiral: return "chiral";
    case EnsembleKind::TransferSlice: return "transfer";
  }
  return "?";
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
  if (name == "gaussian") return EnsembleKind::Gaussian;
  if (name == "circular") return EnsembleKind::Circular;
  if (name == "chiral") return EnsembleKind::Chiral;
  if (name == "transfer" || name == "transfer_slice") return EnsembleKind::TransferSlice;
  fail(ErrorCode::InvalidArgument,
       "unknown ensemble kind '" + name + "' (expected gaussian, circular, chiral or transfer)");
}

void EnsembleSpec::validate() const {
  if (beta != 1 && beta != 2 && beta != 4)
    fail(ErrorCode::InvalidArgument,
         "beta must be one of {1, 2, 4} (got " + std::to_string(beta) + ")");
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::InvalidArgument, "scale v must be positive");
  switch (kind) {
    case EnsembleKind::Chiral:
      if (q < 1 || p < q)
        fail(ErrorCode::InvalidArgument, "chiral ensemble requires p >= q >= 1");
      break;
    case EnsembleKind::TransferSlice:
      if (beta != 2) fail(ErrorCode::InvalidArgument, "transfer slices are implemented for beta = 2 only");
      [[fallthrough]];
    default:
      if (n < 1) fail(ErrorCode::InvalidArgument, "matrix size n must be >= 1");
  }
}

int EnsembleSpec::matrix_dim() const {
  const int base = kind == EnsembleKind::Chiral ? p + q
                   : kind == EnsembleKind::TransferSlice ? 2 * n
                                                          : n;
  return beta == 4 ? 2 * base : base;
}

Eigen::MatrixXcd haar_unitary(int n, Rng& rng) {
  require(n >= 1, "haar_unitary: n must be >= 1");
  std::normal_distribution<double> g(0.0, std::numbers::sqrt2 / 2.0);
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cd(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const cd d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= a > 0.0 ? d / a : cd(1.0);
  }
  return q;
}

Eigen::MatrixXd sample_goe(int n, double v, Rng& rng) {
  const double sd_diag = v / std::sqrt(double(n));
  const double sd_off = v / std::sqrt(2.0 * n);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = sd_diag * g(rng);
    for (int j = i + 1; j < n; ++j) h(i, j) = h(j, i) = sd_off * g(rng);
  }
  return h;
}

Eigen::MatrixXcd sample_gaussian(const EnsembleSpec& spec, Rng& rng) {
  spec.validate();
  require(spec.kind == EnsembleKind::Gaussian, "sample_gaussian: kind must be gaussian");
  const int n = spec.n;
  const double b = spec.beta;
  const double sd_diag = spec.v / std::sqrt(b * n);
  const double sd_off = spec.v / std::sqrt(2.0 * b * n);
  std::normal_distribution<double> g(0.0, 1.0);
  if (spec.beta == 4) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
      const double a0 = sd_diag * g(rng);
      h.block<2, 2>(2 * i, 2 * i) = quaternion_block(a0, 0, 0, 0);
      for (int j = i + 1; j < n; ++j) {
        const double a0o = sd_off * g(rng), a1 = sd_off * g(rng), a2 = sd_off * g(rng),
                     a3 = sd_off * g(rng);
        const Eigen::Matrix2cd blk = quaternion_block(a0o, a1, a2, a3);
        h.block<2, 2>(2 * i, 2 * j) = blk;
        h.block<2, 2>(2 * j, 2 * i) = blk.adjoint();
      }
    }
    return h;
  }
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = sd_diag * g(rng);
    for (int j = i + 1; j < n; ++j) {
      const double re = sd_off * g(rng);
      const double im = spec.beta == 2 ? sd_off * g(rng) : 0.0;
      h(i, j) = cd(re, im);
      h(j, i) = cd(re, -im);
    }
  }
  return h;
}

Eigen::MatrixXcd symplectic_dual(const Eigen::MatrixXcd& a) {
  require(a.rows() == a.cols() && a.rows() % 2 == 0, "symplectic_dual: need even square matrix");
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; i += 2) {
    z(i, i + 1) = 1.0;
    z(i + 1, i) = -1.0;
  }
  return z * a.transpose() * z.transpose();
}

Eigen::MatrixXcd sample_circular(const EnsembleSpec& spec, Rng& rng) {
  spec.validate();
  require(spec.kind == EnsembleKind::Circular, "sample_circular: kind must be circular");
  switch (spec.beta) {
    case 1: {
      const Eigen::MatrixXcd u = haar_unitary(spec.n, rng);
      return u.transpose() * u;
    }
    case 2: return haar_unitary(spec.n, rng);
    default: {
      const Eigen::MatrixXcd u = haar_unitary(2 * spec.n, rng);
      return symplectic_dual(u) * u;
    }
  }
}

Eigen::MatrixXcd sample_chiral_block(const EnsembleSpec& spec, Rng& rng) {
  spec.validate();
  require(spec.kind == EnsembleKind::Chiral, "sample_chiral: kind must be chiral");
  const double sd = spec.v / std::sqrt(2.0 * spec.beta * (spec.p + spec.q));
  return gaussian_block(spec.beta, spec.p, spec.q, sd, rng);
}

Eigen::MatrixXcd sample_chiral(const EnsembleSpec& spec, Rng& rng) {
  const Eigen::MatrixXcd w = sample_chiral_block(spec, rng);
  const Eigen::Index r = w.rows(), c = w.cols();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(r + c, r + c);
  h.topRightCorner(r, c) = w;
  h.bottomLeftCorner(c, r) = w.adjoint();
  return h;
}

Eigen::MatrixXcd gamma_matrix(const std::vector<double>& lambda) {
  const auto n = static_cast<Eigen::Index>(lambda.size());
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = lambda[static_cast<std::size_t>(i)];
    require(l >= 0.0, "gamma_matrix: lambda must be non-negative");
    const double c = std::sqrt(1.0 + l), s = std::sqrt(l);
    g(i, i) = c;
    g(n + i, n + i) = c;
    g(i, n + i) = s;
    g(n + i, i) = s;
  }
  return g;
}

TransferSlice sample_transfer_slice(int n, double delta_s, Rng& rng, double mean_lambda) {
  require(n >= 1, "transfer slice: n must be >= 1");
  if (!(delta_s > 0.0)) fail(ErrorCode::InvalidArgument, "transfer slice: delta_s must be positive");
  const double mean = mean_lambda > 0.0 ? mean_lambda : delta_s;
  std::exponential_distribution<double> ex(1.0 / mean);
  TransferSlice out;
  out.lambda.resize(static_cast<std::size_t>(n));
  for (auto& l : out.lambda) l = ex(rng);
  const Eigen::MatrixXcd u = haar_unitary(n, rng), u2 = haar_unitary(n, rng);
  const Eigen::MatrixXcd w = haar_unitary(n, rng), w2 = haar_unitary(n, rng);
  Eigen::MatrixXcd left = Eigen::MatrixXcd::Zero(2 * n, 2 * n), right = left;
  left.topLeftCorner(n, n) = u;
  left.bottomRightCorner(n, n) = u2;
  right.topLeftCorner(n, n) = w;
  right.bottomRightCorner(n, n) = w2;
  out.m = left * gamma_matrix(out.lambda) * right;
  return out;
}

double flux_residual(const Eigen::MatrixXcd& m) {
  const Eigen::Index n2 = m.rows();
  Eigen::MatrixXcd sz = Eigen::MatrixXcd::Identity(n2, n2);
  sz.bottomRightCorner(n2 / 2, n2 / 2) *= -1.0;
  return (m.adjoint() * sz * m - sz).cwiseAbs().maxCoeff();
}

std::vector<double> hermitean_eigenvalues(const Eigen::MatrixXcd& h) {
  require(h.rows() == h.cols(), "eigenvalues: matrix must be square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    fail(ErrorCode::InvalidArgument, "eigenvalues: matrix is not hermitean");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::Numerical, "eigenvalues: solver failed");
  const auto& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

std::vector<double> hermitean_eigenvalues(const Eigen::MatrixXd& h) {
  require(h.rows() == h.cols(), "eigenvalues: matrix must be square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    fail(ErrorCode::InvalidArgument, "eigenvalues: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::Numerical, "eigenvalues: solver failed");
  const auto& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

std::vector<double> unitary_eigenphases(const Eigen::MatrixXcd& u) {
  require(u.rows() == u.cols(), "eigenphases: matrix must be square");
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > 1e-8)
    fail(ErrorCode::InvalidArgument, "eigenphases: matrix is not unitary");
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u, false);
  if (schur.info() != Eigen::Success) fail(ErrorCode::Numerical, "eigenphases: Schur failed");
  const auto& t = schur.matrixT();
  std::vector<double> ph(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    double a = std::arg(t(i, i));
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    ph[static_cast<std::size_t>(i)] = a;
  }
  std::sort(ph.begin(), ph.end());
  return ph;
}

std::vector<double> fold_pairs(const std::vector<double>& sorted, bool periodic, double tol) {
  require(sorted.size() % 2 == 0, "fold_pairs: odd number of levels");
  const std::size_t n = sorted.size();
  auto try_offset = [&](std::size_t off, std::vector<double>& out) {
    out.clear();
    for (std::size_t k = 0; k < n; k += 2) {
      const double a = sorted[(k + off) % n];
      double b = sorted[(k + off + 1) % n];
      if (off && k + off + 1 >= n) b += 2.0 * std::numbers::pi;
      if (std::abs(a - b) > tol) return false;
      double m = 0.5 * (a + b);
      if (m > std::numbers::pi) m -= 2.0 * std::numbers::pi;
      out.push_back(m);
    }
    return true;
  };
  std::vector<double> out;
  if (try_offset(0, out)) return out;
  if (periodic && try_offset(1, out)) {
    std::sort(out.begin(), out.end());
    return out;
  }
  fail(ErrorCode::Numerical, "fold_pairs: levels are not doubly degenerate");
}

Spectrum sample_spectrum(const EnsembleSpec& spec, std::uint64_t index) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, index));
  Spectrum s;
  switch (spec.kind) {
    case EnsembleKind::Gaussian:
      if (spec.beta == 1) {
        s.levels = hermitean_eigenvalues(sample_goe(spec.n, spec.v, rng));
      } else {
        s.levels = hermitean_eigenvalues(sample_gaussian(spec, rng));
      }
      break;
    case EnsembleKind::Circular:
      s.levels = unitary_eigenphases(sample_circular(spec, rng));
      break;
    case EnsembleKind::Chiral:
      s.levels = hermitean_eigenvalues(sample_chiral(spec, rng));
      break;
    case EnsembleKind::TransferSlice:
      fail(ErrorCode::InvalidArgument, "transfer slices have no level spectrum; use the dmpk module");
  }
  if (spec.beta == 4) {
    const double scale = s.levels.empty() ? 1.0 : std::max(1.0, std::abs(s.levels.back()));
    s.levels = fold_pairs(s.levels, spec.kind == EnsembleKind::Circular, 1e-8 * scale);
    s.degeneracy_stride = 2;
  }
  return s;
}

std::vector<Spectrum> sample_spectra(const EnsembleSpec& spec, std::size_t draws,
                                     unsigned threads) {
  spec.validate();
  std::vector<Spectrum> out(draws);
  parallel_for(draws, [&](std::size_t i) { out[i] = sample_spectrum(spec, i); }, threads);
  return out;
}

}  // namespace symrmt
