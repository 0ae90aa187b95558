#include "symrmt/lie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symrmt/error.hpp"

namespace symrmt {

namespace {

int levi_civita(std::size_t i, std::size_t j, std::size_t k) {
  if (i == j || j == k || i == k) return 0;
  return ((j + 3 - i) % 3 == 1) ? 1 : -1;
}

StructureConstants from_epsilon(double factor) {
  StructureConstants sc(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        const int e = levi_civita(i, j, k);
        if (e != 0) sc.set(i, j, k, factor * e);
      }
  return sc;
}

Eigen::MatrixXcd pencil(const std::vector<Eigen::MatrixXcd>& rep, const std::vector<double>& t) {
  require(!rep.empty(), "secular: empty representation");
  require(rep.size() == t.size(), "secular: number of generators must match length of t");
  const auto n = rep.front().rows();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < rep.size(); ++i) {
    require(rep[i].rows() == n && rep[i].cols() == n,
            "secular: generators must be square and of equal size");
    a += t[i] * rep[i];
  }
  return a;
}

Signature signature_of(const Eigen::VectorXd& ev) {
  Signature s;
  const double scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (scale == 0.0 || std::abs(ev[i]) < 1e-10 * scale)
      ++s.n_zero;
    else if (ev[i] > 0.0)
      ++s.n_plus;
    else
      ++s.n_minus;
  }
  return s;
}

Eigen::MatrixXd inverse_metric(const StructureConstants& sc) {
  const KillingForm kf = killing_form(sc);
  if (kf.signature.n_zero != 0)
    fail(ErrorCode::NonSemisimple, "Killing form is degenerate (non-semisimple algebra)");
  return kf.g.inverse();
}

}  // namespace

StructureConstants::StructureConstants(std::size_t dim) : dim_(dim), c_(dim * dim * dim, 0.0) {
  require(dim >= 1, "structure constants: dimension must be positive");
}

void StructureConstants::set(std::size_t i, std::size_t j, std::size_t k, double value) {
  require(i < dim_ && j < dim_ && k < dim_, "structure constants: index out of range");
  require(i != j || value == 0.0, "structure constants: C^k_ii must vanish");
  c_[(i * dim_ + j) * dim_ + k] = value;
  c_[(j * dim_ + i) * dim_ + k] = -value;
}

double StructureConstants::antisymmetry_residual() const {
  double r = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k)
        r = std::max(r, std::abs((*this)(i, j, k) + (*this)(j, i, k)));
  return r;
}

double StructureConstants::jacobi_residual() const {
  double r = 0.0;
  const auto& C = *this;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k)
        for (std::size_t l = 0; l < dim_; ++l) {
          double s = 0.0;
          for (std::size_t m = 0; m < dim_; ++m)
            s += C(i, j, m) * C(m, k, l) + C(j, k, m) * C(m, i, l) + C(k, i, m) * C(m, j, l);
          r = std::max(r, std::abs(s));
        }
  return r;
}

StructureConstants StructureConstants::from_matrices(const std::vector<Eigen::MatrixXcd>& basis) {
  require(!basis.empty(), "from_matrices: empty basis");
  const std::size_t d = basis.size();
  const auto n = basis.front().rows();
  const Eigen::Index len = 2 * n * n;
  Eigen::MatrixXd m(len, static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) {
    require(basis[k].rows() == n && basis[k].cols() == n, "from_matrices: shape mismatch");
    for (Eigen::Index a = 0; a < n * n; ++a) {
      m(a, static_cast<Eigen::Index>(k)) = basis[k].data()[a].real();
      m(n * n + a, static_cast<Eigen::Index>(k)) = basis[k].data()[a].imag();
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  if (qr.rank() != static_cast<Eigen::Index>(d))
    fail(ErrorCode::InvalidArgument, "from_matrices: basis is linearly dependent over R");
  double scale = m.cwiseAbs().maxCoeff();
  StructureConstants sc(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const Eigen::MatrixXcd comm = basis[i] * basis[j] - basis[j] * basis[i];
      Eigen::VectorXd rhs(len);
      for (Eigen::Index a = 0; a < n * n; ++a) {
        rhs[a] = comm.data()[a].real();
        rhs[n * n + a] = comm.data()[a].imag();
      }
      const Eigen::VectorXd c = qr.solve(rhs);
      if ((m * c - rhs).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, scale * scale))
        fail(ErrorCode::InvalidArgument, "from_matrices: basis is not closed under brackets");
      for (std::size_t k = 0; k < d; ++k) sc.set(i, j, k, c[static_cast<Eigen::Index>(k)]);
    }
  return sc;
}

KillingForm killing_form(const StructureConstants& sc) {
  const std::size_t d = sc.dim();
  KillingForm kf;
  kf.g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t t = 0; t < d; ++t) s += sc(i, t, r) * sc(j, r, t);
      kf.g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
      kf.g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = s;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kf.g, Eigen::EigenvaluesOnly);
  kf.eigenvalues = es.eigenvalues();
  kf.signature = signature_of(kf.eigenvalues);
  return kf;
}

bool is_compact(const KillingForm& kf) {
  if (kf.signature.n_zero != 0)
    fail(ErrorCode::NonSemisimple, "Killing form is degenerate (non-semisimple algebra)");
  for (Eigen::Index i = 0; i < kf.eigenvalues.size(); ++i)
    if (!(kf.eigenvalues[i] < -1e-10)) return false;
  return true;
}

StructureConstants weyl_trick(const StructureConstants& sc, const std::vector<bool>& multiply_by_i) {
  const std::size_t d = sc.dim();
  require(multiply_by_i.size() == d, "weyl_trick: one flag per generator");
  StructureConstants out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        const double c = sc(i, j, k);
        if (c == 0.0) continue;
        // powers of i: c_i c_j / c_k
        const int p = int(multiply_by_i[i]) + int(multiply_by_i[j]) - int(multiply_by_i[k]);
        const int q = ((p % 4) + 4) % 4;
        if (q % 2 == 1)
          fail(ErrorCode::InvalidArgument, "weyl_trick: resulting structure constants not real");
        out.set(i, j, k, q == 0 ? c : -c);
      }
  return out;
}

StructureConstants permuted(const StructureConstants& sc, const std::vector<std::size_t>& order) {
  const std::size_t d = sc.dim();
  require(order.size() == d, "permuted: order length mismatch");
  std::vector<std::size_t> inv(d, d);
  for (std::size_t a = 0; a < d; ++a) {
    require(order[a] < d && inv[order[a]] == d, "permuted: not a permutation");
    inv[order[a]] = a;
  }
  StructureConstants out(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) out.set(a, b, c, sc(order[a], order[b], order[c]));
  return out;
}

Eigen::MatrixXd permuted(const Eigen::MatrixXd& g, const std::vector<std::size_t>& order) {
  const auto d = static_cast<std::size_t>(g.rows());
  require(order.size() == d, "permuted: order length mismatch");
  Eigen::MatrixXd out(g.rows(), g.cols());
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          g(static_cast<Eigen::Index>(order[a]), static_cast<Eigen::Index>(order[b]));
  return out;
}

std::vector<std::complex<double>> secular_casimir_coefficients(
    const std::vector<Eigen::MatrixXcd>& rep, const std::vector<double>& t) {
  const Eigen::MatrixXcd a = pencil(rep, t);
  const auto n = static_cast<std::size_t>(a.rows());
  const std::size_t nodes = n + 1;
  // Interpolation on a circle of radius r: the Vandermonde system at roots of
  // unity is inverted by a discrete Fourier sum.
  const double r = std::max(1.0, a.cwiseAbs().maxCoeff() * static_cast<double>(n));
  std::vector<std::complex<double>> values(nodes);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  for (std::size_t m = 0; m < nodes; ++m) {
    const std::complex<double> lambda =
        std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(nodes));
    values[m] = (a - lambda * id).determinant();
  }
  // p(lambda) = sum_j c_j lambda^j; phi_k = (-1)^{n-k} c_{n-k}.
  std::vector<std::complex<double>> phi(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    std::complex<double> s = 0.0;
    for (std::size_t m = 0; m < nodes; ++m)
      s += values[m] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j * m) /
                                           static_cast<double>(nodes));
    const std::complex<double> c = s / (static_cast<double>(nodes) * std::pow(r, double(j)));
    const std::size_t k = n - j;
    phi[k] = ((n - k) % 2 == 0) ? c : -c;
  }
  // Clean round-off relative to the scale of the determinant values.
  double scale = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) scale = std::max(scale, std::abs(phi[k]));
  for (auto& p : phi) {
    if (std::abs(p.real()) < 1e-14 * scale) p.real(0.0);
    if (std::abs(p.imag()) < 1e-14 * scale) p.imag(0.0);
  }
  return phi;
}

int independent_secular_invariants(const std::vector<Eigen::MatrixXcd>& rep,
                                   const std::vector<double>& t) {
  const std::size_t d = t.size();
  const auto base = secular_casimir_coefficients(rep, t);
  const std::size_t n = base.size() - 1;
  Eigen::MatrixXd grad(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const double h = 1e-4 * (1.0 + std::abs(t[i]));
    auto tp = t, tm = t;
    tp[i] += h;
    tm[i] -= h;
    const auto fp = secular_casimir_coefficients(rep, tp);
    const auto fm = secular_casimir_coefficients(rep, tm);
    for (std::size_t k = 1; k <= n; ++k) {
      const auto g = (fp[k] - fm[k]) / (2.0 * h);
      grad(static_cast<Eigen::Index>(2 * (k - 1)), static_cast<Eigen::Index>(i)) = g.real();
      grad(static_cast<Eigen::Index>(2 * (k - 1) + 1), static_cast<Eigen::Index>(i)) = g.imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(grad);
  const auto sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-6 * sv[0]) ++rank;
  return rank;
}

Eigen::MatrixXcd quadratic_casimir(const StructureConstants& sc,
                                   const std::vector<Eigen::MatrixXcd>& rep) {
  require(rep.size() == sc.dim(), "casimir: representation must have one matrix per generator");
  const Eigen::MatrixXd ginv = inverse_metric(sc);
  const auto n = rep.front().rows();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < rep.size(); ++i)
    for (std::size_t j = 0; j < rep.size(); ++j) {
      const double w = ginv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (w != 0.0) c += w * rep[i] * rep[j];
    }
  return c;
}

double quadratic_casimir_check(const StructureConstants& sc,
                               const std::vector<Eigen::MatrixXcd>& rep) {
  const Eigen::MatrixXcd c = quadratic_casimir(sc, rep);
  double r = 0.0;
  for (const auto& x : rep) r = std::max(r, (c * x - x * c).cwiseAbs().maxCoeff());
  return r;
}

namespace fixtures {

StructureConstants so3() { return from_epsilon(0.5); }

StructureConstants so3_normalized() { return from_epsilon(-1.0 / std::numbers::sqrt2); }

StructureConstants so21() {
  const double a = 1.0 / std::numbers::sqrt2;
  StructureConstants sc(3);
  sc.set(0, 1, 2, -a);  // [S1,S2] = -a S3
  sc.set(1, 2, 0, -a);  // [S2,S3] = -a S1
  sc.set(2, 0, 1, a);   // [S3,S1] = +a S2
  return sc;
}

StructureConstants e2(bool normalized) {
  const double s = normalized ? 1.0 / std::numbers::sqrt2 : 1.0;
  StructureConstants sc(3);
  sc.set(0, 1, 2, -s);  // [J,P1] = -P2
  sc.set(0, 2, 1, s);   // [J,P2] = +P1
  return sc;
}

StructureConstants su2() { return from_epsilon(-1.0); }

StructureConstants abelian1() { return StructureConstants(1); }

std::vector<Eigen::MatrixXcd> so3_defining() {
  std::vector<Eigen::MatrixXcd> rep(3, Eigen::MatrixXcd::Zero(3, 3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        rep[i](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
            -0.5 * levi_civita(i, j, k);
  return rep;
}

std::vector<Eigen::MatrixXcd> su2_spin(int two_j) {
  require(two_j >= 1, "su2_spin: need 2j >= 1");
  const int dim = two_j + 1;
  const double j = 0.5 * two_j;
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    const double m = j - a;
    jz(a, a) = m;
    if (a > 0) jp(a - 1, a) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Eigen::MatrixXcd jm = jp.adjoint();
  const std::complex<double> I(0.0, 1.0);
  const Eigen::MatrixXcd jx = 0.5 * (jp + jm);
  const Eigen::MatrixXcd jy = -0.5 * I * (jp - jm);
  return {I * jx, I * jy, I * jz};
}

std::vector<Eigen::MatrixXcd> su3_gell_mann() {
  using C = std::complex<double>;
  const C I(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> t(8, Eigen::MatrixXcd::Zero(3, 3));
  t[0](0, 1) = t[0](1, 0) = 1.0;
  t[1](0, 1) = -I;
  t[1](1, 0) = I;
  t[2](0, 0) = 1.0;
  t[2](1, 1) = -1.0;
  t[3](0, 2) = t[3](2, 0) = 1.0;
  t[4](0, 2) = -I;
  t[4](2, 0) = I;
  t[5](1, 2) = t[5](2, 1) = 1.0;
  t[6](1, 2) = -I;
  t[6](2, 1) = I;
  t[7](0, 0) = t[7](1, 1) = 1.0 / std::sqrt(3.0);
  t[7](2, 2) = -2.0 / std::sqrt(3.0);
  for (auto& m : t) m *= 0.5 * I;
  return t;
}

std::vector<std::size_t> su3_k_indices() { return {1, 4, 6}; }
std::vector<std::size_t> su3_p_indices() { return {0, 2, 3, 5, 7}; }

}  // namespace fixtures

std::vector<FixtureResult> run_lie_fixtures() {
  std::vector<FixtureResult> out;
  auto diag_error = [](const Eigen::MatrixXd& g, const std::vector<double>& d) {
    Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    for (std::size_t i = 0; i < d.size(); ++i)
      ref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return (g - ref).cwiseAbs().maxCoeff();
  };
  auto add = [&out](std::string name, double err, double tol, std::string detail = {}) {
    out.push_back({std::move(name), err < tol, err, std::move(detail)});
  };

  add("so3 killing form = -1/2 I", diag_error(killing_form(fixtures::so3()).g, {-0.5, -0.5, -0.5}),
      1e-12);
  add("so3 normalized killing form = -I",
      diag_error(killing_form(fixtures::so3_normalized()).g, {-1, -1, -1}), 1e-12);
  add("so(2,1) killing form = diag(1,1,-1) in order (3,1,2)",
      diag_error(permuted(killing_form(fixtures::so21()).g, {2, 0, 1}), {1, 1, -1}), 1e-12);
  {
    const KillingForm kf = killing_form(fixtures::e2(true));
    const bool sig = kf.signature == Signature{0, 1, 2};
    add("e2 killing form = diag(-1,0,0), degenerate", sig ? diag_error(kf.g, {-1, 0, 0}) : 1.0,
        1e-12, "signature (+,-,0) = (" + std::to_string(kf.signature.n_plus) + "," +
                   std::to_string(kf.signature.n_minus) + "," +
                   std::to_string(kf.signature.n_zero) + ")");
    const KillingForm lit = killing_form(fixtures::e2(false));
    add("e2 literal brackets signature (0,1,2)", lit.signature == Signature{0, 1, 2} ? 0.0 : 1.0,
        0.5, "g_JJ = " + std::to_string(lit.g(0, 0)));
  }
  add("so3 compact", is_compact(killing_form(fixtures::so3())) ? 0.0 : 1.0, 0.5);
  add("so(2,1) non-compact", is_compact(killing_form(fixtures::so21())) ? 1.0 : 0.0, 0.5);
  {
    double err = 1.0;
    try {
      (void)is_compact(killing_form(fixtures::e2(true)));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonSemisimple) err = 0.0;
    }
    add("e2 compactness rejected as non-semisimple", err, 0.5);
  }
  add("weyl trick so(2,1) -> so3 metric -I",
      diag_error(killing_form(weyl_trick(fixtures::so21(), {true, false, true})).g, {-1, -1, -1}),
      1e-12);
  {
    const auto basis = fixtures::su3_gell_mann();
    const StructureConstants sc = StructureConstants::from_matrices(basis);
    add("su3 killing form = -3 I", diag_error(killing_form(sc).g, std::vector<double>(8, -3.0)),
        1e-10);
    const auto K = fixtures::su3_k_indices();
    const auto P = fixtures::su3_p_indices();
    double leak = 0.0;
    for (auto a : K)
      for (auto b : K)
        for (auto p : P) leak = std::max(leak, std::abs(sc(a, b, p)));
    for (auto a : K)
      for (auto b : P)
        for (auto k : K) leak = std::max(leak, std::abs(sc(a, b, k)));
    for (auto a : P)
      for (auto b : P)
        for (auto p : P) leak = std::max(leak, std::abs(sc(a, b, p)));
    add("su3 split K={X2,X5,X7}: [K,K]<K, [K,P]<P, [P,P]<K", leak, 1e-12);
  }
  {
    const std::vector<double> t{0.3, -1.1, 0.7};
    const auto phi = secular_casimir_coefficients(fixtures::so3_defining(), t);
    const double t2 = t[0] * t[0] + t[1] * t[1] + t[2] * t[2];
    double err = std::abs(phi[0] - 1.0) + std::abs(phi[1]) + std::abs(phi[2] - 0.25 * t2) +
                 std::abs(phi[3]);
    add("so3 secular coefficient = t^2/4", err, 1e-12);
    const int ind = independent_secular_invariants(fixtures::so3_defining(), t);
    add("so3 independent secular invariants = rank 1", ind == 1 ? 0.0 : 1.0, 0.5,
        "count " + std::to_string(ind));
  }
  add("so3 casimir commutes", quadratic_casimir_check(fixtures::so3(), fixtures::so3_defining()),
      1e-12);
  add("su2 spin-1 casimir commutes", quadratic_casimir_check(fixtures::su2(), fixtures::su2_spin(2)),
      1e-10);
  {
    double jac = 0.0;
    for (const auto& sc : {fixtures::so3(), fixtures::so3_normalized(), fixtures::so21(),
                           fixtures::e2(false), fixtures::e2(true), fixtures::su2()})
      jac = std::max(jac, sc.jacobi_residual());
    add("jacobi identity on all fixtures", jac, 1e-12);
  }
  return out;
}

}  // namespace symrmt
