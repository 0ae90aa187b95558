#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symrmt/ensembles.hpp"
#include "symrmt/error.hpp"

using namespace symrmt;

namespace {

EnsembleSpec gaussian(int beta, int n, std::uint64_t seed = 1) {
  EnsembleSpec s;
  s.kind = EnsembleKind::Gaussian;
  s.beta = beta;
  s.n = n;
  s.seed = seed;
  return s;
}

// Kolmogorov statistic sqrt(n) D against U(-pi, pi).
double ks_uniform_phase(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = (x[i] + std::numbers::pi) / (2.0 * std::numbers::pi);
    d = std::max({d, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  return std::sqrt(n) * d;
}

}  // namespace

TEST_CASE("GOE matrices are real symmetric") {
  Rng rng(3);
  const auto h = sample_gaussian(gaussian(1, 2), rng);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(h.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("GSE matrices carry the symplectic structure") {
  Rng rng(4);
  const auto h = sample_gaussian(gaussian(4, 3), rng);
  REQUIRE(h.rows() == 6);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((symplectic_dual(h) - h).cwiseAbs().maxCoeff() < 1e-12);
  auto ev = hermitean_eigenvalues(h);
  for (std::size_t i = 0; i < ev.size(); i += 2) CHECK(std::abs(ev[i] - ev[i + 1]) < 1e-10);
  for (int d = 0; d < 20; ++d) {
    const auto s = sample_spectrum(gaussian(4, 5, 9), static_cast<std::uint64_t>(d));
    CHECK(s.levels.size() == 5);
    CHECK(s.degeneracy_stride == 2);
  }
}

TEST_CASE("second moment of the Gaussian ensembles") {
  // <tr H^2> = N v^2 / (beta N) + N (N - 1) beta v^2 / (2 beta N)
  //          = v^2 (beta N + 2 - beta) / (2 beta).
  for (int beta : {1, 2, 4}) {
    auto spec = gaussian(beta, 6, 77);
    spec.v = 1.3;
    const std::size_t draws = 20000;
    const auto batch = sample_spectra(spec, draws);
    double m = 0.0, m2 = 0.0;
    for (const auto& s : batch) {
      double t = 0.0;
      for (double l : s.levels) t += l * l;
      m += t;
      m2 += t * t;
    }
    m /= draws;
    const double se = std::sqrt((m2 / draws - m * m) / draws);
    const double expect = spec.v * spec.v * (beta * 6.0 + 2.0 - beta) / (2.0 * beta);
    CAPTURE(beta);
    CHECK(std::abs(m - expect) < 4.0 * se);
  }
}

TEST_CASE("rotated GOE entries keep their law") {
  Rng rot_rng(100);
  // A fixed orthogonal rotation.
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(8, 8);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd r = qr.householderQ();
  const auto spec = gaussian(1, 8, 5);
  double m2 = 0.0, m2r = 0.0;
  const int draws = 20000;
  Rng rng(8);
  for (int d = 0; d < draws; ++d) {
    const Eigen::MatrixXd h = sample_gaussian(spec, rng).real();
    const Eigen::MatrixXd hr = r * h * r.transpose();
    m2 += h(0, 0) * h(0, 0);
    m2r += hr(0, 0) * hr(0, 0);
    if (d < 5) {
      auto e1 = hermitean_eigenvalues(h), e2 = hermitean_eigenvalues(hr);
      for (std::size_t i = 0; i < e1.size(); ++i) CHECK(std::abs(e1[i] - e2[i]) < 1e-10);
    }
  }
  const double var = 1.0 / 8.0;  // v^2 / (beta N)
  CHECK(m2 / draws == doctest::Approx(var).epsilon(0.05));
  CHECK(m2r / draws == doctest::Approx(var).epsilon(0.05));
}

TEST_CASE("chiral spectra") {
  SUBCASE("zero modes equal p - q") {
    for (auto [p, q, nu] : {std::tuple{5, 3, 2}, std::tuple{4, 4, 0}, std::tuple{6, 5, 1}}) {
      EnsembleSpec s;
      s.kind = EnsembleKind::Chiral;
      s.beta = 2;
      s.p = p;
      s.q = q;
      s.seed = 2;
      for (int d = 0; d < 5; ++d) {
        const auto sp = sample_spectrum(s, static_cast<std::uint64_t>(d));
        double scale = 0.0;
        for (double l : sp.levels) scale = std::max(scale, std::abs(l));
        int zeros = 0;
        for (double l : sp.levels) zeros += std::abs(l) <= 1e-9 * scale;
        CHECK(zeros == nu);
        // symmetric multiset
        auto neg = sp.levels;
        for (auto& l : neg) l = -l;
        std::sort(neg.begin(), neg.end());
        for (std::size_t i = 0; i < neg.size(); ++i) CHECK(std::abs(neg[i] - sp.levels[i]) < 1e-10);
      }
    }
  }
  SUBCASE("beta = 1 and 4") {
    for (int beta : {1, 4}) {
      EnsembleSpec s;
      s.kind = EnsembleKind::Chiral;
      s.beta = beta;
      s.p = 4;
      s.q = 3;
      s.seed = 3;
      const auto sp = sample_spectrum(s, 0);
      CHECK(sp.levels.size() == 7);
    }
  }
}

TEST_CASE("circular ensembles") {
  SUBCASE("COE matrices are symmetric unitary") {
    EnsembleSpec s;
    s.kind = EnsembleKind::Circular;
    s.beta = 1;
    s.n = 5;
    Rng rng(1);
    const auto u = sample_circular(s, rng);
    CHECK((u - u.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("U(1) phase is uniform") {
    EnsembleSpec s;
    s.kind = EnsembleKind::Circular;
    s.beta = 2;
    s.n = 1;
    s.seed = 12;
    std::vector<double> phases;
    for (const auto& sp : sample_spectra(s, 10000)) phases.push_back(sp.levels[0]);
    CHECK(ks_uniform_phase(phases) < 1.628);
  }
  SUBCASE("CUE eigenphase density is flat") {
    EnsembleSpec s;
    s.kind = EnsembleKind::Circular;
    s.beta = 2;
    s.n = 20;
    s.seed = 13;
    std::vector<double> counts(20, 0.0);
    double total = 0.0;
    for (const auto& sp : sample_spectra(s, 1000))
      for (double ph : sp.levels) {
        CHECK(ph > -std::numbers::pi);
        CHECK(ph <= std::numbers::pi);
        const int b = std::min(19, static_cast<int>((ph + std::numbers::pi) / (2.0 * std::numbers::pi) * 20));
        counts[b] += 1.0;
        total += 1.0;
      }
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - total / 20) * (c - total / 20) / (total / 20);
    CHECK(chi2 < 36.19);
  }
  SUBCASE("CSE folds Kramers pairs") {
    EnsembleSpec s;
    s.kind = EnsembleKind::Circular;
    s.beta = 4;
    s.n = 4;
    const auto sp = sample_spectrum(s, 0);
    CHECK(sp.levels.size() == 4);
    CHECK(sp.degeneracy_stride == 2);
  }
}

TEST_CASE("Haar unitaries") {
  Rng rng(7);
  const auto u = haar_unitary(6, rng);
  CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(unitary_eigenphases(Eigen::MatrixXcd::Identity(3, 3)) == std::vector<double>(3, 0.0));
}

TEST_CASE("eigenvalues are returned sorted") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  const auto ev = hermitean_eigenvalues(d);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(2.0));
  CHECK(ev[2] == doctest::Approx(3.0));
}

TEST_CASE("transfer slices conserve flux") {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    const auto sl = sample_transfer_slice(3, 0.05, rng);
    CHECK(flux_residual(sl.m) < 1e-10);
  }
  const auto g = gamma_matrix({0.0, 0.0});
  CHECK((g - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sampling is deterministic and thread independent") {
  const auto spec = gaussian(2, 30, 99);
  const auto a = sample_spectra(spec, 16, 1);
  const auto b = sample_spectra(spec, 16, 4);
  const auto c = sample_spectra(spec, 16, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].levels == b[i].levels);
    CHECK(a[i].levels == c[i].levels);
  }
}

TEST_CASE("validation") {
  auto s = gaussian(3, 10);
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("{1, 2, 4}"), Error);
  s = gaussian(2, 0);
  CHECK_THROWS_AS(s.validate(), Error);
  EnsembleSpec c;
  c.kind = EnsembleKind::Chiral;
  c.p = 2;
  c.q = 3;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_THROWS_AS(parse_ensemble_kind("wishart"), Error);
}
