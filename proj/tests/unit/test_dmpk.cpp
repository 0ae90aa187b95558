#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "symrmt/cartan.hpp"
#include "symrmt/dmpk.hpp"
#include "symrmt/ensembles.hpp"
#include "symrmt/error.hpp"

using namespace symrmt;

TEST_CASE("coordinate maps") {
  CHECK(lambda_from_T(1.0) == 0.0);
  CHECK(x_from_lambda(0.0) == 0.0);
  CHECK(lambda_from_T(0.5) == doctest::Approx(1.0));
  const double l = lambda_from_x(1.0);
  CHECK(l == doctest::Approx(std::sinh(1.0) * std::sinh(1.0)));
  CHECK(T_from_lambda(l) == doctest::Approx(1.0 / (std::cosh(1.0) * std::cosh(1.0))));
  for (double x : {0.01, 0.5, 2.0, 7.0}) CHECK(x_from_lambda(lambda_from_x(x)) == doctest::Approx(x).epsilon(1e-13));
  CHECK_THROWS_AS(lambda_from_T(0.0), Error);
  CHECK_THROWS_AS(lambda_from_T(1.5), Error);
  CHECK(dmpk_gamma(2, 3) == 6.0);
  CHECK(dmpk_gamma(1, 3) == 4.0);
  CHECK(dmpk_gamma(4, 2) == 6.0);
}

TEST_CASE("Landauer conductance") {
  CHECK(conductance(std::vector<double>{0.0, 0.0, 0.0}) == 3.0);
  CHECK(conductance(std::vector<double>{1.0, 3.0}) == doctest::Approx(0.75));
  CHECK(conductance(std::vector<double>{1e300, 1e300}) < 1e-299);
}

TEST_CASE("conical function") {
  CHECK(conical_legendre(0.0, 1e-10) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(conical_legendre(0.0, 0.0) == 1.0);
  for (double tau : {0.0, 0.5, 1.0, 2.0, 5.0})
    for (double xi : {0.1, 0.5, 1.5, 3.0, 8.0}) {
      CAPTURE(tau);
      CAPTURE(xi);
      const double ref = oracle::conical_p0(tau, xi);
      CHECK(std::abs(conical_legendre(tau, xi) - ref) < 1e-10 * std::max(1.0, std::abs(ref)) + 1e-13);
    }
  for (double xi = 0.5; xi <= 40.0; xi += 0.5) {
    const double v = conical_legendre(1.0, xi);
    CHECK(std::isfinite(v));
    CHECK(std::abs(v) <= 1.0);
  }
  CHECK_THROWS_AS(conical_legendre(1.0, -0.1), Error);
}

TEST_CASE("conical function satisfies the Legendre equation to second order") {
  for (double tau : {0.5, 1.0, 2.0})
    for (double xi : {0.5, 1.5}) {
      auto residual = [&](double h) {
        const double f0 = conical_legendre(tau, xi), fp = conical_legendre(tau, xi + h),
                     fm = conical_legendre(tau, xi - h);
        const double d2 = (fp - 2 * f0 + fm) / (h * h), d1 = (fp - fm) / (2 * h);
        return std::abs(d2 + d1 / std::tanh(xi) + (tau * tau + 0.25) * f0);
      };
      const double order = std::log2(residual(0.02) / residual(0.01));
      CHECK(order == doctest::Approx(2.0).epsilon(0.15));
    }
}

TEST_CASE("log-Jacobian gradient matches the C_N radial Jacobian") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int beta : {1, 2, 4}) {
    const auto rs = build_root_system(Family::C, 3, {beta, 1, 0});
    std::vector<double> x{u(rng), 0, 0};
    x[1] = x[0] + u(rng);
    x[2] = x[1] + u(rng);
    const auto g = dmpk_log_jacobian_gradient(beta, x);
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-5;
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      // the chamber ordering for the root system is descending
      std::vector<double> qp(xp.rbegin(), xp.rend()), qm(xm.rbegin(), xm.rend());
      const double fd = (log_radial_jacobian(rs, Curvature::Negative, qp) -
                         log_radial_jacobian(rs, Curvature::Negative, qm)) /
                        (2 * h);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("exact beta = 2 density") {
  SUBCASE("positivity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.01, 4.0);
    for (int n : {1, 2})
      for (double s : {0.5, 2.0, 8.0}) {
        ExactBeta2 e(n, s);
        int bad = 0;
        for (int t = 0; t < 1000; ++t) {
          std::vector<double> x(static_cast<std::size_t>(n));
          for (auto& v : x) v = u(rng);
          std::sort(x.begin(), x.end());
          if (n == 2 && x[1] - x[0] < 1e-6) continue;
          bad += !(e.density(x) > 0.0);
        }
        CHECK(bad == 0);
      }
  }
  SUBCASE("single channel matches the hyperbolic heat kernel") {
    const double s = 2.0;
    ExactBeta2 e(1, s);
    std::vector<double> ratios;
    for (double x : {0.2, 0.6, 1.0, 1.6, 2.4, 3.0}) {
      const double p = e.density(std::vector<double>{x});
      ratios.push_back(p / (std::sinh(2 * x) * oracle::mckean_kernel(s, 2 * x)));
    }
    for (double r : ratios) CHECK(r == doctest::Approx(ratios[0]).epsilon(1e-7));
    for (int t = 1; t < 6; ++t) CHECK(e.density(std::vector<double>{0.5 * t}) > 0.0);
  }
  SUBCASE("symmetric under exchange") {
    ExactBeta2 e(2, 1.5);
    for (auto [a, b] : {std::pair{0.3, 1.1}, std::pair{0.9, 2.5}}) {
      const std::vector<double> x{a, b}, y{b, a};
      const std::vector<std::vector<double>> cx{e.columns(a), e.columns(b)}, cy{e.columns(b), e.columns(a)};
      CHECK(e.density_from_columns(x, cx) == doctest::Approx(e.density_from_columns(y, cy)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(e.density(std::vector<double>{1.0, 0.5}), Error);
  }
  SUBCASE("column routes agree") {
    ExactBeta2 e(2, 2.0);
    for (double x : {0.3, 0.8, 1.5}) {
      double canc = 0.0;
      const auto a = e.columns_mehler_fock(x, &canc);
      const auto b = e.columns_heat_kernel(x);
      for (std::size_t m = 0; m < a.size(); ++m) CHECK(a[m] == doctest::Approx(b[m]).epsilon(1e-8));
    }
  }
}

TEST_CASE("exact moments") {
  SUBCASE("one channel equals the heat-kernel oracle") {
    for (double s : {0.5, 2.0, 5.0}) {
      const auto m = exact_beta2_moments(1, s);
      CHECK(m.mean_g == doctest::Approx(oracle::mckean_mean_conductance(s)).epsilon(1e-6));
    }
  }
  SUBCASE("ballistic limit") {
    CHECK(exact_beta2_moments(2, 0.0).mean_g == 2.0);
    CHECK(exact_beta2_moments(2, 0.02).mean_g == doctest::Approx(2.0).epsilon(0.02));
  }
  SUBCASE("conductance decreases with length") {
    double prev = 3.0;
    for (double s : {0.5, 1.0, 2.0, 4.0}) {
      const double g = exact_beta2_moments(2, s).mean_g;
      CHECK(g < prev);
      prev = g;
    }
  }
  CHECK_THROWS_AS(exact_beta2_moments(5, 1.0), Error);
}

TEST_CASE("SDE oracle") {
  SUBCASE("one channel against the heat kernel") {
    // gamma = 2 for every beta when N = 1, so the walks coincide
    SdeOptions o;
    o.n = 1;
    o.s_points = {2.0};
    o.walkers = 10000;
    o.seed = 11;
    std::vector<double> means;
    for (int beta : {1, 2, 4}) {
      o.beta = beta;
      const auto st = conductance_stats(mc_dmpk_evolve(o)[0]);
      means.push_back(st.mean);
      CHECK(std::abs(st.mean - oracle::mckean_mean_conductance(2.0)) < 3.0 * st.stderr_);
    }
    CHECK(means[0] == means[1]);
    CHECK(means[1] == means[2]);
  }
  SUBCASE("ballistic start") {
    SdeOptions o;
    o.n = 3;
    o.s_points = {0.01};
    o.walkers = 500;
    const auto st = conductance_stats(mc_dmpk_evolve(o)[0]);
    CHECK(std::abs(st.mean - 3.0) < 0.05);
  }
  SUBCASE("ordering, determinism and relabeling") {
    SdeOptions o;
    o.n = 3;
    o.beta = 1;
    o.s_points = {0.3, 1.0};
    o.walkers = 200;
    o.seed = 5;
    const auto a = mc_dmpk_evolve(o);
    o.threads = 3;
    const auto b = mc_dmpk_evolve(o);
    REQUIRE(a.size() == 2);
    for (std::size_t c = 0; c < a.size(); ++c)
      for (std::size_t w = 0; w < a[c].size(); ++w) {
        CHECK(a[c][w].lambda == b[c][w].lambda);
        for (std::size_t i = 1; i < a[c][w].lambda.size(); ++i) CHECK(a[c][w].lambda[i] > a[c][w].lambda[i - 1]);
      }
    auto shuffled = a[1];
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(1));
    const auto s1 = conductance_stats(a[1]), s2 = conductance_stats(shuffled);
    CHECK(s1.mean == s2.mean);
    CHECK(s1.variance == s2.variance);
  }
  SUBCASE("halving the step changes the mean by less than one stderr") {
    SdeOptions o;
    o.n = 2;
    o.s_points = {1.0};
    o.walkers = 3000;
    o.dt = 2e-3;
    o.seed = 9;
    const auto coarse = mc_dmpk_evolve(o)[0];
    o.min_level = 1;
    const auto fine = mc_dmpk_evolve(o)[0];
    const auto sc = conductance_stats(coarse), sf = conductance_stats(fine);
    CHECK(std::abs(sc.mean - sf.mean) < sf.stderr_);
  }
  SUBCASE("two channels against the exact solution") {
    SdeOptions o;
    o.n = 2;
    o.s_points = {2.0};
    o.walkers = 10000;
    o.seed = 77;
    const auto st = conductance_stats(mc_dmpk_evolve(o)[0]);
    CHECK(std::abs(st.mean - exact_beta2_moments(2, 2.0).mean_g) < 3.0 * st.stderr_);
  }
  SUBCASE("validation") {
    SdeOptions o;
    o.beta = 3;
    CHECK_THROWS_AS(mc_dmpk_evolve(o), Error);
    o.beta = 2;
    o.s_points = {2.0, 1.0};
    CHECK_THROWS_AS(mc_dmpk_evolve(o), Error);
  }
}

TEST_CASE("transfer-matrix products") {
  SUBCASE("empty product is ballistic") {
    SliceOptions o;
    o.n = 3;
    o.s_points = {0.0};
    o.wires = 10;
    const auto ens = mc_transfer_product(o);
    for (const auto& st : ens[0]) CHECK(st.conductance() == doctest::Approx(3.0));
  }
  SUBCASE("lambdas are clamped to be non-negative") {
    Rng rng(4);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(6, 6);
    for (int k = 0; k < 50; ++k) m = sample_transfer_slice(3, 0.01, rng).m * m;
    for (double l : lambdas_from_transfer(m)) CHECK(l >= 0.0);
  }
  SUBCASE("mean conductance decreases along the wire") {
    SliceOptions o;
    o.n = 4;
    o.s_points = {0.25, 0.5, 1.0, 2.0};
    o.wires = 400;
    const auto ens = mc_transfer_product(o);
    double prev = 4.0;
    for (const auto& e : ens) {
      const double g = conductance_stats(e).mean;
      CHECK(g < prev);
      prev = g;
    }
  }
  SUBCASE("four channels agree with the SDE") {
    SliceOptions so;
    so.n = 4;
    so.s_points = {1.0};
    so.wires = 3000;
    so.seed = 3;
    const auto a = conductance_stats(mc_transfer_product(so)[0]);
    SdeOptions o;
    o.n = 4;
    o.s_points = {1.0};
    o.walkers = 3000;
    o.seed = 4;
    const auto b = conductance_stats(mc_dmpk_evolve(o)[0]);
    CHECK(std::abs(a.mean - b.mean) < 3.0 * std::hypot(a.stderr_, b.stderr_));
  }
  SUBCASE("s must be a multiple of the slice thickness") {
    SliceOptions o;
    o.s_points = {0.0123};
    CHECK_THROWS_AS(mc_transfer_product(o), Error);
  }
}

TEST_CASE("Schrodinger form at beta = 2") {
  SUBCASE("single channel") {
    TestFunction tf;
    tf.f = [](std::span<const double> x) { return std::exp(-(x[0] - 2) * (x[0] - 2)); };
    tf.laplacian = [](std::span<const double> x) {
      const double d = x[0] - 2;
      return (4 * d * d - 2) * std::exp(-d * d);
    };
    const auto grid = RadialGridFunction({0.5}, {1e-3}, {3001});
    const auto r = schrodinger_decoupled_check(2, grid, tf);
    CHECK(r.max_residual < 1e-4);
    CHECK(r.u_rel_std < 1e-6);
    CHECK(r.u_mean == doctest::Approx(dmpk_u_constant(2, 1)).epsilon(1e-6));
  }
  SUBCASE("U is constant for two channels") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> x{u(rng), u(rng)};
      if (std::abs(x[0] - x[1]) < 1e-3) continue;
      CHECK(dmpk_extracted_u(2, x) == doctest::Approx(dmpk_u_constant(2, 2)).epsilon(1e-9));
      CHECK(std::abs(dmpk_interaction(2, x)) < 1e-9);
    }
  }
  SUBCASE("beta = 1 leaves a pair interaction") {
    double worst = 0.0;
    for (double a : {0.3, 0.7, 1.2})
      for (double b : {0.5, 1.0, 2.0}) {
        if (a == b) continue;
        worst = std::max(worst, std::abs(dmpk_interaction(1, std::vector<double>{a, b})));
      }
    CHECK(worst > 0.01);
  }
}
