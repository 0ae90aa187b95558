#include <doctest.h>

#include <cmath>
#include <random>

#include "symrmt/cs.hpp"
#include "symrmt/error.hpp"

using namespace symrmt;

TEST_CASE("root-value couplings") {
  for (int beta : {1, 2, 4}) {
    const auto g = root_value_couplings(build_root_system(Family::C, 3, {beta, 1, 0}));
    CHECK(g[static_cast<int>(RootKind::Long)] == doctest::Approx(-0.5));
    CHECK(g[static_cast<int>(RootKind::Ordinary)] == doctest::Approx(beta * (beta - 2) / 4.0));
  }
  const auto free = root_value_couplings(build_root_system(Family::A, 3, {2, 0, 0}));
  CHECK(free[static_cast<int>(RootKind::Ordinary)] == 0.0);
  const auto bc = root_value_couplings(build_root_system(Family::BC, 1, {0, 3, 4}));
  CHECK(bc[static_cast<int>(RootKind::Short)] == doctest::Approx(4.0));
  // no doubled roots in C: the long-root value uses m_2alpha = 0
  const auto c = root_value_couplings(build_root_system(Family::C, 2, {1, 2, 0}));
  CHECK(c[static_cast<int>(RootKind::Long)] == doctest::Approx(2.0 * 0.0 * 4.0 / 8.0));
}

TEST_CASE("potential functions") {
  CHECK(potential_function(PotentialType::I, 0.5) == doctest::Approx(4.0));
  CHECK(potential_function(PotentialType::II, 0.5, 2.0) == doctest::Approx(4.0 / std::pow(std::sinh(1.0), 2)));
  CHECK(potential_function(PotentialType::III, 0.5, 2.0) == doctest::Approx(4.0 / std::pow(std::sin(1.0), 2)));
  CHECK_THROWS_AS(potential_function(PotentialType::I, 0.0), Error);
  CHECK_THROWS_AS(potential_function(PotentialType::III, 4.0, 1.0), Error);
  CHECK(parse_potential_type("hyperbolic") == PotentialType::II);
  CHECK_THROWS_AS(parse_potential_type("IV"), Error);
}

TEST_CASE("C2 potential term by term") {
  for (int beta : {1, 2, 4}) {
    const auto m = CSModel::at_root_values(build_root_system(Family::C, 2, {beta, 1, 0}), PotentialType::II);
    const double gl = -0.5, go = beta * (beta - 2) / 4.0;
    auto csch2 = [](double x) { return 1.0 / (std::sinh(x) * std::sinh(x)); };
    const double expect = gl * (csch2(2.0) + csch2(0.8)) + go * (csch2(0.6) + csch2(1.4));
    CHECK(m.potential(std::vector<double>{1.0, 0.4}) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("rational limit of the hyperbolic potential") {
  const auto rs = build_root_system(Family::BC, 2, {2, 1, 2});
  auto m1 = CSModel::at_root_values(rs, PotentialType::I);
  auto m2 = CSModel::at_root_values(rs, PotentialType::II);
  const std::vector<double> q{0.009, 0.004};
  CHECK(std::abs(m2.potential(q) - m1.potential(q)) / std::abs(m1.potential(q)) < 1e-3);
}

TEST_CASE("potential is Weyl invariant") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.05, 0.5);
  for (auto type : {PotentialType::I, PotentialType::II, PotentialType::III}) {
    const auto rs = build_root_system(Family::BC, 3, {1, 3, 2});
    const auto m = CSModel::at_root_values(rs, type, 1.0);
    const auto group = weyl_group(rs);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> q{0, 0, 0};
      q[2] = u(rng);
      q[1] = q[2] + u(rng);
      q[0] = q[1] + u(rng);
      const double v = m.potential(q);
      for (std::size_t k = 0; k < group.size(); k += 7)
        CHECK(std::abs(m.potential(symrmt::apply(group[k], q)) - v) < 1e-10 * std::max(1.0, std::abs(v)));
    }
  }
}

TEST_CASE("free model reduces to the Laplacian") {
  auto m = CSModel::at_root_values(build_root_system(Family::A, 1, {2, 0, 0}), PotentialType::I);
  const auto f = RadialGridFunction::sample({0.0, -1.0}, {0.01, 0.01}, {101, 101}, [](std::span<const double> q) {
    return std::cos(1.3 * q[0] + 0.4 * q[1]);
  });
  const auto hf = cs_apply(m, f);
  double worst = 0.0;
  for (std::size_t i = 0; i < hf.size(); ++i) {
    const auto p = hf.point(i);
    worst = std::max(worst, std::abs(hf[i] - 0.5 * (1.69 + 0.16) * std::cos(1.3 * p[0] + 0.4 * p[1])));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("operator mapping") {
  SUBCASE("A1, beta = 2, type II, Gaussian test function") {
    auto m = CSModel::at_root_values(build_root_system(Family::A, 1, {2, 0, 0}), PotentialType::II);
    const double h = 1e-3;
    const auto f = RadialGridFunction::sample({0.8, -0.2}, {h, h}, {201, 201}, [](std::span<const double> q) {
      return std::exp(-(q[0] * q[0] + q[1] * q[1]));
    });
    CHECK(op_mapping_residual(m, f) < 1e-4);
  }
  SUBCASE("convergence order two") {
    auto bump = [](double cx, double cy) {
      return [=](std::span<const double> q) {
        return std::exp(-((q[0] - cx) * (q[0] - cx) + (q[1] - cy) * (q[1] - cy)) / 0.02);
      };
    };
    for (auto type : {PotentialType::I, PotentialType::II}) {
      auto m = CSModel::at_root_values(build_root_system(Family::A, 1, {1, 0, 0}), type);
      const auto st = op_mapping_convergence(m, {0.6, -0.4}, {1.4, 0.4}, {0.04, 0.02, 0.01}, bump(1.0, 0.0));
      CHECK(st.slope == doctest::Approx(2.0).epsilon(0.15));
    }
    auto c2 = CSModel::at_root_values(build_root_system(Family::C, 2, {2, 1, 0}), PotentialType::II);
    const auto st = op_mapping_convergence(c2, {1.2, 0.4}, {1.8, 1.0}, {0.04, 0.02, 0.01}, bump(1.5, 0.7));
    CHECK(st.slope == doctest::Approx(2.0).epsilon(0.15));
  }
  SUBCASE("rho shift consistency in rank one") {
    auto m = CSModel::at_root_values(build_root_system(Family::BC, 1, {0, 1, 2}), PotentialType::II);
    const auto f = RadialGridFunction::sample({0.5}, {1e-3}, {1001}, [](std::span<const double> q) {
      return std::exp(-(q[0] - 1.0) * (q[0] - 1.0) * 4.0);
    });
    const auto lhs = cs_apply(m, f), rhs = cs_radial_side(m, f);
    // adding rho^2/2 times f to both sides leaves the difference unchanged
    const double c = 0.5 * m.rho_shift();
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const double fv = f[i + 1];
      d0 = std::max(d0, std::abs(lhs[i] - rhs[i]));
      d1 = std::max(d1, std::abs((lhs[i] + c * fv) - (rhs[i] + c * fv)));
    }
    CHECK(d1 == doctest::Approx(d0).epsilon(1e-9));
  }
  SUBCASE("off root values is rejected") {
    auto m = CSModel::at_root_values(build_root_system(Family::A, 1, {2, 0, 0}), PotentialType::II);
    m.g2[static_cast<int>(RootKind::Ordinary)] = 0.3;
    CHECK_FALSE(m.at_root_values());
    const auto f = RadialGridFunction::sample({0.8, -0.2}, {0.01, 0.01}, {20, 20}, [](std::span<const double>) { return 1.0; });
    try {
      (void)op_mapping_residual(m, f);
      FAIL("expected NotAtRootValues");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotAtRootValues);
    }
  }
}
