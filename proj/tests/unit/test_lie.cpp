#include <doctest.h>

#include <cmath>
#include <random>

#include "symrmt/error.hpp"
#include "symrmt/lie.hpp"

using namespace symrmt;

namespace {

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("SO(3) Killing forms") {
  CHECK(max_abs_diff(killing_form(fixtures::so3()).g, -0.5 * Eigen::MatrixXd::Identity(3, 3)) < 1e-12);
  CHECK(max_abs_diff(killing_form(fixtures::so3_normalized()).g, -Eigen::MatrixXd::Identity(3, 3)) <
        1e-12);
}

TEST_CASE("SO(3) Killing form equals trace form of the defining representation") {
  // For so(3) the Killing form is tr(X Y) in the defining representation.
  const auto rep = fixtures::so3_defining();
  const auto g = killing_form(fixtures::so3()).g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(g(i, j) - (rep[i] * rep[j]).trace().real()) < 1e-12);
}

TEST_CASE("SO(2,1) Killing form in order (3,1,2)") {
  const auto g = permuted(killing_form(fixtures::so21()).g, {2, 0, 1});
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
  expect.diagonal() << 1, 1, -1;
  CHECK(max_abs_diff(g, expect) < 1e-12);
  CHECK_FALSE(is_compact(killing_form(fixtures::so21())));
}

TEST_CASE("E2 is degenerate") {
  const auto kf = killing_form(fixtures::e2(true));
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
  expect(0, 0) = -1.0;
  CHECK(max_abs_diff(kf.g, expect) < 1e-12);
  CHECK(kf.signature == Signature{0, 1, 2});
  try {
    (void)is_compact(kf);
    FAIL("expected NonSemisimple");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonSemisimple);
  }
}

TEST_CASE("compactness") {
  CHECK(is_compact(killing_form(fixtures::so3())));
  CHECK(is_compact(killing_form(fixtures::su2())));
}

TEST_CASE("Weyl trick maps SO(2,1) to the SO(3) metric") {
  const auto sc = weyl_trick(fixtures::so21(), {true, false, true});
  CHECK(max_abs_diff(killing_form(sc).g, -Eigen::MatrixXd::Identity(3, 3)) < 1e-12);
}

TEST_CASE("Killing form is basis covariant") {
  const auto basis = fixtures::su3_gell_mann();
  const auto g = killing_form(StructureConstants::from_matrices(basis)).g;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd a(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) a(i, j) = n01(rng) + (i == j ? 3.0 : 0.0);
  std::vector<Eigen::MatrixXcd> y(8, Eigen::MatrixXcd::Zero(3, 3));
  for (int k = 0; k < 8; ++k)
    for (int b = 0; b < 8; ++b) y[k] += a(b, k) * basis[b];
  const auto gy = killing_form(StructureConstants::from_matrices(y)).g;
  CHECK(max_abs_diff(gy, a.transpose() * g * a) < 1e-8 * g.cwiseAbs().maxCoeff() * a.squaredNorm());
}

TEST_CASE("secular coefficients of SO(3)") {
  const auto rep = fixtures::so3_defining();
  const std::vector<double> t{0.3, -1.1, 0.7};
  const auto phi = secular_casimir_coefficients(rep, t);
  const double t2 = 0.09 + 1.21 + 0.49;
  REQUIRE(phi.size() == 4);
  CHECK(std::abs(phi[0] - 1.0) < 1e-12);
  CHECK(std::abs(phi[2] - 0.25 * t2) < 1e-12);
  CHECK(independent_secular_invariants(rep, t) == 1);
  const auto zero = secular_casimir_coefficients(rep, {0.0, 0.0, 0.0});
  CHECK(std::abs(zero[0] - 1.0) < 1e-12);
  for (std::size_t k = 1; k < zero.size(); ++k) CHECK(std::abs(zero[k]) < 1e-12);
}

TEST_CASE("SU(2) defining secular coefficient is quadratic in t") {
  // X_a = i sigma_a / 2; det(t.X - lambda) = lambda^2 + |t|^2 / 4.
  const auto rep = fixtures::su2_spin(1);
  const std::vector<double> t{0.5, 0.2, -0.9};
  const auto phi = secular_casimir_coefficients(rep, t);
  const double t2 = 0.25 + 0.04 + 0.81;
  CHECK(std::abs(phi[1]) < 1e-12);
  CHECK(std::abs(phi[2] - 0.25 * t2) < 1e-12);
}

TEST_CASE("quadratic Casimir") {
  CHECK(quadratic_casimir_check(fixtures::so3(), fixtures::so3_defining()) < 1e-12);
  CHECK(quadratic_casimir_check(fixtures::su2(), fixtures::su2_spin(2)) < 1e-10);
  const auto c = quadratic_casimir(fixtures::so3(), fixtures::so3_defining());
  // Proportional to L1^2 + L2^2 + L3^2 in the defining representation.
  const auto rep = fixtures::so3_defining();
  const Eigen::MatrixXcd l2 = rep[0] * rep[0] + rep[1] * rep[1] + rep[2] * rep[2];
  const std::complex<double> ratio = c(0, 0) / l2(0, 0);
  CHECK((c - ratio * l2).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(quadratic_casimir(fixtures::abelian1(), {Eigen::MatrixXcd::Identity(1, 1)}), Error);
}

TEST_CASE("structure constant fixtures satisfy antisymmetry and Jacobi") {
  for (const auto& sc : {fixtures::so3(), fixtures::so3_normalized(), fixtures::so21(), fixtures::e2(true),
                         fixtures::e2(false), fixtures::su2()}) {
    CHECK(sc.antisymmetry_residual() < 1e-15);
    CHECK(sc.jacobi_residual() < 1e-12);
  }
}

TEST_CASE("all built-in fixtures pass") {
  for (const auto& r : run_lie_fixtures()) {
    CAPTURE(r.name);
    CHECK(r.pass);
  }
}
