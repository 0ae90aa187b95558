#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "symrmt/error.hpp"
#include "symrmt/roots.hpp"

using namespace symrmt;

namespace {

Multiplicities full_mult(Family f) {
  switch (f) {
    case Family::A: return {1, 0, 0};
    case Family::B: return {1, 0, 1};
    case Family::C: return {1, 1, 0};
    case Family::D: return {1, 0, 0};
    case Family::BC: return {1, 1, 1};
  }
  return {};
}

std::size_t closed_form_count(Family f, int n) {
  const auto k = static_cast<std::size_t>(n);
  switch (f) {
    case Family::A: return (k + 1) * k / 2;
    case Family::B:
    case Family::C: return k * k;
    case Family::D: return k * (k - 1);
    case Family::BC: return k * k + k;
  }
  return 0;
}

// Brute force: all integer vectors with entries in {-2..2} whose shape is a root.
std::size_t brute_force_count(Family f, int n) {
  const int d = f == Family::A ? n + 1 : n;
  std::size_t count = 0;
  std::vector<int> v(static_cast<std::size_t>(d), -2);
  while (true) {
    int nonzero = 0, sum = 0, norm2 = 0, maxabs = 0;
    for (int x : v) {
      nonzero += x != 0;
      sum += x;
      norm2 += x * x;
      maxabs = std::max(maxabs, std::abs(x));
    }
    const int first = *std::find_if(v.begin(), v.end(), [](int x) { return x != 0; } ) ;
    bool root = false;
    if (nonzero > 0 && first > 0) {
      const bool ordinary = nonzero == 2 && maxabs == 1;
      const bool shortr = nonzero == 1 && maxabs == 1;
      const bool longr = nonzero == 1 && maxabs == 2;
      switch (f) {
        case Family::A: root = ordinary && sum == 0; break;
        case Family::B: root = ordinary || shortr; break;
        case Family::C: root = ordinary || longr; break;
        case Family::D: root = ordinary; break;
        case Family::BC: root = ordinary || shortr || longr; break;
      }
    }
    (void)norm2;
    count += root;
    std::size_t i = 0;
    while (i < v.size() && v[i] == 2) v[i++] = -2;
    if (i == v.size()) break;
    ++v[i];
  }
  return count;
}

}  // namespace

TEST_CASE("C2 positive roots and kinds") {
  const auto rs = build_root_system(Family::C, 2, {1, 1, 0});
  REQUIRE(rs.positive_roots().size() == 4);
  std::set<std::vector<int>> ord, lng;
  for (const auto& r : rs.positive_roots()) {
    if (r.kind == RootKind::Ordinary) ord.insert(r.vector);
    if (r.kind == RootKind::Long) lng.insert(r.vector);
  }
  CHECK(ord == std::set<std::vector<int>>{{1, -1}, {1, 1}});
  CHECK(lng == std::set<std::vector<int>>{{2, 0}, {0, 2}});
}

TEST_CASE("A1 has a single positive root") {
  const auto rs = build_root_system(Family::A, 1, {2, 0, 0});
  REQUIRE(rs.positive_roots().size() == 1);
  CHECK(rs.positive_roots()[0].vector == std::vector<int>{1, -1});
  CHECK(rs.ambient_dim() == 2);
}

TEST_CASE("BC3 kind counts") {
  const auto rs = build_root_system(Family::BC, 3, {4, 3, 4});
  int s = 0, o = 0, l = 0;
  for (const auto& r : rs.positive_roots()) {
    s += r.kind == RootKind::Short;
    o += r.kind == RootKind::Ordinary;
    l += r.kind == RootKind::Long;
    CHECK(r.multiplicity == rs.multiplicities().of(r.kind));
  }
  CHECK(s == 3);
  CHECK(o == 6);
  CHECK(l == 3);
}

TEST_CASE("root counts match closed forms and brute force for ranks 1..8") {
  for (Family f : {Family::A, Family::B, Family::C, Family::D, Family::BC}) {
    for (int n = 1; n <= 8; ++n) {
      if (f == Family::D && n < 2) continue;
      const auto rs = build_root_system(f, n, full_mult(f));
      CAPTURE(to_string(f));
      CAPTURE(n);
      CHECK(rs.positive_roots().size() == closed_form_count(f, n));
      if (n <= 5) CHECK(brute_force_count(f, n) == closed_form_count(f, n));
    }
  }
}

TEST_CASE("positive roots: first nonzero entry positive, kind from squared length") {
  for (Family f : {Family::A, Family::B, Family::C, Family::D, Family::BC}) {
    const auto rs = build_root_system(f, 4, full_mult(f));
    for (const auto& r : rs.positive_roots()) {
      const int first = *std::find_if(r.vector.begin(), r.vector.end(), [](int x) { return x != 0; });
      CHECK(first > 0);
      const RootKind expect = r.norm2() == 1 ? RootKind::Short
                              : r.norm2() == 2 ? RootKind::Ordinary
                                               : RootKind::Long;
      CHECK(r.kind == expect);
    }
  }
}

TEST_CASE("Weyl closure in exact arithmetic") {
  for (Family f : {Family::A, Family::B, Family::C, Family::D, Family::BC}) {
    const auto rs = build_root_system(f, 4, full_mult(f));
    for (const auto& a : rs.positive_roots())
      for (const auto& b : rs.positive_roots()) CHECK(rs.find(weyl_reflect_exact(b.vector, a.vector)) >= 0);
  }
}

TEST_CASE("reflection examples") {
  CHECK(weyl_reflect_exact({1, -1}, {1, -1}) == std::vector<int>{-1, 1});
  CHECK(weyl_reflect_exact({1, 0}, {1, -1}) == std::vector<int>{0, 1});
  CHECK(weyl_reflect_exact({1, 1}, {1, -1}) == std::vector<int>{1, 1});
}

TEST_CASE("reflection is an involutive isometry") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const auto rs = build_root_system(Family::BC, 3, {1, 1, 1});
  for (int t = 0; t < 50; ++t) {
    std::vector<double> mu(3);
    for (auto& x : mu) x = g(rng);
    for (const auto& a : rs.positive_roots()) {
      const auto m1 = weyl_reflect(mu, a.vector);
      const auto m2 = weyl_reflect(m1, a.vector);
      double n0 = 0, n1 = 0, back = 0;
      for (int i = 0; i < 3; ++i) {
        n0 += mu[i] * mu[i];
        n1 += m1[i] * m1[i];
        back = std::max(back, std::abs(m2[i] - mu[i]));
      }
      CHECK(std::abs(std::sqrt(n1) - std::sqrt(n0)) < 1e-12);
      CHECK(back < 1e-12);
    }
  }
}

TEST_CASE("rho vectors") {
  SUBCASE("A1, m_o = 1") {
    const auto rho = rho_vector(build_root_system(Family::A, 1, {1, 0, 0}));
    CHECK(rho[0] == doctest::Approx(0.5));
    CHECK(rho[1] == doctest::Approx(-0.5));
  }
  SUBCASE("C_N with (beta, 1)") {
    for (int beta : {1, 2, 4}) {
      const int n = 4;
      const auto rho = rho_vector(build_root_system(Family::C, n, {beta, 1, 0}));
      for (int i = 1; i <= n; ++i)
        CHECK(rho[i - 1] == doctest::Approx(0.5 * (beta * 2.0 * (n - i) + 2.0)).epsilon(1e-14));
    }
  }
  SUBCASE("BC1 with m_o = 0") {
    const auto rho = rho_vector(build_root_system(Family::BC, 1, {0, 3, 4}));
    CHECK(rho[0] == doctest::Approx(0.5 * (4 + 2 * 3)));
  }
  SUBCASE("independent of summation order") {
    const auto rs = build_root_system(Family::BC, 4, {2, 3, 5});
    auto roots = rs.positive_roots();
    std::mt19937_64 rng(3);
    const auto ref = rho_vector(rs);
    for (int t = 0; t < 10; ++t) {
      std::shuffle(roots.begin(), roots.end(), rng);
      std::vector<double> rho(4, 0.0);
      for (const auto& r : roots)
        for (int i = 0; i < 4; ++i) rho[i] += 0.5 * r.multiplicity * r.vector[i];
      for (int i = 0; i < 4; ++i) CHECK(std::abs(rho[i] - ref[i]) < 1e-14);
    }
  }
}

TEST_CASE("q dot alpha") {
  CHECK(q_dot_alpha({1.0, 2.0}, {1, -1}) == -1.0);
  CHECK(q_dot_alpha({0.7, 0.1, 0.2}, {2, 0, 0}) == doctest::Approx(1.4));
  CHECK(q_dot_alpha({0.0, 0.0}, {1, 1}) == 0.0);
}

TEST_CASE("Weyl group orders") {
  CHECK(weyl_group(build_root_system(Family::A, 2, {1, 0, 0})).size() == 6);
  CHECK(weyl_group(build_root_system(Family::B, 2, {1, 0, 1})).size() == 8);
  CHECK(weyl_group(build_root_system(Family::C, 3, {1, 1, 0})).size() == 48);
  CHECK(weyl_group(build_root_system(Family::D, 4, {1, 0, 0})).size() == 192);
  CHECK(weyl_group(build_root_system(Family::BC, 2, {1, 1, 1})).size() == 8);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(build_root_system(Family::A, 0, {1, 0, 0}), Error);
  CHECK_THROWS_AS(parse_family("E"), Error);
  CHECK_THROWS_AS(build_root_system(Family::C, 2, {-1, 1, 0}), Error);
}
