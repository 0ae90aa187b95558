#include "symrmt/roots.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <set>

#include "symrmt/error.hpp"

namespace symrmt {

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::BC: return "BC";
  }
  return "?";
}

const char* to_string(RootKind k) noexcept {
  switch (k) {
    case RootKind::Short: return "short";
    case RootKind::Ordinary: return "ordinary";
    case RootKind::Long: return "long";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "A") return Family::A;
  if (name == "B") return Family::B;
  if (name == "C") return Family::C;
  if (name == "D") return Family::D;
  if (name == "BC") return Family::BC;
  fail(ErrorCode::InvalidArgument, "unknown root family '" + name + "' (expected A, B, C, D or BC)");
}

int Multiplicities::of(RootKind k) const noexcept {
  switch (k) {
    case RootKind::Short: return m_s;
    case RootKind::Ordinary: return m_o;
    case RootKind::Long: return m_l;
  }
  return 0;
}

int Root::norm2() const noexcept {
  int s = 0;
  for (int c : vector) s += c * c;
  return s;
}

RootSystem::RootSystem(Family family, int rank, Multiplicities mult, std::vector<Root> roots)
    : family_(family), rank_(rank), mult_(mult), roots_(std::move(roots)) {}

std::size_t RootSystem::ambient_dim() const noexcept {
  return static_cast<std::size_t>(family_ == Family::A ? rank_ + 1 : rank_);
}

bool RootSystem::has_kind(RootKind k) const noexcept {
  switch (family_) {
    case Family::A:
    case Family::D: return k == RootKind::Ordinary;
    case Family::B: return k != RootKind::Long;
    case Family::C: return k != RootKind::Short;
    case Family::BC: return true;
  }
  return false;
}

int RootSystem::find(const std::vector<int>& v) const {
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    const auto& r = roots_[i].vector;
    bool plus = true, minus = true;
    for (std::size_t a = 0; a < r.size(); ++a) {
      plus = plus && r[a] == v[a];
      minus = minus && r[a] == -v[a];
    }
    if (plus || minus) return static_cast<int>(i);
  }
  return -1;
}

int RootSystem::doubled_multiplicity(const Root& alpha) const {
  std::vector<int> twice(alpha.vector);
  for (int& c : twice) c *= 2;
  const int idx = find(twice);
  return idx < 0 ? 0 : roots_[static_cast<std::size_t>(idx)].multiplicity;
}

bool RootSystem::in_chamber(const std::vector<double>& q) const {
  require(q.size() == ambient_dim(), "in_chamber: dimension mismatch");
  for (const auto& r : roots_)
    if (!(q_dot_alpha(q, r.vector) > 0.0)) return false;
  return true;
}

std::vector<double> RootSystem::to_chamber(std::vector<double> q) const {
  require(q.size() == ambient_dim(), "to_chamber: dimension mismatch");
  if (family_ == Family::A) {
    std::sort(q.begin(), q.end(), std::greater<>());
    return q;
  }
  int negatives = 0;
  for (double& c : q) {
    if (c < 0.0) ++negatives;
    c = std::abs(c);
  }
  std::sort(q.begin(), q.end(), std::greater<>());
  if (family_ == Family::D && negatives % 2 == 1 && !q.empty()) q.back() = -q.back();
  return q;
}

RootSystem build_root_system(Family family, int rank, Multiplicities mult) {
  require(rank >= 1, "build_root_system: rank must be >= 1");
  require(mult.m_o >= 0 && mult.m_l >= 0 && mult.m_s >= 0,
          "build_root_system: multiplicities must be non-negative");
  RootSystem probe(family, rank, mult, {});
  for (RootKind k : {RootKind::Short, RootKind::Ordinary, RootKind::Long}) {
    if (!probe.has_kind(k) && mult.of(k) != 0)
      fail(ErrorCode::InvalidArgument, std::string("build_root_system: family ") +
                                           to_string(family) + " has no " + to_string(k) +
                                           " roots, multiplicity must be 0");
  }

  const std::size_t n = probe.ambient_dim();
  std::vector<Root> roots;
  auto unit = [n](std::size_t i, int scale) {
    std::vector<int> v(n, 0);
    v[i] = scale;
    return v;
  };
  // Ordering: e_i - e_j, e_i + e_j (i < j), then e_i, then 2e_i.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<int> v(n, 0);
      v[i] = 1;
      v[j] = -1;
      roots.push_back({v, RootKind::Ordinary, mult.m_o});
    }
  if (family != Family::A)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        std::vector<int> v(n, 0);
        v[i] = 1;
        v[j] = 1;
        roots.push_back({v, RootKind::Ordinary, mult.m_o});
      }
  if (family == Family::B || family == Family::BC)
    for (std::size_t i = 0; i < n; ++i) roots.push_back({unit(i, 1), RootKind::Short, mult.m_s});
  if (family == Family::C || family == Family::BC)
    for (std::size_t i = 0; i < n; ++i) roots.push_back({unit(i, 2), RootKind::Long, mult.m_l});
  return RootSystem(family, rank, mult, std::move(roots));
}

std::vector<double> weyl_reflect(const std::vector<double>& mu, const std::vector<int>& alpha) {
  require(mu.size() == alpha.size(), "weyl_reflect: dimension mismatch");
  double a2 = 0.0, am = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    a2 += static_cast<double>(alpha[i]) * alpha[i];
    am += alpha[i] * mu[i];
  }
  require(a2 != 0.0, "weyl_reflect: zero-length root");
  const double f = 2.0 * am / a2;
  std::vector<double> out(mu);
  for (std::size_t i = 0; i < mu.size(); ++i) out[i] -= f * alpha[i];
  return out;
}

std::vector<int> weyl_reflect_exact(const std::vector<int>& mu, const std::vector<int>& alpha) {
  require(mu.size() == alpha.size(), "weyl_reflect: dimension mismatch");
  int a2 = 0, am = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    a2 += alpha[i] * alpha[i];
    am += alpha[i] * mu[i];
  }
  require(a2 != 0, "weyl_reflect: zero-length root");
  require((2 * am) % a2 == 0, "weyl_reflect_exact: non-integral reflection coefficient");
  const int f = 2 * am / a2;
  std::vector<int> out(mu);
  for (std::size_t i = 0; i < mu.size(); ++i) out[i] -= f * alpha[i];
  return out;
}

std::vector<double> rho_vector(const RootSystem& rs) {
  std::vector<double> rho(rs.ambient_dim(), 0.0);
  for (const auto& r : rs.positive_roots())
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += 0.5 * r.multiplicity * r.vector[i];
  return rho;
}

double q_dot_alpha(const std::vector<double>& q, const std::vector<int>& alpha) {
  require(q.size() == alpha.size(), "q_dot_alpha: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * alpha[i];
  return s;
}

std::vector<std::vector<int>> weyl_group(const RootSystem& rs, std::size_t max_order) {
  const std::size_t n = rs.ambient_dim();
  std::vector<std::vector<int>> gens;
  for (const auto& r : rs.positive_roots()) {
    std::vector<int> m(n * n);
    for (std::size_t col = 0; col < n; ++col) {
      std::vector<int> e(n, 0);
      e[col] = 1;
      const auto img = weyl_reflect_exact(e, r.vector);
      for (std::size_t row = 0; row < n; ++row) m[row * n + col] = img[row];
    }
    gens.push_back(std::move(m));
  }
  std::vector<int> id(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) id[i * n + i] = 1;

  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> group{id};
  std::deque<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    const auto g = frontier.front();
    frontier.pop_front();
    for (const auto& s : gens) {
      std::vector<int> h(n * n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
          const int sik = s[i * n + k];
          if (sik == 0) continue;
          for (std::size_t j = 0; j < n; ++j) h[i * n + j] += sik * g[k * n + j];
        }
      if (seen.insert(h).second) {
        if (group.size() >= max_order)
          fail(ErrorCode::InvalidArgument, "weyl_group: order exceeds limit");
        group.push_back(h);
        frontier.push_back(std::move(h));
      }
    }
  }
  return group;
}

std::vector<double> apply(const std::vector<int>& matrix, const std::vector<double>& q) {
  const std::size_t n = q.size();
  require(matrix.size() == n * n, "apply: dimension mismatch");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += matrix[i * n + j] * q[j];
  return out;
}

}  // namespace symrmt
