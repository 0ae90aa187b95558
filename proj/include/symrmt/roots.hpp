#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace symrmt {

enum class Family { A, B, C, D, BC };
enum class RootKind { Short, Ordinary, Long };

const char* to_string(Family f) noexcept;
const char* to_string(RootKind k) noexcept;
Family parse_family(const std::string& name);

/// Multiplicities per root kind, (m_o, m_l, m_s).
struct Multiplicities {
  int m_o = 0;
  int m_l = 0;
  int m_s = 0;

  int of(RootKind k) const noexcept;
  bool operator==(const Multiplicities&) const = default;
};

struct Root {
  std::vector<int> vector;
  RootKind kind;
  int multiplicity;

  int norm2() const noexcept;
};

/// Positive roots of a classical system. For A the rank is the subscript
/// (A_{n-1} lives in R^n); for B, C, D, BC the ambient dimension equals the rank.
class RootSystem {
 public:
  RootSystem() = default;
  RootSystem(Family family, int rank, Multiplicities mult, std::vector<Root> roots);

  Family family() const noexcept { return family_; }
  int rank() const noexcept { return rank_; }
  std::size_t ambient_dim() const noexcept;
  const Multiplicities& multiplicities() const noexcept { return mult_; }
  const std::vector<Root>& positive_roots() const noexcept { return roots_; }

  bool has_kind(RootKind k) const noexcept;
  /// Index of +v or -v among the positive roots, or -1.
  int find(const std::vector<int>& v) const;
  /// Multiplicity of 2*alpha if it is a root, else 0.
  int doubled_multiplicity(const Root& alpha) const;

  /// True when every q^alpha is strictly positive.
  bool in_chamber(const std::vector<double>& q) const;
  /// Sorts a point into the descending chamber (and |q| for B, C, D, BC).
  std::vector<double> to_chamber(std::vector<double> q) const;

 private:
  Family family_ = Family::A;
  int rank_ = 0;
  Multiplicities mult_;
  std::vector<Root> roots_;
};

/// Builds the positive roots {e_i - e_j}, {e_i + e_j}, {e_i}, {2e_i} per family.
RootSystem build_root_system(Family family, int rank, Multiplicities mult);

/// mu' = mu - 2 (alpha.mu)/alpha^2 alpha.
std::vector<double> weyl_reflect(const std::vector<double>& mu, const std::vector<int>& alpha);
std::vector<int> weyl_reflect_exact(const std::vector<int>& mu, const std::vector<int>& alpha);

/// rho = 1/2 sum_{alpha in R+} m_alpha alpha.
std::vector<double> rho_vector(const RootSystem& rs);

double q_dot_alpha(const std::vector<double>& q, const std::vector<int>& alpha);

/// Weyl group as integer matrices (row-major, ambient_dim^2 entries), obtained
/// by closing the set of root reflections under composition.
std::vector<std::vector<int>> weyl_group(const RootSystem& rs, std::size_t max_order = 50000);

std::vector<double> apply(const std::vector<int>& matrix, const std::vector<double>& q);

}  // namespace symrmt
