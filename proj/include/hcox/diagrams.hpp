#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcox/coxeter_vector.hpp"
#include "hcox/real.hpp"

namespace hcox {

enum class DiagramClass { Elliptic, Parabolic, Lanner, QuasiLanner, Indefinite };

// Kind of a single connected component.
enum class ComponentKind { Elliptic, Parabolic, Indefinite };

std::string to_string(DiagramClass c);

using CosMatrix = Eigen::Matrix<Field, Eigen::Dynamic, Eigen::Dynamic>;

// 4 * cosine matrix; all coordinates are integers, which keeps exact
// determinants in machine words.
using ScaledField = QuadField<std::int64_t>;
using ScaledCosMatrix = Eigen::Matrix<ScaledField, Eigen::Dynamic, Eigen::Dynamic>;

// -cos(pi/w) for w in {2..6}, -1 for w = 0. Throws for other weights.
Field cos_entry(Weight w);
ScaledField scaled_cos_entry(Weight w);

CosMatrix to_cos_matrix(const CoxeterVector& v);
ScaledCosMatrix to_scaled_cos_matrix(const CoxeterVector& v);
// -cos(pi/w) in floating point, any finite weight; -1 for w = 0.
double cos_entry_double(Weight w);
Eigen::MatrixXd to_cos_matrix_double(const CoxeterVector& v);

// Determinant by expansion over column subsets (2^n n multiplications);
// exact for exact scalars.
template <class Derived>
typename Derived::Scalar exact_determinant(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  const int n = int(m.rows());
  if (n == 0) return S(1);
  std::vector<S> dp(std::size_t(1) << n, S(0));
  dp[0] = S(1);
  for (unsigned mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask] == S(0)) continue;
    const int row = __builtin_popcount(mask);
    if (row == n) continue;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      if (m(row, j) == S(0)) continue;
      const int above = __builtin_popcount(mask >> (j + 1));
      S term = dp[mask] * m(row, j);
      if (above & 1)
        dp[mask | (1u << j)] -= term;
      else
        dp[mask | (1u << j)] += term;
    }
  }
  return dp.back();
}

// Signs of the leading principal minors 1..n of the cosine matrix. Weights
// must lie in {0, 2..6}. Uses a floating-point pass with an error bound and
// falls back to exact arithmetic for uncertain signs.
std::vector<int> leading_minor_signs(const CoxeterVector& v);
int determinant_sign(const CoxeterVector& v);

// Kind of a connected diagram. Weights >= 7 are handled structurally: a
// two-node diagram is I2(k), a larger connected diagram containing such an
// edge is hyperbolic.
ComponentKind component_kind(const CoxeterVector& connected);

DiagramClass classify(const CoxeterVector& v);

// Every component elliptic or connected parabolic (positive semidefinite).
bool is_nonnegative(const CoxeterVector& v);
bool is_connected_parabolic(const CoxeterVector& v);

// Rank of a nonnegative diagram: nodes minus number of parabolic components.
int nonnegative_rank(const CoxeterVector& v);

// Order of the finite Coxeter group of an elliptic diagram.
std::uint64_t elliptic_order(const CoxeterVector& v);
// Catalog name of a connected elliptic diagram, e.g. "A3", "H4", "I2(7)".
std::string elliptic_type(const CoxeterVector& connected);

// Lexicographically minimal relabeling (kDivergent sorts last).
CoxeterVector canonical_form(const CoxeterVector& v);
// Same, also reporting the minimizing permutation.
CoxeterVector canonical_form(const CoxeterVector& v, std::vector<int>& perm);

// Graphviz text: weight 2 omitted, 3..6 as 1..4 parallel strokes, >= 7
// labeled, parallel pairs thick and labeled "0", divergent pairs dotted.
// divergent_labels, when given, label the divergent pairs in pair order.
std::string to_dot(const CoxeterVector& v, const std::vector<std::string>& divergent_labels = {},
                   const std::string& name = "G");

}  // namespace hcox
