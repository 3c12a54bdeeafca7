#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcox/coxeter_vector.hpp"
#include "hcox/polynomial.hpp"
#include "hcox/real.hpp"

namespace hcox {

// Gram matrix of a candidate vector with unknowns. Variables are numbered
// angles first (y_1.. in pair order), then lengths (x_1.. in pair order).
// Weight 7 at a position stands for any k >= 7 and becomes -y/2 with
// y = 2cos(pi/k); kDivergent becomes -x with x = cosh of the distance.
struct SymbolicGram {
  CoxeterVector vector;
  std::vector<int> angle_positions;
  std::vector<int> length_positions;

  int num_angles() const { return int(angle_positions.size()); }
  int num_lengths() const { return int(length_positions.size()); }
  int num_variables() const { return num_angles() + num_lengths(); }
  Polynomial entry(int i, int j) const;
  // "y1", "y2", ..., "x1", ...
  std::vector<std::string> variable_names() const;
};

SymbolicGram substitute(const CoxeterVector& v);

struct MinorSystem {
  SymbolicGram gram;
  // equations[i] = 2 det of the Gram matrix without row and column i.
  std::array<Polynomial, kMaxNodes> equations;

  bool length_free(int i) const;
};

MinorSystem minor_system(const SymbolicGram& g);

enum class SolveStage { OneEq, SevenEq, Integrality, Signature };
std::string to_string(SolveStage s);

struct SolveConfig {
  int k_max = 30;
  int digits = 40;
  std::string tol_res = "1e-25";
  std::string tol_zero = "1e-20";
  // Lower end of the angle domain; y = 2cos(pi/k) with k >= 7.
  double angle_lower = 1.8019377358048383;
  double x_max = 1e6;
  int newton_starts = 64;
  std::uint64_t seed = 1;
  // Run the single-equation filter on length-free minors first.
  bool one_equation = false;
  // Interval search budget (boxes) per question.
  std::size_t box_budget = 200'000;
};

struct SignatureCount {
  int pos = 0, zero = 0, neg = 0;
  bool marginal = false;
  friend bool operator==(const SignatureCount&, const SignatureCount&) = default;
};

// Eigenvalue counts of a symmetric matrix with the dead band [-tol, tol];
// marginal when some |eigenvalue| lies in [tol, 10 tol).
template <class R>
SignatureCount signature(const Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>& g, const R& tol_zero);

// Enclosure of the values of angle unknown `angle` over solutions of the
// length-free equations, within [cfg.angle_lower, 2]. Empty when those
// equations have no common zero in the domain.
std::optional<std::pair<double, double>> feasible_angle_box(const MinorSystem& s, int angle, const SolveConfig& cfg);

struct SolveOutcome {
  bool accepted = false;
  SolveStage stage = SolveStage::SevenEq;  // rejecting stage
  std::string detail;
  // For rejections: true when the search proved there is no solution, false
  // when it was exhausted without finding one.
  bool proved = true;

  std::vector<int> angle_weights;
  std::vector<std::string> lengths;  // decimal, full precision
  std::vector<std::string> eigenvalues;
  SignatureCount signature;
  std::string max_residual;
  double eigen_shift = 0;  // largest eigenvalue movement under doubled precision
  int solutions = 0;       // certified realizations found

  // Scanned k range per angle unknown; k_cap_hit when the feasible box
  // extends past k_max.
  std::vector<std::pair<int, int>> k_ranges;
  bool k_cap_hit = false;
};

SolveOutcome solve(const SymbolicGram& g, const SolveConfig& cfg = {});
inline SolveOutcome solve(const CoxeterVector& v, const SolveConfig& cfg = {}) { return solve(substitute(v), cfg); }

// Gram matrix at the given angle weights and lengths (decimal strings).
template <class R>
Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic> numeric_gram(const SymbolicGram& g, const std::vector<int>& k,
                                                              const std::vector<std::string>& lengths);

// 2 det(M_i) of the numeric Gram matrix without row and column i.
template <class R>
R minor_residual(const Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>& g, int i);

}  // namespace hcox
