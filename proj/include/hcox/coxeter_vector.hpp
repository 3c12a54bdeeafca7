#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hcox {

// Entry of a Coxeter vector: 0 = parallel, k >= 2 = angle pi/k, kDivergent = no
// common point (ultraparallel).
using Weight = std::uint8_t;
inline constexpr Weight kParallel = 0;
inline constexpr Weight kRightAngle = 2;
inline constexpr Weight kDivergent = 255;
inline constexpr int kMaxNodes = 7;
inline constexpr int kMaxPairs = kMaxNodes * (kMaxNodes - 1) / 2;

constexpr int num_pairs(int nodes) { return nodes * (nodes - 1) / 2; }

// Position of the pair (i, j) in the lexicographic order 01, 02, ..., (n-2)(n-1).
constexpr int pair_index(int nodes, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * (2 * nodes - i - 1) / 2 + (j - i - 1);
}

struct NodePair {
  int i, j;
};
NodePair pair_at(int nodes, int index);

// Upper triangle of a symmetric Coxeter matrix on `nodes` nodes, stored in
// lexicographic pair order.
class CoxeterVector {
 public:
  CoxeterVector() = default;
  explicit CoxeterVector(int nodes, Weight fill = kRightAngle);
  CoxeterVector(int nodes, std::initializer_list<int> entries);
  CoxeterVector(int nodes, std::span<const Weight> entries);

  int nodes() const { return n_; }
  int size() const { return num_pairs(n_); }

  Weight operator[](int k) const { return w_[k]; }
  Weight& operator[](int k) { return w_[k]; }
  Weight operator()(int i, int j) const { return w_[pair_index(n_, i, j)]; }
  void set(int i, int j, Weight w) { w_[pair_index(n_, i, j)] = w; }
  std::span<const Weight> entries() const { return {w_.data(), std::size_t(size())}; }

  // Sub-diagram on the given nodes, relabeled 0.. in the given order.
  CoxeterVector restrict(std::span<const int> subset) const;
  // Relabel node i as perm[i].
  CoxeterVector relabel(std::span<const int> perm) const;

  bool connected() const;
  bool has_divergent() const;
  Weight max_finite_weight() const;

  // 4 bits per entry (kDivergent -> 15); requires nodes <= 6 and weights <= 14.
  std::uint64_t key() const;
  static CoxeterVector from_key(int nodes, std::uint64_t key);

  // "2,3,inf,0,..."
  std::string str() const;
  // Accepts integers, "inf" or "∞"; node count inferred from the token count.
  static CoxeterVector parse(std::string_view text);

  friend bool operator==(const CoxeterVector& a, const CoxeterVector& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }
  friend std::strong_ordering operator<=>(const CoxeterVector& a, const CoxeterVector& b) {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    return a.w_ <=> b.w_;
  }

 private:
  int n_ = 0;
  std::array<Weight, kMaxPairs> w_{};
};

// Connected components of the graph whose edges are the entries != 2.
std::vector<std::vector<int>> components(const CoxeterVector& v);

std::string weight_token(Weight w);
Weight parse_weight(std::string_view token);

}  // namespace hcox
