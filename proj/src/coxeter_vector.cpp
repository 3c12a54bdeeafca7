#include "hcox/coxeter_vector.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace hcox {

NodePair pair_at(int nodes, int index) {
  for (int i = 0; i < nodes; ++i) {
    const int row = nodes - 1 - i;
    if (index < row) return {i, i + 1 + index};
    index -= row;
  }
  throw std::out_of_range("pair index");
}

CoxeterVector::CoxeterVector(int nodes, Weight fill) : n_(nodes) {
  if (nodes < 0 || nodes > kMaxNodes) throw std::invalid_argument("node count out of range");
  std::fill_n(w_.begin(), size(), fill);
}

CoxeterVector::CoxeterVector(int nodes, std::initializer_list<int> entries) : CoxeterVector(nodes) {
  if (int(entries.size()) != size()) throw std::invalid_argument("entry count does not match node count");
  int k = 0;
  for (int e : entries) {
    if (e < 0 || e > 255) throw std::invalid_argument("weight out of range");
    w_[k++] = Weight(e);
  }
}

CoxeterVector::CoxeterVector(int nodes, std::span<const Weight> entries) : CoxeterVector(nodes) {
  if (int(entries.size()) != size()) throw std::invalid_argument("entry count does not match node count");
  std::copy(entries.begin(), entries.end(), w_.begin());
}

CoxeterVector CoxeterVector::restrict(std::span<const int> subset) const {
  CoxeterVector r(int(subset.size()));
  for (int a = 0; a < r.n_; ++a)
    for (int b = a + 1; b < r.n_; ++b) r.set(a, b, (*this)(subset[a], subset[b]));
  return r;
}

CoxeterVector CoxeterVector::relabel(std::span<const int> perm) const {
  CoxeterVector r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) r.set(perm[i], perm[j], (*this)(i, j));
  return r;
}

bool CoxeterVector::connected() const {
  if (n_ <= 1) return true;
  unsigned seen = 1, frontier = 1;
  while (frontier) {
    unsigned next = 0;
    for (int i = 0; i < n_; ++i) {
      if (!(frontier & (1u << i))) continue;
      for (int j = 0; j < n_; ++j)
        if (j != i && !(seen & (1u << j)) && (*this)(i, j) != kRightAngle) next |= 1u << j;
    }
    seen |= next;
    frontier = next;
  }
  return seen == (1u << n_) - 1;
}

bool CoxeterVector::has_divergent() const {
  return std::find(w_.begin(), w_.begin() + size(), kDivergent) != w_.begin() + size();
}

Weight CoxeterVector::max_finite_weight() const {
  Weight m = 0;
  for (int k = 0; k < size(); ++k)
    if (w_[k] != kDivergent) m = std::max(m, w_[k]);
  return m;
}

std::uint64_t CoxeterVector::key() const {
  std::uint64_t key = 0;
  for (int k = 0; k < size(); ++k) {
    const Weight w = w_[k];
    key = (key << 4) | (w == kDivergent ? 15u : std::uint64_t(w));
  }
  return key;
}

CoxeterVector CoxeterVector::from_key(int nodes, std::uint64_t key) {
  CoxeterVector r(nodes);
  for (int k = r.size() - 1; k >= 0; --k) {
    const unsigned code = key & 15u;
    r.w_[k] = code == 15 ? kDivergent : Weight(code);
    key >>= 4;
  }
  return r;
}

std::string weight_token(Weight w) { return w == kDivergent ? "inf" : std::to_string(int(w)); }

Weight parse_weight(std::string_view t) {
  while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
  while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\r')) t.remove_suffix(1);
  if (t == "inf" || t == "∞" || t == "Inf" || t == "INF") return kDivergent;
  int value = -1;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || p != t.data() + t.size() || value < 0 || value == 1 || value > 254)
    throw std::invalid_argument("bad weight token '" + std::string(t) + "'");
  return Weight(value);
}

std::string CoxeterVector::str() const {
  std::string s;
  for (int k = 0; k < size(); ++k) {
    if (k) s += ',';
    s += weight_token(w_[k]);
  }
  return s;
}

CoxeterVector CoxeterVector::parse(std::string_view text) {
  while (!text.empty() && (text.front() == '{' || text.front() == '(' || text.front() == ' ')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == '}' || text.back() == ')' || text.back() == ' ' || text.back() == '\n'))
    text.remove_suffix(1);
  std::vector<Weight> entries;
  while (!text.empty()) {
    const auto comma = text.find(',');
    entries.push_back(parse_weight(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  int nodes = 1;
  while (num_pairs(nodes) < int(entries.size())) ++nodes;
  if (num_pairs(nodes) != int(entries.size()) || nodes > kMaxNodes)
    throw std::invalid_argument("entry count is not a triangular number <= 21");
  return CoxeterVector(nodes, std::span<const Weight>(entries));
}

std::vector<std::vector<int>> components(const CoxeterVector& v) {
  const int n = v.nodes();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> members{s};
    comp[s] = int(out.size());
    for (std::size_t h = 0; h < members.size(); ++h)
      for (int j = 0; j < n; ++j)
        if (comp[j] < 0 && j != members[h] && v(members[h], j) != kRightAngle) {
          comp[j] = comp[s];
          members.push_back(j);
        }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

}  // namespace hcox
