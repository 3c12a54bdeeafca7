#include "hcox/diagrams.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace hcox {

std::string to_string(DiagramClass c) {
  switch (c) {
    case DiagramClass::Elliptic: return "Elliptic";
    case DiagramClass::Parabolic: return "Parabolic";
    case DiagramClass::Lanner: return "Lanner";
    case DiagramClass::QuasiLanner: return "QuasiLanner";
    case DiagramClass::Indefinite: return "Indefinite";
  }
  return "?";
}

ScaledField scaled_cos_entry(Weight w) {
  switch (w) {
    case 0: return ScaledField(-4);
    case 2: return ScaledField(0);
    case 3: return ScaledField(-2);
    case 4: return ScaledField::sqrt_of(2, -2);
    case 5: return ScaledField(-1) + ScaledField::sqrt_of(5, -1);
    case 6: return ScaledField::sqrt_of(3, -2);
    default: throw std::invalid_argument("weight " + weight_token(w) + " has no cosine in Q(sqrt2,sqrt3,sqrt5)");
  }
}

Field cos_entry(Weight w) {
  Field f = to_rational_field(scaled_cos_entry(w));
  for (int m = 0; m < Field::kDim; ++m) f[m] /= 4;
  return f;
}

double cos_entry_double(Weight w) {
  if (w == kParallel) return -1.0;
  if (w == kDivergent) throw std::invalid_argument("divergent entry has no cosine");
  return -std::cos(std::numbers::pi / w);
}

CosMatrix to_cos_matrix(const CoxeterVector& v) {
  const int n = v.nodes();
  CosMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = Field(1);
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = cos_entry(v(i, j));
  }
  return m;
}

ScaledCosMatrix to_scaled_cos_matrix(const CoxeterVector& v) {
  const int n = v.nodes();
  ScaledCosMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = ScaledField(4);
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = scaled_cos_entry(v(i, j));
  }
  return m;
}

Eigen::MatrixXd to_cos_matrix_double(const CoxeterVector& v) {
  const int n = v.nodes();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = cos_entry_double(v(i, j));
  return m;
}

namespace {

// dp[mask] = minor on rows 0..|mask|-1 and the columns in mask (signed); with
// Permanent the signs are dropped, which bounds the rounding error.
template <bool Permanent = false, class S, class M>
void prefix_minors(const M& m, std::vector<S>& dp) {
  const int n = int(m.rows());
  dp.assign(std::size_t(1) << n, S(0));
  dp[0] = S(1);
  for (unsigned mask = 0; mask + 1 < dp.size(); ++mask) {
    if (dp[mask] == S(0)) continue;
    const int row = __builtin_popcount(mask);
    for (int j = 0; j < n; ++j) {
      if ((mask & (1u << j)) || m(row, j) == S(0)) continue;
      S term = dp[mask] * m(row, j);
      if (!Permanent && (__builtin_popcount(mask >> (j + 1)) & 1))
        dp[mask | (1u << j)] -= term;
      else
        dp[mask | (1u << j)] += term;
    }
  }
}

}  // namespace

std::vector<int> leading_minor_signs(const CoxeterVector& v) {
  const int n = v.nodes();
  Eigen::MatrixXd m = 4.0 * Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = scaled_cos_entry(v(i, j)).to_double();
  std::vector<double> dp, bound;
  prefix_minors(m, dp);
  prefix_minors<true>(Eigen::MatrixXd(m.cwiseAbs()), bound);
  std::vector<int> signs(n);
  bool uncertain = false;
  for (int k = 1; k <= n; ++k) {
    const unsigned mask = (1u << k) - 1;
    if (std::abs(dp[mask]) > 1e-11 * bound[mask])
      signs[k - 1] = dp[mask] > 0 ? 1 : -1;
    else
      uncertain = true, signs[k - 1] = 2;
  }
  if (uncertain) {
    std::vector<ScaledField> exact;
    prefix_minors(to_scaled_cos_matrix(v), exact);
    for (int k = 1; k <= n; ++k)
      if (signs[k - 1] == 2) signs[k - 1] = exact[(1u << k) - 1].sign();
  }
  return signs;
}

int determinant_sign(const CoxeterVector& v) {
  if (v.nodes() == 0) return 1;
  return leading_minor_signs(v).back();
}

namespace {

bool all_positive(const std::vector<int>& s) {
  return std::all_of(s.begin(), s.end(), [](int x) { return x > 0; });
}

ComponentKind compute_kind(const CoxeterVector& v) {
  const int n = v.nodes();
  if (n <= 1) return ComponentKind::Elliptic;
  if (n == 2) return v[0] == kParallel ? ComponentKind::Parabolic : ComponentKind::Elliptic;
  for (int k = 0; k < v.size(); ++k)
    if (v[k] >= 7) return ComponentKind::Indefinite;
  const auto signs = leading_minor_signs(v);
  if (all_positive(signs)) return ComponentKind::Elliptic;
  if (signs.back() != 0) return ComponentKind::Indefinite;
  std::vector<int> rest(n - 1);
  for (int drop = 0; drop < n; ++drop) {
    for (int a = 0, b = 0; a < n; ++a)
      if (a != drop) rest[b++] = a;
    if (!all_positive(leading_minor_signs(v.restrict(rest)))) return ComponentKind::Indefinite;
  }
  return ComponentKind::Parabolic;
}

}  // namespace

ComponentKind component_kind(const CoxeterVector& v) {
  if (v.has_divergent()) throw std::invalid_argument("divergent entry in diagram classification");
  if (v.nodes() > 6 || v.max_finite_weight() > 14) return compute_kind(v);
  thread_local std::unordered_map<std::uint64_t, ComponentKind> memo;
  const std::uint64_t key = v.key() ^ (std::uint64_t(v.nodes()) << 60);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const ComponentKind k = compute_kind(v);
  memo.emplace(key, k);
  return k;
}

namespace {

struct ComponentSummary {
  int count = 0, elliptic = 0, parabolic = 0;
};

ComponentSummary summarize(const CoxeterVector& v) {
  ComponentSummary s;
  for (const auto& c : components(v)) {
    ++s.count;
    const ComponentKind k = component_kind(v.restrict(c));
    if (k == ComponentKind::Elliptic) ++s.elliptic;
    if (k == ComponentKind::Parabolic) ++s.parabolic;
  }
  return s;
}

}  // namespace

DiagramClass classify(const CoxeterVector& v) {
  if (v.has_divergent()) throw std::invalid_argument("divergent entry in diagram classification");
  const ComponentSummary top = summarize(v);
  if (top.elliptic == top.count) return DiagramClass::Elliptic;
  if (top.parabolic == top.count) return DiagramClass::Parabolic;
  if (top.count != 1) return DiagramClass::Indefinite;
  const int n = v.nodes();
  bool lanner = true;
  std::vector<int> sub;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    if (__builtin_popcount(mask) < 2) continue;
    sub.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(i);
    const ComponentSummary s = summarize(v.restrict(sub));
    if (s.elliptic == s.count) continue;
    lanner = false;
    if (!(s.count == 1 && s.parabolic == 1)) return DiagramClass::Indefinite;
  }
  return lanner ? DiagramClass::Lanner : DiagramClass::QuasiLanner;
}

bool is_nonnegative(const CoxeterVector& v) {
  const ComponentSummary s = summarize(v);
  return s.elliptic + s.parabolic == s.count;
}

bool is_connected_parabolic(const CoxeterVector& v) {
  const ComponentSummary s = summarize(v);
  return s.count == 1 && s.parabolic == 1;
}

int nonnegative_rank(const CoxeterVector& v) {
  const ComponentSummary s = summarize(v);
  if (s.elliptic + s.parabolic != s.count) throw std::invalid_argument("diagram is not nonnegative");
  return v.nodes() - s.parabolic;
}

namespace {

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= std::uint64_t(i);
  return f;
}

struct EllipticType {
  std::string name;
  std::uint64_t order;
};

EllipticType identify(const CoxeterVector& v) {
  const int n = v.nodes();
  if (n == 1) return {"A1", 2};
  if (n == 2) {
    const Weight w = v[0];
    if (w == kParallel || w == kDivergent || w == kRightAngle) throw std::invalid_argument("not a connected elliptic pair");
    const std::string name = w == 3 ? "A2" : w == 4 ? "B2" : w == 6 ? "G2" : "I2(" + std::to_string(int(w)) + ")";
    return {name, 2u * w};
  }
  std::vector<int> degree(n, 0);
  std::vector<std::pair<NodePair, Weight>> edges;
  for (int k = 0; k < v.size(); ++k) {
    if (v[k] == kRightAngle) continue;
    const NodePair p = pair_at(n, k);
    ++degree[p.i];
    ++degree[p.j];
    edges.push_back({p, v[k]});
  }
  auto fail = [&]() -> EllipticType {
    throw std::invalid_argument("diagram " + v.str() + " matches no finite Coxeter type");
  };
  if (int(edges.size()) != n - 1) return fail();
  int heavy = 0;
  Weight heavy_weight = 3;
  NodePair heavy_edge{};
  for (const auto& [p, w] : edges) {
    if (w == 3) continue;
    if (w != 4 && w != 5) return fail();
    ++heavy;
    heavy_weight = w;
    heavy_edge = p;
  }
  const int max_degree = *std::max_element(degree.begin(), degree.end());
  if (heavy == 0) {
    if (max_degree <= 2) return {"A" + std::to_string(n), factorial(n + 1)};
    if (max_degree != 3 || std::count(degree.begin(), degree.end(), 3) != 1) return fail();
    const int centre = int(std::find(degree.begin(), degree.end(), 3) - degree.begin());
    std::vector<int> arms;
    for (int start = 0; start < n; ++start) {
      if (start == centre || v(centre, start) == kRightAngle) continue;
      int len = 1, prev = centre, cur = start;
      for (bool moved = true; moved;) {
        moved = false;
        for (int j = 0; j < n; ++j)
          if (j != prev && j != cur && v(cur, j) != kRightAngle) {
            prev = cur, cur = j, ++len, moved = true;
            break;
          }
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return {"D" + std::to_string(n), (std::uint64_t(1) << (n - 1)) * factorial(n)};
    if (arms == std::vector<int>{1, 2, 2}) return {"E6", 51840};
    if (arms == std::vector<int>{1, 2, 3}) return {"E7", 2903040};
    if (arms == std::vector<int>{1, 2, 4}) return {"E8", 696729600};
    return fail();
  }
  if (heavy != 1 || max_degree > 2) return fail();
  const bool at_end = degree[heavy_edge.i] == 1 || degree[heavy_edge.j] == 1;
  if (heavy_weight == 4) {
    if (at_end) return {"B" + std::to_string(n), (std::uint64_t(1) << n) * factorial(n)};
    if (n == 4) return {"F4", 1152};
    return fail();
  }
  if (!at_end) return fail();
  if (n == 3) return {"H3", 120};
  if (n == 4) return {"H4", 14400};
  return fail();
}

}  // namespace

std::string elliptic_type(const CoxeterVector& connected) { return identify(connected).name; }

std::uint64_t elliptic_order(const CoxeterVector& v) {
  std::uint64_t order = 1;
  for (const auto& c : components(v)) {
    const CoxeterVector sub = v.restrict(c);
    if (component_kind(sub) != ComponentKind::Elliptic)
      throw std::invalid_argument("diagram " + v.str() + " is not elliptic");
    order *= identify(sub).order;
  }
  return order;
}

namespace {

struct PermutationTable {
  int nodes = 0;
  std::vector<std::array<std::uint8_t, kMaxPairs>> source;  // source[q][k]: entry index read for slot k
  std::vector<std::array<std::uint8_t, kMaxNodes>> perms;
};

const PermutationTable& permutation_table(int n) {
  static const std::array<PermutationTable, kMaxNodes + 1> tables = [] {
    std::array<PermutationTable, kMaxNodes + 1> t;
    for (int n = 0; n <= kMaxNodes; ++n) {
      t[n].nodes = n;
      std::array<std::uint8_t, kMaxNodes> q{};
      std::iota(q.begin(), q.begin() + n, 0);
      do {
        std::array<std::uint8_t, kMaxPairs> src{};
        for (int k = 0; k < num_pairs(n); ++k) {
          const NodePair p = pair_at(n, k);
          src[k] = std::uint8_t(pair_index(n, q[p.i], q[p.j]));
        }
        t[n].source.push_back(src);
        t[n].perms.push_back(q);
      } while (std::next_permutation(q.begin(), q.begin() + n));
    }
    return t;
  }();
  return tables[n];
}

}  // namespace

CoxeterVector canonical_form(const CoxeterVector& v, std::vector<int>& perm) {
  const int n = v.nodes();
  const int len = v.size();
  const PermutationTable& table = permutation_table(n);
  std::array<Weight, kMaxPairs> best{};
  for (int k = 0; k < len; ++k) best[k] = v[k];
  std::size_t best_q = 0;
  for (std::size_t q = 1; q < table.source.size(); ++q) {
    const auto& src = table.source[q];
    int k = 0;
    while (k < len && v[src[k]] == best[k]) ++k;
    if (k == len || v[src[k]] > best[k]) continue;
    for (; k < len; ++k) best[k] = v[src[k]];
    best_q = q;
  }
  // slot (x, y) of the result reads v(q[x], q[y]); node q[x] of v becomes node x
  perm.assign(n, 0);
  for (int x = 0; x < n; ++x) perm[table.perms[best_q][x]] = x;
  return CoxeterVector(n, std::span<const Weight>(best.data(), len));
}

CoxeterVector canonical_form(const CoxeterVector& v) {
  std::vector<int> perm;
  return canonical_form(v, perm);
}

std::string to_dot(const CoxeterVector& v, const std::vector<std::string>& divergent_labels, const std::string& name) {
  std::string out = "graph \"" + name + "\" {\n  node [shape=circle];\n";
  for (int i = 0; i < v.nodes(); ++i) out += "  " + std::to_string(i) + ";\n";
  std::size_t divergent = 0;
  for (int k = 0; k < v.size(); ++k) {
    const Weight w = v[k];
    if (w == kRightAngle) continue;
    const auto [i, j] = pair_at(v.nodes(), k);
    std::string attrs;
    if (w == kDivergent) {
      attrs = "style=dotted";
      if (divergent < divergent_labels.size()) attrs += ", label=\"" + divergent_labels[divergent] + "\"";
      ++divergent;
    } else if (w == kParallel) {
      attrs = "penwidth=3, label=\"0\"";
    } else if (w <= 6) {
      std::string color = "black";
      for (int s = 3; s < w; ++s) color += ":black";
      if (w > 3) attrs = "color=\"" + color + "\"";
    } else {
      attrs = "label=\"" + std::to_string(w) + "\"";
    }
    out += "  " + std::to_string(i) + " -- " + std::to_string(j);
    if (!attrs.empty()) out += " [" + attrs + "]";
    out += ";\n";
  }
  return out + "}\n";
}

}  // namespace hcox
