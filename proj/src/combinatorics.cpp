#include "hcox/combinatorics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#ifndef HCOX_DATA_DIR
#define HCOX_DATA_DIR "data"
#endif

namespace hcox {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

CombinatorialPolytope parse_line(std::string_view line, int lineno) {
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) throw ParseError(lineno, "missing ':'");
  CombinatorialPolytope p;
  {
    std::istringstream head{std::string(line.substr(0, colon))};
    if (!(head >> p.id)) throw ParseError(lineno, "missing polytope id");
    std::string name;
    if (head >> name) p.source_name = name;
    if (head >> name) throw ParseError(lineno, "unexpected text before ':'");
  }
  std::string_view rest = line.substr(colon + 1);
  while (true) {
    rest = trim(rest);
    if (rest.empty()) break;
    if (rest.front() != '[') throw ParseError(lineno, "expected '['");
    const auto close = rest.find(']');
    if (close == std::string_view::npos) throw ParseError(lineno, "unterminated bracket");
    std::string body(rest.substr(1, close - 1));
    for (char& c : body)
      if (c == ',') c = ' ';
    std::istringstream in(body);
    Tuple t;
    int f;
    while (in >> f) {
      if (f < 0 || f >= p.num_facets)
        throw ParseError(lineno, "facet index " + std::to_string(f) + " out of range 0.." + std::to_string(p.num_facets - 1));
      t.push_back(f);
    }
    in.clear();
    std::string junk;
    if (in >> junk) throw ParseError(lineno, "malformed bracket '[" + std::string(rest.substr(1, close - 1)) + "]'");
    if (t.empty()) throw ParseError(lineno, "empty bracket");
    std::sort(t.begin(), t.end());
    if (std::adjacent_find(t.begin(), t.end()) != t.end()) throw ParseError(lineno, "repeated facet in bracket");
    if (std::find(p.brackets.begin(), p.brackets.end(), t) != p.brackets.end())
      throw ParseError(lineno, "duplicate bracket " + tuple_str(t));
    p.brackets.push_back(std::move(t));
    rest.remove_prefix(close + 1);
  }
  if (p.brackets.empty()) throw ParseError(lineno, "no brackets");
  return p;
}

bool contains_all(const Tuple& big, const Tuple& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<Tuple> subsets(int n, int k) {
  std::vector<Tuple> out;
  Tuple t(k);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    int m = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) t[m++] = i;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool has_pair(const Tuple& t, const std::vector<FacetPair>& pairs) {
  for (const auto& [a, b] : pairs)
    if (std::binary_search(t.begin(), t.end(), a) && std::binary_search(t.begin(), t.end(), b)) return true;
  return false;
}

Tuple without(const Tuple& t, const FacetPair& p) {
  Tuple r;
  for (int f : t)
    if (f != p.first && f != p.second) r.push_back(f);
  return r;
}

}  // namespace

std::vector<CombinatorialPolytope> parse_polytopes(std::string_view text) {
  std::vector<CombinatorialPolytope> out;
  int lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(parse_line(line, lineno));
  }
  return out;
}

std::vector<CombinatorialPolytope> load_polytopes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read polytope file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_polytopes(ss.str());
}

std::vector<CombinatorialPolytope> bundled_polytopes() {
  return load_polytopes(std::string(HCOX_DATA_DIR) + "/polytopes.txt");
}

std::string to_string(LinkKind k) {
  switch (k) {
    case LinkKind::Simplex: return "Simplex";
    case LinkKind::Prism: return "Prism";
    case LinkKind::Cube: return "Cube";
    case LinkKind::Other: return "Other";
  }
  return "?";
}

std::string tuple_str(const Tuple& t) {
  std::string s = "{";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + "}";
}

int bracket_count(const CombinatorialPolytope& p, const Tuple& t) {
  int c = 0;
  for (const auto& b : p.brackets)
    if (contains_all(b, t)) ++c;
  return c;
}

std::vector<Tuple> vertex_link(const CombinatorialPolytope& p, int v) {
  const Tuple& bv = p.brackets.at(std::size_t(v));
  if (bv.size() < 5) throw std::invalid_argument("vertex link of a simple vertex is a simplex; use classify_link");
  std::vector<Tuple> out;
  for (std::size_t w = 0; w < p.brackets.size(); ++w) {
    if (int(w) == v) continue;
    Tuple common;
    std::set_intersection(bv.begin(), bv.end(), p.brackets[w].begin(), p.brackets[w].end(), std::back_inserter(common));
    if (common.size() == 3) out.push_back(std::move(common));
  }
  return out;
}

LinkClass classify_link(const CombinatorialPolytope& p, int v) {
  const Tuple& bv = p.brackets.at(std::size_t(v));
  if (bv.size() == 4) return {LinkKind::Simplex, {}};
  if (bv.size() != 5 && bv.size() != 6) return {};
  const auto link = vertex_link(p, v);
  std::vector<FacetPair> apart;
  for (std::size_t a = 0; a < bv.size(); ++a)
    for (std::size_t b = a + 1; b < bv.size(); ++b) {
      const Tuple pair{bv[a], bv[b]};
      const bool adjacent = std::any_of(link.begin(), link.end(), [&](const Tuple& t) { return contains_all(t, pair); });
      if (!adjacent) apart.emplace_back(bv[a], bv[b]);
    }
  if (bv.size() == 5) {
    if (link.size() == 6 && apart.size() == 1) return {LinkKind::Prism, apart};
    return {};
  }
  if (link.size() != 8 || apart.size() != 3) return {};
  std::set<int> covered;
  for (const auto& [a, b] : apart) covered.insert({a, b});
  if (covered.size() != 6) return {};
  return {LinkKind::Cube, apart};
}

bool is_admissible(const CombinatorialPolytope& p) {
  for (std::size_t v = 0; v < p.brackets.size(); ++v)
    if (classify_link(p, int(v)).kind == LinkKind::Other) return false;
  return true;
}

IncidenceData derive_incidence(const CombinatorialPolytope& p) {
  const int n = p.num_facets;
  IncidenceData inc;
  for (const auto& t : subsets(n, 2))
    if (bracket_count(p, t) == 0) inc.d.emplace_back(t[0], t[1]);

  std::vector<FacetPair> parallel;
  std::vector<Tuple> prism_brackets, cube_brackets, prism_triangles, parallel_pair_unions;
  for (std::size_t v = 0; v < p.brackets.size(); ++v) {
    const LinkClass lc = classify_link(p, int(v));
    if (lc.kind == LinkKind::Prism) {
      prism_brackets.push_back(p.brackets[v]);
      prism_triangles.push_back(without(p.brackets[v], lc.parallel_pairs[0]));
    } else if (lc.kind == LinkKind::Cube) {
      cube_brackets.push_back(p.brackets[v]);
    }
    parallel.insert(parallel.end(), lc.parallel_pairs.begin(), lc.parallel_pairs.end());
  }
  std::sort(parallel.begin(), parallel.end());
  parallel.erase(std::unique(parallel.begin(), parallel.end()), parallel.end());
  // two parallel pairs together may carry an A~1 + A~1 sub-diagram
  for (std::size_t a = 0; a < parallel.size(); ++a)
    for (std::size_t b = a + 1; b < parallel.size(); ++b) {
      Tuple u{parallel[a].first, parallel[a].second, parallel[b].first, parallel[b].second};
      std::sort(u.begin(), u.end());
      if (std::adjacent_find(u.begin(), u.end()) == u.end()) parallel_pair_unions.push_back(u);
    }
  auto listed = [](const std::vector<Tuple>& list, const Tuple& t) {
    return std::find(list.begin(), list.end(), t) != list.end();
  };

  for (const auto& t : subsets(n, 3)) {
    if (has_pair(t, inc.d)) continue;
    const int c = bracket_count(p, t);
    // at an ideal vertex a parallel pair meets the third facet only at infinity
    if (c == 0 || (c == 1 && has_pair(t, parallel))) inc.l3.push_back(t);
    if (c <= 1) inc.s3.push_back(t);
    if (!listed(prism_triangles, t)) inc.e3.push_back(t);
  }
  for (const auto& t : subsets(n, 4)) {
    if (has_pair(t, inc.d) || listed(p.brackets, t)) continue;
    inc.s4.push_back(t);
    // tetrahedron: every three of the four facets share a vertex, all four do not
    bool triples_meet = true;
    for (int drop = 0; drop < 4; ++drop) {
      Tuple tri;
      for (int i = 0; i < 4; ++i)
        if (i != drop) tri.push_back(t[i]);
      if (bracket_count(p, tri) == 0) triples_meet = false;
    }
    if (triples_meet && !has_pair(t, parallel)) inc.l4.push_back(t);
    if (!listed(parallel_pair_unions, t)) inc.e4.push_back(t);
  }
  for (const auto& t : subsets(n, 5)) {
    if (has_pair(t, inc.d)) continue;
    inc.s5.push_back(t);
    if (!listed(prism_brackets, t)) inc.e5.push_back(t);
  }
  for (const auto& t : subsets(n, 6)) {
    if (has_pair(t, inc.d)) continue;
    inc.s6.push_back(t);
    if (!listed(cube_brackets, t)) inc.e6.push_back(t);
  }
  return inc;
}

std::string RefinedFVector::str() const {
  std::ostringstream os;
  os << "((" << link_counts[0] << "," << link_counts[1] << "," << link_counts[2] << ")," << edges << "," << faces2
     << "," << facets << "," << body << ")";
  return os.str();
}

RefinedFVector combinatorial_f_vector(const CombinatorialPolytope& p) {
  RefinedFVector f;
  for (std::size_t v = 0; v < p.brackets.size(); ++v) {
    switch (classify_link(p, int(v)).kind) {
      case LinkKind::Cube: ++f.link_counts[0]; break;
      case LinkKind::Prism: ++f.link_counts[1]; break;
      case LinkKind::Simplex: ++f.link_counts[2]; break;
      case LinkKind::Other: throw std::invalid_argument("polytope " + p.label() + " is not admissible");
    }
  }
  for (const auto& t : subsets(p.num_facets, 3))
    if (bracket_count(p, t) >= 2) ++f.edges;
  for (const auto& t : subsets(p.num_facets, 2))
    if (bracket_count(p, t) >= 3) ++f.faces2;
  for (int i = 0; i < p.num_facets; ++i)
    if (bracket_count(p, {i}) > 0) ++f.facets;
  f.body = 1;
  return f;
}

}  // namespace hcox
