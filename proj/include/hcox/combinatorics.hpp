#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hcox {

// Sorted ascending facet indices.
using Tuple = std::vector<int>;
using FacetPair = std::pair<int, int>;

struct CombinatorialPolytope {
  int id = 0;
  int num_facets = 7;
  // Facets meeting at each vertex, each sorted ascending, in input order.
  std::vector<Tuple> brackets;
  std::optional<std::string> source_name;

  std::string label() const { return source_name ? *source_name : std::to_string(id); }
};

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

// One polytope per line: `<id>[ <name>]: [i,j,...][...]...`. Blank lines and
// lines starting with '#' are skipped.
std::vector<CombinatorialPolytope> parse_polytopes(std::string_view text);
std::vector<CombinatorialPolytope> load_polytopes(const std::string& path);
// The bundled 31 combinatorial types.
std::vector<CombinatorialPolytope> bundled_polytopes();

enum class LinkKind { Simplex, Prism, Cube, Other };

struct LinkClass {
  LinkKind kind = LinkKind::Other;
  // Prism: one pair; Cube: three pairs; each pair sorted, pairs sorted.
  std::vector<FacetPair> parallel_pairs;
};

std::string to_string(LinkKind k);

// 3-element intersections of bracket v with the other brackets; v must have
// at least five facets.
std::vector<Tuple> vertex_link(const CombinatorialPolytope& p, int v);
LinkClass classify_link(const CombinatorialPolytope& p, int v);
bool is_admissible(const CombinatorialPolytope& p);

struct IncidenceData {
  std::vector<FacetPair> d;
  std::vector<Tuple> l3, l4;
  std::vector<Tuple> s3, s4, s5, s6;
  std::vector<Tuple> e3, e4, e5, e6;
};

IncidenceData derive_incidence(const CombinatorialPolytope& p);

struct RefinedFVector {
  std::array<int, 3> link_counts{};  // cube, prism, simplex
  int edges = 0, faces2 = 0, facets = 0, body = 1;

  int vertices() const { return link_counts[0] + link_counts[1] + link_counts[2]; }
  std::string str() const;
};

RefinedFVector combinatorial_f_vector(const CombinatorialPolytope& p);

// Number of brackets containing every facet of t.
int bracket_count(const CombinatorialPolytope& p, const Tuple& t);

std::string tuple_str(const Tuple& t);

}  // namespace hcox
