#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hcox/combinatorics.hpp"
#include "hcox/coxeter_vector.hpp"
#include "hcox/library.hpp"

namespace hcox {

// One candidate 7x7 Coxeter matrix in pair order 01, 02, ..., 56.
using Row = std::array<Weight, kMaxPairs>;
// Bit k selects column k.
using ColumnSet = std::uint32_t;

CoxeterVector to_vector(const Row& r);
Row to_row(const CoxeterVector& v);

struct Chunk {
  int vertex = 0;
  Tuple facets;
  LinkClass link;
  std::vector<int> label_set;  // 10a + b for a < b in facets
  std::vector<int> index_set;  // the same pairs as column indices
};

std::vector<Chunk> chunks(const CombinatorialPolytope& p);

struct Block {
  ColumnSet active = 0;
  ColumnSet divergent = 0;
  std::vector<Row> rows;
};

Block build_block(const Chunk& chunk, const std::vector<FacetPair>& d, const LibrarySet& libs);

enum class ConditionKind { Saving, SphericalKill, EuclideanKill };

struct TupleCondition {
  Tuple facets;
  ConditionKind kind;
};

// True when the row survives the condition.
bool passes(const Row& row, const TupleCondition& c, const LibrarySet& libs);

Block prune(Block b, const std::vector<TupleCondition>& layer, const LibrarySet& libs);

// Rows agreeing on acc.active & b.active are merged; the merged row takes b's
// values on the columns only b constrains.
Block paste(const Block& acc, const Block& b);

// Incidence conditions grouped by the first pasting step (0-based, in the
// given block order) after which all their columns are active.
std::vector<std::vector<TupleCondition>> prune_layers(const IncidenceData& inc, const std::vector<Chunk>& order);

struct PastingOptions {
  std::size_t row_limit = 50'000'000;
  int threads = 1;
  // Bracket indices in pasting order; empty means input order.
  std::vector<int> order;
  std::function<void(const std::string&)> log;
};

struct PastingStats {
  std::vector<std::size_t> rows_after_step;
  std::size_t full_rows = 0;       // after the last paste and prune
  std::size_t connected_rows = 0;  // after dropping disconnected vectors
  double seconds = 0;
};

struct SelcperSet {
  int polytope_id = 0;
  // One representative per relabeling class, in the polytope's own facet
  // labels: the lexicographically smallest member of the class.
  std::vector<CoxeterVector> vectors;
  // canonical_form of each representative, same order.
  std::vector<CoxeterVector> canonical;
  PastingStats stats;
};

struct RowLimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SelcperSet enumerate_selcper(const CombinatorialPolytope& p, const IncidenceData& inc, const LibrarySet& libs,
                             const PastingOptions& opt = {});

}  // namespace hcox
