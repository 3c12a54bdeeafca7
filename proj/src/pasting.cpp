#include "hcox/pasting.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "hcox/diagrams.hpp"

namespace hcox {

namespace {

constexpr int kNodes = 7;

int column(int a, int b) { return pair_index(kNodes, a, b); }

std::uint64_t code(Weight w) { return w == kDivergent ? 15u : std::uint64_t(w); }

struct KeyHash {
  std::size_t operator()(unsigned __int128 k) const {
    std::uint64_t lo = std::uint64_t(k), hi = std::uint64_t(k >> 64);
    lo ^= hi * 0x9e3779b97f4a7c15ULL;
    lo ^= lo >> 29;
    lo *= 0xbf58476d1ce4e5b9ULL;
    return std::size_t(lo ^ (lo >> 32));
  }
};

unsigned __int128 project(const Row& r, const std::vector<int>& cols) {
  unsigned __int128 k = 0;
  for (int c : cols) k = (k << 4) | code(r[c]);
  return k;
}

std::vector<int> columns_of(ColumnSet s) {
  std::vector<int> out;
  for (int c = 0; c < kMaxPairs; ++c)
    if (s & (1u << c)) out.push_back(c);
  return out;
}

struct CompiledCondition {
  std::array<std::uint8_t, 15> cols{};
  std::array<std::uint8_t, 15> pair_a{}, pair_b{};
  int ncols = 0;
  int nodes = 0;
  ConditionKind kind{};
  const VectorLibrary* lib = nullptr;
};

CompiledCondition compile(const TupleCondition& c, const LibrarySet& libs) {
  CompiledCondition cc;
  cc.nodes = int(c.facets.size());
  cc.kind = c.kind;
  for (int a = 0; a < cc.nodes; ++a)
    for (int b = a + 1; b < cc.nodes; ++b) {
      cc.pair_a[cc.ncols] = std::uint8_t(a);
      cc.pair_b[cc.ncols] = std::uint8_t(b);
      cc.cols[cc.ncols++] = std::uint8_t(column(c.facets[a], c.facets[b]));
    }
  switch (c.kind) {
    case ConditionKind::Saving: cc.lib = &libs.lanner(cc.nodes); break;
    case ConditionKind::SphericalKill: cc.lib = &libs.spherical(cc.nodes); break;
    case ConditionKind::EuclideanKill: cc.lib = &libs.euclidean(cc.nodes); break;
  }
  return cc;
}

bool passes(const Row& row, const CompiledCondition& c) {
  std::uint64_t key = 0;
  for (int k = 0; k < c.ncols; ++k) key = (key << 4) | code(row[c.cols[k]]);
  const bool member = c.lib->contains_key(key);
  if (c.kind != ConditionKind::Saving) return !member;
  if (member) return true;
  // the saving condition binds connected sub-diagrams only
  unsigned reach = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (int k = 0; k < c.ncols; ++k) {
      if (row[c.cols[k]] == kRightAngle) continue;
      const unsigned a = 1u << c.pair_a[k], b = 1u << c.pair_b[k];
      if (bool(reach & a) != bool(reach & b)) {
        reach |= a | b;
        grew = true;
      }
    }
  }
  return reach != (1u << c.nodes) - 1;
}

bool passes_all(const Row& row, const std::vector<CompiledCondition>& cs) {
  for (const auto& c : cs)
    if (!passes(row, c)) return false;
  return true;
}

template <class Work>
void run_partitioned(std::size_t total, int threads, std::vector<std::vector<Row>>& parts, Work work) {
  threads = std::max(1, std::min<int>(threads, int(total / 4096) + 1));
  parts.assign(std::size_t(threads), {});
  if (threads == 1) {
    work(0, total, parts[0]);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] { work(total * t / threads, total * (t + 1) / threads, parts[std::size_t(t)]); });
  for (auto& th : pool) th.join();
}

std::vector<Row> concat(std::vector<std::vector<Row>>& parts) {
  if (parts.size() == 1) return std::move(parts[0]);
  std::size_t n = 0;
  for (const auto& p : parts) n += p.size();
  std::vector<Row> out;
  out.reserve(n);
  for (auto& p : parts) {
    out.insert(out.end(), p.begin(), p.end());
    std::vector<Row>().swap(p);
  }
  return out;
}

Block paste_and_prune(const Block& acc, const Block& b, const std::vector<CompiledCondition>& conds,
                      const PastingOptions& opt, std::size_t step) {
  const ColumnSet key_set = acc.active & b.active;
  const std::vector<int> key_cols = columns_of(key_set);
  const std::vector<int> new_cols = columns_of(b.active & ~acc.active);
  std::unordered_map<unsigned __int128, std::vector<std::uint32_t>, KeyHash> index;
  for (std::uint32_t i = 0; i < b.rows.size(); ++i) index[project(b.rows[i], key_cols)].push_back(i);

  Block out;
  out.active = acc.active | b.active;
  out.divergent = acc.divergent | b.divergent;
  std::vector<std::vector<Row>> parts;
  const std::size_t share = opt.row_limit / std::size_t(std::max(1, opt.threads)) + 1;
  run_partitioned(acc.rows.size(), opt.threads, parts, [&](std::size_t lo, std::size_t hi, std::vector<Row>& dst) {
    for (std::size_t r = lo; r < hi; ++r) {
      const Row& a = acc.rows[r];
      auto it = index.find(project(a, key_cols));
      if (it == index.end()) continue;
      for (std::uint32_t bi : it->second) {
        Row merged = a;
        const Row& br = b.rows[bi];
        for (int c : new_cols) merged[c] = br[c];
        if (!passes_all(merged, conds)) continue;
        dst.push_back(merged);
        if (dst.size() > share) {
          std::ostringstream os;
          os << "pasting step " << step + 1 << " exceeded the row limit of " << opt.row_limit
             << " rows; raise --row-limit or change the block order";
          throw RowLimitExceeded(os.str());
        }
      }
    }
  });
  out.rows = concat(parts);
  if (out.rows.size() > opt.row_limit) {
    std::ostringstream os;
    os << "pasting step " << step + 1 << " produced " << out.rows.size() << " rows, above the row limit "
       << opt.row_limit;
    throw RowLimitExceeded(os.str());
  }
  return out;
}

void place(Row& row, const CoxeterVector& v, const std::vector<int>& facet_of_node) {
  for (int a = 0; a < v.nodes(); ++a)
    for (int b = a + 1; b < v.nodes(); ++b) row[column(facet_of_node[a], facet_of_node[b])] = v(a, b);
}

}  // namespace

CoxeterVector to_vector(const Row& r) { return CoxeterVector(kNodes, std::span<const Weight>(r.data(), kMaxPairs)); }

Row to_row(const CoxeterVector& v) {
  if (v.nodes() != kNodes) throw std::invalid_argument("pasting rows have 7 nodes");
  Row r{};
  std::copy(v.entries().begin(), v.entries().end(), r.begin());
  return r;
}

std::vector<Chunk> chunks(const CombinatorialPolytope& p) {
  std::vector<Chunk> out;
  for (std::size_t v = 0; v < p.brackets.size(); ++v) {
    Chunk c;
    c.vertex = int(v);
    c.facets = p.brackets[v];
    c.link = classify_link(p, int(v));
    for (std::size_t a = 0; a < c.facets.size(); ++a)
      for (std::size_t b = a + 1; b < c.facets.size(); ++b) {
        c.label_set.push_back(10 * c.facets[a] + c.facets[b]);
        c.index_set.push_back(column(c.facets[a], c.facets[b]));
      }
    out.push_back(std::move(c));
  }
  return out;
}

Block build_block(const Chunk& chunk, const std::vector<FacetPair>& d, const LibrarySet& libs) {
  for (const auto& [a, b] : d)
    if (std::binary_search(chunk.facets.begin(), chunk.facets.end(), a) &&
        std::binary_search(chunk.facets.begin(), chunk.facets.end(), b))
      throw std::invalid_argument("bracket " + tuple_str(chunk.facets) + " contains the disjoint pair " +
                                  std::to_string(a) + std::to_string(b));
  Block blk;
  for (int c : chunk.index_set) blk.active |= 1u << c;
  for (const auto& [a, b] : d) blk.divergent |= 1u << column(a, b);
  Row base{};
  for (const auto& [a, b] : d) base[column(a, b)] = kDivergent;

  std::vector<int> facet_of_node;
  const VectorLibrary* lib = nullptr;
  switch (chunk.link.kind) {
    case LinkKind::Simplex:
      if (chunk.facets.size() != 4) throw std::invalid_argument("simplex chunk must have 4 facets");
      facet_of_node = chunk.facets;
      lib = &libs.pb4;
      break;
    case LinkKind::Prism: {
      const auto [p, q] = chunk.link.parallel_pairs.at(0);
      facet_of_node = {p, q};
      for (int f : chunk.facets)
        if (f != p && f != q) facet_of_node.push_back(f);
      lib = &libs.pb5;
      break;
    }
    case LinkKind::Cube:
      for (const auto& [p, q] : chunk.link.parallel_pairs) {
        facet_of_node.push_back(p);
        facet_of_node.push_back(q);
      }
      lib = &libs.pb6;
      break;
    case LinkKind::Other: throw std::invalid_argument("chunk " + tuple_str(chunk.facets) + " has an inadmissible link");
  }
  for (const auto& v : lib->vectors()) {
    Row r = base;
    place(r, v, facet_of_node);
    blk.rows.push_back(r);
  }
  return blk;
}

bool passes(const Row& row, const TupleCondition& c, const LibrarySet& libs) { return passes(row, compile(c, libs)); }

Block prune(Block b, const std::vector<TupleCondition>& layer, const LibrarySet& libs) {
  std::vector<CompiledCondition> cs;
  for (const auto& c : layer) cs.push_back(compile(c, libs));
  std::erase_if(b.rows, [&](const Row& r) { return !passes_all(r, cs); });
  return b;
}

Block paste(const Block& acc, const Block& b) { return paste_and_prune(acc, b, {}, PastingOptions{}, 0); }

std::vector<std::vector<TupleCondition>> prune_layers(const IncidenceData& inc, const std::vector<Chunk>& order) {
  std::vector<ColumnSet> active_after;
  ColumnSet active = 0;
  for (const auto& c : order) {
    for (int col : c.index_set) active |= 1u << col;
    active_after.push_back(active);
  }
  std::vector<std::vector<TupleCondition>> layers(order.size());
  auto assign = [&](const std::vector<Tuple>& tuples, ConditionKind kind) {
    for (const auto& t : tuples) {
      ColumnSet need = 0;
      for (std::size_t a = 0; a < t.size(); ++a)
        for (std::size_t b = a + 1; b < t.size(); ++b) need |= 1u << column(t[a], t[b]);
      for (std::size_t j = 0; j < order.size(); ++j)
        if ((active_after[j] & need) == need) {
          layers[j].push_back({t, kind});
          break;
        }
    }
  };
  assign(inc.l3, ConditionKind::Saving);
  assign(inc.l4, ConditionKind::Saving);
  assign(inc.s3, ConditionKind::SphericalKill);
  assign(inc.s4, ConditionKind::SphericalKill);
  assign(inc.s5, ConditionKind::SphericalKill);
  assign(inc.s6, ConditionKind::SphericalKill);
  assign(inc.e3, ConditionKind::EuclideanKill);
  assign(inc.e4, ConditionKind::EuclideanKill);
  assign(inc.e5, ConditionKind::EuclideanKill);
  assign(inc.e6, ConditionKind::EuclideanKill);
  return layers;
}

SelcperSet enumerate_selcper(const CombinatorialPolytope& p, const IncidenceData& inc, const LibrarySet& libs,
                             const PastingOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Chunk> all = chunks(p);
  std::vector<Chunk> order;
  if (opt.order.empty())
    order = all;
  else
    for (int v : opt.order) order.push_back(all.at(std::size_t(v)));
  if (order.size() != all.size()) throw std::invalid_argument("block order must list every bracket once");

  const auto layers = prune_layers(inc, order);
  SelcperSet out;
  out.polytope_id = p.id;

  Block acc;
  for (std::size_t j = 0; j < order.size(); ++j) {
    Block b = build_block(order[j], inc.d, libs);
    std::vector<CompiledCondition> cs;
    for (const auto& c : layers[j]) cs.push_back(compile(c, libs));
    if (j == 0) {
      std::erase_if(b.rows, [&](const Row& r) { return !passes_all(r, cs); });
      acc = std::move(b);
    } else {
      acc = paste_and_prune(acc, b, cs, opt, j);
    }
    out.stats.rows_after_step.push_back(acc.rows.size());
    if (opt.log) opt.log("step " + std::to_string(j + 1) + ": " + std::to_string(acc.rows.size()) + " rows");
  }
  out.stats.full_rows = acc.rows.size();

  std::map<Row, Row> best;  // canonical form -> smallest member in the polytope's labels
  std::size_t connected = 0;
  for (const Row& r : acc.rows) {
    const CoxeterVector v = to_vector(r);
    if (!v.connected()) continue;
    ++connected;
    const Row canon = to_row(canonical_form(v));
    auto [it, fresh] = best.emplace(canon, r);
    if (!fresh && r < it->second) it->second = r;
  }
  out.stats.connected_rows = connected;
  std::vector<std::pair<Row, Row>> reps;
  for (const auto& [canon, rep] : best) reps.emplace_back(rep, canon);
  std::sort(reps.begin(), reps.end());
  for (const auto& [rep, canon] : reps) {
    out.vectors.push_back(to_vector(rep));
    out.canonical.push_back(to_vector(canon));
  }
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace hcox
