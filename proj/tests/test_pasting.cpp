#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <random>

#include "hcox/diagrams.hpp"
#include "hcox/pasting.hpp"
#include "test_support.hpp"

using namespace hcox;
using hcox::test::polytope;

namespace {

const LibrarySet& libs() {
  static const LibrarySet l = build_libraries({}, std::filesystem::temp_directory_path() / "hcox_test_libraries");
  return l;
}

int col(int a, int b) { return pair_index(kMaxNodes, a, b); }

Row row_with(std::initializer_list<std::pair<FacetPair, int>> entries) {
  Row r{};
  for (const auto& [p, w] : entries) r[col(p.first, p.second)] = Weight(w);
  return r;
}

ColumnSet columns(std::initializer_list<FacetPair> pairs) {
  ColumnSet s = 0;
  for (const auto& [a, b] : pairs) s |= 1u << col(a, b);
  return s;
}

SelcperSet run(const std::string& label, std::vector<int> order = {}) {
  const auto& p = polytope(label);
  PastingOptions opt;
  opt.order = std::move(order);
  return enumerate_selcper(p, derive_incidence(p), libs(), opt);
}

}  // namespace

TEST_CASE("chunks carry the pair labels of each bracket") {
  const auto cs = chunks(polytope("P8"));
  REQUIRE(cs.size() == polytope("P8").brackets.size());
  CHECK(cs[0].facets == Tuple{2, 3, 4, 5, 6});
  CHECK(cs[0].link.kind == LinkKind::Prism);
  CHECK(cs[0].label_set == std::vector<int>{23, 24, 25, 26, 34, 35, 36, 45, 46, 56});
  for (const auto& c : cs) {
    CHECK(std::is_sorted(c.label_set.begin(), c.label_set.end()));
    const std::size_t n = c.label_set.size();
    CHECK((n == 6 || n == 10 || n == 15));
  }
}

TEST_CASE("prism block of P8 has 10 rows including the printed one") {
  const auto& p = polytope("P8");
  const Block b = build_block(chunks(p)[0], derive_incidence(p).d, libs());
  CHECK(b.rows.size() == 10);
  CHECK(b.divergent == columns({{0, 5}}));
  const std::vector<int> printed{2, 2, 2, 0, 6, 3, 2, 2, 2, 2};
  const std::vector<FacetPair> cols{{2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 4}, {3, 5}, {3, 6}, {4, 5}, {4, 6}, {5, 6}};
  bool found = false;
  for (const Row& r : b.rows) {
    CHECK(r[col(0, 5)] == kDivergent);
    CHECK(r[col(2, 6)] == kParallel);
    bool same = true;
    for (std::size_t k = 0; k < cols.size(); ++k) same = same && r[col(cols[k].first, cols[k].second)] == printed[k];
    found = found || same;
    for (int c = 0; c < kMaxPairs; ++c)
      if (!((b.active | b.divergent) & (1u << c))) CHECK(r[c] == 0);
  }
  CHECK(found);
}

TEST_CASE("simplex and cube blocks") {
  const auto& p16 = polytope("P16");
  CHECK(build_block(chunks(p16)[0], derive_incidence(p16).d, libs()).rows.size() == 269);
  const auto& p1 = polytope("P1");
  const Block cube = build_block(chunks(p1)[0], derive_incidence(p1).d, libs());
  REQUIRE(cube.rows.size() == 1);
  CHECK(cube.rows[0][col(1, 6)] == kParallel);
  CHECK(cube.rows[0][col(2, 5)] == kParallel);
  CHECK(cube.rows[0][col(3, 4)] == kParallel);
  CHECK(cube.rows[0][col(1, 2)] == kRightAngle);
}

TEST_CASE("paste joins rows on the linking key") {
  const ColumnSet key = columns({{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  Block a;
  a.active = key | columns({{0, 5}});
  a.rows = {row_with({{{0, 1}, 3}, {{0, 2}, 2}, {{0, 3}, 2}, {{0, 4}, 2}, {{0, 5}, 4}}),
            row_with({{{0, 1}, 2}, {{0, 2}, 3}, {{0, 3}, 2}, {{0, 4}, 2}, {{0, 5}, 5}})};
  Block b;
  b.active = key | columns({{1, 2}});
  b.rows = {row_with({{{0, 1}, 3}, {{0, 2}, 2}, {{0, 3}, 2}, {{0, 4}, 2}, {{1, 2}, 6}}),
            row_with({{{0, 1}, 2}, {{0, 2}, 3}, {{0, 3}, 2}, {{0, 4}, 2}, {{1, 2}, 4}}),
            row_with({{{0, 1}, 2}, {{0, 2}, 2}, {{0, 3}, 3}, {{0, 4}, 2}, {{1, 2}, 5}})};
  const Block c = paste(a, b);
  CHECK(c.active == (a.active | b.active));
  REQUIRE(c.rows.size() == 2);
  CHECK(c.rows[0][col(0, 5)] == 4);
  CHECK(c.rows[0][col(1, 2)] == 6);
  CHECK(c.rows[1][col(0, 5)] == 5);
  CHECK(c.rows[1][col(1, 2)] == 4);
}

TEST_CASE("paste with a disjoint active set is a product, with full overlap is idempotent") {
  Block a;
  a.active = columns({{0, 1}});
  a.rows = {row_with({{{0, 1}, 3}}), row_with({{{0, 1}, 4}})};
  Block b;
  b.active = columns({{2, 3}});
  b.rows = {row_with({{{2, 3}, 5}}), row_with({{{2, 3}, 6}}), row_with({{{2, 3}, 2}})};
  CHECK(paste(a, b).rows.size() == 6);
  Block one;
  one.active = columns({{0, 1}, {2, 3}});
  one.rows = {row_with({{{0, 1}, 3}, {{2, 3}, 5}})};
  const Block same = paste(one, one);
  REQUIRE(same.rows.size() == 1);
  CHECK(same.rows[0] == one.rows[0]);
}

TEST_CASE("killing and saving conditions") {
  const Row a2_affine = row_with({{{0, 1}, 3}, {{0, 2}, 3}, {{1, 2}, 3}});
  CHECK_FALSE(passes(a2_affine, {{0, 1, 2}, ConditionKind::EuclideanKill}, libs()));
  CHECK(passes(a2_affine, {{0, 1, 2}, ConditionKind::SphericalKill}, libs()));
  const Row a3 = row_with({{{0, 1}, 2}, {{0, 2}, 3}, {{1, 2}, 3}});
  CHECK_FALSE(passes(a3, {{0, 1, 2}, ConditionKind::SphericalKill}, libs()));
  const Row lanner = row_with({{{0, 1}, 2}, {{0, 2}, 3}, {{1, 2}, 7}});
  CHECK(passes(lanner, {{0, 1, 2}, ConditionKind::Saving}, libs()));
  CHECK_FALSE(passes(a3, {{0, 1, 2}, ConditionKind::Saving}, libs()));
  Row disconnected = row_with({{{0, 1}, 3}, {{2, 3}, 5}});
  for (auto [x, y] : std::vector<FacetPair>{{0, 2}, {0, 3}, {1, 2}, {1, 3}}) disconnected[col(x, y)] = kRightAngle;
  CHECK(passes(disconnected, {{0, 1, 2, 3}, ConditionKind::Saving}, libs()));
}

TEST_CASE("SELCper counts for small polytopes") {
  CHECK(run("P2").vectors.size() == 2);
  CHECK(run("P11").vectors.size() == 13);
  CHECK(run("P16").vectors.size() == 81);
}

TEST_CASE("SELCper set does not depend on the pasting order") {
  for (const char* label : {"P2", "P11", "P4"}) {
    const SelcperSet base = run(label);
    std::vector<int> order(polytope(label).brackets.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(17);
    for (int t = 0; t < 2; ++t) {
      std::shuffle(order.begin(), order.end(), rng);
      const SelcperSet other = run(label, order);
      CHECK_MESSAGE(std::set(other.canonical.begin(), other.canonical.end()) ==
                        std::set(base.canonical.begin(), base.canonical.end()),
                    label);
    }
  }
}

TEST_CASE("SELCper vectors are connected, dedup is exact, divergence sits on d") {
  for (const char* label : {"P1", "P11", "P16"}) {
    const auto& p = polytope(label);
    const IncidenceData inc = derive_incidence(p);
    const SelcperSet s = run(label);
    std::set<CoxeterVector> canon;
    for (std::size_t i = 0; i < s.vectors.size(); ++i) {
      const CoxeterVector& v = s.vectors[i];
      CHECK(v.connected());
      CHECK(canonical_form(v) == s.canonical[i]);
      canon.insert(s.canonical[i]);
      for (int a = 0; a < 7; ++a)
        for (int b = a + 1; b < 7; ++b) {
          const bool in_d = std::count(inc.d.begin(), inc.d.end(), FacetPair{a, b}) > 0;
          CHECK((v(a, b) == kDivergent) == in_d);
        }
      for (std::size_t w = 0; w < p.brackets.size(); ++w) {
        const LinkClass link = classify_link(p, int(w));
        for (const auto& [a, b] : link.parallel_pairs) CHECK(v(a, b) == kParallel);
        if (link.kind == LinkKind::Simplex) CHECK(libs().pb4.contains(v.restrict(p.brackets[w])));
      }
    }
    CHECK(canon.size() == s.vectors.size());
  }
}
