#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>

#include "hcox/diagrams.hpp"
#include "hcox/invariants.hpp"
#include "hcox/pasting.hpp"
#include "test_support.hpp"

using namespace hcox;
using hcox::test::polytope;

namespace {

const LibrarySet& libs() {
  static const LibrarySet l = build_libraries({}, std::filesystem::temp_directory_path() / "hcox_test_libraries");
  return l;
}

std::vector<PolytopeRecord> records(const std::string& label) {
  static std::map<std::string, std::vector<PolytopeRecord>> memo;
  if (auto it = memo.find(label); it != memo.end()) return it->second;
  const auto& p = polytope(label);
  std::vector<PolytopeRecord> out;
  for (const auto& v : enumerate_selcper(p, derive_incidence(p), libs()).vectors) {
    const SolveOutcome o = solve(v);
    if (o.accepted) out.push_back(certify(p, v, o, int(out.size()) + 1));
  }
  return memo[label] = out;
}

std::multiset<Rational> volumes(const std::vector<PolytopeRecord>& rs) {
  std::multiset<Rational> out;
  for (const auto& r : rs) out.insert(r.volume_pi2);
  return out;
}

std::map<int, int> cusp_histogram(const std::vector<PolytopeRecord>& rs) {
  std::map<int, int> h;
  for (const auto& r : rs) ++h[r.cusps];
  return h;
}

// Brute force over every cyclic node sequence of 2G: each closed simple
// cycle and each edge square must give a rational integer.
Arithmeticity cycle_oracle(const CoxeterVector& v, const std::vector<double>& lengths) {
  const int n = v.nodes();
  std::vector<long double> two_g(std::size_t(n * n), 0);
  std::size_t next = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Weight w = v(i, j);
      const long double x = w == kDivergent ? -2.0L * lengths[next++] : 2.0L * cos_entry_double(w);
      two_g[std::size_t(i * n + j)] = two_g[std::size_t(j * n + i)] = x;
    }
  auto is_int = [](long double x) { return std::abs(x - std::round(x)) < 1e-9; };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!is_int(two_g[std::size_t(i * n + j)] * two_g[std::size_t(i * n + j)])) return Arithmeticity::NonArithmetic;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> nodes;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) nodes.push_back(i);
    if (nodes.size() < 3) continue;
    do {
      long double prod = 1;
      for (std::size_t k = 0; k < nodes.size(); ++k) prod *= two_g[std::size_t(nodes[k] * n + nodes[(k + 1) % nodes.size()])];
      if (prod != 0 && !is_int(prod)) return Arithmeticity::NonArithmetic;
    } while (std::next_permutation(nodes.begin() + 1, nodes.end()));
  }
  return Arithmeticity::Arithmetic;
}

std::vector<std::string> as_strings(const std::vector<double>& xs) {
  std::vector<std::string> out;
  for (double x : xs) out.push_back(std::to_string(x));
  return out;
}

}  // namespace

TEST_CASE("Steinberg sum of small diagrams") {
  CHECK(euler_characteristic(CoxeterVector(3, {2, 3, 7})) == Rational(-1, 84));
  CHECK(euler_characteristic(CoxeterVector(1)) == Rational(1, 2));
  // Affine A2 triangle: the Euclidean triangle group has characteristic 0.
  CHECK(euler_characteristic(CoxeterVector(3, {3, 3, 3})) == Rational(0));
}

TEST_CASE("volume from the characteristic") {
  CHECK(volume4(Rational(3, 4)) == Rational(1));
  CHECK(volume4(Rational(3, 400)) == Rational(1, 100));
  CHECK_THROWS_AS(volume4(Rational(-1)), CertificationError);
  CHECK_THROWS_AS(volume4(Rational(0)), CertificationError);
}

TEST_CASE("integer grading thresholds") {
  CHECK(integer_grade(Real100(3)) == 1);
  CHECK(integer_grade(Real100("2.0000000001")) == -1);
  CHECK(integer_grade(Real100("2.5")) == -1);
  CHECK(integer_grade(Real100("2.00000000000000000001")) == 0);
  CHECK(integer_grade(Real100("-4.0000000000000000000000000000000000001")) == 1);
}

TEST_CASE("arithmeticity of hand-built grams") {
  // entries in {0, -1/2, -1, -sqrt2/2}; the sqrt2 edges meet every cycle twice
  const auto even = CoxeterVector::parse("4,3,2,2,2,2,4,2,2,2,2,3,2,2,2,0,2,2,3,2,2");
  CHECK(arithmeticity_noncompact(substitute(even), {}, {}) == Arithmeticity::Arithmetic);
  CHECK(cycle_oracle(even, {}) == Arithmeticity::Arithmetic);
  const auto golden = CoxeterVector::parse("5,2,2,2,2,2,3,2,2,2,2,3,2,2,2,0,2,2,3,2,2");
  CHECK(arithmeticity_noncompact(substitute(golden), {}, {}) == Arithmeticity::NonArithmetic);
  CHECK(cycle_oracle(golden, {}) == Arithmeticity::NonArithmetic);

  // one length closing a triangle with two weight-3 edges: the cycle is -2x
  const auto tri = CoxeterVector::parse("inf,3,2,2,2,2,3,2,2,2,2,2,2,2,2,2,2,2,2,2,2");
  const SymbolicGram g = substitute(tri);
  CHECK(arithmeticity_noncompact(g, {}, {"1.5"}) == Arithmeticity::Arithmetic);
  CHECK(arithmeticity_noncompact(g, {}, {"1.25"}) == Arithmeticity::NonArithmetic);
  CHECK(arithmeticity_noncompact(g, {}, {"1.00000000005"}) == Arithmeticity::NonArithmetic);
  CHECK(arithmeticity_noncompact(g, {}, {"1.5000000000000000000005"}) == Arithmeticity::Inconclusive);
}

TEST_CASE("arithmeticity agrees with a brute-force cycle oracle") {
  std::mt19937 rng(23);
  static constexpr int kPool[] = {0, 2, 2, 2, 2, 2, 2, 2, 3, 3, 4, 4, 6, 5};
  std::uniform_int_distribution<int> pick(0, std::size(kPool) - 1);
  int nonarith = 0, arith = 0;
  for (int t = 0; t < 300; ++t) {
    CoxeterVector v(7);
    for (int k = 0; k < v.size(); ++k) v[k] = Weight(kPool[pick(rng)]);
    std::vector<double> lengths;
    if (t % 3 == 0) {
      v[t % v.size()] = kDivergent;
      lengths.push_back(std::array{1.5, 2.0, 1.25, 3.0}[t % 4]);
    }
    const Arithmeticity expected = cycle_oracle(v, lengths);
    CHECK_MESSAGE(arithmeticity_noncompact(substitute(v), {}, as_strings(lengths)) == expected, v.str());
    (expected == Arithmeticity::Arithmetic ? arith : nonarith) += 1;
  }
  CHECK(arith > 0);
  CHECK(nonarith > 0);
}

TEST_CASE("characteristic is invariant under relabeling") {
  std::mt19937 rng(29);
  static constexpr int kPool[] = {2, 2, 2, 3, 3, 4, 5, 6, 7, 0, 255};
  std::uniform_int_distribution<int> pick(0, std::size(kPool) - 1);
  for (int t = 0; t < 100; ++t) {
    CoxeterVector v(7);
    for (int k = 0; k < v.size(); ++k) v[k] = Weight(kPool[pick(rng)]);
    std::vector<int> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(euler_characteristic(v.relabel(perm)) == euler_characteristic(v));
  }
}

TEST_CASE("records of P16: 29 compact and 52 with cusps") {
  const auto rs = records("P16");
  REQUIRE(rs.size() == 81);
  int compact = 0;
  for (const auto& r : rs) {
    compact += r.compact;
    CHECK(r.compact == (r.cusps == 0));
    CHECK((r.arithmetic == Arithmeticity::NotApplicableCompact) == r.compact);
  }
  CHECK(compact == 29);
}

TEST_CASE("record invariants") {
  for (const char* label : {"P1", "P2", "P4", "P11", "P16"}) {
    const auto& p = polytope(label);
    for (const auto& r : records(label)) {
      CHECK(r.volume_pi2 == Rational(4, 3) * r.euler_char);
      CHECK(r.volume_pi2 > 0);
      CHECK(r.euler_char == euler_characteristic(r.vector));
      int parabolic = 0, elliptic = 0;
      for (const auto& b : p.brackets) {
        const DiagramClass c = classify(r.vector.restrict(b));
        parabolic += c == DiagramClass::Parabolic && nonnegative_rank(r.vector.restrict(b)) == 3;
        elliptic += c == DiagramClass::Elliptic;
      }
      CHECK(r.cusps == parabolic);
      CHECK(r.cusps == int(p.brackets.size()) - elliptic);
      CHECK(check_finite_volume(r.vector, p) == (r.compact ? VolumeKind::Compact : VolumeKind::FiniteVolumeNonCompact));
    }
  }
}

TEST_CASE("P1 records: all have cusps, with the printed distribution and extremes") {
  const auto rs = records("P1");
  REQUIRE(rs.size() == 13);
  for (const auto& r : rs) CHECK(r.cusps >= 1);
  CHECK(cusp_histogram(rs) == std::map<int, int>{{1, 4}, {2, 2}, {3, 3}, {5, 3}, {9, 1}});
  const auto v = volumes(rs);
  CHECK(*v.begin() == Rational(1, 144));
  CHECK(*v.rbegin() == Rational(1, 9));
}

TEST_CASE("P6 records: printed cusp distribution and volume extremes") {
  const auto rs = records("P6");
  REQUIRE(rs.size() == 37);
  CHECK(cusp_histogram(rs) == std::map<int, int>{{2, 27}, {3, 9}, {4, 1}});
  const auto v = volumes(rs);
  CHECK(*v.begin() == Rational(1, 108));
  CHECK(*v.rbegin() == Rational(5, 108));
}

TEST_CASE("printed volumes and cusps of P2, P3, P5, P7") {
  const auto p2 = records("P2");
  CHECK(volumes(p2) == std::multiset<Rational>{Rational(1, 48), Rational(1, 54)});
  CHECK(cusp_histogram(p2) == std::map<int, int>{{3, 2}});
  const auto p3 = records("P3");
  CHECK(volumes(p3) == std::multiset<Rational>{Rational(1, 27)});
  CHECK(cusp_histogram(p3) == std::map<int, int>{{3, 1}});
  const auto p5 = records("P5");
  CHECK(volumes(p5) == std::multiset<Rational>{Rational(1, 48)});
  CHECK(cusp_histogram(p5) == std::map<int, int>{{2, 1}});
  const auto p7 = records("P7");
  CHECK(volumes(p7) == std::multiset<Rational>{Rational(5, 216), Rational(31, 432)});
  CHECK(cusp_histogram(p7) == std::map<int, int>{{1, 1}, {3, 1}});
  for (const auto& r : p7) {
    if (r.volume_pi2 == Rational(5, 216)) CHECK(r.cusps == 1);
    if (r.volume_pi2 == Rational(31, 432)) CHECK(r.cusps == 3);
  }
}

TEST_CASE("decimal volume") {
  PolytopeRecord r;
  r.volume_pi2 = Rational(1, 144);
  CHECK(r.volume_decimal().substr(0, 12) == "0.0685389194");
}
