#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hcox/diagrams.hpp"
#include "hcox/library.hpp"

using namespace hcox;

namespace {

CoxeterVector random_vector(std::mt19937& rng, int nodes, bool divergent) {
  static constexpr int kPool[] = {0, 2, 2, 2, 2, 3, 3, 4, 5, 6, 7};
  std::uniform_int_distribution<int> pick(0, std::size(kPool) - 1);
  std::uniform_int_distribution<int> coin(0, 9);
  CoxeterVector v(nodes);
  for (int k = 0; k < v.size(); ++k) v[k] = (divergent && coin(rng) == 0) ? kDivergent : Weight(kPool[pick(rng)]);
  return v;
}

std::vector<int> random_perm(std::mt19937& rng, int nodes) {
  std::vector<int> p(nodes);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Class from floating-point eigenvalues of all principal submatrices.
DiagramClass oracle_class(const CoxeterVector& v) {
  const int n = v.nodes();
  const Eigen::MatrixXd g = to_cos_matrix_double(v);
  auto spectrum = [&](unsigned mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    Eigen::MatrixXd s(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) s(a, b) = g(idx[a], idx[b]);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues();
  };
  const unsigned full = (1u << n) - 1;
  bool proper_pd = true;
  for (unsigned m = 1; m < full; ++m) proper_pd = proper_pd && spectrum(m).minCoeff() > 1e-9;
  const auto ev = spectrum(full);
  if (ev.minCoeff() > 1e-9) return DiagramClass::Elliptic;
  if (proper_pd && std::abs(ev.minCoeff()) < 1e-9) return DiagramClass::Parabolic;
  if (proper_pd && ev.minCoeff() < -1e-9 && ev(1) > 1e-9) return DiagramClass::Lanner;
  return DiagramClass::Indefinite;
}

}  // namespace

TEST_CASE("cos_entry gives the exact negative cosines") {
  CHECK(cos_entry(2) == Field(0));
  CHECK(cos_entry(3) == Field(Rational(-1, 2)));
  CHECK(cos_entry(4) == Field::sqrt_of(2, Rational(-1, 2)));
  CHECK(cos_entry(5) == Field(Rational(-1, 4)) + Field::sqrt_of(5, Rational(-1, 4)));
  CHECK(cos_entry(6) == Field::sqrt_of(3, Rational(-1, 2)));
  CHECK(cos_entry(0) == Field(-1));
  CHECK_THROWS(cos_entry(7));
  CHECK_THROWS(cos_entry(kDivergent));
  for (int w = 2; w <= 6; ++w) CHECK(cos_entry(w).to_double() == doctest::Approx(-std::cos(M_PI / w)));
}

TEST_CASE("cosine matrices") {
  CHECK(to_cos_matrix(CoxeterVector(3)) == CosMatrix::Identity(3, 3));
  const CosMatrix a2 = to_cos_matrix(CoxeterVector(3, {3, 3, 3}));
  CHECK(a2(0, 1) == Field(Rational(-1, 2)));
  CHECK(a2(1, 2) == Field(Rational(-1, 2)));
  CHECK(to_cos_matrix(CoxeterVector(2, {0}))(0, 1) == Field(-1));
  CHECK_THROWS(to_cos_matrix(CoxeterVector(2, {255})));
}

TEST_CASE("classify small diagrams") {
  CHECK(classify(CoxeterVector(3, {2, 3, 7})) == DiagramClass::Lanner);
  CHECK(classify(CoxeterVector(3, {3, 3, 3})) == DiagramClass::Parabolic);
  CHECK(classify(CoxeterVector(3, {3, 2, 3})) == DiagramClass::Elliptic);
  CHECK(classify(CoxeterVector(4, {0, 2, 2, 2, 2, 0})) == DiagramClass::Parabolic);
  CHECK(classify(CoxeterVector(3, {0, 2, 2})) == DiagramClass::Indefinite);
  CHECK(classify(CoxeterVector(3, {0, 3, 2})) == DiagramClass::QuasiLanner);
  CHECK_THROWS(classify(CoxeterVector(3, {255, 2, 2})));
}

TEST_CASE("the path 5,3,5 agrees with a floating-point eigenvalue oracle") {
  CoxeterVector v(4);
  v.set(0, 1, 5);
  v.set(1, 2, 3);
  v.set(2, 3, 5);
  CHECK(oracle_class(v) == DiagramClass::Lanner);
  CHECK(classify(v) == oracle_class(v));
}

TEST_CASE("classify agrees with the oracle on random divergence-free diagrams") {
  std::mt19937 rng(7);
  for (int t = 0; t < 400; ++t) {
    const int n = 3 + t % 3;
    CoxeterVector v = random_vector(rng, n, false);
    for (int k = 0; k < v.size(); ++k)
      if (v[k] == 0 || v[k] == 7) v[k] = 2;
    const DiagramClass expected = oracle_class(v);
    const DiagramClass got = classify(v);
    if (expected == DiagramClass::Indefinite)
      CHECK_MESSAGE((got == DiagramClass::Indefinite || got == DiagramClass::QuasiLanner), v.str());
    else
      CHECK_MESSAGE(got == expected, v.str());
  }
}

TEST_CASE("elliptic orders") {
  CHECK(elliptic_order(CoxeterVector(1)) == 2);
  CHECK(elliptic_order(CoxeterVector(2, {7})) == 14);
  CoxeterVector h4(4);
  h4.set(0, 1, 5);
  h4.set(1, 2, 3);
  h4.set(2, 3, 3);
  CHECK(elliptic_order(h4) == 14400);
  CHECK(elliptic_type(h4) == "H4");
  CHECK(elliptic_order(CoxeterVector(3, {3, 2, 3})) == 24);
  CHECK(elliptic_order(CoxeterVector(3)) == 8);
  CoxeterVector f4(4);
  f4.set(0, 1, 3);
  f4.set(1, 2, 4);
  f4.set(2, 3, 3);
  CHECK(elliptic_order(f4) == 1152);
  CoxeterVector d4(4);
  d4.set(0, 1, 3);
  d4.set(0, 2, 3);
  d4.set(0, 3, 3);
  CHECK(elliptic_order(d4) == 192);
}

TEST_CASE("A1 components contribute a factor of 2") {
  std::mt19937 rng(11);
  int seen = 0;
  for (int t = 0; t < 2000 && seen < 100; ++t) {
    CoxeterVector v = random_vector(rng, 4, false);
    for (int k = 0; k < v.size(); ++k)
      if (v[k] == 0) v[k] = 2;
    if (classify(v) != DiagramClass::Elliptic) continue;
    ++seen;
    for (const auto& comp : components(v))
      if (comp.size() == 1) CHECK(elliptic_order(v) % 2 == 0);
  }
  CHECK(seen > 0);
}

TEST_CASE("small library counts") {
  CHECK(generate_library(3, LibraryClass::Elliptic).size() == 31);
  CHECK(generate_library(4, LibraryClass::Elliptic).size() == 242);
  CHECK(generate_library(3, LibraryClass::Parabolic).size() == 10);
  CHECK(generate_library(4, LibraryClass::Parabolic).size() == 30);
  CHECK(generate_library(4, LibraryClass::ConnectedParabolic).size() == 27);
  CHECK(generate_library(3, LibraryClass::LannerOrQuasi).size() == 299);
  CHECK(generate_library(4, LibraryClass::LannerOrQuasi).size() == 392);
  CHECK(generate_library(4, LibraryClass::SimplexVertex).size() == 269);
  CHECK(generate_library(5, LibraryClass::PrismVertex).size() == 10);
  CHECK(generate_library(6, LibraryClass::CubeVertex).size() == 1);
  CHECK_THROWS(generate_library(7, LibraryClass::Elliptic));
}

TEST_CASE("library members satisfy their class") {
  for (const auto& v : generate_library(4, LibraryClass::Elliptic).vectors())
    CHECK(classify(v) == DiagramClass::Elliptic);
  for (const auto& v : generate_library(4, LibraryClass::Parabolic).vectors()) {
    CHECK(is_nonnegative(v));
    for (const auto& comp : components(v)) CHECK(comp.size() > 1);
  }
}

TEST_CASE("symmetry example: relabeling by (01)(234)(56)") {
  const auto c1 = CoxeterVector::parse("2,2,2,2,inf,inf,3,2,5,2,2,2,2,2,0,3,6,2,2,2,2");
  const auto c2 = CoxeterVector::parse("2,5,3,2,2,2,2,2,2,inf,inf,2,3,2,2,2,0,2,2,6,2");
  const std::vector<int> lambda{1, 0, 3, 4, 2, 6, 5};
  CHECK(c1.relabel(lambda) == c2);
  CHECK(canonical_form(c1) == canonical_form(c2));
}

TEST_CASE("canonical form is idempotent and constant on orbits") {
  CHECK(canonical_form(CoxeterVector(7)) == CoxeterVector(7));
  std::mt19937 rng(3);
  for (int t = 0; t < 60; ++t) {
    const int n = 4 + t % 4;
    const CoxeterVector v = random_vector(rng, n, true);
    const CoxeterVector c = canonical_form(v);
    CHECK(canonical_form(c) == c);
    CHECK(c <= v);
    CHECK(canonical_form(v.relabel(random_perm(rng, n))) == c);
    std::vector<int> perm;
    CHECK(canonical_form(v, perm) == c);
    CHECK(v.relabel(perm) == c);
  }
}

TEST_CASE("classify is invariant under relabeling") {
  std::mt19937 rng(5);
  for (int t = 0; t < 300; ++t) {
    const int n = 3 + t % 4;
    CoxeterVector v = random_vector(rng, n, false);
    CHECK(classify(v.relabel(random_perm(rng, n))) == classify(v));
  }
}

TEST_CASE("orbit sizes divide n!") {
  std::mt19937 rng(9);
  for (int t = 0; t < 10; ++t) {
    const CoxeterVector v = random_vector(rng, 4, true);
    std::set<CoxeterVector> orbit;
    std::vector<int> p{0, 1, 2, 3};
    do orbit.insert(v.relabel(p));
    while (std::next_permutation(p.begin(), p.end()));
    CHECK(24 % orbit.size() == 0);
  }
}

TEST_CASE("dot export") {
  const std::string dot = to_dot(CoxeterVector(4, {3, 4, 2, 0, 5, 255}), {"1.5"}, "x");
  CHECK(dot.find("graph \"x\" {") == 0);
  CHECK(dot.find("  0 -- 1;\n") != std::string::npos);
  CHECK(dot.find("  0 -- 2 [color=\"black:black\"];") != std::string::npos);
  CHECK(dot.find("0 -- 3") == std::string::npos);
  CHECK(dot.find("  1 -- 2 [penwidth=3, label=\"0\"];") != std::string::npos);
  CHECK(dot.find("  1 -- 3 [color=\"black:black:black\"];") != std::string::npos);
  CHECK(dot.find("  2 -- 3 [style=dotted, label=\"1.5\"];") != std::string::npos);
  CHECK(to_dot(CoxeterVector(2, {8})).find("0 -- 1 [label=\"8\"]") != std::string::npos);
  CHECK(to_dot(CoxeterVector(2, {6})).find("black:black:black:black\"") != std::string::npos);
}
