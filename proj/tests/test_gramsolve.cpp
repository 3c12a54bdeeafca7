#include "doctest.h"

#include <cmath>

#include "hcox/diagrams.hpp"
#include "hcox/gramsolve.hpp"

using namespace hcox;

namespace {

const char* kVague = "2,2,2,7,2,inf,7,2,2,2,inf,3,2,2,2,2,5,2,3,2,2";
const char* kSingleton = "2,3,2,4,2,inf,2,7,2,2,inf,4,2,3,2,2,2,2,5,2,2";

// Printed conditions for the first vector; m is the golden ratio.
std::vector<Polynomial> printed_system() {
  const Polynomial y1 = Polynomial::variable(0), y2 = Polynomial::variable(1);
  const Polynomial x1 = Polynomial::variable(2), x2 = Polynomial::variable(3);
  const Polynomial m(Field(Rational(1, 2)) + Field::sqrt_of(5, Rational(1, 2)));
  const Polynomial m2 = m * m;
  auto c = [](int k) { return Polynomial(k); };
  return {
      c(16) * m2 * x2 * x2 + c(4) * m2 * y2 * y2 - c(16) * m2 - c(36) * x2 * x2 - c(12) * y2 * y2 + c(36),
      c(16) * m2 * x1 * x1 + c(4) * m2 * y1 * y1 - c(16) * m2 - c(36) * x1 * x1 - c(12) * y1 * y1 + c(36),
      c(16) * m2 * x1 * x1 - c(4) * m2 * x2 * x2 * y1 * y1 + c(16) * m2 * x2 * x2 + c(4) * m2 * y1 * y1 - c(16) * m2 -
          c(48) * x1 * x1 + c(16) * x2 * x2 * y1 * y1 - c(48) * x2 * x2 - c(16) * y1 * y1 + c(48),
      c(12) * x1 * x1 * y2 * y2 - c(48) * x1 * x1 + c(16) * x2 * x2 * y1 * y1 - c(48) * x2 * x2 +
          c(4) * y1 * y1 * y2 * y2 - c(16) * y1 * y1 - c(12) * y2 * y2 + c(48),
      -c(4) * m2 * x1 * x1 * y2 * y2 + c(16) * m2 * x1 * x1 + c(16) * m2 * x2 * x2 + c(4) * m2 * y2 * y2 - c(16) * m2 +
          c(16) * x1 * x1 * y2 * y2 - c(48) * x1 * x1 - c(48) * x2 * x2 - c(16) * y2 * y2 + c(48),
      c(16) * x1 * x1 * y2 * y2 - c(48) * x1 * x1 + c(12) * x2 * x2 * y1 * y1 - c(48) * x2 * x2 +
          c(4) * y1 * y1 * y2 * y2 - c(12) * y1 * y1 - c(16) * y2 * y2 + c(48),
      -m2 * y1 * y1 * y2 * y2 + c(4) * m2 * y1 * y1 + c(4) * m2 * y2 * y2 - c(16) * m2 + c(4) * y1 * y1 * y2 * y2 -
          c(12) * y1 * y1 - c(12) * y2 * y2 + c(36),
  };
}

// Swap y1 <-> y2 and x1 <-> x2.
Polynomial swap_pairs(const Polynomial& p) {
  Polynomial out;
  for (const auto& [e, coeff] : p.terms()) {
    Polynomial t(coeff);
    for (int k = 0; k < e[0]; ++k) t = t * Polynomial::variable(1);
    for (int k = 0; k < e[1]; ++k) t = t * Polynomial::variable(0);
    for (int k = 0; k < e[2]; ++k) t = t * Polynomial::variable(3);
    for (int k = 0; k < e[3]; ++k) t = t * Polynomial::variable(2);
    out += t;
  }
  return out;
}

bool matches_printed(const std::array<Polynomial, kMaxNodes>& ours, bool swapped) {
  const auto printed = printed_system();
  std::vector<bool> used(printed.size(), false);
  for (const auto& e : ours) {
    const Polynomial q = swapped ? swap_pairs(e) : e;
    bool hit = false;
    for (std::size_t j = 0; j < printed.size() && !hit; ++j)
      if (!used[j] && q.proportional_to(printed[j])) used[j] = hit = true;
    if (!hit) return false;
  }
  return true;
}

double y_of(int k) { return 2 * std::cos(M_PI / k); }

}  // namespace

TEST_CASE("substitute numbers angle unknowns first, then lengths, in pair order") {
  const SymbolicGram g = substitute(CoxeterVector::parse(kVague));
  CHECK(g.angle_positions == std::vector<int>{3, 6});
  CHECK(g.length_positions == std::vector<int>{5, 10});
  CHECK(g.variable_names() == std::vector<std::string>{"y1", "y2", "x1", "x2"});
  CHECK(g.entry(0, 4) == Polynomial::variable(0, Field(Rational(-1, 2))));
  CHECK(g.entry(1, 2) == Polynomial::variable(1, Field(Rational(-1, 2))));
  CHECK(g.entry(0, 6) == Polynomial::variable(2, Field(-1)));
  CHECK(g.entry(2, 3) == Polynomial(Field(Rational(-1, 2))));
  CHECK(g.entry(3, 3) == Polynomial(1));
  CHECK(g.entry(0, 1) == Polynomial(0));
  CHECK(substitute(CoxeterVector(7)).num_variables() == 0);
}

TEST_CASE("minor system of the vague vector reproduces the printed conditions") {
  const MinorSystem s = minor_system(substitute(CoxeterVector::parse(kVague)));
  CHECK((matches_printed(s.equations, false) || matches_printed(s.equations, true)));
  int free = 0;
  for (int i = 0; i < kMaxNodes; ++i) free += s.length_free(i);
  CHECK(free == 1);
}

TEST_CASE("angle box of the vague vector") {
  const MinorSystem s = minor_system(substitute(CoxeterVector::parse(kVague)));
  const auto box = feasible_angle_box(s, 0, SolveConfig{});
  REQUIRE(box.has_value());
  CHECK(box->first >= 1.8019 - 1e-3);
  CHECK(box->first <= 1.80194 + 1e-3);
  CHECK(box->second >= 1.91472 - 1e-3);
  CHECK(box->second <= 1.9148 + 1e-3);
}

TEST_CASE("both printed vectors are rejected at the integrality stage") {
  const SolveOutcome vague = solve(CoxeterVector::parse(kVague));
  CHECK_FALSE(vague.accepted);
  CHECK(vague.stage == SolveStage::Integrality);
  REQUIRE(vague.k_ranges.size() == 2);
  CHECK(vague.k_ranges[0] == std::pair{7, 10});

  const SolveOutcome single = solve(CoxeterVector::parse(kSingleton));
  CHECK_FALSE(single.accepted);
  CHECK(single.stage == SolveStage::Integrality);

  // the printed singleton value of y1 lies strictly between consecutive k
  const double y1 = 2 / std::sqrt(7 + 4 * std::sqrt(5.0) - 2 * std::sqrt(2.0) * (3 + std::sqrt(5.0)));
  const auto box = feasible_angle_box(minor_system(substitute(CoxeterVector::parse(kSingleton))), 0, SolveConfig{});
  REQUIRE(box.has_value());
  CHECK(box->first <= y1 + 1e-6);
  CHECK(box->second >= y1 - 1e-6);
  CHECK(y_of(8) < y1);
  CHECK(y1 < y_of(9));
}

TEST_CASE("signature counts") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(7, 7);
  CHECK(signature<double>(id, 1e-12) == SignatureCount{7, 0, 0, false});
  Eigen::MatrixXd dup = Eigen::MatrixXd::Identity(3, 3);
  dup.row(1) = dup.row(0);
  dup.col(1) = dup.col(0);
  CHECK(signature<double>(dup, 1e-12).zero >= 1);
  Eigen::MatrixXd marginal = Eigen::MatrixXd::Identity(2, 2);
  marginal(1, 1) = 5e-12;
  CHECK(signature<double>(marginal, 1e-12).marginal);
  Eigen::MatrixXd lorentz = Eigen::MatrixXd::Identity(3, 3);
  lorentz(2, 2) = -1;
  CHECK(signature<double>(lorentz, 1e-12) == SignatureCount{2, 0, 1, false});
}

TEST_CASE("unknown-free vectors: solver agrees with a direct signature test") {
  for (const char* text : {"2,2,0,2,0,2,3,2,2,2,6,2,2,0,2,6,2,2,2,3,2", "2,2,0,2,0,2,4,2,2,2,4,2,2,0,2,4,2,2,2,4,2",
                           "2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2", "2,3,2,2,2,2,3,2,2,2,2,3,2,2,2,3,2,2,3,2,3"}) {
    const CoxeterVector v = CoxeterVector::parse(text);
    const SolveOutcome o = solve(v);
    const Eigen::MatrixXd g = to_cos_matrix_double(v);
    const SignatureCount s = signature<double>(g, 1e-9);
    const bool expected = s.pos == 4 && s.zero == 2 && s.neg == 1;
    CHECK_MESSAGE(o.accepted == expected, text);
  }
}

TEST_CASE("accepted realizations satisfy every minor to 25 digits with lengths above 1") {
  for (const char* text : {"2,inf,2,2,0,2,2,2,3,2,6,2,2,2,0,3,6,2,2,2,2",
                           "2,2,2,2,inf,inf,2,2,3,2,inf,2,3,4,2,5,2,2,2,2,2"}) {
    const SymbolicGram g = substitute(CoxeterVector::parse(text));
    const SolveOutcome o = solve(g);
    REQUIRE_MESSAGE(o.accepted, text);
    CHECK(o.signature.pos == 4);
    CHECK(o.signature.zero == 2);
    CHECK(o.signature.neg == 1);
    REQUIRE(int(o.lengths.size()) == g.num_lengths());
    for (const auto& l : o.lengths) CHECK(Real50(l) > Real50("1.000000001"));
    const auto m = numeric_gram<Real50>(g, o.angle_weights, o.lengths);
    for (int i = 0; i < kMaxNodes; ++i) CHECK(abs(minor_residual(m, i)) < Real50("1e-25"));
    CHECK(o.eigen_shift < 1e-19);
  }
  const SolveOutcome p4 = solve(CoxeterVector::parse("2,inf,2,2,0,2,2,2,3,2,6,2,2,2,0,3,6,2,2,2,2"));
  CHECK(std::abs(std::stod(p4.lengths.at(0)) - 3.0) < 1e-12);
}

TEST_CASE("solve is deterministic") {
  SolveConfig cfg;
  cfg.seed = 42;
  for (const char* text : {"2,2,2,2,inf,inf,2,2,3,2,inf,2,3,4,2,5,2,2,2,2,3", kVague}) {
    const SolveOutcome a = solve(CoxeterVector::parse(text), cfg);
    const SolveOutcome b = solve(CoxeterVector::parse(text), cfg);
    CHECK(a.accepted == b.accepted);
    CHECK(a.stage == b.stage);
    CHECK(a.detail == b.detail);
    CHECK(a.lengths == b.lengths);
    CHECK(a.eigenvalues == b.eigenvalues);
  }
}

TEST_CASE("precision outside the supported range is refused") {
  SolveConfig cfg;
  cfg.digits = 150;
  CHECK_THROWS_AS(solve(CoxeterVector(7), cfg), std::invalid_argument);
}
