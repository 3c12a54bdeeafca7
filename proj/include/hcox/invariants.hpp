#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hcox/combinatorics.hpp"
#include "hcox/coxeter_vector.hpp"
#include "hcox/gramsolve.hpp"
#include "hcox/quad_field.hpp"

namespace hcox {

enum class VertexStatus { Ordinary, Ideal };
enum class VolumeKind { Compact, FiniteVolumeNonCompact };
enum class Arithmeticity { Arithmetic, NonArithmetic, Inconclusive, NotApplicableCompact };

std::string to_string(VertexStatus s);
std::string to_string(Arithmeticity a);

struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The Coxeter vector with each weight-7 placeholder replaced by its solved k.
CoxeterVector realize(const SymbolicGram& g, const std::vector<int>& angle_weights);

// Ordinary when the bracket's diagram is elliptic, Ideal when it is parabolic
// of rank 3; anything else throws CertificationError.
std::vector<VertexStatus> vertex_statuses(const CoxeterVector& realized, const CombinatorialPolytope& p);

// Also checks that the elliptic subsets are exactly the faces implied by the
// brackets and that every rank-3 parabolic subset is a bracket.
VolumeKind check_finite_volume(const CoxeterVector& realized, const CombinatorialPolytope& p);

// Sum over elliptic node subsets S (S empty included) of (-1)^|S| / |W_S|.
Rational euler_characteristic(const CoxeterVector& v);

// Volume / pi^2 of a 4-dimensional polytope with the given characteristic.
Rational volume4(const Rational& chi);

int cusp_count(const std::vector<VertexStatus>& statuses);

// Cycle test on 2G: squares of entries and products along simple cycles must
// be rational integers. Distances to the nearest integer below 1e-30 pass,
// at least 1e-10 fail, anything between is Inconclusive.
Arithmeticity arithmeticity_noncompact(const SymbolicGram& g, const std::vector<int>& angle_weights,
                                       const std::vector<std::string>& lengths);

// Integer test used by arithmeticity_noncompact: 1 pass, 0 inconclusive, -1 fail.
int integer_grade(const Real100& value);

struct PolytopeRecord {
  int polytope_id = 0;
  int index = 0;
  CoxeterVector vector;  // realized weights
  std::vector<int> angle_weights;
  std::vector<std::string> lengths;
  std::vector<VertexStatus> statuses;
  bool compact = false;
  int cusps = 0;
  Rational euler_char;
  Rational volume_pi2;
  Arithmeticity arithmetic = Arithmeticity::Inconclusive;

  std::string volume_decimal(int digits = 20) const;
};

PolytopeRecord certify(const CombinatorialPolytope& p, const CoxeterVector& selcper, const SolveOutcome& accepted,
                       int index = 0);

}  // namespace hcox
