#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hcox/combinatorics.hpp"
#include "hcox/coxeter_vector.hpp"
#include "hcox/gramsolve.hpp"
#include "hcox/invariants.hpp"

namespace hcox {

using Json = nlohmann::ordered_json;

// Candidate vector tagged with its polytope id; one line "<id> <vector>".
struct TaggedVector {
  int polytope_id = 0;
  CoxeterVector vector;
};

std::string selcper_line(const TaggedVector& t);
TaggedVector parse_selcper_line(const std::string& line);
std::vector<TaggedVector> read_selcper(const std::string& path);

Json incidence_json(const IncidenceData& inc);
IncidenceData incidence_from_json(const Json& j);

Json outcome_json(int polytope_id, const CoxeterVector& v, const SolveOutcome& o);
// Inverse of outcome_json for the fields certify needs.
SolveOutcome outcome_from_json(const Json& j);

std::string rational_str(const Rational& r);
Json record_json(const PolytopeRecord& r, const std::string& label);
std::string csv_header();
std::string record_csv(const PolytopeRecord& r, const std::string& label);

}  // namespace hcox
