#include "hcox/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hcox {

namespace {

Json tuples_json(const std::vector<Tuple>& ts) {
  Json a = Json::array();
  for (const auto& t : ts) a.push_back(t);
  return a;
}

std::vector<Tuple> tuples_from(const Json& j) { return j.get<std::vector<Tuple>>(); }

}  // namespace

std::string selcper_line(const TaggedVector& t) { return std::to_string(t.polytope_id) + " " + t.vector.str(); }

TaggedVector parse_selcper_line(const std::string& line) {
  std::istringstream is(line);
  TaggedVector t;
  std::string vec;
  if (!(is >> t.polytope_id >> vec)) throw std::runtime_error("malformed vector line: " + line);
  t.vector = CoxeterVector::parse(vec);
  if (t.vector.nodes() != kMaxNodes) throw std::runtime_error("expected 21 entries: " + line);
  return t;
}

std::vector<TaggedVector> read_selcper(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<TaggedVector> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(parse_selcper_line(line));
  return out;
}

Json incidence_json(const IncidenceData& inc) {
  Json j;
  Json d = Json::array();
  for (const auto& [a, b] : inc.d) d.push_back({a, b});
  j["d"] = d;
  j["l3"] = tuples_json(inc.l3);
  j["l4"] = tuples_json(inc.l4);
  j["s3"] = tuples_json(inc.s3);
  j["s4"] = tuples_json(inc.s4);
  j["s5"] = tuples_json(inc.s5);
  j["s6"] = tuples_json(inc.s6);
  j["e3"] = tuples_json(inc.e3);
  j["e4"] = tuples_json(inc.e4);
  j["e5"] = tuples_json(inc.e5);
  j["e6"] = tuples_json(inc.e6);
  return j;
}

IncidenceData incidence_from_json(const Json& j) {
  IncidenceData inc;
  for (const auto& p : j.at("d")) inc.d.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
  inc.l3 = tuples_from(j.at("l3"));
  inc.l4 = tuples_from(j.at("l4"));
  inc.s3 = tuples_from(j.at("s3"));
  inc.s4 = tuples_from(j.at("s4"));
  inc.s5 = tuples_from(j.at("s5"));
  inc.s6 = tuples_from(j.at("s6"));
  inc.e3 = tuples_from(j.at("e3"));
  inc.e4 = tuples_from(j.at("e4"));
  inc.e5 = tuples_from(j.at("e5"));
  inc.e6 = tuples_from(j.at("e6"));
  return inc;
}

Json outcome_json(int polytope_id, const CoxeterVector& v, const SolveOutcome& o) {
  Json j;
  j["polytope_id"] = polytope_id;
  j["vector"] = v.str();
  j["outcome"] = o.accepted ? "Accepted" : "Rejected";
  j["stage"] = o.accepted ? "" : to_string(o.stage);
  j["proved"] = o.proved;
  j["detail"] = o.detail;
  j["angle_weights"] = o.angle_weights;
  j["lengths"] = o.lengths;
  j["eigenvalues"] = o.eigenvalues;
  if (o.accepted) {
    j["signature"] = {o.signature.pos, o.signature.zero, o.signature.neg};
    j["max_residual"] = o.max_residual;
    std::ostringstream shift;
    shift.precision(3);
    shift << std::scientific << o.eigen_shift;
    j["eigen_shift"] = shift.str();
  }
  Json ranges = Json::array();
  for (const auto& [lo, hi] : o.k_ranges) ranges.push_back({lo, hi});
  j["k_ranges"] = ranges;
  j["k_cap_hit"] = o.k_cap_hit;
  return j;
}

SolveOutcome outcome_from_json(const Json& j) {
  SolveOutcome o;
  o.accepted = j.at("outcome") == "Accepted";
  const std::string stage = j.at("stage");
  for (auto s : {SolveStage::OneEq, SolveStage::SevenEq, SolveStage::Integrality, SolveStage::Signature})
    if (to_string(s) == stage) o.stage = s;
  o.proved = j.value("proved", true);
  o.detail = j.value("detail", "");
  o.angle_weights = j.at("angle_weights").get<std::vector<int>>();
  o.lengths = j.at("lengths").get<std::vector<std::string>>();
  o.eigenvalues = j.at("eigenvalues").get<std::vector<std::string>>();
  if (j.contains("signature")) {
    const auto& s = j["signature"];
    o.signature = {s.at(0).get<int>(), s.at(1).get<int>(), s.at(2).get<int>(), false};
    o.max_residual = j.value("max_residual", "");
    o.eigen_shift = std::stod(j.value("eigen_shift", "0"));
  }
  for (const auto& r : j.at("k_ranges")) o.k_ranges.emplace_back(r.at(0).get<int>(), r.at(1).get<int>());
  o.k_cap_hit = j.value("k_cap_hit", false);
  return o;
}

std::string rational_str(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

Json record_json(const PolytopeRecord& r, const std::string& label) {
  Json j;
  j["polytope_id"] = r.polytope_id;
  j["label"] = label;
  j["index"] = r.index;
  j["vector"] = r.vector.str();
  j["angle_weights"] = r.angle_weights;
  j["lengths"] = r.lengths;
  std::vector<std::string> statuses;
  for (auto s : r.statuses) statuses.push_back(to_string(s));
  j["vertex_statuses"] = statuses;
  j["compact"] = r.compact;
  j["cusps"] = r.cusps;
  j["euler_char"] = rational_str(r.euler_char);
  j["volume_pi2"] = rational_str(r.volume_pi2);
  j["arithmetic"] = to_string(r.arithmetic);
  j["volume_decimal"] = r.volume_decimal();
  return j;
}

std::string csv_header() { return "label,vector,arithmetic,cusps,volume_pi2,volume_decimal"; }

std::string record_csv(const PolytopeRecord& r, const std::string& label) {
  std::string flag;
  if (r.arithmetic == Arithmeticity::Arithmetic) flag = "A";
  if (r.arithmetic == Arithmeticity::Inconclusive) flag = "?";
  if (r.compact) flag = "C";
  return label + "." + std::to_string(r.index) + ",\"" + r.vector.str() + "\"," + flag + "," +
         std::to_string(r.cusps) + "," + rational_str(r.volume_pi2) + "," + r.volume_decimal();
}

}  // namespace hcox
