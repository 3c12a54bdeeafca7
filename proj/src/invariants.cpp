#include "hcox/invariants.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include <boost/math/constants/constants.hpp>

#include "hcox/diagrams.hpp"

namespace hcox {

namespace {

std::string subset_str(unsigned mask, int n) {
  Tuple t;
  for (int i = 0; i < n; ++i)
    if (mask & (1u << i)) t.push_back(i);
  return tuple_str(t);
}

std::vector<int> members(unsigned mask, int n) {
  std::vector<int> s;
  for (int i = 0; i < n; ++i)
    if (mask & (1u << i)) s.push_back(i);
  return s;
}

bool elliptic_subset(const CoxeterVector& v, const std::vector<int>& s) {
  const CoxeterVector sub = v.restrict(s);
  if (sub.has_divergent()) return false;
  return classify(sub) == DiagramClass::Elliptic;
}

bool parabolic_rank3(const CoxeterVector& sub) {
  if (sub.has_divergent() || !is_nonnegative(sub)) return false;
  return classify(sub) == DiagramClass::Parabolic && nonnegative_rank(sub) == 3;
}

// Entry of 2G: exact when the weight has a cosine in the field.
struct Entry {
  std::optional<Field> exact;
  Real100 value;
};

}  // namespace

std::string to_string(VertexStatus s) { return s == VertexStatus::Ordinary ? "Ordinary" : "Ideal"; }

std::string to_string(Arithmeticity a) {
  switch (a) {
    case Arithmeticity::Arithmetic: return "Arithmetic";
    case Arithmeticity::NonArithmetic: return "NonArithmetic";
    case Arithmeticity::Inconclusive: return "Inconclusive";
    case Arithmeticity::NotApplicableCompact: return "NotApplicableCompact";
  }
  return "?";
}

CoxeterVector realize(const SymbolicGram& g, const std::vector<int>& angle_weights) {
  if (int(angle_weights.size()) != g.num_angles()) throw std::invalid_argument("angle weight count mismatch");
  CoxeterVector v = g.vector;
  for (int i = 0; i < g.num_angles(); ++i) {
    const int k = angle_weights[std::size_t(i)];
    if (k < 7 || k >= kDivergent) throw std::invalid_argument("angle weight out of range");
    v[g.angle_positions[std::size_t(i)]] = Weight(k);
  }
  return v;
}

std::vector<VertexStatus> vertex_statuses(const CoxeterVector& realized, const CombinatorialPolytope& p) {
  std::vector<VertexStatus> out;
  for (const auto& b : p.brackets) {
    const CoxeterVector sub = realized.restrict(b);
    if (!sub.has_divergent() && classify(sub) == DiagramClass::Elliptic)
      out.push_back(VertexStatus::Ordinary);
    else if (parabolic_rank3(sub))
      out.push_back(VertexStatus::Ideal);
    else
      throw CertificationError("bracket " + tuple_str(b) + " is neither elliptic nor parabolic of rank 3");
  }
  return out;
}

VolumeKind check_finite_volume(const CoxeterVector& realized, const CombinatorialPolytope& p) {
  const auto statuses = vertex_statuses(realized, p);
  const int n = realized.nodes();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const auto s = members(mask, n);
    const int size = int(s.size());
    const bool elliptic = elliptic_subset(realized, s);
    bool face = false;
    if (size == 1) face = bracket_count(p, s) >= 1;
    if (size == 2) face = bracket_count(p, s) >= 3;
    if (size == 3) face = bracket_count(p, s) >= 2;
    if (size == 4) {
      const auto it = std::find(p.brackets.begin(), p.brackets.end(), s);
      face = it != p.brackets.end() && statuses[std::size_t(it - p.brackets.begin())] == VertexStatus::Ordinary;
    }
    if (elliptic != face)
      throw CertificationError("subset " + subset_str(mask, n) + (elliptic ? " is elliptic but not a face" : " is a face but not elliptic"));
    if (size >= 4 && parabolic_rank3(realized.restrict(s)) &&
        std::find(p.brackets.begin(), p.brackets.end(), s) == p.brackets.end())
      throw CertificationError("subset " + subset_str(mask, n) + " is parabolic of rank 3 but not a vertex");
  }
  const bool compact = std::all_of(statuses.begin(), statuses.end(), [](VertexStatus s) { return s == VertexStatus::Ordinary; });
  return compact ? VolumeKind::Compact : VolumeKind::FiniteVolumeNonCompact;
}

Rational euler_characteristic(const CoxeterVector& v) {
  const int n = v.nodes();
  Rational chi = 1;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const auto s = members(mask, n);
    if (!elliptic_subset(v, s)) continue;
    const Rational term = Rational(1) / Rational(elliptic_order(v.restrict(s)));
    if (s.size() % 2)
      chi -= term;
    else
      chi += term;
  }
  return chi;
}

Rational volume4(const Rational& chi) {
  if (chi <= 0) throw CertificationError("non-positive Euler characteristic");
  return Rational(4, 3) * chi;
}

int cusp_count(const std::vector<VertexStatus>& statuses) {
  return int(std::count(statuses.begin(), statuses.end(), VertexStatus::Ideal));
}

int integer_grade(const Real100& value) {
  using boost::multiprecision::abs;
  using boost::multiprecision::round;
  const Real100 d = abs(value - round(value));
  if (d < Real100("1e-30")) return 1;
  if (d >= Real100("1e-10")) return -1;
  return 0;
}

Arithmeticity arithmeticity_noncompact(const SymbolicGram& g, const std::vector<int>& angle_weights,
                                       const std::vector<std::string>& lengths) {
  const int n = g.vector.nodes();
  const auto gram = numeric_gram<Real100>(g, angle_weights, lengths);
  std::vector<Entry> e(static_cast<std::size_t>(n * n));
  auto at = [&](int i, int j) -> Entry& { return e[std::size_t(i * n + j)]; };
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Weight w = g.vector(i, j);
      Entry& x = at(i, j);
      x.value = 2 * gram(i, j);
      if (w == kParallel || (w >= 2 && w <= 6)) x.exact = Field(2) * cos_entry(w);
      if (w != kRightAngle) adj[std::size_t(i)].push_back(j);
    }

  int worst = 1;
  auto grade_exact = [](const Field& f) {
    return f.is_rational() && boost::multiprecision::denominator(f[0]) == 1 ? 1 : -1;
  };
  auto grade_product = [&](const std::vector<int>& cycle) {
    bool exact = true;
    Field fp(1);
    Real100 np = 1;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const Entry& x = at(cycle[k], cycle[(k + 1) % cycle.size()]);
      np *= x.value;
      if (x.exact)
        fp = fp * *x.exact;
      else
        exact = false;
    }
    return exact ? grade_exact(fp) : integer_grade(np);
  };

  for (int i = 0; i < n; ++i)
    for (int j : adj[std::size_t(i)])
      if (i < j) worst = std::min(worst, grade_product({i, j}));

  // simple cycles of length >= 3, each once: smallest node first, second
  // node smaller than the last
  std::vector<int> path;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::function<void(int)> extend = [&](int u) {
    for (int w : adj[std::size_t(u)]) {
      if (w == path[0] && path.size() >= 3 && path[1] < path.back()) worst = std::min(worst, grade_product(path));
      if (w <= path[0] || used[std::size_t(w)]) continue;
      used[std::size_t(w)] = true;
      path.push_back(w);
      extend(w);
      path.pop_back();
      used[std::size_t(w)] = false;
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    used.assign(std::size_t(n), false);
    used[std::size_t(s)] = true;
    extend(s);
  }
  if (worst == 1) return Arithmeticity::Arithmetic;
  if (worst == 0) return Arithmeticity::Inconclusive;
  return Arithmeticity::NonArithmetic;
}

std::string PolytopeRecord::volume_decimal(int digits) const {
  const Real50 pi = boost::math::constants::pi<Real50>();
  const Real50 v = Real50(numerator(volume_pi2)) / Real50(denominator(volume_pi2)) * pi * pi;
  return v.str(digits);
}

PolytopeRecord certify(const CombinatorialPolytope& p, const CoxeterVector& selcper, const SolveOutcome& accepted,
                       int index) {
  if (!accepted.accepted) throw std::invalid_argument("certify needs an accepted outcome");
  const SymbolicGram g = substitute(selcper);
  PolytopeRecord r;
  r.polytope_id = p.id;
  r.index = index;
  r.vector = realize(g, accepted.angle_weights);
  r.angle_weights = accepted.angle_weights;
  r.lengths = accepted.lengths;
  r.statuses = vertex_statuses(r.vector, p);
  r.compact = check_finite_volume(r.vector, p) == VolumeKind::Compact;
  r.cusps = cusp_count(r.statuses);
  r.euler_char = euler_characteristic(r.vector);
  r.volume_pi2 = volume4(r.euler_char);
  r.arithmetic = r.compact ? Arithmeticity::NotApplicableCompact
                           : arithmeticity_noncompact(g, accepted.angle_weights, accepted.lengths);
  return r;
}

}  // namespace hcox
