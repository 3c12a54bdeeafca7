#include "hcox/gramsolve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <sstream>

#include <boost/container_hash/hash.hpp>
#include <boost/math/constants/constants.hpp>

#include "hcox/diagrams.hpp"

namespace hcox {

namespace {

template <class R>
using Mat = Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>;
template <class R>
using Vec = Eigen::Matrix<R, Eigen::Dynamic, 1>;

template <class R>
struct Doubled;
template <>
struct Doubled<Real50> {
  using type = Real100;
};
template <>
struct Doubled<Real100> {
  using type = Real200;
};

template <class R>
R pi_value() {
  if constexpr (std::is_same_v<R, double>)
    return boost::math::constants::pi<double>();
  else
    return boost::math::constants::pi<R>();
}

template <class R>
R field_value(const Field& f) {
  if constexpr (std::is_same_v<R, double>)
    return f.to_double();
  else
    return f.template to_real<R>();
}

template <class R>
R parse_real(const std::string& s) {
  if constexpr (std::is_same_v<R, double>)
    return std::stod(s);
  else
    return R(s);
}

template <class R>
R angle_value(int k) {
  using std::cos;
  return 2 * cos(pi_value<R>() / R(k));
}

double angle_double(int k) { return angle_value<double>(k); }

// Polynomial with coefficients converted once to R.
template <class R>
class RealPoly {
 public:
  explicit RealPoly(const Polynomial& p) {
    for (const auto& [e, c] : p.terms()) {
      exps_.push_back(e);
      coeffs_.push_back(field_value<R>(c));
    }
  }

  // Value, gradient over the first n variables, and term magnitude.
  R eval(const std::vector<R>& z, std::vector<R>& grad, R& mag) const {
    using std::abs;
    const std::size_t n = z.size();
    grad.assign(n, R(0));
    R s = 0;
    mag = 0;
    for (std::size_t t = 0; t < exps_.size(); ++t) {
      const auto& e = exps_[t];
      R term = coeffs_[t];
      for (std::size_t v = 0; v < n; ++v)
        for (int k = 0; k < e[v]; ++k) term *= z[v];
      s += term;
      mag += abs(term);
      for (std::size_t v = 0; v < n; ++v) {
        if (e[v] == 0) continue;
        R d = coeffs_[t] * e[v];
        for (std::size_t w = 0; w < n; ++w)
          for (int k = 0; k < e[w] - (w == v ? 1 : 0); ++k) d *= z[w];
        grad[v] += d;
      }
    }
    return s;
  }

 private:
  std::vector<Exponents> exps_;
  std::vector<R> coeffs_;
};

// Pair position -> variable index, or -1.
std::array<int, kMaxPairs> variable_map(const SymbolicGram& g) {
  std::array<int, kMaxPairs> m;
  m.fill(-1);
  for (int i = 0; i < g.num_angles(); ++i) m[std::size_t(g.angle_positions[std::size_t(i)])] = i;
  for (int j = 0; j < g.num_lengths(); ++j)
    m[std::size_t(g.length_positions[std::size_t(j)])] = g.num_angles() + j;
  return m;
}

// Numeric Gram matrix; z holds y values then x values.
template <class R>
Mat<R> build_gram(const SymbolicGram& g, const std::vector<R>& z) {
  const int n = g.vector.nodes();
  const auto vars = variable_map(g);
  Mat<R> m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = R(1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int p = pair_index(n, i, j);
      const int v = vars[std::size_t(p)];
      R e;
      if (v < 0)
        e = field_value<R>(cos_entry(g.vector[p]));
      else if (v < g.num_angles())
        e = -z[std::size_t(v)] / 2;
      else
        e = -z[std::size_t(v)];
      m(i, j) = m(j, i) = e;
    }
  return m;
}

template <class R>
Mat<R> drop(const Mat<R>& m, int k) {
  const int n = int(m.rows());
  Mat<R> r(n - 1, n - 1);
  for (int i = 0, a = 0; i < n; ++i) {
    if (i == k) continue;
    for (int j = 0, b = 0; j < n; ++j) {
      if (j == k) continue;
      r(a, b++) = m(i, j);
    }
    ++a;
  }
  return r;
}

template <class R>
R det(const Mat<R>& m) {
  return Eigen::PartialPivLU<Mat<R>>(m).determinant();
}

// Product of row norms: bounds |det| and sets the scale of rounding error.
template <class R>
R hadamard(const Mat<R>& m) {
  R h = 1;
  for (int i = 0; i < m.rows(); ++i) h *= m.row(i).norm();
  return h;
}

template <class R>
R relative_eps() {
  return std::numeric_limits<R>::epsilon();
}

// ---------------------------------------------------------------------------
// Interval search over boxes of (y, t), t = 1/x.

struct BoxProblem {
  std::vector<CompiledPolynomial> eqs;
  std::vector<Interval> domain;
  std::vector<double> min_width;

  bool excluded(const std::vector<Interval>& box) const {
    for (const auto& e : eqs)
      if (!boost::numeric::zero_in(e.range(box))) return true;
    return false;
  }
  // Widest dimension relative to its domain, or -1 when the box is small.
  int split_dim(const std::vector<Interval>& box) const {
    int best = -1;
    double bw = 0;
    for (std::size_t d = 0; d < box.size(); ++d) {
      const double w = boost::numeric::width(box[d]);
      if (w <= min_width[d]) continue;
      const double rel = w / std::max(boost::numeric::width(domain[d]), 1e-300);
      if (rel > bw) {
        bw = rel;
        best = int(d);
      }
    }
    return best;
  }
};

std::pair<std::vector<Interval>, std::vector<Interval>> bisect(const std::vector<Interval>& box, int d) {
  auto lo = box, hi = box;
  const double mid = boost::numeric::median(box[std::size_t(d)]);
  lo[std::size_t(d)] = Interval(box[std::size_t(d)].lower(), mid);
  hi[std::size_t(d)] = Interval(mid, box[std::size_t(d)].upper());
  return {lo, hi};
}

// Equations of the system in the variables (y, t): lengths replaced by their
// reciprocals and denominators cleared.
std::vector<Polynomial> reciprocal_equations(const MinorSystem& s) {
  std::vector<Polynomial> out;
  for (const auto& e : s.equations) {
    if (e.is_zero()) continue;
    Polynomial r = e;
    for (int j = 0; j < s.gram.num_lengths(); ++j) r = r.reciprocal(s.gram.num_angles() + j);
    out.push_back(r);
  }
  return out;
}

Interval point(double v) {
  const double e = std::abs(v) * 4 * std::numeric_limits<double>::epsilon();
  return Interval(v - e, v + e);
}

// ---------------------------------------------------------------------------
// Damped Gauss-Newton with minimum-norm steps; variables outside `active`
// stay fixed. Returns the final scaled residual norm.

template <class R>
R gauss_newton(const std::vector<RealPoly<R>>& eqs, std::vector<R>& z, const std::vector<R>& lo,
               const std::vector<R>& hi, const std::vector<int>& active, int iterations, const R& tol) {
  using std::abs;
  const std::size_t m = eqs.size();
  const std::size_t n = active.size();
  std::vector<R> grad;
  auto residual = [&](const std::vector<R>& at, Vec<R>* f, Mat<R>* jac) {
    R worst = 0;
    for (std::size_t i = 0; i < m; ++i) {
      R mag;
      R v = eqs[i].eval(at, grad, mag);
      const R s = mag > R(0) ? mag : R(1);
      if (f) (*f)(Eigen::Index(i)) = v / s;
      if (jac)
        for (std::size_t a = 0; a < n; ++a) (*jac)(Eigen::Index(i), Eigen::Index(a)) = grad[std::size_t(active[a])] / s;
      worst = std::max<R>(worst, abs(v / s));
    }
    return worst;
  };
  Vec<R> f(static_cast<Eigen::Index>(m));
  Mat<R> jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  R norm = residual(z, &f, &jac);
  for (int it = 0; it < iterations && norm >= tol; ++it) {
    Eigen::CompleteOrthogonalDecomposition<Mat<R>> cod(jac);
    cod.setThreshold(R(1e-9));
    Vec<R> step = cod.solve(Vec<R>(-f));
    R lambda = 1;
    bool moved = false;
    for (int halve = 0; halve < 12; ++halve, lambda /= 2) {
      std::vector<R> trial = z;
      for (std::size_t a = 0; a < n; ++a) {
        const std::size_t v = std::size_t(active[a]);
        trial[v] = std::clamp<R>(z[v] + lambda * step(Eigen::Index(a)), lo[v], hi[v]);
      }
      const R tnorm = residual(trial, nullptr, nullptr);
      if (tnorm < norm) {
        z = trial;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    norm = residual(z, &f, &jac);
  }
  return norm;
}

// ---------------------------------------------------------------------------

template <class R>
struct LengthSolutions {
  std::vector<std::vector<R>> x;
  bool complete = true;  // every branch was solved in closed form
  bool tangent = false;  // some root fell in (1, 1 + 1e-9]
};

// Lengths with all angles fixed: repeatedly take a minor containing exactly
// one unsolved length, where its determinant is a quadratic in that length.
template <class R>
class LengthSolver {
 public:
  LengthSolver(const SymbolicGram& g, std::vector<R> y, const SolveConfig& cfg, const R& accept)
      : g_(g), y_(std::move(y)), cfg_(cfg), accept_(accept) {}

  LengthSolutions<R> run() {
    std::vector<std::optional<R>> x(std::size_t(g_.num_lengths()));
    descend(x);
    return std::move(out_);
  }

  Mat<R> gram(const std::vector<std::optional<R>>& x) const {
    std::vector<R> z = y_;
    for (const auto& v : x) z.push_back(v ? *v : R(0));
    return build_gram(g_, z);
  }

 private:
  bool in_minor(int length, int i) const {
    const auto [a, b] = pair_at(7, g_.length_positions[std::size_t(length)]);
    return a != i && b != i;
  }

  void descend(std::vector<std::optional<R>>& x) {
    using std::abs;
    using std::sqrt;
    std::vector<int> open;
    for (int j = 0; j < int(x.size()); ++j)
      if (!x[std::size_t(j)]) open.push_back(j);
    if (open.empty()) {
      finish(x);
      return;
    }
    const R eps = sqrt(relative_eps<R>());
    for (int i = 0; i < 7; ++i) {
      int only = -1, count = 0;
      for (int j : open)
        if (in_minor(j, i)) {
          only = j;
          ++count;
        }
      if (count != 1) continue;
      auto at = [&](const R& v) {
        x[std::size_t(only)] = v;
        Mat<R> m = drop(gram(x), i);
        return std::pair<R, R>{det(m), hadamard(m)};
      };
      const auto [d0, h0] = at(R(0));
      const auto [d1, h1] = at(R(1));
      const auto [dm, hm] = at(R(-1));
      x[std::size_t(only)].reset();
      const R qa = (d1 + dm) / 2 - d0, qb = (d1 - dm) / 2, qc = d0;
      const R scale = std::max({h0, h1, hm});
      if (abs(qa) <= eps * scale && abs(qb) <= eps * scale) continue;  // minor does not see this length
      std::vector<R> roots;
      if (abs(qa) <= eps * scale) {
        roots.push_back(-qc / qb);
      } else {
        const R disc = qb * qb - 4 * qa * qc;
        if (disc < -eps * scale * scale) return;
        const R sd = disc > R(0) ? sqrt(disc) : R(0);
        const R q = qb >= R(0) ? -(qb + sd) / 2 : -(qb - sd) / 2;
        if (q == R(0)) {
          roots.push_back(R(0));
        } else {
          roots.push_back(q / qa);
          roots.push_back(qc / q);
        }
      }
      std::sort(roots.begin(), roots.end());
      roots.erase(std::unique(roots.begin(), roots.end(),
                              [&](const R& u, const R& v) { return abs(u - v) <= eps * (1 + abs(u)); }),
                  roots.end());
      for (const R& r : roots) {
        if (!(r > R(1))) continue;
        if (r <= R(1) + R(1e-9)) {
          out_.tangent = true;
          continue;
        }
        if (r > R(cfg_.x_max)) continue;
        x[std::size_t(only)] = r;
        descend(x);
      }
      x[std::size_t(only)].reset();
      return;
    }
    newton_fallback(x, open);
  }

  // No minor isolates a length: multistart Newton on the remaining ones.
  void newton_fallback(std::vector<std::optional<R>>& x, const std::vector<int>& open) {
    out_.complete = false;
    const MinorSystem sys = minor_system(g_);
    std::vector<RealPoly<R>> eqs;
    for (const auto& e : sys.equations)
      if (!e.is_zero()) eqs.emplace_back(e);
    const int a = g_.num_angles();
    std::vector<R> lo, hi;
    std::vector<R> z = y_;
    for (std::size_t j = 0; j < x.size(); ++j) z.push_back(x[j] ? *x[j] : R(2));
    lo = hi = z;
    std::vector<int> active;
    for (int j : open) {
      active.push_back(a + j);
      lo[std::size_t(a + j)] = R(1);
      hi[std::size_t(a + j)] = R(cfg_.x_max);
    }
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_real_distribution<double> logx(0.0, std::log(cfg_.x_max));
    for (int s = 0; s < cfg_.newton_starts; ++s) {
      std::vector<R> trial = z;
      for (int v : active) trial[std::size_t(v)] = R(1 + std::exp(logx(rng)));
      const R norm = gauss_newton(eqs, trial, lo, hi, active, 60, relative_eps<R>() * 1e3);
      if (norm > sqrt(relative_eps<R>())) continue;
      for (int j : open) x[std::size_t(j)] = trial[std::size_t(a + j)];
      finish(x);
    }
    for (int j : open) x[std::size_t(j)].reset();
  }

  void finish(const std::vector<std::optional<R>>& x) {
    using std::abs;
    const Mat<R> m = gram(x);
    for (int i = 0; i < 7; ++i) {
      const Mat<R> sub = drop(m, i);
      const R r = abs(2 * det(sub));
      if (std::is_same_v<R, double> ? r > accept_ * hadamard(sub) : r >= accept_) return;
    }
    std::vector<R> vals;
    for (const auto& v : x) vals.push_back(*v);
    for (const auto& s : out_.x) {
      bool same = true;
      for (std::size_t j = 0; j < vals.size(); ++j)
        if (abs(s[j] - vals[j]) > sqrt_eps() * (1 + abs(vals[j]))) same = false;
      if (same) return;
    }
    out_.x.push_back(vals);
  }

  static R sqrt_eps() {
    using std::sqrt;
    return sqrt(relative_eps<R>());
  }

  const SymbolicGram& g_;
  std::vector<R> y_;
  const SolveConfig& cfg_;
  R accept_;
  LengthSolutions<R> out_;
};

template <class R>
std::string decimal(const R& v, int digits) {
  if constexpr (std::is_same_v<R, double>) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  } else {
    return to_decimal(v, digits);
  }
}

std::uint64_t vector_seed(const SymbolicGram& g, std::uint64_t seed) {
  std::size_t h = seed;
  const auto e = g.vector.entries();
  boost::hash_range(h, e.begin(), e.end());
  return h;
}

enum class Feasibility { Found, ProvedNone, Exhausted };

template <class R>
class Solver {
 public:
  using R2 = typename Doubled<R>::type;

  Solver(const MinorSystem& sys, const SolveConfig& cfg)
      : sys_(sys), g_(sys.gram), cfg_(cfg), tol_res_(parse_real<R>(cfg.tol_res)), tol_zero_(parse_real<R>(cfg.tol_zero)) {
    a_ = g_.num_angles();
    b_ = g_.num_lengths();
  }

  SolveOutcome run() {
    SolveOutcome out;
    for (int i = 0; i < 7; ++i) {
      const auto& e = sys_.equations[std::size_t(i)];
      if (e.is_constant() && !e.is_zero()) {
        out.stage = cfg_.one_equation ? SolveStage::OneEq : SolveStage::SevenEq;
        out.detail = "minor " + std::to_string(i) + " is a nonzero constant";
        return out;
      }
    }
    if (cfg_.one_equation) {
      for (int i = 0; i < 7; ++i) {
        if (!sys_.length_free(i) || sys_.equations[std::size_t(i)].is_constant()) continue;
        if (!single_equation_solvable(sys_.equations[std::size_t(i)])) {
          out.stage = SolveStage::OneEq;
          out.detail = "minor " + std::to_string(i) + " has no zero in the angle domain";
          return out;
        }
      }
    }

    // Scan ranges for the angles.
    for (int i = 0; i < a_; ++i) {
      const auto box = feasible_angle_box(sys_, i, cfg_);
      if (!box) {
        out.stage = SolveStage::SevenEq;
        out.detail = "length-free minors have no common zero in the angle domain";
        return out;
      }
      int lo = 7;
      while (lo <= cfg_.k_max && angle_double(lo) < box->first - 1e-12) ++lo;
      int hi = lo - 1;
      while (hi + 1 <= cfg_.k_max && angle_double(hi + 1) <= box->second + 1e-12) ++hi;
      if (hi == cfg_.k_max && angle_double(cfg_.k_max + 1) <= box->second + 1e-12) out.k_cap_hit = true;
      out.k_ranges.emplace_back(lo, hi);
    }

    std::vector<int> k(std::size_t(a_), 0);
    scan(0, k, out);
    if (out.accepted) return out;
    if (found_any_) {
      out.stage = SolveStage::Signature;
      out.detail = signature_detail_;
      return out;
    }
    if (a_ == 0) {
      out.stage = SolveStage::SevenEq;
      out.proved = complete_;
      out.detail = complete_ ? "no lengths > 1 satisfy all minors" : "no certified root";
      if (tangent_) out.detail += " (a root converges to x = 1)";
      return out;
    }
    std::vector<double> witness;
    switch (continuous(witness)) {
      case Feasibility::Found: {
        out.stage = SolveStage::Integrality;
        std::ostringstream os;
        os.precision(8);
        os << "real solution at";
        for (int i = 0; i < a_; ++i) os << " y" << i + 1 << "=" << witness[std::size_t(i)];
        os << "; no k in";
        for (const auto& [lo, hi] : out.k_ranges) os << " [" << lo << "," << hi << "]";
        out.detail = os.str();
        break;
      }
      case Feasibility::ProvedNone:
        out.stage = SolveStage::SevenEq;
        out.detail = "no real solution in the domain";
        break;
      case Feasibility::Exhausted:
        out.stage = SolveStage::SevenEq;
        out.proved = false;
        out.detail = "no certified root";
        break;
    }
    return out;
  }

 private:
  // Stage 1: one length-free equation in the angles alone.
  bool single_equation_solvable(const Polynomial& eq) {
    BoxProblem bp;
    bp.eqs.emplace_back(eq);
    for (int i = 0; i < a_; ++i) {
      bp.domain.emplace_back(cfg_.angle_lower, 2.0);
      bp.min_width.push_back(1e-9);
    }
    for (int j = 0; j < b_; ++j) {
      bp.domain.emplace_back(1.0);
      bp.min_width.push_back(1.0);
    }
    const CompiledPolynomial& f = bp.eqs[0];
    bool pos = false, neg = false;
    std::vector<std::vector<Interval>> stack{bp.domain};
    std::size_t processed = 0;
    while (!stack.empty()) {
      if (++processed > cfg_.box_budget) return true;
      auto box = std::move(stack.back());
      stack.pop_back();
      if (bp.excluded(box)) continue;
      std::vector<double> c;
      for (const auto& iv : box) c.push_back(boost::numeric::median(iv));
      const double v = f(c), mag = f.magnitude(c);
      if (v > 1e-12 * mag) pos = true;
      if (v < -1e-12 * mag) neg = true;
      if (v == 0 || (pos && neg)) return true;
      const int d = bp.split_dim(box);
      if (d < 0) return true;  // undecided at resolution: keep
      auto [l, h] = bisect(box, d);
      stack.push_back(std::move(h));
      stack.push_back(std::move(l));
    }
    return false;
  }

  BoxProblem t_problem(double y_hi) const {
    BoxProblem bp;
    for (const auto& e : reciprocal_equations(sys_)) bp.eqs.emplace_back(e);
    for (int i = 0; i < a_; ++i) {
      bp.domain.emplace_back(cfg_.angle_lower, y_hi);
      bp.min_width.push_back(2e-3);
    }
    for (int j = 0; j < b_; ++j) {
      bp.domain.emplace_back(0.0, 1.0);
      bp.min_width.push_back(1e-2);
    }
    return bp;
  }

  void scan(int depth, std::vector<int>& k, SolveOutcome& out) {
    if (out.accepted) return;
    // prune with every equation over the remaining ranges
    std::vector<Interval> box;
    for (int i = 0; i < a_; ++i) {
      if (i < depth) {
        box.push_back(point(angle_double(k[std::size_t(i)])));
      } else {
        const auto [lo, hi] = out.k_ranges[std::size_t(i)];
        if (lo > hi) return;
        const Interval l = point(angle_double(lo)), h = point(angle_double(hi));
        box.emplace_back(l.lower(), h.upper());
      }
    }
    for (int j = 0; j < b_; ++j) box.emplace_back(0.0, 1.0);
    for (const auto& e : t_eqs_compiled())
      if (!boost::numeric::zero_in(e.range(box))) return;
    if (depth < a_) {
      const auto [lo, hi] = out.k_ranges[std::size_t(depth)];
      for (int kk = lo; kk <= hi && !out.accepted; ++kk) {
        k[std::size_t(depth)] = kk;
        scan(depth + 1, k, out);
      }
      return;
    }
    leaf(k, out);
  }

  const std::vector<CompiledPolynomial>& t_eqs_compiled() {
    if (t_compiled_.empty())
      for (const auto& e : reciprocal_equations(sys_)) t_compiled_.emplace_back(e);
    return t_compiled_;
  }

  void leaf(const std::vector<int>& k, SolveOutcome& out) {
    std::vector<double> yd;
    for (int kk : k) yd.push_back(angle_double(kk));
    LengthSolver<double> pre(g_, yd, cfg_, 1e-8);
    const auto coarse = pre.run();
    if (coarse.tangent) tangent_ = true;
    if (coarse.x.empty() && coarse.complete) return;

    std::vector<R> y;
    for (int kk : k) y.push_back(angle_value<R>(kk));
    LengthSolver<R> fine(g_, y, cfg_, tol_res_);
    const auto sols = fine.run();
    if (!sols.complete) complete_ = false;
    if (sols.tangent) tangent_ = true;
    for (const auto& x : sols.x) {
      found_any_ = true;
      if (certify(k, x, out)) {
        ++out.solutions;
        return;
      }
    }
  }

  // Stage 4 plus the re-evaluation at doubled precision.
  bool certify(const std::vector<int>& k, const std::vector<R>& x, SolveOutcome& out) {
    using std::abs;
    std::vector<R2> y2;
    for (int kk : k) y2.push_back(angle_value<R2>(kk));
    LengthSolver<R2> again(g_, y2, cfg_, R2(tol_res_));
    const auto sols2 = again.run();
    const std::vector<R2>* match = nullptr;
    for (const auto& s : sols2.x) {
      bool close = true;
      for (std::size_t j = 0; j < x.size(); ++j)
        if (abs(R2(x[j]) - s[j]) > R2(1e-20) * (1 + abs(s[j]))) close = false;
      if (close) match = &s;
    }
    if (!match) {
      signature_detail_ = "solution not reproduced at doubled precision";
      return false;
    }
    std::vector<R> z = std::vector<R>(y_of<R>(k));
    z.insert(z.end(), x.begin(), x.end());
    std::vector<R2> z2 = y2;
    z2.insert(z2.end(), match->begin(), match->end());
    const Mat<R> gram = build_gram(g_, z);
    const Mat<R2> gram2 = build_gram(g_, z2);

    R2 worst = 0;
    for (int i = 0; i < 7; ++i) worst = std::max<R2>(worst, abs(minor_residual(gram2, i)));
    if (!(worst < R2(tol_res_))) {
      signature_detail_ = "residual " + decimal(worst, 6) + " at doubled precision";
      return false;
    }

    SignatureCount s1 = signature(gram, tol_zero_);
    const SignatureCount s2 = signature(gram2, R2(tol_zero_));
    if (s1.marginal) s1 = s2;
    if (s1.marginal) {
      signature_detail_ = "eigenvalue at the edge of the zero band";
      return false;
    }
    if (!(s1 == s2)) {
      signature_detail_ = "eigenvalue pattern changes under doubled precision";
      return false;
    }
    Eigen::SelfAdjointEigenSolver<Mat<R>> e1(gram, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Mat<R2>> e2(gram2, Eigen::EigenvaluesOnly);
    R2 shift = 0;
    for (int i = 0; i < 7; ++i) shift = std::max<R2>(shift, abs(R2(e1.eigenvalues()(i)) - e2.eigenvalues()(i)));
    if (!(shift < R2(tol_zero_) * 10)) {
      signature_detail_ = "eigenvalues move by " + decimal(shift, 6) + " under doubled precision";
      return false;
    }
    if (!(s1.pos == 4 && s1.zero == 2 && s1.neg == 1)) {
      std::ostringstream os;
      os << "signature counts (" << s1.pos << "," << s1.zero << "," << s1.neg << ")";
      signature_detail_ = os.str();
      return false;
    }
    out.accepted = true;
    out.detail.clear();
    out.angle_weights = k;
    out.lengths.clear();
    for (const auto& v : *match) out.lengths.push_back(decimal(v, std::numeric_limits<R>::digits10));
    out.eigenvalues.clear();
    for (int i = 0; i < 7; ++i) out.eigenvalues.push_back(decimal(e2.eigenvalues()(i), 25));
    out.signature = s1;
    out.max_residual = decimal(worst, 6);
    out.eigen_shift = shift.template convert_to<double>();
    return true;
  }

  template <class S>
  std::vector<S> y_of(const std::vector<int>& k) const {
    std::vector<S> y;
    for (int kk : k) y.push_back(angle_value<S>(kk));
    return y;
  }

  // Stage 2 for systems with angle unknowns: a real solution with y in the
  // domain and every length > 1.
  Feasibility continuous(std::vector<double>& witness) {
    BoxProblem bp = t_problem(2.0);
    const int n = a_ + b_;
    std::vector<RealPoly<double>> deqs;
    std::vector<RealPoly<R>> reqs;
    for (const auto& e : reciprocal_equations(sys_)) {
      deqs.emplace_back(e);
      reqs.emplace_back(e);
    }
    std::vector<double> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int i = 0; i < a_; ++i) {
      lo[std::size_t(i)] = cfg_.angle_lower;
      hi[std::size_t(i)] = 2.0;
    }
    for (int j = 0; j < b_; ++j) {
      lo[std::size_t(a_ + j)] = 1.0 / cfg_.x_max;
      hi[std::size_t(a_ + j)] = 1.0;
    }
    std::vector<int> active(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) active[std::size_t(v)] = v;

    auto attempt = [&](std::vector<double> z) {
      const double norm = gauss_newton(deqs, z, lo, hi, active, 80, 1e-13);
      if (norm > 1e-9) return false;
      if (!inside(z)) return false;
      std::vector<R> zr(z.begin(), z.end());
      std::vector<R> rlo(lo.begin(), lo.end()), rhi(hi.begin(), hi.end());
      gauss_newton(reqs, zr, rlo, rhi, active, 40, relative_eps<R>() * 1e4);
      std::vector<double> back;
      for (const auto& v : zr) back.push_back(v.template convert_to<double>());
      if (!inside(back)) return false;
      // residuals of the original minors at (y, x = 1/t)
      std::vector<R> yx(zr.begin(), zr.begin() + a_);
      for (int j = 0; j < b_; ++j) yx.push_back(R(1) / zr[std::size_t(a_ + j)]);
      const Mat<R> gm = build_gram(g_, yx);
      for (int i = 0; i < 7; ++i) {
        using std::abs;
        if (!(abs(minor_residual(gm, i)) < tol_res_)) return false;
      }
      witness = back;
      return true;
    };

    std::vector<std::vector<Interval>> stack{bp.domain};
    std::size_t processed = 0;
    int newton_tries = 0;
    bool exhausted = false;
    while (!stack.empty()) {
      if (++processed > cfg_.box_budget) {
        exhausted = true;
        break;
      }
      auto box = std::move(stack.back());
      stack.pop_back();
      if (bp.excluded(box)) continue;
      const int d = bp.split_dim(box);
      if (d < 0) {
        exhausted = true;
        if (newton_tries < 400) {
          ++newton_tries;
          std::vector<double> c;
          for (const auto& iv : box) c.push_back(boost::numeric::median(iv));
          if (attempt(c)) return Feasibility::Found;
        }
        continue;
      }
      auto [l, h] = bisect(box, d);
      stack.push_back(std::move(h));
      stack.push_back(std::move(l));
    }
    if (!exhausted) return Feasibility::ProvedNone;
    std::mt19937_64 rng(vector_seed(g_, cfg_.seed));
    for (int s = 0; s < cfg_.newton_starts; ++s) {
      std::vector<double> z(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v)
        z[std::size_t(v)] = std::uniform_real_distribution<double>(lo[std::size_t(v)], hi[std::size_t(v)])(rng);
      if (attempt(z)) return Feasibility::Found;
    }
    return Feasibility::Exhausted;
  }

  bool inside(const std::vector<double>& z) const {
    for (int i = 0; i < a_; ++i)
      if (z[std::size_t(i)] < cfg_.angle_lower || z[std::size_t(i)] >= 2.0 - 1e-12) return false;
    for (int j = 0; j < b_; ++j) {
      const double t = z[std::size_t(a_ + j)];
      if (t <= 1.0 / cfg_.x_max || t >= 1.0 / (1.0 + 1e-9)) return false;
    }
    return true;
  }

  const MinorSystem& sys_;
  const SymbolicGram& g_;
  const SolveConfig& cfg_;
  R tol_res_, tol_zero_;
  int a_ = 0, b_ = 0;
  std::vector<CompiledPolynomial> t_compiled_;
  bool found_any_ = false;
  bool complete_ = true;
  bool tangent_ = false;
  std::string signature_detail_;
};

}  // namespace

// ---------------------------------------------------------------------------

Polynomial SymbolicGram::entry(int i, int j) const {
  if (i == j) return Polynomial(1);
  const int p = pair_index(vector.nodes(), i, j);
  for (int a = 0; a < num_angles(); ++a)
    if (angle_positions[std::size_t(a)] == p) return Polynomial::variable(a, Field(Rational(-1, 2)));
  for (int b = 0; b < num_lengths(); ++b)
    if (length_positions[std::size_t(b)] == p) return Polynomial::variable(num_angles() + b, Field(-1));
  return Polynomial(cos_entry(vector[p]));
}

std::vector<std::string> SymbolicGram::variable_names() const {
  std::vector<std::string> names;
  for (int a = 0; a < num_angles(); ++a) names.push_back("y" + std::to_string(a + 1));
  for (int b = 0; b < num_lengths(); ++b) names.push_back("x" + std::to_string(b + 1));
  return names;
}

SymbolicGram substitute(const CoxeterVector& v) {
  if (v.nodes() != kMaxNodes) throw std::invalid_argument("expected a 7-node vector");
  SymbolicGram g;
  g.vector = v;
  for (int p = 0; p < v.size(); ++p) {
    if (v[p] == kDivergent)
      g.length_positions.push_back(p);
    else if (v[p] >= 7)
      g.angle_positions.push_back(p);
  }
  if (g.num_variables() > kMaxVars) throw std::invalid_argument("too many unknowns");
  return g;
}

bool MinorSystem::length_free(int i) const {
  for (int p : gram.length_positions) {
    const auto [a, b] = pair_at(kMaxNodes, p);
    if (a != i && b != i) return false;
  }
  return true;
}

MinorSystem minor_system(const SymbolicGram& g) {
  MinorSystem s;
  s.gram = g;
  const int n = g.vector.nodes();
  for (int del = 0; del < n; ++del) {
    std::vector<Polynomial> m;
    for (int i = 0; i < n; ++i) {
      if (i == del) continue;
      for (int j = 0; j < n; ++j)
        if (j != del) m.push_back(g.entry(i, j));
    }
    s.equations[std::size_t(del)] = Polynomial(2) * determinant(m, n - 1);
  }
  return s;
}

std::string to_string(SolveStage s) {
  switch (s) {
    case SolveStage::OneEq: return "OneEq";
    case SolveStage::SevenEq: return "SevenEq";
    case SolveStage::Integrality: return "Integrality";
    case SolveStage::Signature: return "Signature";
  }
  return "?";
}

template <class R>
SignatureCount signature(const Mat<R>& g, const R& tol_zero) {
  using std::abs;
  Eigen::SelfAdjointEigenSolver<Mat<R>> es(g, Eigen::EigenvaluesOnly);
  SignatureCount c;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const R v = es.eigenvalues()(i);
    if (v > tol_zero)
      ++c.pos;
    else if (v < -tol_zero)
      ++c.neg;
    else
      ++c.zero;
    if (abs(v) >= tol_zero && abs(v) < tol_zero * 10) c.marginal = true;
  }
  return c;
}

template SignatureCount signature<double>(const Mat<double>&, const double&);
template SignatureCount signature<Real50>(const Mat<Real50>&, const Real50&);
template SignatureCount signature<Real100>(const Mat<Real100>&, const Real100&);
template SignatureCount signature<Real200>(const Mat<Real200>&, const Real200&);

std::optional<std::pair<double, double>> feasible_angle_box(const MinorSystem& s, int angle, const SolveConfig& cfg) {
  const int a = s.gram.num_angles();
  BoxProblem bp;
  for (int i = 0; i < kMaxNodes; ++i) {
    const auto& e = s.equations[std::size_t(i)];
    if (!s.length_free(i) || e.is_zero()) continue;
    if (e.is_constant()) return std::nullopt;
    bp.eqs.emplace_back(e);
  }
  for (int i = 0; i < a; ++i) {
    bp.domain.emplace_back(cfg.angle_lower, 2.0);
    bp.min_width.push_back(1e-7);
  }
  // lengths do not occur in these equations
  for (int j = 0; j < s.gram.num_lengths(); ++j) {
    bp.domain.emplace_back(1.0);
    bp.min_width.push_back(1.0);
  }
  if (bp.eqs.empty()) return std::pair{cfg.angle_lower, 2.0};

  // Best-first search for the smallest (sign = +1) or largest (sign = -1)
  // value of the angle over boxes that survive pruning.
  auto extreme = [&](int sign) -> std::optional<double> {
    using Item = std::pair<double, std::vector<Interval>>;
    auto cmp = [](const Item& l, const Item& r) { return l.first > r.first; };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> queue(cmp);
    auto key = [&](const std::vector<Interval>& b) {
      return sign > 0 ? b[std::size_t(angle)].lower() : -b[std::size_t(angle)].upper();
    };
    queue.emplace(key(bp.domain), bp.domain);
    std::size_t processed = 0;
    while (!queue.empty()) {
      auto [k, box] = queue.top();
      queue.pop();
      if (++processed > cfg.box_budget) return sign * k;
      if (bp.excluded(box)) continue;
      const int d = bp.split_dim(box);
      if (d < 0) return sign * k;
      auto [l, h] = bisect(box, d);
      queue.emplace(key(l), std::move(l));
      queue.emplace(key(h), std::move(h));
    }
    return std::nullopt;
  };
  const auto lo = extreme(+1);
  if (!lo) return std::nullopt;
  const auto hi = extreme(-1);
  if (!hi) return std::nullopt;
  return std::pair{*lo, *hi};
}

SolveOutcome solve(const SymbolicGram& g, const SolveConfig& cfg) {
  if (cfg.digits < 30) throw std::invalid_argument("digits must be at least 30");
  if (cfg.digits > 100) throw std::invalid_argument("digits above 100 are not supported");
  const MinorSystem sys = minor_system(g);
  if (cfg.digits <= 50) return Solver<Real50>(sys, cfg).run();
  return Solver<Real100>(sys, cfg).run();
}

template <class R>
Mat<R> numeric_gram(const SymbolicGram& g, const std::vector<int>& k, const std::vector<std::string>& lengths) {
  std::vector<R> z;
  for (int kk : k) z.push_back(angle_value<R>(kk));
  for (const auto& s : lengths) z.push_back(parse_real<R>(s));
  return build_gram(g, z);
}

template <class R>
R minor_residual(const Mat<R>& g, int i) {
  return 2 * det(drop(g, i));
}

template Mat<double> numeric_gram<double>(const SymbolicGram&, const std::vector<int>&, const std::vector<std::string>&);
template Mat<Real50> numeric_gram<Real50>(const SymbolicGram&, const std::vector<int>&, const std::vector<std::string>&);
template Mat<Real100> numeric_gram<Real100>(const SymbolicGram&, const std::vector<int>&,
                                            const std::vector<std::string>&);
template double minor_residual<double>(const Mat<double>&, int);
template Real50 minor_residual<Real50>(const Mat<Real50>&, int);
template Real100 minor_residual<Real100>(const Mat<Real100>&, int);
template Real200 minor_residual<Real200>(const Mat<Real200>&, int);

}  // namespace hcox
