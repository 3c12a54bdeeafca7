#include "hcox/polynomial.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hcox {

namespace {

Interval enclose(const Field& c) {
  const double v = c.to_double();
  double mag = 0;
  for (int m = 0; m < Field::kDim; ++m) mag += std::abs(c[m].convert_to<double>()) * std::sqrt(double(Field::radicand(m)));
  const double err = mag * 4 * std::numeric_limits<double>::epsilon() + std::numeric_limits<double>::denorm_min();
  return Interval(v - err, v + err);
}

}  // namespace

Polynomial::Polynomial(const Field& c) {
  if (!c.is_zero()) terms_.emplace(Exponents{}, c);
}

Polynomial Polynomial::variable(int var, const Field& coeff) {
  Polynomial p;
  if (coeff.is_zero()) return p;
  Exponents e{};
  e[std::size_t(var)] = 1;
  p.terms_.emplace(e, coeff);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{});
}

Field Polynomial::constant() const {
  auto it = terms_.find(Exponents{});
  return it == terms_.end() ? Field(0) : it->second;
}

int Polynomial::degree(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, int(e[std::size_t(var)]));
  return d;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (auto x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) {
    auto [it, fresh] = terms_.emplace(e, c);
    if (fresh) continue;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this += -o; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e;
      for (int v = 0; v < kMaxVars; ++v) e[std::size_t(v)] = std::uint8_t(ea[std::size_t(v)] + eb[std::size_t(v)]);
      Field c = ca * cb;
      auto [it, fresh] = r.terms_.emplace(e, c);
      if (fresh) continue;
      it->second += c;
      if (it->second.is_zero()) r.terms_.erase(it);
    }
  return r;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    const int k = e[std::size_t(var)];
    if (k == 0) continue;
    Exponents f = e;
    --f[std::size_t(var)];
    Polynomial t;
    t.terms_.emplace(f, c * Field(k));
    r += t;
  }
  return r;
}

Polynomial Polynomial::substitute(int var, const Field& value) const {
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    Field coeff = c;
    for (int k = 0; k < e[std::size_t(var)]; ++k) coeff = coeff * value;
    f[std::size_t(var)] = 0;
    Polynomial t;
    if (!coeff.is_zero()) t.terms_.emplace(f, coeff);
    r += t;
  }
  return r;
}

Polynomial Polynomial::reciprocal(int var) const {
  const int d = degree(var);
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    f[std::size_t(var)] = std::uint8_t(d - e[std::size_t(var)]);
    r.terms_.emplace(f, c);
  }
  return r;
}

bool Polynomial::proportional_to(const Polynomial& other, Field* factor) const {
  if (is_zero() || other.is_zero()) return is_zero() && other.is_zero();
  if (terms_.size() != other.terms_.size()) return false;
  const Field f = terms_.begin()->second / other.terms_.begin()->second;
  for (auto a = terms_.begin(), b = other.terms_.begin(); a != terms_.end(); ++a, ++b)
    if (a->first != b->first || a->second != f * b->second) return false;
  if (factor) *factor = f;
  return true;
}

std::string Polynomial::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << "(" << it->second << ")";
    for (int v = 0; v < kMaxVars; ++v) {
      const int k = it->first[std::size_t(v)];
      if (k == 0) continue;
      os << "*" << (std::size_t(v) < names.size() ? names[std::size_t(v)] : "v" + std::to_string(v));
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

Polynomial determinant(const std::vector<Polynomial>& m, int n) {
  if (n == 0) return Polynomial(1);
  std::vector<Polynomial> dp(std::size_t(1) << n);
  dp[0] = Polynomial(1);
  for (unsigned mask = 0; mask + 1 < dp.size(); ++mask) {
    if (dp[mask].is_zero()) continue;
    const int row = __builtin_popcount(mask);
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      const Polynomial& a = m[std::size_t(row * n + j)];
      if (a.is_zero()) continue;
      Polynomial term = dp[mask] * a;
      if (__builtin_popcount(mask >> (j + 1)) & 1)
        dp[mask | (1u << j)] -= term;
      else
        dp[mask | (1u << j)] += term;
    }
  }
  return dp.back();
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) {
  for (const auto& [e, c] : p.terms()) {
    exps_.push_back(e);
    coeffs_.push_back(c.to_double());
    enclosures_.push_back(enclose(c));
    exact_.push_back(c);
  }
}

double CompiledPolynomial::operator()(const std::vector<double>& x) const {
  double s = 0;
  for (std::size_t t = 0; t < exps_.size(); ++t) {
    double term = coeffs_[t];
    for (int v = 0; v < kMaxVars; ++v)
      for (int e = 0; e < exps_[t][std::size_t(v)]; ++e) term *= x[std::size_t(v)];
    s += term;
  }
  return s;
}

double CompiledPolynomial::eval(const std::vector<double>& x, std::vector<double>& grad) const {
  grad.assign(x.size(), 0.0);
  double s = 0;
  for (std::size_t t = 0; t < exps_.size(); ++t) {
    const auto& e = exps_[t];
    double term = coeffs_[t];
    for (std::size_t v = 0; v < x.size(); ++v)
      for (int k = 0; k < e[v]; ++k) term *= x[v];
    s += term;
    for (std::size_t v = 0; v < x.size(); ++v) {
      if (e[v] == 0) continue;
      double d = coeffs_[t] * e[v];
      for (std::size_t w = 0; w < x.size(); ++w)
        for (int k = 0; k < e[w] - (w == v ? 1 : 0); ++k) d *= x[w];
      grad[v] += d;
    }
  }
  return s;
}

Interval CompiledPolynomial::range(const std::vector<Interval>& box) const {
  Interval s(0.0);
  for (std::size_t t = 0; t < exps_.size(); ++t) {
    Interval term = enclosures_[t];
    for (std::size_t v = 0; v < box.size(); ++v) {
      switch (exps_[t][v]) {
        case 0: break;
        case 1: term *= box[v]; break;
        case 2: term *= boost::numeric::square(box[v]); break;
        default: term *= boost::numeric::pow(box[v], exps_[t][v]);
      }
    }
    s += term;
  }
  return s;
}

double CompiledPolynomial::magnitude(const std::vector<double>& x) const {
  double s = 0;
  for (std::size_t t = 0; t < exps_.size(); ++t) {
    double term = std::abs(coeffs_[t]);
    for (std::size_t v = 0; v < x.size(); ++v)
      for (int k = 0; k < exps_[t][v]; ++k) term *= std::abs(x[v]);
    s += term;
  }
  return s;
}

}  // namespace hcox
