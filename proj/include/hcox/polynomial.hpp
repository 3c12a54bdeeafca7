#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/numeric/interval.hpp>

#include "hcox/quad_field.hpp"

namespace hcox {

inline constexpr int kMaxVars = 12;
using Exponents = std::array<std::uint8_t, kMaxVars>;

// Sparse multivariate polynomial with coefficients in Q(sqrt2, sqrt3, sqrt5).
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Field& c);  // NOLINT
  Polynomial(int c) : Polynomial(Field(c)) {}  // NOLINT
  static Polynomial variable(int var, const Field& coeff = Field(1));

  const std::map<Exponents, Field>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Field constant() const;
  int degree(int var) const;
  int total_degree() const;
  bool depends_on(int var) const { return degree(var) > 0; }

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  Polynomial derivative(int var) const;
  // Replace x_var by value.
  Polynomial substitute(int var, const Field& value) const;
  // Multiply every term by x_var^(d - e) where e is its exponent of x_var and
  // d = degree(var): the numerator of p(.., 1/t, ..) in t.
  Polynomial reciprocal(int var) const;

  // Polynomial c with *this == c * other, when the two are proportional.
  bool proportional_to(const Polynomial& other, Field* factor = nullptr) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  std::map<Exponents, Field> terms_;
};

// Determinant of a square matrix of polynomials (row-major, n x n).
Polynomial determinant(const std::vector<Polynomial>& m, int n);

using Interval = boost::numeric::interval<
    double, boost::numeric::interval_lib::policies<
                boost::numeric::interval_lib::save_state<boost::numeric::interval_lib::rounded_arith_std<double>>,
                boost::numeric::interval_lib::checking_base<double>>>;

// Floating-point image of a polynomial for fast repeated evaluation.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);

  double operator()(const std::vector<double>& x) const;
  // Value and gradient.
  double eval(const std::vector<double>& x, std::vector<double>& grad) const;
  // Enclosure of the range over a box.
  Interval range(const std::vector<Interval>& box) const;
  // Sum of |coefficient * monomial| at x, a scale for relative tests.
  double magnitude(const std::vector<double>& x) const;

  template <class R>
  R evaluate(const std::vector<R>& x) const {
    R s = 0;
    for (std::size_t t = 0; t < exps_.size(); ++t) {
      R term = exact_[t].template to_real<R>();
      for (int v = 0; v < kMaxVars; ++v)
        for (int e = 0; e < exps_[t][v]; ++e) term *= x[std::size_t(v)];
      s += term;
    }
    return s;
  }

  bool empty() const { return exps_.empty(); }

 private:
  std::vector<Exponents> exps_;
  std::vector<double> coeffs_;
  std::vector<Interval> enclosures_;
  std::vector<Field> exact_;
};

}  // namespace hcox
