#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hcox {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

namespace detail {

inline double coeff_to_double(std::int64_t c) { return static_cast<double>(c); }
inline double coeff_to_double(const Rational& c) { return c.convert_to<double>(); }
inline Rational coeff_to_rational(std::int64_t c) { return Rational(c); }
inline const Rational& coeff_to_rational(const Rational& c) { return c; }

}  // namespace detail

// Element of the real multiquadratic field Q(sqrt2, sqrt3, sqrt5).
//
// Slot `mask` (0..7) holds the coefficient of sqrt(radicand(mask)), where bit 0
// selects the prime 2, bit 1 the prime 3 and bit 2 the prime 5. So the slots
// are 1, sqrt2, sqrt3, sqrt6, sqrt5, sqrt10, sqrt15, sqrt30.
template <class Coeff>
class QuadField {
 public:
  static constexpr int kDim = 8;
  using Coefficient = Coeff;

  QuadField() { c_.fill(Coeff(0)); }
  QuadField(const Coeff& rational) : QuadField() { c_[0] = rational; }  // NOLINT
  template <class I, class = std::enable_if_t<std::is_integral_v<I> && !std::is_same_v<I, Coeff>>>
  QuadField(I rational) : QuadField(Coeff(rational)) {}  // NOLINT

  static constexpr int radicand(int mask) {
    return (mask & 1 ? 2 : 1) * (mask & 2 ? 3 : 1) * (mask & 4 ? 5 : 1);
  }
  static constexpr int mask_of(int radicand) {
    for (int m = 0; m < kDim; ++m)
      if (QuadField::radicand(m) == radicand) return m;
    return -1;
  }
  // coefficient * sqrt(radicand); radicand must be squarefree with primes in {2,3,5}
  static QuadField sqrt_of(int radicand, const Coeff& coefficient = Coeff(1)) {
    QuadField r;
    r.c_[mask_of(radicand)] = coefficient;
    return r;
  }

  const Coeff& operator[](int mask) const { return c_[mask]; }
  Coeff& operator[](int mask) { return c_[mask]; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (int m = 1; m < kDim; ++m)
      if (c_[m] != 0) return false;
    return true;
  }

  QuadField& operator+=(const QuadField& o) {
    for (int m = 0; m < kDim; ++m) c_[m] += o.c_[m];
    return *this;
  }
  QuadField& operator-=(const QuadField& o) {
    for (int m = 0; m < kDim; ++m) c_[m] -= o.c_[m];
    return *this;
  }
  QuadField& operator*=(const QuadField& o) { return *this = *this * o; }
  QuadField operator-() const {
    QuadField r;
    for (int m = 0; m < kDim; ++m) r.c_[m] = -c_[m];
    return r;
  }
  friend QuadField operator+(QuadField a, const QuadField& b) { return a += b; }
  friend QuadField operator-(QuadField a, const QuadField& b) { return a -= b; }
  friend QuadField operator*(const QuadField& a, const QuadField& b) {
    QuadField r;
    for (int i = 0; i < kDim; ++i) {
      if (a.c_[i] == 0) continue;
      for (int j = 0; j < kDim; ++j) {
        if (b.c_[j] == 0) continue;
        r.c_[i ^ j] += Coeff(radicand(i & j)) * a.c_[i] * b.c_[j];
      }
    }
    return r;
  }
  friend bool operator==(const QuadField& a, const QuadField& b) { return a.c_ == b.c_; }
  friend bool operator!=(const QuadField& a, const QuadField& b) { return !(a == b); }

  // Exact division is only needed by rational coefficients; inverse via the
  // conjugate tower: x * conj_p(x) lies in the subfield without sqrt(p).
  QuadField inverse() const {
    QuadField num(Coeff(1));
    QuadField den = *this;
    for (int bit = 4; bit >= 1; bit >>= 1) {
      QuadField conj = den;
      for (int m = 0; m < kDim; ++m)
        if (m & bit) conj.c_[m] = -conj.c_[m];
      num = num * conj;
      den = den * conj;
    }
    // den is rational now
    QuadField r = num;
    for (auto& x : r.c_) x /= den.c_[0];
    return r;
  }
  friend QuadField operator/(const QuadField& a, const QuadField& b) { return a * b.inverse(); }

  double to_double() const {
    double s = 0;
    for (int m = 0; m < kDim; ++m)
      s += detail::coeff_to_double(c_[m]) * std::sqrt(double(radicand(m)));
    return s;
  }

  template <class Real>
  Real to_real() const {
    using std::sqrt;
    Real s = 0;
    for (int m = 0; m < kDim; ++m) {
      if (c_[m] == 0) continue;
      Rational q = detail::coeff_to_rational(c_[m]);
      Real v = Real(numerator(q)) / Real(denominator(q));
      if (m != 0) v *= sqrt(Real(radicand(m)));
      s += v;
    }
    return s;
  }

  // Exact sign in {-1, 0, 1}.
  int sign() const {
    double s = 0, bound = 0;
    for (int m = 0; m < kDim; ++m) {
      double t = detail::coeff_to_double(c_[m]) * std::sqrt(double(radicand(m)));
      s += t;
      bound += std::abs(t);
    }
    if (std::abs(s) > bound * 1e-12 + 1e-300) return s > 0 ? 1 : -1;
    std::array<Rational, kDim> q;
    for (int m = 0; m < kDim; ++m) q[m] = detail::coeff_to_rational(c_[m]);
    return exact_sign(q, 3);
  }

  friend std::ostream& operator<<(std::ostream& os, const QuadField& x) {
    bool first = true;
    for (int m = 0; m < kDim; ++m) {
      if (x.c_[m] == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << x.c_[m];
      if (m != 0) os << "*sqrt" << radicand(m);
    }
    if (first) os << 0;
    return os;
  }

 private:
  // Sign of sum over masks < 2^level; x = A + B sqrt(p) with p the top prime.
  static int exact_sign(const std::array<Rational, kDim>& q, int level) {
    if (level == 0) return q[0] > 0 ? 1 : (q[0] < 0 ? -1 : 0);
    const int bit = 1 << (level - 1);
    std::array<Rational, kDim> a{}, b{};
    for (int m = 0; m < bit; ++m) {
      a[m] = q[m];
      b[m] = q[m | bit];
    }
    int sa = exact_sign(a, level - 1);
    int sb = exact_sign(b, level - 1);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sa == 0 ? sb : sa;
    // opposite signs: compare A^2 with p B^2 inside the subfield
    QuadField<Rational> fa, fb;
    for (int m = 0; m < bit; ++m) {
      fa[m] = a[m];
      fb[m] = b[m];
    }
    QuadField<Rational> diff = fa * fa - QuadField<Rational>(Rational(radicand(bit))) * fb * fb;
    std::array<Rational, kDim> d{};
    for (int m = 0; m < bit; ++m) d[m] = diff[m];
    return sa * exact_sign(d, level - 1);
  }

  std::array<Coeff, kDim> c_;
};

using Field = QuadField<Rational>;

template <class Coeff>
QuadField<Rational> to_rational_field(const QuadField<Coeff>& x) {
  QuadField<Rational> r;
  for (int m = 0; m < QuadField<Coeff>::kDim; ++m) r[m] = detail::coeff_to_rational(x[m]);
  return r;
}

}  // namespace hcox
