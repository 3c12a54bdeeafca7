#pragma once

// Scalar types used with Eigen: the exact field and the fixed-precision
// binary floats. The NumTraits specializations must precede <Eigen/Dense>.

#include <limits>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <Eigen/Core>

#include "hcox/quad_field.hpp"

namespace hcox {

template <unsigned Digits>
using BinFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>,
                                               boost::multiprecision::et_off>;

using Real50 = BinFloat<50>;
using Real100 = BinFloat<100>;
using Real200 = BinFloat<200>;

template <class R>
std::string to_decimal(const R& x, int digits) {
  return x.str(digits, std::ios_base::scientific);
}

}  // namespace hcox

namespace Eigen {

template <unsigned Digits>
struct NumTraits<hcox::BinFloat<Digits>> : GenericNumTraits<hcox::BinFloat<Digits>> {
  using R = hcox::BinFloat<Digits>;
  using Real = R;
  using NonInteger = R;
  using Literal = R;
  using Nested = R;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 10,
    MulCost = 40
  };
  static Real epsilon() { return std::numeric_limits<R>::epsilon(); }
  static Real dummy_precision() { return epsilon() * 1024; }
  static Real highest() { return (std::numeric_limits<R>::max)(); }
  static Real lowest() { return (std::numeric_limits<R>::lowest)(); }
  static Real infinity() { return std::numeric_limits<R>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<R>::quiet_NaN(); }
  static int digits10() { return std::numeric_limits<R>::digits10; }
};

template <class Coeff>
struct NumTraits<hcox::QuadField<Coeff>> : GenericNumTraits<hcox::QuadField<Coeff>> {
  using Real = hcox::QuadField<Coeff>;
  using NonInteger = Real;
  using Literal = Real;
  using Nested = Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 8,
    MulCost = 64
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};

}  // namespace Eigen

#include <Eigen/Dense>
