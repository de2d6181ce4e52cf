#pragma once

#include <limits>

#include <boost/multiprecision/mpfr.hpp>
#include <Eigen/Core>

namespace ncbayes {

/// MPFR float with run-time precision. Expression templates are off so that
/// Eigen kernels see a plain value type.
using HighPrecision =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

/// Sets the working precision (decimal digits) of newly created HighPrecision
/// values for the current thread, restoring the previous value on exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits10) : saved_(HighPrecision::default_precision()) {
    HighPrecision::default_precision(digits10);
  }
  ~PrecisionGuard() { HighPrecision::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

}  // namespace ncbayes

namespace Eigen {

template <>
struct NumTraits<ncbayes::HighPrecision> : GenericNumTraits<ncbayes::HighPrecision> {
  using Real = ncbayes::HighPrecision;
  using NonInteger = ncbayes::HighPrecision;
  using Nested = ncbayes::HighPrecision;
  using Literal = ncbayes::HighPrecision;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 10,
    MulCost = 40
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return epsilon() * 1000; }
  static Real highest() { return std::numeric_limits<Real>::max(); }
  static Real lowest() { return std::numeric_limits<Real>::lowest(); }
  static int digits10() { return static_cast<int>(Real::default_precision()); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
};

}  // namespace Eigen
