#pragma once

#include <cmath>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "designzeta/rational.hpp"

namespace dz {

/// Working real type for shell-level sums. Precision is a runtime setting.
using HighPrecision = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

inline constexpr unsigned default_precision_bits = 128;

/// Sets the default precision of newly created HighPrecision values.
void set_working_precision(unsigned bits);
unsigned working_precision();

/// RAII guard restoring the previous working precision.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

template <class Real>
Real to_real(const Rational& q) {
  if constexpr (std::is_floating_point_v<Real>) {
    return q.convert_to<Real>();
  } else {
    return Real(mp::numerator(q).str()) / Real(mp::denominator(q).str());
  }
}

template <class Real>
Real to_real(const Integer& z) {
  if constexpr (std::is_floating_point_v<Real>)
    return z.convert_to<Real>();
  else
    return Real(z.str());
}

template <class Real>
Real pi_value() {
  if constexpr (std::is_floating_point_v<Real>)
    return static_cast<Real>(3.141592653589793238462643383279502884L);
  else
    return boost::math::constants::pi<Real>();
}

template <class Real>
Real euler_gamma_value() {
  if constexpr (std::is_floating_point_v<Real>)
    return static_cast<Real>(0.577215664901532860606512090082402431L);
  else
    return boost::math::constants::euler<Real>();
}

template <class Real>
double real_to_double(const Real& x) {
  if constexpr (std::is_floating_point_v<Real>)
    return static_cast<double>(x);
  else
    return x.template convert_to<double>();
}

}  // namespace dz

namespace dz {

/// Scientific notation with a fixed number of significant digits.
std::string format_sci(double x, int digits = 12);
std::string format_sci(const HighPrecision& x, int digits = 20);

}  // namespace dz
