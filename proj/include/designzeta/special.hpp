#pragma once

// Incomplete gamma functions in the normalisation used by the theta/zeta
// splitting:  G(a, u) = int_1^inf e^{-u t} t^{a-1} dt = u^{-a} Gamma(a, u).

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/precision.hpp>

#include "designzeta/errors.hpp"
#include "designzeta/numeric.hpp"

namespace dz {

template <class Real>
Real gamma_fn(const Real& a) {
  if constexpr (std::is_floating_point_v<Real>)
    return std::tgamma(a);
  else
    return boost::math::tgamma(a);
}

/// 1/Gamma(s), zero at the poles s = 0, -1, -2, ...
template <class Real>
Real rgamma(const Real& s) {
  using std::floor;
  if (s <= 0 && floor(s) == s) return Real(0);
  return Real(1) / gamma_fn(s);
}

namespace detail {

template <class Real>
Real eps_of() {
  return boost::math::tools::epsilon<Real>();
}

// e^u G(a, u) by the Legendre continued fraction (modified Lentz).
template <class Real>
Real g_continued_fraction(const Real& a, const Real& u) {
  using std::abs;
  const Real tiny = Real(1e-300);
  const Real eps = eps_of<Real>();
  Real b = u + 1 - a;
  Real c = 1 / tiny;
  Real d = 1 / b;
  Real h = d;
  for (int i = 1; i < 100000; ++i) {
    const Real an = -Real(i) * (Real(i) - a);
    b += 2;
    d = an * d + b;
    if (abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (abs(c) < tiny) c = tiny;
    d = 1 / d;
    const Real del = d * c;
    h *= del;
    if (abs(del - 1) < eps) return h;
  }
  throw RangeError("incomplete gamma continued fraction did not converge");
}

// sum_k u^k / (a (a+1) ... (a+k)), so that gamma_lower(a, u) = e^{-u} u^a * sum.
template <class Real>
Real lower_series(const Real& a, const Real& u) {
  using std::abs;
  const Real eps = eps_of<Real>();
  Real term = 1 / a;
  Real sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= u / (a + k);
    sum += term;
    if (abs(term) < abs(sum) * eps) return sum;
  }
  throw RangeError("incomplete gamma series did not converge");
}

// E_1(u) = Gamma(0, u) for small u.
template <class Real>
Real expint_e1_series(const Real& u) {
  using std::abs;
  using std::log;
  const Real eps = eps_of<Real>();
  Real sum = 0;
  Real term = 1;
  for (int k = 1; k < 100000; ++k) {
    term *= -u / k;
    const Real add = term / k;
    sum += add;
    if (abs(add) < eps * (abs(sum) + 1)) break;
  }
  return -euler_gamma_value<Real>() - log(u) - sum;
}

}  // namespace detail

/// G(a, u) for real a and u > 0.
template <class Real>
Real incomplete_g(const Real& a, const Real& u) {
  using std::exp;
  using std::floor;
  using std::pow;
  if (!(u > 0)) throw DomainError("incomplete gamma needs u > 0");
  if (u > a + 1 || u >= 1) {
    if (u > a + 1) return exp(-u) * detail::g_continued_fraction(a, u);
  }
  if (a > 0) return pow(u, -a) * gamma_fn(a) - exp(-u) * detail::lower_series(a, u);
  if (a == 0) return detail::expint_e1_series(u);
  // a < 0 and u <= a + 1 < 1: step up with G(a) = (u G(a+1) - e^{-u}) / a.
  return (u * incomplete_g(Real(a + 1), u) - exp(-u)) / a;
}

/// Upper incomplete gamma Gamma(a, x) = x^a G(a, x).
template <class Real>
Real upper_incomplete_gamma(const Real& a, const Real& x) {
  using std::pow;
  return pow(x, a) * incomplete_g(a, x);
}

}  // namespace dz
