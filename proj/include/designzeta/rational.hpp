#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

namespace dz {

namespace mp = boost::multiprecision;

using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using RationalMatrix = Matrix<Rational>;
using RationalVector = Vector<Rational>;
using IntegerMatrix = Matrix<Integer>;
using IntMatrix = Matrix<std::int64_t>;
using IntVector = Vector<std::int64_t>;

/// Canonical text form: "p" when the denominator is one, otherwise "p/q" in
/// lowest terms with q > 0.
std::string to_string(const Rational& q);

/// Accepts "p", "p/q" and surrounding whitespace. Throws dz::ParseError.
Rational parse_rational(std::string_view text);

inline Integer numerator_of(const Rational& q) { return mp::numerator(q); }
inline Integer denominator_of(const Rational& q) { return mp::denominator(q); }

inline bool is_integral(const Rational& q) { return mp::denominator(q) == 1; }

/// Least common multiple of all denominators.
template <class Derived>
Integer common_denominator(const Eigen::MatrixBase<Derived>& m) {
  Integer d = 1;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) d = mp::lcm(d, mp::denominator(m(i, j)));
  return d;
}

template <class Derived>
Matrix<double> to_double(const Eigen::MatrixBase<Derived>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).template convert_to<double>();
  return out;
}

inline std::int64_t to_int64(const Integer& z) {
  if (z > std::numeric_limits<std::int64_t>::max() || z < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits");
  return z.convert_to<std::int64_t>();
}

}  // namespace dz
