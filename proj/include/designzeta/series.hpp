#pragma once

// Shell data as it enters the analytic sums, with tail estimates for the
// shells that were not enumerated.

#include <cstdint>
#include <limits>
#include <vector>

#include "designzeta/lattice.hpp"
#include "designzeta/numeric.hpp"
#include "designzeta/shells.hpp"
#include "designzeta/special.hpp"

namespace dz {

/// All shells of a Gram matrix with norm <= bound, plus a growth constant C
/// such that N(R) <= C R^{n/2} is assumed for R >= bound, where N(R) counts
/// the nonzero vectors of norm <= R. C is four times the largest observed
/// ratio of N(m_k) to the ball-volume prediction V_n m_k^{n/2} det^{-1/2}.
struct ShellSeries {
  int dim = 0;
  double det = 1;
  Rational bound;
  std::vector<Rational> norms;
  std::vector<std::uint64_t> counts;
  double growth = 0;

  std::uint64_t total() const;
  double bound_value() const { return bound.convert_to<double>(); }
};

ShellSeries shell_series(const GramMatrix& gram, const Rational& bound, const EnumerationOptions& opts = {});

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

inline constexpr double unbounded_tail = std::numeric_limits<double>::infinity();

/// Bound on sum_{A[x] > M} A[x]^{-s}; needs s > n/2.
double direct_tail(const ShellSeries& series, double s);

/// Bound on sum_{A[x] > M} G(a, c A[x]) for c > 0; needs c M > n/2.
template <class Real>
double gamma_tail(const ShellSeries& series, const Real& a, const Real& c) {
  const double m = series.bound_value();
  const double cm = real_to_double(c) * m;
  const double half = series.dim / 2.0;
  if (cm <= half) return unbounded_tail;
  const double lead = series.growth * std::pow(m, half) / (1.0 - half / cm) - static_cast<double>(series.total());
  if (lead <= 0) return 0;
  const Real g = incomplete_g(a, Real(c * to_real<Real>(series.bound)));
  return lead * real_to_double(g);
}

/// Bound on sum_{A[x] > M} e^{-pi y A[x]}.
double theta_tail(const ShellSeries& series, double y);

/// Bound on sum_{A[x] > M} u^2 e^{-u}, u = pi y A[x].
double theta_weighted_tail(const ShellSeries& series, double y);

/// Per-shell power sums of real quadratic forms: for shell k, form f and
/// j = 1..max_power, sums[k][f][j-1] = sum over the shell (both signs) of
/// F_f[x]^j. Forms are in the input coordinates of gram.
struct FormSums {
  std::vector<Rational> norms;
  std::vector<std::uint64_t> counts;
  int forms = 0;
  int max_power = 0;
  std::vector<std::vector<std::vector<long double>>> sums;
};

FormSums form_power_sums(const GramMatrix& gram, const Rational& bound, const std::vector<Matrix<double>>& forms,
                         int max_power, const EnumerationOptions& opts = {});

}  // namespace dz
