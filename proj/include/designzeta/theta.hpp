#pragma once

// Theta function on the imaginary axis, Theta_A(y) = sum_x e^{-pi y A[x]},
// and the weighted sum S_A(y) = sum_x u (u - (n/2 + 1)) e^{-u}, u = pi y A[x].
// Both transform under A -> A^{-1}, y -> 1/y:
//   Theta_A(y) = det^{-1/2} y^{-n/2} Theta_{A^{-1}}(1/y),
//   S_A(y)     = det^{-1/2} y^{-n/2} S_{A^{-1}}(1/y).

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "designzeta/lattice.hpp"
#include "designzeta/numeric.hpp"

namespace dz {

struct ThetaOptions {
  double rel_tol = 1e-15;
  double abs_tol = 0;
  bool allow_partial = false;
  /// Evaluate through the inverse form when y < 1.
  bool modular_transform = true;
  Rational max_bound = 0;
  std::uint64_t budget = 50'000'000;
  unsigned threads = 1;
  unsigned precision_bits = default_precision_bits;
};

struct ThetaValue {
  double y = 0;
  HighPrecision value;
  double err = 0;
  bool transformed = false;
  Rational depth;

  double to_double() const { return real_to_double(value); }
};

ThetaValue theta(const GramMatrix& gram, double y, const ThetaOptions& opts = {});
/// Working form scale * gram.
ThetaValue theta(const Lattice& l, double y, const ThetaOptions& opts = {});

struct ThetaMinSum {
  double y = 0;
  HighPrecision value;
  double err = 0;
  /// +1 / -1 when |S| > err; 0 flags an inconclusive sign.
  int sign = 0;
  bool transformed = false;

  double to_double() const { return real_to_double(value); }
};

ThetaMinSum theta_min_sum(const GramMatrix& gram, double y, const ThetaOptions& opts = {});
ThetaMinSum theta_min_sum(const Lattice& l, double y, const ThetaOptions& opts = {});

/// (n/2 + 1) / (pi m_1) of the working form.
double theta_threshold(const Lattice& l);

struct ThetaThresholdScan {
  double threshold = 0;
  std::vector<ThetaMinSum> values;
  /// Smallest grid y from which every larger grid point has certified S > 0;
  /// 0 when there is none.
  double certified_from = 0;
};

/// Uniform grid of points in [y_lo, y_hi].
ThetaThresholdScan theta_threshold_scan(const Lattice& l, double y_lo, double y_hi, int points,
                                        const ThetaOptions& opts = {});

struct ThetaVariationFit {
  double y = 0;
  double step = 0;
  double fitted = 0;     // t^2 coefficient of Theta along the path (Richardson)
  double predicted = 0;  // Tr((A^{-1}H)^2) / (n(n+2)) * S(y)
  double relative_gap = 0;
  double s_value = 0;
};

/// H tangent at the working form of l.
ThetaVariationFit theta_second_variation_fit(const Lattice& l, double y, const Matrix<double>& h, double step = 1e-3,
                                             const ThetaOptions& opts = {});

void write_theta_csv(std::ostream& os, const std::vector<ThetaValue>& values);
void write_theta_min_csv(std::ostream& os, const std::vector<ThetaMinSum>& values);

}  // namespace dz
