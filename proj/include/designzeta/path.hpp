#pragma once

// Zeta along determinant-preserving paths t -> B exp(t B^{-1} H).
//
// Every perturbed value is written as F(t) = F(0) + Delta(t), where Delta is
// summed shell by shell from power sums of delta_x = B_t[x] - B[x] through
// G(a, u + e) = sum_j (-e)^j / j! G(a + j, u). The shell depth is fixed by the
// unperturbed evaluation and shared by all t.

#include <vector>

#include "designzeta/zeta.hpp"

namespace dz {

/// Symmetric square root of a symmetric positive definite matrix.
Matrix<double> sym_sqrt(const Matrix<double>& a);
Matrix<double> sym_inv_sqrt(const Matrix<double>& a);

/// B exp(t B^{-1} H) - B and (B exp(t B^{-1} H))^{-1} - B^{-1}, accurate for
/// small t (expm1 on the eigenvalues of B^{-1/2} H B^{-1/2}).
struct PathIncrement {
  Matrix<double> form;
  Matrix<double> inverse;
};

PathIncrement path_increment(const Matrix<double>& base, const Matrix<double>& h, double t);

/// Largest |eigenvalue| of B^{-1/2} H B^{-1/2}, i.e. of B^{-1} H.
double relative_spectral_radius(const Matrix<double>& base, const Matrix<double>& h);

/// Smallest J for which the Taylor terms of G(a, u + e), |e| <= r u, |a| <=
/// a_max, u <= u_max, fall below 1e-24 relative to G(a, u). RangeError when
/// r is too large for the expansion.
int shell_expansion_order(double r, double a_max, double u_max);

enum class PathQuantity { zeta, derivative_at_0 };

struct PathEvaluation {
  std::vector<double> t;
  /// F(t) - F(0).
  std::vector<HighPrecision> delta;
  ZetaValue base;
  /// Bound on the truncation error of each delta.
  double truncation = 0;
};

/// h is a symmetric direction in the coordinates of the exact form base.
PathEvaluation zeta_path(const GramMatrix& base, const Matrix<double>& h, const std::vector<double>& t, PathQuantity q,
                         double s, const ZetaOptions& opts = {});

/// t -> zeta'((e_A(tH))^{-1}, 0) at t in {0, +-step, +-2 step}, with A the
/// working form of l and H tangent at A.
struct HeightRow {
  std::vector<double> t;
  std::vector<double> values;
  std::vector<double> deltas;
  double truncation = 0;
  double quadratic = 0;  // least-squares t^2 coefficient
  double linear = 0;
  /// Tr((A^{-1}H)^2) / (2(n+2)), the t^2 coefficient implied by the design
  /// identities.
  double predicted = 0;
  bool strict_minimum_at_zero = false;
};

std::vector<HeightRow> height_compare(const Lattice& l, const std::vector<Matrix<double>>& directions, double step = 1e-2,
                                      const ZetaOptions& opts = {});

}  // namespace dz
