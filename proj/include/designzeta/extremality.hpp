#pragma once

// Tangent directions and the exponential map on the cone of forms with fixed
// determinant, and the variation formulas for zeta along e_A(tH).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "designzeta/design.hpp"
#include "designzeta/path.hpp"
#include "designzeta/theta.hpp"
#include "designzeta/zeta.hpp"

namespace dz {

/// Symmetric H with Tr(A^{-1} H) = 0 at the base form A (both real, in the
/// coordinates of the working form).
struct TangentDirection {
  Matrix<double> base;
  Matrix<double> h;

  double tangency_defect() const;  // |Tr(A^{-1} H)|
};

/// H = S - (<A^{-1}, S> / <A^{-1}, A^{-1}>) A^{-1}.
TangentDirection tangent_project(const Matrix<double>& a, const Matrix<double>& s);

/// A exp(t A^{-1} H) through the eigendecomposition of A^{-1/2} (tH) A^{-1/2}.
Matrix<double> exp_map(const Matrix<double>& a, const Matrix<double>& h, double t);

/// Entries uniform in [-1, 1], projected, scaled to Frobenius norm 1.
TangentDirection random_tangent(const Matrix<double>& a, std::mt19937_64& rng);
std::vector<TangentDirection> random_tangents(const Matrix<double>& a, int count, std::uint64_t seed);

/// Tr((A^{-1} H)^2).
double tangent_square_trace(const Matrix<double>& a, const Matrix<double>& h);

struct FirstVariation {
  double s = 0;
  int depth = 0;
  double residual = 0;  // sum over shells 1..depth of H[x] / A[x]^{s+1}
  double bound = 0;
  bool within_bound = false;
};

/// Requires s > n/2 and 2-design certificates for shells 1..depth
/// (PreconditionError otherwise). H in working coordinates.
FirstVariation zeta_first_variation(const Lattice& l, double s, const Matrix<double>& h, int depth,
                                    const ZetaOptions& opts = {});

struct VariationReport {
  double s = 0;
  Matrix<double> h;
  double step = 0;
  double zeta = 0;
  double zeta_err = 0;
  double trace_term = 0;  // Tr((A^{-1}H)^2)
  double linear = 0;      // fitted t coefficient
  double linear_bound = 0;
  double quadratic = 0;   // fitted t^2 coefficient
  double predicted = 0;   // zeta s (s - n/2) / (n (n+2)) Tr((A^{-1}H)^2)
  double relative_gap = 0;
  bool unreliable_fit = false;
  /// "local-min-direction" iff the predicted coefficient is positive.
  std::string verdict;
};

/// Central differences at t in {+-step, +-step/2} with Richardson
/// extrapolation. Requires s > 0, s != n/2.
VariationReport zeta_second_variation_fit(const Lattice& l, double s, const Matrix<double>& h, double step = 1e-3,
                                          const ZetaOptions& opts = {});

enum class Evidence { yes, no, inconclusive };
std::string_view to_string(Evidence e);

struct ExtremalityVerdict {
  double s = 0;
  Evidence evidence = Evidence::inconclusive;
  std::string reason;
  VariationReport fit;
};

struct ExtremalityReport {
  std::string lattice;
  int depth = 0;
  std::uint64_t seed = 0;
  CertificationReport certificates;
  StripScan strip;
  double theta_y = 0;
  ThetaMinSum theta;
  std::vector<ExtremalityVerdict> verdicts;
};

struct ExtremalityOptions {
  std::uint64_t seed = 1;
  double step = 1e-3;
  int strip_points = 37;
  ZetaOptions zeta;
  CertificationOptions certification;
};

/// Works on l rescaled to covolume one. PreconditionError unless shells
/// 1..depth are 2-designs.
ExtremalityReport extremality_report(const Lattice& l, const std::vector<double>& s_list, int depth,
                                     const ExtremalityOptions& opts = {});

std::string to_extremality_document(const ExtremalityReport& r);

}  // namespace dz
