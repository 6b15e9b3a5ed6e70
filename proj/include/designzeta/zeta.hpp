#pragma once

// Epstein zeta function zeta(A, s) = sum_{x != 0} A[x]^{-s} for real s.
//
// Continued form, with the Mellin integral of Theta - 1 split at y = w and the
// part below w moved to the dual form by the theta transformation:
//
//   pi^{-s} Gamma(s) zeta(A, s) = -w^s / s - det^{-1/2} w^{s-n/2} / (n/2 - s)
//       + w^s sum_x G(s, pi w A[x])
//       + det^{-1/2} w^{s-n/2} sum_y G(n/2 - s, pi A^{-1}[y] / w)
//
// with G(a, u) = u^{-a} Gamma(a, u). The default split is w = det^{-1/n}.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "designzeta/lattice.hpp"
#include "designzeta/numeric.hpp"
#include "designzeta/series.hpp"

namespace dz {

enum class ZetaMethod { direct_series, continued };

std::string_view to_string(ZetaMethod m);

struct ZetaOptions {
  /// Target: err <= max(abs_tol, rel_tol * |value|).
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  /// Return the best value within the limits below instead of throwing
  /// ResourceError when the target is missed.
  bool allow_partial = false;
  /// Default: continued form.
  std::optional<ZetaMethod> method;
  std::optional<double> split;
  /// Largest enumeration bound in Gram units (0: unlimited).
  Rational max_bound = 0;
  std::uint64_t budget = 50'000'000;
  unsigned threads = 1;
  unsigned precision_bits = default_precision_bits;
};

struct ZetaValue {
  double s = 0;
  HighPrecision value;
  double err = 0;
  ZetaMethod method = ZetaMethod::continued;
  /// Enumeration bounds used for the form and (continued form) its inverse.
  Rational depth;
  Rational dual_depth;

  double to_double() const { return real_to_double(value); }
};

/// zeta of the exact Gram matrix. Throws PoleError at s = n/2.
ZetaValue zeta(const GramMatrix& gram, double s, const ZetaOptions& opts = {});
/// zeta of the working form scale * gram: scale^{-s} zeta(gram, s).
ZetaValue zeta(const Lattice& l, double s, const ZetaOptions& opts = {});

/// d/ds zeta at s = 0 from the differentiated continued form.
ZetaValue zeta_derivative_at_0(const GramMatrix& gram, const ZetaOptions& opts = {});
ZetaValue zeta_derivative_at_0(const Lattice& l, const ZetaOptions& opts = {});

/// pi^{-s} Gamma(s) zeta(A, s) for s != 0, n/2 (continued form).
ZetaValue completed_zeta(const GramMatrix& gram, double s, const ZetaOptions& opts = {});

struct FunctionalEquationCheck {
  double s = 0;
  double lhs = 0;  // completed zeta of the working form at s
  double rhs = 0;  // det^{-1/2} times the completed zeta of its inverse at n/2 - s
  double residual = 0;
  double err = 0;  // combined truncation bound
};

/// The inverse side is split at split_ratio / w, w the split of the form
/// itself; at ratio 1 both sides sum the same terms.
FunctionalEquationCheck functional_equation_check(const Lattice& l, double s, const ZetaOptions& opts = {},
                                                  double split_ratio = 1.25);

struct StripScan {
  std::string lattice;
  int grid_points = 0;
  std::vector<ZetaValue> values;
  /// -1 / +1 when |zeta| > err, 0 when the sign is not certified.
  std::vector<int> signs;
  bool all_negative = false;
  /// Intervals of width <= 1e-6 containing a sign change.
  std::vector<std::pair<double, double>> zero_brackets;
};

/// Grid s_i = i (n/2)/(grid_points + 1), i = 1..grid_points. Evaluations may
/// fall short of the tolerance (allow_partial is forced); signs are only
/// reported where certified.
StripScan strip_scan(const Lattice& l, int grid_points, const ZetaOptions& opts = {});

/// Header "s,zeta,err" then one row per value.
void write_zeta_csv(std::ostream& os, const std::vector<ZetaValue>& values);
void write_strip_csv(std::ostream& os, const StripScan& scan);

/// Gradient identity for 2-design lattices: sum_{0 < A[x] <= M} x x' / A[x]^{s+1}
/// against (zeta(A, s) / n) A^{-1}; s > n/2, M the norm of shell depth.
struct GradientIdentityCheck {
  double s = 0;
  int depth = 0;
  double residual = 0;  // max-norm of the difference
  double bound = 0;
  bool within_bound = false;
};

GradientIdentityCheck gradient_identity_check(const Lattice& l, double s, int depth, const ZetaOptions& opts = {});

}  // namespace dz
