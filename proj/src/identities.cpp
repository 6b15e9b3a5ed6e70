#include <cmath>

#include <Eigen/LU>

#include "designzeta/design.hpp"
#include "designzeta/errors.hpp"
#include "designzeta/series.hpp"
#include "designzeta/zeta.hpp"

namespace dz {

SeriesIdentityResult series_identity_check(const Lattice& l, double s, const Matrix<double>& h, int depth,
                                           bool require_designs) {
  const int n = l.dim();
  if (!(s > n / 2.0)) throw DomainError("series identity needs s > n/2");
  if (depth < 1) throw DomainError("depth must be >= 1");
  const GramMatrix& gram = l.gram();
  EnumerationOptions eo;
  eo.keep_vectors = false;
  eo.budget = 2'000'000'000;
  Rational bound;
  if (require_designs) {
    const CertificationReport cert = certify_lattice(Lattice(l.name(), gram), depth, 4);
    if (!cert.all_4_design)
      throw PreconditionError("series identity needs 4-design certificates up to depth " + std::to_string(depth));
    bound = cert.shells.back().norm;
  } else {
    bound = bound_for_shells(gram, depth, eo);
  }

  const double lambda2 = l.scale().value();
  const Matrix<double> hg = h / lambda2;
  const Matrix<double> gh = gram.to_double().inverse() * hg;
  const double c = (gh.trace() * gh.trace() + 2 * (gh * gh).trace()) / (n * (n + 2.0));

  const FormSums fs = form_power_sums(gram, bound, {hg}, 2, eo);
  long double lhs = 0;
  long double magnitude = 0;
  for (std::size_t k = 0; k < fs.norms.size(); ++k) {
    const long double m = fs.norms[k].convert_to<double>();
    const long double term = fs.sums[k][0][1] * std::pow(m, -(s + 2));
    lhs += term;
    magnitude += std::abs(term);
  }
  ZetaOptions zo;
  zo.allow_partial = true;
  const ZetaValue z = zeta(gram, s, zo);
  const ShellSeries series = shell_series(gram, bound, eo);

  const double factor = std::pow(lambda2, -s);
  SeriesIdentityResult r;
  r.s = s;
  r.lhs = factor * static_cast<double>(lhs);
  r.rhs = factor * c * z.to_double();
  r.residual = std::abs(r.lhs - r.rhs);
  r.bound = factor * (std::abs(c) * (direct_tail(series, s) + z.err) +
                      1e-14 * (static_cast<double>(magnitude) + std::abs(c * z.to_double())));
  r.within_bound = r.residual <= r.bound;
  return r;
}

}  // namespace dz
