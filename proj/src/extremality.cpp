#include "designzeta/extremality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "designzeta/errors.hpp"

namespace dz {

namespace {

Matrix<double> symmetrize(const Matrix<double>& m) { return 0.5 * (m + m.transpose()); }

double frobenius_dot(const Matrix<double>& a, const Matrix<double>& b) { return (a.array() * b.array()).sum(); }

}  // namespace

double TangentDirection::tangency_defect() const { return std::abs((base.inverse() * h).trace()); }

TangentDirection tangent_project(const Matrix<double>& a, const Matrix<double>& s) {
  const Matrix<double> g = a.inverse();
  const Matrix<double> ss = symmetrize(s);
  const Matrix<double> h = ss - (frobenius_dot(g, ss) / frobenius_dot(g, g)) * g;
  return {a, symmetrize(h)};
}

Matrix<double> exp_map(const Matrix<double>& a, const Matrix<double>& h, double t) {
  if (t == 0.0) return a;
  const Matrix<double> root = sym_sqrt(a);
  const Matrix<double> inv_root = sym_inv_sqrt(a);
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(symmetrize(inv_root * (t * h) * inv_root));
  if (es.info() != Eigen::Success) throw RangeError("eigendecomposition failed in the exponential map");
  const Vector<double> e = es.eigenvalues().unaryExpr([](double x) { return std::exp(x); });
  if (!e.allFinite() || e.minCoeff() <= 0) throw RangeError("exponential map left the positive definite cone");
  return symmetrize(root * es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose() * root);
}

TangentDirection random_tangent(const Matrix<double>& a, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto n = a.rows();
  Matrix<double> s(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) s(i, j) = s(j, i) = u(rng);
  TangentDirection d = tangent_project(a, s);
  const double norm = d.h.norm();
  if (norm == 0) throw RangeError("random direction vanished after projection");
  d.h /= norm;
  return d;
}

std::vector<TangentDirection> random_tangents(const Matrix<double>& a, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TangentDirection> out;
  for (int i = 0; i < count; ++i) out.push_back(random_tangent(a, rng));
  return out;
}

double tangent_square_trace(const Matrix<double>& a, const Matrix<double>& h) {
  const Matrix<double> x = a.inverse() * h;
  return (x * x).trace();
}

FirstVariation zeta_first_variation(const Lattice& l, double s, const Matrix<double>& h, int depth,
                                    const ZetaOptions& opts) {
  const int n = l.dim();
  if (s <= n / 2.0) throw DomainError("first variation needs s > n/2");
  if (depth < 1) throw DomainError("depth must be >= 1");
  const CertificationReport cert = certify_lattice(Lattice(l.name(), l.gram()), depth, 2);
  if (!cert.all_2_design) throw PreconditionError("first variation needs 2-design certificates up to depth " + std::to_string(depth));

  const double lambda2 = l.scale().value();
  const Matrix<double> hg = h / lambda2;
  EnumerationOptions eo;
  eo.budget = opts.budget;
  eo.threads = opts.threads;
  const Rational bound = cert.shells.back().norm;
  const FormSums fs = form_power_sums(l.gram(), bound, {hg}, 1, eo);
  long double total = 0;
  long double magnitude = 0;
  for (std::size_t k = 0; k < fs.norms.size(); ++k) {
    const long double w = std::pow(static_cast<long double>(fs.norms[k].convert_to<double>()), -(s + 1));
    total += fs.sums[k][0][0] * w;
    magnitude += std::abs(fs.sums[k][0][0]) * w + fs.counts[k] * w * fs.norms[k].convert_to<double>();
  }
  // |H[x]| <= rho A[x] bounds the omitted shells by the zeta tail.
  const double rho = relative_spectral_radius(l.gram().to_double(), hg);
  const ShellSeries series = shell_series(l.gram(), bound, eo);
  const double factor = std::pow(lambda2, -s);
  FirstVariation r;
  r.s = s;
  r.depth = depth;
  r.residual = factor * static_cast<double>(total);
  r.bound = factor * (rho * direct_tail(series, s) + 1e-15 * static_cast<double>(magnitude) * (rho + 1));
  r.within_bound = std::abs(r.residual) <= r.bound;
  return r;
}

VariationReport zeta_second_variation_fit(const Lattice& l, double s, const Matrix<double>& h, double step,
                                          const ZetaOptions& opts) {
  const int n = l.dim();
  if (!(s > 0) || s * 2 == n) throw DomainError("second variation needs s > 0 and s != n/2");
  if (!(step > 0)) throw DomainError("step must be positive");
  const double lambda2 = l.scale().value();
  const Matrix<double> hg = h / lambda2;
  const std::vector<double> ts{step, -step, step / 2, -step / 2};
  ZetaOptions zo = opts;
  zo.allow_partial = true;
  const PathEvaluation p = zeta_path(l.gram(), hg, ts, PathQuantity::zeta, s, zo);

  const PrecisionScope scope(opts.precision_bits);
  const HighPrecision factor = pow(HighPrecision(lambda2), HighPrecision(-s));
  const HighPrecision hh(step);
  const HighPrecision q_full = (p.delta[0] + p.delta[1]) / (2 * hh * hh);
  const HighPrecision q_half = (p.delta[2] + p.delta[3]) / (2 * (hh / 2) * (hh / 2));
  const HighPrecision l_full = (p.delta[0] - p.delta[1]) / (2 * hh);
  const HighPrecision l_half = (p.delta[2] - p.delta[3]) / hh;

  VariationReport r;
  r.s = s;
  r.h = h;
  r.step = step;
  r.zeta = real_to_double(factor * p.base.value);
  r.zeta_err = real_to_double(factor) * p.base.err;
  r.trace_term = tangent_square_trace(l.gram().to_double(), hg);
  r.quadratic = real_to_double(factor * (4 * q_half - q_full) / 3);
  r.linear = real_to_double(factor * (4 * l_half - l_full) / 3);
  const double f = real_to_double(factor);
  r.linear_bound = f * (2 * p.truncation / step + real_to_double(abs(l_half - l_full)) +
                        1e-15 * std::abs(real_to_double(p.base.value)) / step);
  r.predicted = r.zeta * s * (s - n / 2.0) / (n * (n + 2.0)) * r.trace_term;
  r.relative_gap = r.predicted != 0 ? std::abs(r.quadratic - r.predicted) / std::abs(r.predicted) : std::abs(r.quadratic);
  r.unreliable_fit = std::abs(real_to_double(q_half - q_full)) * f > 1e-2 * std::abs(r.quadratic) + 1e-300;
  r.verdict = r.predicted > 0 ? "local-min-direction" : "not-min-direction";
  return r;
}

std::string_view to_string(Evidence e) {
  switch (e) {
    case Evidence::yes: return "yes";
    case Evidence::no: return "no";
    default: return "inconclusive";
  }
}

ExtremalityReport extremality_report(const Lattice& input, const std::vector<double>& s_list, int depth,
                                     const ExtremalityOptions& opts) {
  const Lattice l = rescale_to_covolume_one(input);
  const int n = l.dim();
  ExtremalityReport rep;
  rep.lattice = input.name();
  rep.depth = depth;
  rep.seed = opts.seed;
  rep.certificates = certify_lattice(Lattice(l.name(), l.gram()), depth, 4, opts.certification);
  if (!rep.certificates.all_2_design)
    throw PreconditionError("a shell up to depth " + std::to_string(depth) +
                            " is not a 2-design, so the first variation does not vanish");
  rep.strip = strip_scan(l, opts.strip_points, opts.zeta);
  rep.theta_y = 1.01 * theta_threshold(l);
  rep.theta = theta_min_sum(l, rep.theta_y);

  const TangentDirection dir = random_tangents(l.working_gram(), 1, opts.seed).front();
  for (double s : s_list) {
    ExtremalityVerdict v;
    v.s = s;
    if (!(s > 0) || s * 2 == n) {
      v.reason = "s must be positive and different from n/2";
      rep.verdicts.push_back(std::move(v));
      continue;
    }
    v.fit = zeta_second_variation_fit(l, s, dir.h, opts.step, opts.zeta);
    const bool designs = rep.certificates.all_4_design;
    const bool fit_ok = v.fit.relative_gap <= 1e-2 && !v.fit.unreliable_fit;
    if (!designs) {
      v.evidence = Evidence::no;
      v.reason = "4-design certificates fail up to depth " + std::to_string(depth);
    } else if (s > n / 2.0) {
      v.evidence = fit_ok && v.fit.predicted > 0 ? Evidence::yes : Evidence::inconclusive;
      v.reason = "s > n/2 with all shells to depth 4-designs";
    } else if (rep.strip.all_negative && fit_ok && v.fit.predicted > 0) {
      v.evidence = Evidence::yes;
      v.reason = "0 < s < n/2 and zeta < 0 on the strip grid";
    } else if (rep.strip.zero_brackets.empty() && !rep.strip.all_negative) {
      v.reason = "strip signs not all certified";
    } else {
      v.evidence = v.fit.predicted > 0 ? Evidence::inconclusive : Evidence::no;
      v.reason = "zeta is not negative on the whole strip grid";
    }
    rep.verdicts.push_back(std::move(v));
  }
  return rep;
}

std::string to_extremality_document(const ExtremalityReport& r) {
  std::ostringstream os;
  os << "lattice: " << r.lattice << "\n";
  os << "depth: " << r.depth << "\n";
  os << "seed: " << r.seed << "\n";
  os << "all_2_design: " << (r.certificates.all_2_design ? "true" : "false") << "\n";
  os << "all_4_design: " << (r.certificates.all_4_design ? "true" : "false") << "\n";
  os << "certificate_scope: " << r.certificates.scope_note << "\n";
  os << "strip_points: " << r.strip.grid_points << "\n";
  os << "strip_all_negative: " << (r.strip.all_negative ? "true" : "false") << "\n";
  os << "strip_zero_brackets: " << r.strip.zero_brackets.size() << "\n";
  for (const auto& [lo, hi] : r.strip.zero_brackets)
    os << "  - [" << format_sci(lo, 10) << ", " << format_sci(hi, 10) << "]\n";
  os << "theta_y: " << format_sci(r.theta_y, 10) << "\n";
  os << "theta_S: " << format_sci(r.theta.value, 12) << "\n";
  os << "theta_S_err: " << format_sci(r.theta.err, 3) << "\n";
  os << "theta_S_sign: " << r.theta.sign << "\n";
  os << "verdicts:\n";
  for (const auto& v : r.verdicts) {
    os << "  - s: " << format_sci(v.s, 10) << "\n";
    os << "    evidence: " << to_string(v.evidence) << "\n";
    os << "    reason: " << v.reason << "\n";
    if (v.fit.step == 0) continue;
    os << "    zeta: " << format_sci(v.fit.zeta, 15) << "\n";
    os << "    zeta_err: " << format_sci(v.fit.zeta_err, 3) << "\n";
    os << "    trace_term: " << format_sci(v.fit.trace_term, 15) << "\n";
    os << "    fitted_quadratic: " << format_sci(v.fit.quadratic, 15) << "\n";
    os << "    predicted_quadratic: " << format_sci(v.fit.predicted, 15) << "\n";
    os << "    relative_gap: " << format_sci(v.fit.relative_gap, 3) << "\n";
    os << "    fitted_linear: " << format_sci(v.fit.linear, 3) << "\n";
    os << "    linear_bound: " << format_sci(v.fit.linear_bound, 3) << "\n";
    os << "    unreliable_fit: " << (v.fit.unreliable_fit ? "true" : "false") << "\n";
    os << "    direction: " << v.fit.verdict << "\n";
  }
  return os.str();
}

}  // namespace dz
