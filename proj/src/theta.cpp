#include "designzeta/theta.hpp"

#include <cmath>

#include <Eigen/LU>
#include <ostream>

#include "designzeta/errors.hpp"
#include "designzeta/path.hpp"
#include "designzeta/series.hpp"

namespace dz {

namespace {

using HP = HighPrecision;

struct Summed {
  HP value;
  double err = 0;
  Rational depth;
};

Rational rational_above(double x) {
  return Rational(Integer(static_cast<long long>(std::ceil(x * 1024.0))), Integer(1024));
}

// Sums eval(series) over deeper and deeper shells until the error target is
// met; min_u is the smallest pi y M for which the tail bound applies.
template <class Eval>
Summed deepen(const GramMatrix& gram, double y, double min_u, const ThetaOptions& o, Eval&& eval) {
  const int n = gram.dim();
  EnumerationOptions eo;
  eo.budget = o.budget;
  eo.threads = o.threads;
  eo.keep_vectors = false;
  const Rational step = norm_step(gram);
  Rational m = std::max(bound_for_shells(gram, 1, eo), rational_above(min_u / (pi_value<double>() * y)));
  if (o.max_bound > 0 && m > o.max_bound) m = std::max(o.max_bound, bound_for_shells(gram, 1, eo));
  for (;;) {
    const ShellSeries series = shell_series(gram, m, eo);
    auto [value, err] = eval(series);
    if (err <= std::max(o.abs_tol, o.rel_tol * std::abs(real_to_double(value)))) return {value, err, m};
    Rational next = std::max(m + step, m * Rational(n + 1, n));
    if (o.max_bound > 0 && next > o.max_bound) next = o.max_bound;
    const double observed = static_cast<double>(series.total()) / std::pow(series.bound_value(), n / 2.0);
    const bool blocked = next <= m || observed * std::pow(next.convert_to<double>(), n / 2.0) > static_cast<double>(o.budget);
    if (blocked) {
      if (o.allow_partial) return {value, err, m};
      throw ResourceError("theta: error " + format_sci(err, 3) + " above target within the shell budget");
    }
    m = next;
  }
}

bool use_transform(const GramMatrix& gram, double y, const ThetaOptions& o) {
  return o.modular_transform && y * std::pow(gram.det().convert_to<double>(), 1.0 / gram.dim()) < 1.0;
}

Summed theta_direct(const GramMatrix& gram, double y, const ThetaOptions& o) {
  const HP c = pi_value<HP>() * HP(y);
  return deepen(gram, y, gram.dim() / 2.0 + 1.0, o, [&](const ShellSeries& s) {
    HP v = 1;
    for (std::size_t k = 0; k < s.norms.size(); ++k) v += HP(s.counts[k]) * exp(-c * to_real<HP>(s.norms[k]));
    return std::pair<HP, double>{v, theta_tail(s, y)};
  });
}

Summed min_sum_direct(const GramMatrix& gram, double y, const ThetaOptions& o) {
  const int n = gram.dim();
  const HP c = pi_value<HP>() * HP(y);
  const HP shift = HP(n) / 2 + 1;
  return deepen(gram, y, n / 2.0 + 3.0, o, [&](const ShellSeries& s) {
    HP v = 0;
    for (std::size_t k = 0; k < s.norms.size(); ++k) {
      const HP u = c * to_real<HP>(s.norms[k]);
      v += HP(s.counts[k]) * u * (u - shift) * exp(-u);
    }
    return std::pair<HP, double>{v, theta_weighted_tail(s, y)};
  });
}

// det^{-1/2} y^{-n/2}
HP transform_factor(const GramMatrix& gram, double y) {
  return pow(HP(y), -HP(gram.dim()) / 2) / sqrt(to_real<HP>(gram.det()));
}

}  // namespace

ThetaValue theta(const GramMatrix& gram, double y, const ThetaOptions& opts) {
  if (!(y > 0)) throw DomainError("theta needs y > 0");
  const PrecisionScope scope(opts.precision_bits);
  if (use_transform(gram, y, opts)) {
    const GramMatrix inv = gram.inverse();
    const HP f = transform_factor(gram, y);
    const Summed d = theta_direct(inv, 1.0 / y, opts);
    return {y, f * d.value, real_to_double(f) * d.err, true, d.depth};
  }
  const Summed d = theta_direct(gram, y, opts);
  return {y, d.value, d.err, false, d.depth};
}

ThetaValue theta(const Lattice& l, double y, const ThetaOptions& opts) {
  ThetaValue v = theta(l.gram(), y * l.scale().value(), opts);
  v.y = y;
  return v;
}

ThetaMinSum theta_min_sum(const GramMatrix& gram, double y, const ThetaOptions& opts) {
  if (!(y > 0)) throw DomainError("theta sum needs y > 0");
  const PrecisionScope scope(opts.precision_bits);
  ThetaOptions o = opts;
  o.allow_partial = true;
  ThetaMinSum r;
  r.y = y;
  if (use_transform(gram, y, opts)) {
    const HP f = transform_factor(gram, y);
    const Summed d = min_sum_direct(gram.inverse(), 1.0 / y, o);
    r.value = f * d.value;
    r.err = real_to_double(f) * d.err;
    r.transformed = true;
  } else {
    const Summed d = min_sum_direct(gram, y, o);
    r.value = d.value;
    r.err = d.err;
  }
  const double v = r.to_double();
  r.sign = std::abs(v) > r.err ? (v > 0 ? 1 : -1) : 0;
  return r;
}

ThetaMinSum theta_min_sum(const Lattice& l, double y, const ThetaOptions& opts) {
  ThetaMinSum r = theta_min_sum(l.gram(), y * l.scale().value(), opts);
  r.y = y;
  return r;
}

double theta_threshold(const Lattice& l) {
  EnumerationOptions eo;
  eo.keep_vectors = false;
  const double m1 = bound_for_shells(l.gram(), 1, eo).convert_to<double>() * l.scale().value();
  return (l.dim() / 2.0 + 1.0) / (pi_value<double>() * m1);
}

ThetaThresholdScan theta_threshold_scan(const Lattice& l, double y_lo, double y_hi, int points,
                                        const ThetaOptions& opts) {
  if (points < 2 || !(y_lo > 0) || !(y_hi > y_lo)) throw DomainError("threshold scan needs 0 < y_lo < y_hi and >= 2 points");
  ThetaThresholdScan scan;
  scan.threshold = theta_threshold(l);
  for (int i = 0; i < points; ++i)
    scan.values.push_back(theta_min_sum(l, y_lo + (y_hi - y_lo) * i / (points - 1), opts));
  for (auto it = scan.values.rbegin(); it != scan.values.rend() && it->sign > 0; ++it) scan.certified_from = it->y;
  return scan;
}

ThetaVariationFit theta_second_variation_fit(const Lattice& l, double y, const Matrix<double>& h, double step,
                                             const ThetaOptions& opts) {
  if (!(y > 0) || !(step > 0)) throw DomainError("variation fit needs y > 0 and step > 0");
  const int n = l.dim();
  const GramMatrix& gram = l.gram();
  const double lambda2 = l.scale().value();
  const double yg = y * lambda2;
  const Matrix<double> hg = h / lambda2;
  const Matrix<double> a = gram.to_double();
  const PrecisionScope scope(opts.precision_bits);

  const double rho = relative_spectral_radius(a, hg);
  const double shrink = std::exp(-step * rho);
  ThetaOptions o = opts;
  o.rel_tol = 1e-20;
  o.allow_partial = true;
  o.modular_transform = false;
  // Depth from the unperturbed sum at the smallest argument met on the path.
  const Summed base = theta_direct(gram, yg * shrink, o);

  const std::vector<double> ts{step, -step, step / 2, -step / 2};
  std::vector<Matrix<double>> forms;
  for (double t : ts) forms.push_back(path_increment(a, hg, t).form);
  const HP c = pi_value<HP>() * HP(yg);
  const double r = std::expm1(step * rho);
  const int order = shell_expansion_order(r, 0.0, real_to_double(c) * base.depth.convert_to<double>());
  EnumerationOptions eo;
  eo.budget = opts.budget;
  eo.threads = opts.threads;
  const FormSums fs = form_power_sums(gram, base.depth, forms, order, eo);

  std::vector<HP> delta(ts.size(), HP(0));
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t k = 0; k < fs.norms.size(); ++k) {
      HP coef = 1;
      HP shell = 0;
      for (int j = 1; j <= order; ++j) {
        coef *= -c / j;
        shell += coef * HP(fs.sums[k][i][static_cast<std::size_t>(j - 1)]);
      }
      delta[i] += exp(-c * to_real<HP>(fs.norms[k])) * shell;
    }
  const HP hh(step);
  const HP c_full = (delta[0] + delta[1]) / (2 * hh * hh);
  const HP c_half = (delta[2] + delta[3]) / (2 * (hh / 2) * (hh / 2));

  ThetaVariationFit fit;
  fit.y = y;
  fit.step = step;
  fit.fitted = real_to_double((4 * c_half - c_full) / 3);
  const Matrix<double> x = a.inverse() * hg;
  ThetaOptions so = opts;
  so.modular_transform = false;
  fit.s_value = theta_min_sum(gram, yg, so).to_double();
  fit.predicted = (x * x).trace() / (n * (n + 2.0)) * fit.s_value;
  fit.relative_gap = fit.predicted != 0 ? std::abs(fit.fitted - fit.predicted) / std::abs(fit.predicted)
                                        : std::abs(fit.fitted);
  return fit;
}

void write_theta_csv(std::ostream& os, const std::vector<ThetaValue>& values) {
  os << "y,theta,err\n";
  for (const auto& v : values) os << format_sci(v.y, 17) << ',' << format_sci(v.value, 20) << ',' << format_sci(v.err, 3) << '\n';
}

void write_theta_min_csv(std::ostream& os, const std::vector<ThetaMinSum>& values) {
  os << "y,S,err,sign\n";
  for (const auto& v : values)
    os << format_sci(v.y, 17) << ',' << format_sci(v.value, 20) << ',' << format_sci(v.err, 3) << ',' << v.sign << '\n';
}

}  // namespace dz
