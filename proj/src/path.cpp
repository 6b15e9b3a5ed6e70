#include "designzeta/path.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "designzeta/errors.hpp"

namespace dz {

namespace {

using HP = HighPrecision;

Eigen::SelfAdjointEigenSolver<Matrix<double>> eigen_of(const Matrix<double>& a) {
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(a);
  if (es.info() != Eigen::Success) throw RangeError("symmetric eigendecomposition failed");
  return es;
}

Matrix<double> spectral(const Matrix<double>& a, double (*f)(double)) {
  const auto es = eigen_of(a);
  if (es.eigenvalues().minCoeff() <= 0) throw RangeError("matrix is not positive definite");
  const Vector<double> d = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Matrix<double> symmetrize(const Matrix<double>& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

int shell_expansion_order(double r, double a_max, double u_max) {
  if (r >= 0.5) throw RangeError("path step too large for the shell expansion");
  if (r == 0) return 1;
  double binom = 1;  // binom(a_max + j - 1, j) r^j
  double poisson = 1;
  for (int j = 1; j <= 120; ++j) {
    binom *= r * (a_max + j) / j;
    poisson *= r * u_max / j;
    if (std::max(binom, poisson) < 1e-24 && j >= 2) return j;
  }
  throw RangeError("path step too large for the shell expansion");
}

namespace {

struct SideSpec {
  HP factor;  // multiplies the shell sum
  HP a;
  HP c;       // G(a, c m)
};

// sum over shells of factor * sum_j (-c)^j / j! P_j G(a + j, c m), P_j
// taken from sums[k][f].
HP delta_sum(const FormSums& fs, std::size_t form, const SideSpec& side, double& remainder) {
  HP total = 0;
  for (std::size_t k = 0; k < fs.norms.size(); ++k) {
    const HP u = side.c * to_real<HP>(fs.norms[k]);
    HP coef = 1;
    HP shell = 0;
    HP last = 0;
    for (int j = 1; j <= fs.max_power; ++j) {
      coef *= -side.c / j;
      last = coef * HP(fs.sums[k][form][static_cast<std::size_t>(j - 1)]) * incomplete_g(HP(side.a + j), u);
      shell += last;
    }
    remainder += std::abs(real_to_double(side.factor * last));
    total += shell;
  }
  return side.factor * total;
}

}  // namespace

Matrix<double> sym_sqrt(const Matrix<double>& a) {
  return spectral(a, [](double x) { return std::sqrt(x); });
}

Matrix<double> sym_inv_sqrt(const Matrix<double>& a) {
  return spectral(a, [](double x) { return 1.0 / std::sqrt(x); });
}

double relative_spectral_radius(const Matrix<double>& base, const Matrix<double>& h) {
  const Matrix<double> r = sym_inv_sqrt(base);
  return eigen_of(symmetrize(r * h * r)).eigenvalues().cwiseAbs().maxCoeff();
}

PathIncrement path_increment(const Matrix<double>& base, const Matrix<double>& h, double t) {
  const Matrix<double> root = sym_sqrt(base);
  const Matrix<double> inv_root = sym_inv_sqrt(base);
  const auto es = eigen_of(symmetrize(inv_root * h * inv_root));
  const Matrix<double>& v = es.eigenvectors();
  const Vector<double> up = (t * es.eigenvalues()).unaryExpr([](double x) { return std::expm1(x); });
  const Vector<double> down = (-t * es.eigenvalues()).unaryExpr([](double x) { return std::expm1(x); });
  PathIncrement p;
  p.form = symmetrize(root * v * up.asDiagonal() * v.transpose() * root);
  p.inverse = symmetrize(inv_root * v * down.asDiagonal() * v.transpose() * inv_root);
  return p;
}

PathEvaluation zeta_path(const GramMatrix& base, const Matrix<double>& h, const std::vector<double>& t, PathQuantity q,
                         double s, const ZetaOptions& opts) {
  const int n = base.dim();
  PathEvaluation out;
  out.t = t;
  out.base = q == PathQuantity::zeta ? zeta(base, s, opts) : zeta_derivative_at_0(base, opts);
  if (q == PathQuantity::derivative_at_0) s = 0;

  const PrecisionScope scope(opts.precision_bits);
  const Matrix<double> bd = base.to_double();
  const double w = opts.split ? *opts.split : std::pow(base.det().convert_to<double>(), -1.0 / n);
  const HP hw(w);
  const HP pi = pi_value<HP>();
  const HP hs(s);
  const HP half = HP(n) / 2;
  const HP det_inv_sqrt = 1 / sqrt(to_real<HP>(base.det()));
  SideSpec direct{pow(hw, hs), hs, pi * hw};
  SideSpec dual{det_inv_sqrt * pow(hw, hs - half), half - hs, pi / hw};
  if (q == PathQuantity::zeta) {
    const HP front = pow(pi, hs) * rgamma(hs);
    direct.factor *= front;
    dual.factor *= front;
  }

  const double rho = relative_spectral_radius(bd, h);
  double t_max = 0;
  for (double x : t) t_max = std::max(t_max, std::abs(x));
  const double r = std::expm1(t_max * rho);

  const bool self_dual = base.integral() && base.det() == 1 &&
                         std::all_of(t.begin(), t.end(), [&](double x) {
                           return std::find(t.begin(), t.end(), -x) != t.end();
                         });
  Rational depth = out.base.depth;
  Rational dual_depth = out.base.dual_depth;
  if (self_dual) depth = dual_depth = std::max(depth, dual_depth);

  const double a_max = std::max(std::abs(s), std::abs(n / 2.0 - s));
  const double u_max = std::max(real_to_double(direct.c) * depth.convert_to<double>(),
                                real_to_double(dual.c) * dual_depth.convert_to<double>());
  const int order = shell_expansion_order(r, a_max, u_max);

  std::vector<Matrix<double>> forms;
  std::vector<Matrix<double>> inverse_forms;
  for (double x : t) {
    const PathIncrement inc = path_increment(bd, h, x);
    forms.push_back(inc.form);
    inverse_forms.push_back(inc.inverse);
  }
  EnumerationOptions eo;
  eo.budget = opts.budget;
  eo.threads = opts.threads;
  eo.keep_vectors = false;
  const FormSums fa = form_power_sums(base, depth, forms, order, eo);
  FormSums fd;
  const GramMatrix inv = base.inverse();
  if (!self_dual) fd = form_power_sums(inv, dual_depth, inverse_forms, order, eo);

  double remainder = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    HP d = delta_sum(fa, i, direct, remainder);
    if (self_dual) {
      const auto mirror = static_cast<std::size_t>(std::find(t.begin(), t.end(), -t[i]) - t.begin());
      d += delta_sum(fa, mirror, dual, remainder);
    } else {
      d += delta_sum(fd, i, dual, remainder);
    }
    out.delta.push_back(d);
  }

  // Omitted vectors: |G(a, c B_t[x]) - G(a, c B[x])| <= G(a, c e^{-|t| rho} B[x]).
  const HP shrink(std::exp(-t_max * rho));
  const ShellSeries sa = shell_series(base, depth, eo);
  const ShellSeries sd = shell_series(inv, dual_depth, eo);
  out.truncation = std::abs(real_to_double(direct.factor)) * gamma_tail(sa, direct.a, HP(direct.c * shrink)) +
                   std::abs(real_to_double(dual.factor)) * gamma_tail(sd, dual.a, HP(dual.c * shrink)) + remainder;
  return out;
}

std::vector<HeightRow> height_compare(const Lattice& l, const std::vector<Matrix<double>>& directions, double step,
                                      const ZetaOptions& opts) {
  const int n = l.dim();
  const double lambda2 = l.scale().value();
  const GramMatrix dual_gram = l.gram().inverse();
  const Matrix<double> a = l.gram().to_double();
  const Matrix<double> a_inv = dual_gram.to_double();
  const std::vector<double> ts{-2 * step, -step, 0.0, step, 2 * step};
  std::vector<HeightRow> rows;
  for (const auto& h : directions) {
    // (A e^{tX})^{-1} = A^{-1} e^{-t H A^{-1}}: direction -A^{-1} H A^{-1} at A^{-1},
    // with H taken back to Gram units.
    const Matrix<double> hg = h / lambda2;
    const Matrix<double> hb = -(a_inv * hg * a_inv);
    const PathEvaluation p = zeta_path(dual_gram, symmetrize(hb), ts, PathQuantity::derivative_at_0, 0.0, opts);
    HeightRow row;
    row.t = ts;
    row.truncation = p.truncation;
    // Working dual form lambda^{-2} A^{-1}: zeta' shifts by -log(lambda^2).
    const double base = p.base.to_double() - std::log(lambda2);
    double sxx = 0, sxy = 0, s4 = 0, s2y = 0;
    bool strict = true;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double d = real_to_double(p.delta[i]);
      row.deltas.push_back(d);
      row.values.push_back(base + d);
      if (ts[i] != 0.0 && !(d > p.truncation)) strict = false;
      sxx += ts[i] * ts[i];
      sxy += ts[i] * d;
    }
    // Symmetric nodes: the t and t^2 fits decouple after centring t^2.
    const double mean2 = sxx / static_cast<double>(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double c = ts[i] * ts[i] - mean2;
      s4 += c * c;
      s2y += c * row.deltas[i];
    }
    row.linear = sxy / sxx;
    row.quadratic = s2y / s4;
    const Matrix<double> x = a_inv * hg;
    row.predicted = (x * x).trace() / (2.0 * (n + 2));
    row.strict_minimum_at_zero = strict;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dz
