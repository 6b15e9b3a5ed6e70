#include "designzeta/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "designzeta/design.hpp"
#include "designzeta/errors.hpp"

namespace dz {

std::string_view to_string(ZetaMethod m) { return m == ZetaMethod::direct_series ? "direct-series" : "continued"; }

namespace {

using HP = HighPrecision;

Rational rational_above(double x) {
  const double scaled = std::ceil(x * 1024.0);
  return Rational(Integer(static_cast<long long>(scaled)), Integer(1024));
}

EnumerationOptions enumeration(const ZetaOptions& o) {
  EnumerationOptions e;
  e.budget = o.budget;
  e.threads = o.threads;
  e.keep_vectors = false;
  return e;
}

// One enumerated side of a sum together with its growth policy.
class Side {
 public:
  Side(GramMatrix gram, double scale, const ZetaOptions& opts)
      : gram_(std::move(gram)), step_(norm_step(gram_)), opts_(opts) {
    Rational m = bound_for_shells(gram_, 2, enumeration(opts));
    const Rational need = rational_above((gram_.dim() / 2.0 + 2.0) / scale);
    if (m < need) m = need;
    if (opts.max_bound > 0 && m > opts.max_bound) m = std::max(opts.max_bound, m_first());
    load(m);
  }

  const ShellSeries& series() const { return series_; }
  const GramMatrix& gram() const { return gram_; }

  bool grow() {
    if (exhausted_) return false;
    const int n = gram_.dim();
    Rational next = std::max(series_.bound + step_, series_.bound * Rational(n + 1, n));
    if (opts_.max_bound > 0 && next > opts_.max_bound) next = opts_.max_bound;
    if (next <= series_.bound) return exhausted_ = true, false;
    const double m = series_.bound_value();
    const double observed = static_cast<double>(series_.total()) / std::pow(m, n / 2.0);
    if (observed * std::pow(next.convert_to<double>(), n / 2.0) > static_cast<double>(opts_.budget))
      return exhausted_ = true, false;
    try {
      load(next);
    } catch (const ResourceError&) {
      return exhausted_ = true, false;
    }
    return true;
  }

 private:
  Rational m_first() const { return bound_for_shells(gram_, 1, enumeration(opts_)); }
  void load(const Rational& m) { series_ = shell_series(gram_, m, enumeration(opts_)); }

  GramMatrix gram_;
  Rational step_;
  const ZetaOptions& opts_;
  ShellSeries series_;
  bool exhausted_ = false;
};

template <class F>
HP shell_sum(const ShellSeries& s, F&& term) {
  HP acc = 0;
  for (std::size_t k = 0; k < s.norms.size(); ++k) acc += HP(s.counts[k]) * term(to_real<HP>(s.norms[k]));
  return acc;
}

struct Parts {
  HP value;
  double err_direct = 0;
  double err_dual = 0;
};

bool on_target(const HP& value, double err, const ZetaOptions& o) {
  return err <= std::max(o.abs_tol, o.rel_tol * std::abs(real_to_double(value)));
}

// Repeatedly evaluates and deepens the side with the larger error.
template <class Eval>
Parts refine(Side& a, Side* b, Eval&& eval, const ZetaOptions& opts) {
  for (;;) {
    Parts p = eval();
    const double err = p.err_direct + p.err_dual;
    if (on_target(p.value, err, opts)) return p;
    bool grown = false;
    if (b && p.err_dual > p.err_direct) grown = b->grow() || a.grow();
    else grown = a.grow() || (b && b->grow());
    if (!grown) {
      if (opts.allow_partial) return p;
      throw ResourceError("zeta: error " + format_sci(err, 3) + " above target within the shell budget");
    }
  }
}

double default_split(const GramMatrix& gram) {
  return std::pow(gram.det().convert_to<double>(), -1.0 / gram.dim());
}

struct Setup {
  int n;
  HP half;
  HP w;
  HP det_inv_sqrt;
  HP pi;
};

Setup setup(const GramMatrix& gram, const ZetaOptions& opts) {
  Setup s;
  s.n = gram.dim();
  s.half = HP(s.n) / 2;
  s.w = HP(opts.split ? *opts.split : default_split(gram));
  if (!(s.w > 0)) throw DomainError("split point must be positive");
  s.det_inv_sqrt = 1 / sqrt(to_real<HP>(gram.det()));
  s.pi = pi_value<HP>();
  return s;
}

void check_pole(const GramMatrix& gram, double s) {
  if (s * 2 == gram.dim()) throw PoleError("zeta has a pole at s = n/2 = " + std::to_string(gram.dim() / 2.0));
}

// The bracket pi^{-s} Gamma(s) zeta(A, s) + w^s / s split into the parts
// that stay finite at s = 0.
struct Bracket {
  HP regular;  // -det^{-1/2} w^{s-n/2}/(n/2-s) + shell sums
  double err = 0;
  double err_direct = 0;
  double err_dual = 0;
};

Bracket bracket(const Setup& c, const Side& a, const Side& d, const HP& s) {
  const HP cw = c.pi * c.w;
  const HP cd = c.pi / c.w;
  const HP ws = pow(c.w, s);
  const HP wd = c.det_inv_sqrt * pow(c.w, s - c.half);
  const HP dual_a = c.half - s;
  Bracket b;
  b.regular = -wd / dual_a + ws * shell_sum(a.series(), [&](const HP& m) { return incomplete_g(s, cw * m); }) +
              wd * shell_sum(d.series(), [&](const HP& m) { return incomplete_g(dual_a, cd * m); });
  b.err_direct = real_to_double(ws) * gamma_tail(a.series(), s, cw);
  b.err_dual = real_to_double(wd) * gamma_tail(d.series(), dual_a, cd);
  b.err = b.err_direct + b.err_dual;
  return b;
}

ZetaValue direct_zeta(const GramMatrix& gram, double s, const ZetaOptions& opts) {
  if (s <= gram.dim() / 2.0) throw DomainError("direct summation needs s > n/2");
  Side a(gram, 1.0, opts);
  const HP hs(s);
  const Parts p = refine(
      a, nullptr,
      [&] {
        Parts r;
        r.value = shell_sum(a.series(), [&](const HP& m) { return pow(m, -hs); });
        r.err_direct = direct_tail(a.series(), s);
        return r;
      },
      opts);
  return {s, p.value, p.err_direct, ZetaMethod::direct_series, a.series().bound, 0};
}

}  // namespace

ZetaValue zeta(const GramMatrix& gram, double s, const ZetaOptions& opts) {
  check_pole(gram, s);
  const PrecisionScope scope(opts.precision_bits);
  if (opts.method == ZetaMethod::direct_series) return direct_zeta(gram, s, opts);
  const Setup c = setup(gram, opts);
  Side a(gram, real_to_double(c.pi * c.w), opts);
  Side d(gram.inverse(), real_to_double(c.pi / c.w), opts);
  const HP hs(s);
  const HP front = pow(c.pi, hs);
  const HP rg = rgamma(hs);
  const Parts p = refine(
      a, &d,
      [&] {
        const Bracket b = bracket(c, a, d, hs);
        Parts r;
        r.value = front * (-pow(c.w, hs) * rgamma(HP(hs + 1)) + rg * b.regular);
        const double f = std::abs(real_to_double(front * rg));
        r.err_direct = f * b.err_direct;
        r.err_dual = f * b.err_dual;
        return r;
      },
      opts);
  return {s, p.value, p.err_direct + p.err_dual, ZetaMethod::continued, a.series().bound, d.series().bound};
}

ZetaValue completed_zeta(const GramMatrix& gram, double s, const ZetaOptions& opts) {
  check_pole(gram, s);
  if (s == 0) throw PoleError("the completed zeta has a pole at s = 0");
  const PrecisionScope scope(opts.precision_bits);
  const Setup c = setup(gram, opts);
  Side a(gram, real_to_double(c.pi * c.w), opts);
  Side d(gram.inverse(), real_to_double(c.pi / c.w), opts);
  const HP hs(s);
  const Parts p = refine(
      a, &d,
      [&] {
        const Bracket b = bracket(c, a, d, hs);
        return Parts{-pow(c.w, hs) / hs + b.regular, b.err_direct, b.err_dual};
      },
      opts);
  return {s, p.value, p.err_direct + p.err_dual, ZetaMethod::continued, a.series().bound, d.series().bound};
}

ZetaValue zeta_derivative_at_0(const GramMatrix& gram, const ZetaOptions& opts) {
  const PrecisionScope scope(opts.precision_bits);
  const Setup c = setup(gram, opts);
  Side a(gram, real_to_double(c.pi * c.w), opts);
  Side d(gram.inverse(), real_to_double(c.pi / c.w), opts);
  // zeta = pi^s [-w^s / Gamma(s+1) + bracket / Gamma(s)], 1/Gamma(s) = s + O(s^2).
  const Parts p = refine(
      a, &d,
      [&] {
        const Bracket b = bracket(c, a, d, HP(0));
        Parts r;
        r.value = -log(c.pi) - log(c.w) - euler_gamma_value<HP>() + b.regular;
        r.err_direct = b.err_direct;
        r.err_dual = b.err_dual;
        return r;
      },
      opts);
  return {0, p.value, p.err_direct + p.err_dual, ZetaMethod::continued, a.series().bound, d.series().bound};
}

ZetaValue zeta(const Lattice& l, double s, const ZetaOptions& opts) {
  ZetaValue v = zeta(l.gram(), s, opts);
  if (l.scale().is_one()) return v;
  const PrecisionScope scope(opts.precision_bits);
  const HP factor = pow(l.scale().value_as<HP>(), HP(-s));
  v.value *= factor;
  v.err *= real_to_double(factor);
  return v;
}

ZetaValue zeta_derivative_at_0(const Lattice& l, const ZetaOptions& opts) {
  ZetaValue v = zeta_derivative_at_0(l.gram(), opts);
  if (l.scale().is_one()) return v;
  const PrecisionScope scope(opts.precision_bits);
  // d/ds lambda^{-2s} zeta(s) at 0 with zeta(0) = -1.
  v.value += log(l.scale().value_as<HP>());
  return v;
}

FunctionalEquationCheck functional_equation_check(const Lattice& l, double s, const ZetaOptions& opts,
                                                  double split_ratio) {
  if (!(split_ratio > 0)) throw DomainError("split ratio must be positive");
  const int n = l.dim();
  const ZetaValue lhs = completed_zeta(l.gram(), s, opts);
  const GramMatrix inv = l.gram().inverse();
  ZetaOptions dual_opts = opts;
  const double w = opts.split ? *opts.split : std::pow(l.gram().det().convert_to<double>(), -1.0 / n);
  dual_opts.split = split_ratio / w;
  const ZetaValue rhs = completed_zeta(inv, n / 2.0 - s, dual_opts);
  const PrecisionScope scope(opts.precision_bits);
  const HP det_inv_sqrt = 1 / sqrt(to_real<HP>(l.gram().det()));
  HP factor = 1;
  if (!l.scale().is_one()) factor = pow(l.scale().value_as<HP>(), HP(-s));
  FunctionalEquationCheck r;
  r.s = s;
  r.lhs = real_to_double(factor * lhs.value);
  r.rhs = real_to_double(factor * det_inv_sqrt * rhs.value);
  r.residual = real_to_double(abs(factor * (lhs.value - det_inv_sqrt * rhs.value)));
  r.err = real_to_double(factor) * (lhs.err + real_to_double(det_inv_sqrt) * rhs.err);
  return r;
}

StripScan strip_scan(const Lattice& l, int grid_points, const ZetaOptions& opts) {
  if (grid_points < 3) throw DomainError("strip scan needs at least 3 grid points");
  ZetaOptions o = opts;
  o.allow_partial = true;
  const double half = l.dim() / 2.0;
  const double delta = half / (grid_points + 1);
  StripScan scan;
  scan.lattice = l.name();
  scan.grid_points = grid_points;
  auto sign_of = [](const ZetaValue& v) {
    const double x = v.to_double();
    return std::abs(x) > v.err ? (x > 0 ? 1 : -1) : 0;
  };
  for (int i = 1; i <= grid_points; ++i) {
    scan.values.push_back(zeta(l, i * delta, o));
    scan.signs.push_back(sign_of(scan.values.back()));
  }
  scan.all_negative = std::all_of(scan.signs.begin(), scan.signs.end(), [](int v) { return v < 0; });
  int last = -1;
  for (int i = 0; i < grid_points; ++i) {
    const int si = scan.signs[static_cast<std::size_t>(i)];
    if (si == 0) continue;
    if (last >= 0 && scan.signs[static_cast<std::size_t>(last)] != si) {
      double lo = scan.values[static_cast<std::size_t>(last)].s;
      double hi = scan.values[static_cast<std::size_t>(i)].s;
      const int slo = scan.signs[static_cast<std::size_t>(last)];
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const int sm = sign_of(zeta(l, mid, o));
        if (sm == 0) break;
        (sm == slo ? lo : hi) = mid;
      }
      scan.zero_brackets.emplace_back(lo, hi);
    }
    last = i;
  }
  return scan;
}

void write_zeta_csv(std::ostream& os, const std::vector<ZetaValue>& values) {
  os << "s,zeta,err\n";
  for (const auto& v : values) os << format_sci(v.s, 17) << ',' << format_sci(v.value, 20) << ',' << format_sci(v.err, 3) << '\n';
}

void write_strip_csv(std::ostream& os, const StripScan& scan) {
  os << "s,zeta,err,sign\n";
  for (std::size_t i = 0; i < scan.values.size(); ++i) {
    const auto& v = scan.values[i];
    os << format_sci(v.s, 17) << ',' << format_sci(v.value, 20) << ',' << format_sci(v.err, 3) << ',' << scan.signs[i]
       << '\n';
  }
}

GradientIdentityCheck gradient_identity_check(const Lattice& l, double s, int depth, const ZetaOptions& opts) {
  const GramMatrix& gram = l.gram();
  const int n = gram.dim();
  if (s <= n / 2.0) throw DomainError("gradient identity needs s > n/2");
  if (depth < 1) throw DomainError("depth must be >= 1");
  EnumerationOptions eo;
  eo.budget = opts.budget;
  eo.threads = opts.threads;
  eo.max_stored_per_shell = opts.budget;
  const ShellList shells = first_k_shells(gram, depth, eo);
  Matrix<double> lhs = Matrix<double>::Zero(n, n);
  double magnitude = 0;
  for (const auto& sh : shells) {
    if (!sh.has_vectors()) throw ResourceError("shell too large to materialise for the gradient identity");
    const MomentTensor m2 = moment_tensor(sh.vectors, 2);
    const MonomialIndex idx(n, 2);
    const double w = std::pow(sh.norm.convert_to<double>(), -(s + 1));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        ++e[static_cast<std::size_t>(i)];
        ++e[static_cast<std::size_t>(j)];
        const double v = m2.at(e).convert_to<double>() * w;
        lhs(i, j) += v;
        magnitude = std::max(magnitude, std::abs(v));
      }
  }
  ZetaOptions zo = opts;
  zo.allow_partial = true;
  const ZetaValue z = zeta(gram, s, zo);
  const Matrix<double> ginv = gram.inverse().to_double();
  const Matrix<double> diff = lhs - (z.to_double() / n) * ginv;
  const ShellSeries series = shell_series(gram, shells.back().norm, eo);
  const double factor = std::pow(l.scale().value(), -(s + 1));
  GradientIdentityCheck r;
  r.s = s;
  r.depth = depth;
  r.residual = factor * diff.cwiseAbs().maxCoeff();
  r.bound = factor * ((direct_tail(series, s) + z.err) * ginv.cwiseAbs().maxCoeff() / n +
                      1e-13 * (magnitude * depth + 1));
  r.within_bound = r.residual <= r.bound;
  return r;
}

}  // namespace dz
