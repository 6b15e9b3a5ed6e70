#include "designzeta/series.hpp"

#include <cmath>
#include <map>

#include "designzeta/enumerator.hpp"
#include "designzeta/errors.hpp"

namespace dz {

std::uint64_t ShellSeries::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

double unit_ball_volume(int n) { return std::pow(pi_value<double>(), n / 2.0) / std::tgamma(n / 2.0 + 1.0); }

ShellSeries shell_series(const GramMatrix& gram, const Rational& bound, const EnumerationOptions& opts) {
  ShellSeries s;
  s.dim = gram.dim();
  s.det = gram.det().convert_to<double>();
  s.bound = bound;
  EnumerationOptions o = opts;
  o.keep_vectors = false;
  const double vol = unit_ball_volume(s.dim) / std::sqrt(s.det);
  double cumulative = 0;
  double kappa = 0;
  for (auto& [norm, count] : shell_counts(gram, bound, o)) {
    s.norms.push_back(norm);
    s.counts.push_back(count);
    cumulative += static_cast<double>(count);
    kappa = std::max(kappa, cumulative / (vol * std::pow(norm.convert_to<double>(), s.dim / 2.0)));
  }
  s.growth = 4.0 * kappa * vol;
  return s;
}

double direct_tail(const ShellSeries& series, double s) {
  const double half = series.dim / 2.0;
  if (s <= half) return unbounded_tail;
  const double m = series.bound_value();
  const double t = series.growth * s * std::pow(m, half - s) / (s - half) -
                   static_cast<double>(series.total()) * std::pow(m, -s);
  return std::max(t, 0.0);
}

double theta_tail(const ShellSeries& series, double y) {
  const double m = series.bound_value();
  const double u = pi_value<double>() * y * m;
  const double half = series.dim / 2.0;
  if (u <= half) return unbounded_tail;
  const double lead = series.growth * std::pow(m, half) / (1.0 - half / u) - static_cast<double>(series.total());
  return std::max(lead, 0.0) * std::exp(-u);
}

double theta_weighted_tail(const ShellSeries& series, double y) {
  const double m = series.bound_value();
  const double u = pi_value<double>() * y * m;
  const double half = series.dim / 2.0;
  if (u <= half + 2) return unbounded_tail;
  const double lead = series.growth * std::pow(m, half) / (1.0 - (half + 2) / u) - static_cast<double>(series.total());
  return std::max(lead, 0.0) * u * u * std::exp(-u);
}

namespace {

// Double accumulators per (norm, form, power), flushed into long double every
// few hundred leaves of the same norm.
class PowerSumVisitor {
 public:
  PowerSumVisitor(int forms, int max_power) : f_(forms), p_(max_power) {}

  void begin(int) {}
  void end(int, std::int64_t) {}
  void leaf(const std::int64_t*, std::int64_t norm, const double* values) {
    Bucket& b = buckets_[norm];
    if (b.fast.empty()) {
      b.fast.assign(static_cast<std::size_t>(f_ * p_), 0.0);
      b.slow.assign(static_cast<std::size_t>(f_ * p_), 0.0L);
    }
    for (int f = 0; f < f_; ++f) {
      const double v = values[f];
      double pw = v;
      double* row = b.fast.data() + static_cast<std::ptrdiff_t>(f * p_);
      for (int j = 0; j < p_; ++j) {
        row[j] += pw;
        pw *= v;
      }
    }
    ++b.half_count;
    if (++b.pending == 256) flush(b);
  }
  void merge(PowerSumVisitor&& o) {
    for (auto& [norm, ob] : o.buckets_) {
      o.flush(ob);
      Bucket& b = buckets_[norm];
      if (b.slow.empty()) {
        b.fast.assign(ob.fast.size(), 0.0);
        b.slow.assign(ob.slow.size(), 0.0L);
      }
      for (std::size_t i = 0; i < ob.slow.size(); ++i) b.slow[i] += ob.slow[i];
      b.half_count += ob.half_count;
    }
  }
  void finish() {
    for (auto& [norm, b] : buckets_) flush(b);
  }

  struct Bucket {
    std::vector<double> fast;
    std::vector<long double> slow;
    std::uint64_t half_count = 0;
    int pending = 0;
  };
  const std::map<std::int64_t, Bucket>& buckets() const { return buckets_; }

 private:
  static void flush(Bucket& b) {
    for (std::size_t i = 0; i < b.fast.size(); ++i) {
      b.slow[i] += b.fast[i];
      b.fast[i] = 0.0;
    }
    b.pending = 0;
  }

  int f_;
  int p_;
  std::map<std::int64_t, Bucket> buckets_;
};

}  // namespace

FormSums form_power_sums(const GramMatrix& gram, const Rational& bound, const std::vector<Matrix<double>>& forms,
                         int max_power, const EnumerationOptions& opts) {
  if (max_power < 1) throw DomainError("power sums need max_power >= 1");
  if (forms.empty()) throw DomainError("power sums need at least one form");
  // Counting first charges the budget before the heavier pass.
  EnumerationOptions counting = opts;
  counting.keep_vectors = false;
  shell_counts(gram, bound, counting);

  const EnumerationSpace space(gram, bound);
  RealForms rf{forms};
  PowerSumVisitor v(static_cast<int>(forms.size()), max_power);
  Enumerator<PowerSumVisitor> e(space, &rf);
  e.run(v, opts.threads);
  v.finish();

  FormSums out;
  out.forms = static_cast<int>(forms.size());
  out.max_power = max_power;
  for (const auto& [norm, b] : v.buckets()) {
    out.norms.push_back(space.norm_of(norm));
    out.counts.push_back(2 * b.half_count);
    std::vector<std::vector<long double>> per_form(forms.size());
    for (std::size_t f = 0; f < forms.size(); ++f) {
      per_form[f].resize(static_cast<std::size_t>(max_power));
      for (int j = 0; j < max_power; ++j)
        per_form[f][static_cast<std::size_t>(j)] = 2.0L * b.slow[f * static_cast<std::size_t>(max_power) + static_cast<std::size_t>(j)];
    }
    out.sums.push_back(std::move(per_form));
  }
  return out;
}

}  // namespace dz
