#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/LU>

#include "designzeta/design.hpp"
#include "designzeta/extremality.hpp"
#include "designzeta/shells.hpp"
#include "designzeta/theta.hpp"
#include "designzeta/zeta.hpp"

using namespace dz;

namespace {

constexpr double kZetaAtZeroTol = 1e-10;
constexpr double kRiemannTol = 1e-12;
constexpr double kFunctionalTol = 1e-10;
constexpr double kFunctionalSplitRatio = 1.25;
constexpr double kSecondVariationGap = 1e-3;
constexpr double kThetaFitGap = 1e-3;
constexpr double kThetaFitY = 2.0;
constexpr double kThetaMargin = 1.01;
constexpr double kHeightTol = 0.05;
constexpr double kThetaResolution = 0.1;
constexpr int kStripPoints = 37;
constexpr std::uint64_t kSecondVariationSeed = 1;
constexpr std::uint64_t kFirstVariationSeed = 5;
constexpr std::uint64_t kHeightSeed = 4;
constexpr std::uint64_t kThetaFitSeed = 1;
constexpr std::uint64_t kBigBudget = 1'000'000'000;
constexpr double kShellSeconds = 300;
constexpr double kDesignSeconds = 600;
constexpr double kVariationSeconds = 600;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::uint64_t sigma(std::uint64_t k, int p) {
  std::uint64_t s = 0;
  for (std::uint64_t d = 1; d <= k; ++d)
    if (k % d == 0) {
      std::uint64_t t = 1;
      for (int i = 0; i < p; ++i) t *= d;
      s += t;
    }
  return s;
}

// tau(1..n) from q prod (1 - q^m)^24
std::vector<std::int64_t> ramanujan_tau(int n) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(n), 0);
  c[0] = 1;
  for (int m = 1; m < n; ++m)
    for (int r = 0; r < 24; ++r)
      for (int i = n - 1; i >= m; --i) c[static_cast<std::size_t>(i)] -= c[static_cast<std::size_t>(i - m)];
  return c;
}

std::map<Rational, std::uint64_t> box_counts(const GramMatrix& a, const Rational& bound) {
  const int n = a.dim();
  const Matrix<double> inv = a.to_double().inverse();
  std::vector<std::int64_t> box(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    box[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(std::sqrt(bound.convert_to<double>() * inv(i, i)) + 1e-9));
  std::map<Rational, std::uint64_t> counts;
  IntVector x(n);
  for (int i = 0; i < n; ++i) x(i) = -box[static_cast<std::size_t>(i)];
  for (;;) {
    if (!x.isZero()) {
      const Rational v = a.eval(x);
      if (v <= bound) ++counts[v];
    }
    int i = 0;
    while (i < n && x(i) == box[static_cast<std::size_t>(i)]) x(i) = -box[static_cast<std::size_t>(i)], ++i;
    if (i == n) break;
    ++x(i);
  }
  return counts;
}

std::map<Rational, std::uint64_t> engine_counts(const GramMatrix& a, const Rational& bound) {
  EnumerationOptions eo;
  eo.budget = kBigBudget;
  eo.keep_vectors = false;
  std::map<Rational, std::uint64_t> m;
  for (const auto& [norm, count] : shell_counts(a, bound, eo)) m[norm] = count;
  return m;
}

using Rows = std::vector<std::pair<int, std::uint64_t>>;

void compare_rows(Outcome& o, const std::string& name, const std::map<Rational, std::uint64_t>& got,
                  const std::map<Rational, std::uint64_t>& oracle, const Rows& expected) {
  bool ok = true;
  for (const auto& [m, a] : expected) {
    const auto g = got.find(Rational(m));
    const auto w = oracle.find(Rational(m));
    ok = ok && g != got.end() && w != oracle.end() && g->second == a && w->second == a;
  }
  std::string rows;
  for (const auto& [m, a] : expected) rows += "(" + std::to_string(m) + "," + std::to_string(a) + ")";
  o.require(ok, name + " " + rows);
}

// Theta of A at the balanced point against det^{-1/2} y^{-n/2} Theta of A^{-1}, both summed directly.
// The error must resolve a single vector on the checked shell m_top.
void theta_self_consistency(Outcome& o, const Lattice& l, int m_top) {
  const GramMatrix& a = l.gram();
  const double det = a.det().convert_to<double>();
  const double y = std::pow(det, -1.0 / a.dim());
  ThetaOptions to;
  to.modular_transform = false;
  to.allow_partial = true;
  to.budget = 200'000'000;
  const ThetaValue lhs = theta(a, y, to);
  const ThetaValue rhs = theta(a.inverse(), 1.0 / y, to);
  const double f = std::pow(y, -a.dim() / 2.0) / std::sqrt(det);
  const double diff = std::abs(lhs.to_double() - f * rhs.to_double());
  const double err = lhs.err + f * rhs.err;
  const double one_vector = std::exp(-pi_value<double>() * y * m_top);
  o.require(diff <= err + 1e-13 * lhs.to_double() && err <= kThetaResolution * one_vector,
            l.name() + " theta identity diff " + sci(diff) + " err " + sci(err));
}

Outcome shell_counts_criterion() {
  Outcome o;
  const Rows a2{{2, 6}}, d4{{2, 24}}, e8{{2, 240}, {4, 2160}, {6, 6720}};
  compare_rows(o, "A2", engine_counts(catalog_lattice("A2").gram(), 2), box_counts(catalog_lattice("A2").gram(), 2), a2);
  compare_rows(o, "D4", engine_counts(catalog_lattice("D4").gram(), 2), box_counts(catalog_lattice("D4").gram(), 2), d4);

  const Lattice e8l = catalog_lattice("E8");
  std::map<Rational, std::uint64_t> e8_oracle;
  for (int k = 1; k <= 3; ++k) e8_oracle[Rational(2 * k)] = 240 * sigma(static_cast<std::uint64_t>(k), 3);
  compare_rows(o, "E8", engine_counts(e8l.gram(), 6), e8_oracle, e8);

  for (const auto& [name, rows] : std::vector<std::pair<std::string, Rows>>{{"K12", {{4, 756}}}, {"BW16", {{4, 4320}}}}) {
    const Lattice l = catalog_lattice(name);
    const auto got = engine_counts(l.gram(), rows.back().first);
    compare_rows(o, name, got, got, rows);
    theta_self_consistency(o, l, rows.back().first);
  }

  const Lattice leech = catalog_lattice("Leech");
  const auto tau = ramanujan_tau(4);
  std::map<Rational, std::uint64_t> leech_oracle;
  for (int k = 2; k <= 4; ++k) {
    const std::int64_t c = static_cast<std::int64_t>(sigma(static_cast<std::uint64_t>(k), 11)) - tau[static_cast<std::size_t>(k - 1)];
    leech_oracle[Rational(2 * k)] = static_cast<std::uint64_t>(65520 * c / 691);
  }
  const auto leech_got = engine_counts(leech.gram(), 8);
  compare_rows(o, "Leech", leech_got, leech_oracle, {{4, 196560}});
  bool deeper = true;
  for (const auto& [m, a] : leech_oracle) deeper = deeper && leech_got.count(m) && leech_got.at(m) == a;
  o.require(deeper, "Leech norms 6, 8 against (65520/691)(sigma_11 - tau)");
  return o;
}

bool passes_t(const DesignCertificate& c, int t) {
  for (const auto& v : c.checks)
    if (v.t == t) return v.pass && v.defect == 0;
  return false;
}

Outcome design_criterion() {
  Outcome o;
  CertificationOptions co;
  co.budget = kBigBudget;
  for (const auto& [name, depth] : std::vector<std::pair<std::string, int>>{{"A2", 5}, {"D4", 5}, {"E8", 5}, {"K12", 5}, {"BW16", 5}, {"Leech", 3}}) {
    const CertificationReport r = certify_lattice(catalog_lattice(name), depth, 4, co);
    bool ok = static_cast<int>(r.shells.size()) == depth;
    for (const auto& c : r.shells) ok = ok && passes_t(c, 4);
    o.require(ok, name + " shells 1.." + std::to_string(depth) + " t=4");
  }
  const CertificationReport bw = certify_lattice(catalog_lattice("BW16"), 2, 6, co);
  bool ok = bw.shells.size() == 2;
  for (const auto& c : bw.shells) ok = ok && passes_t(c, 6);
  o.require(ok, "BW16 shells 1..2 t=6");
  const CertificationReport z4 = certify_lattice(catalog_lattice("Zn", 4), 1, 4, co);
  bool fails = false;
  for (const auto& v : z4.shells.front().checks)
    if (v.t == 4) fails = !v.pass && v.defect != 0;
  o.require(fails, "Z4 shell 1 fails t=4");
  return o;
}

std::vector<Lattice> catalog_instances() {
  std::vector<Lattice> out;
  for (const auto& name : catalog_names()) {
    if (name == "Zn")
      for (int d : {1, 2, 3, 4, 8}) out.push_back(catalog_lattice(name, d));
    else
      out.push_back(catalog_lattice(name));
  }
  return out;
}

Outcome zeta_criterion() {
  Outcome o;
  ZetaOptions zo;
  zo.budget = kBigBudget;
  zo.allow_partial = true;
  double worst_zero = 0;
  for (const Lattice& l : catalog_instances()) {
    const ZetaValue z = zeta(l, 0.0, zo);
    worst_zero = std::max(worst_zero, std::abs(z.to_double() + 1) + z.err);
  }
  o.require(worst_zero <= kZetaAtZeroTol, "max |zeta(A,0) + 1| + err " + sci(worst_zero));

  const double z1 = zeta(catalog_lattice("Zn", 1), 1.0).to_double();
  const double riemann = 2 * std::riemann_zeta(2.0);
  o.require(std::abs(z1 - riemann) <= kRiemannTol, "Z1 at s=1 vs 2 zeta(2) " + sci(std::abs(z1 - riemann)));

  for (const Lattice& l : catalog_instances()) {
    double worst = 0, matched = 0;
    for (double f : {0.25, 0.5, 0.75}) {
      const double s = f * l.dim() / 2.0;
      worst = std::max(worst, functional_equation_check(l, s, zo, kFunctionalSplitRatio).residual);
      matched = std::max(matched, functional_equation_check(l, s, zo, 1.0).residual);
    }
    o.require(worst <= kFunctionalTol, l.name() + " FE " + sci(worst) + " (matched split " + sci(matched) + ")");
  }
  return o;
}

Outcome second_variation_criterion() {
  Outcome o;
  for (const auto& [name, s] : std::vector<std::pair<std::string, double>>{{"D4", 3.0}, {"E8", 5.0}, {"Leech", 13.0}}) {
    const Lattice l = rescale_to_covolume_one(catalog_lattice(name));
    const TangentDirection d = random_tangents(l.working_gram(), 1, kSecondVariationSeed).front();
    ZetaOptions zo;
    zo.budget = kBigBudget;
    const VariationReport r = zeta_second_variation_fit(l, s, d.h, 1e-3, zo);
    o.require(r.relative_gap <= kSecondVariationGap && std::abs(r.linear) <= r.linear_bound,
              name + " s=" + sci(s) + " gap " + sci(r.relative_gap) + " |lin| " + sci(std::abs(r.linear)) + " <= " +
                  sci(r.linear_bound));
  }
  return o;
}

Outcome first_variation_criterion() {
  Outcome o;
  const Lattice e8 = catalog_lattice("E8");
  int within = 0;
  double worst = 0;
  const auto dirs = random_tangents(e8.working_gram(), 5, kFirstVariationSeed);
  for (const auto& d : dirs) {
    const FirstVariation v = zeta_first_variation(e8, 5.0, d.h, 6);
    within += v.within_bound;
    worst = std::max(worst, std::abs(v.residual) / v.bound);
  }
  o.require(within == 5, "E8 s=5 depth 6: " + std::to_string(within) + "/5 within bound, max |r|/bound " + sci(worst));
  return o;
}

Outcome strip_criterion() {
  Outcome o;
  ZetaOptions zo;
  zo.budget = kBigBudget;
  for (const auto& name : {"D4", "E8", "Leech"}) {
    const StripScan scan = strip_scan(rescale_to_covolume_one(catalog_lattice(name)), kStripPoints, zo);
    double closest = -std::numeric_limits<double>::infinity();
    for (const auto& v : scan.values) closest = std::max(closest, v.to_double() + v.err);
    o.require(scan.all_negative, std::string(name) + " max(zeta + err) " + sci(closest));
  }
  return o;
}

Outcome theta_criterion() {
  Outcome o;
  ThetaOptions to;
  to.budget = kBigBudget;
  for (const auto& name : {"D4", "E8", "Leech"}) {
    const Lattice l = rescale_to_covolume_one(catalog_lattice(name));
    const double y = kThetaMargin * theta_threshold(l);
    const ThetaMinSum s = theta_min_sum(l, y, to);
    o.require(s.sign == 1, std::string(name) + " S(" + sci(y) + ") = " + sci(s.to_double()) + " err " + sci(s.err));
  }
  const Lattice d4 = rescale_to_covolume_one(catalog_lattice("D4"));
  const TangentDirection d = random_tangents(d4.working_gram(), 1, kThetaFitSeed).front();
  const ThetaVariationFit fit = theta_second_variation_fit(d4, kThetaFitY, d.h);
  o.require(fit.relative_gap <= kThetaFitGap, "D4 theta fit gap " + sci(fit.relative_gap));
  return o;
}

Outcome height_criterion() {
  Outcome o;
  for (const auto& name : {"E8", "D4"}) {
    const Lattice l = rescale_to_covolume_one(catalog_lattice(name));
    std::vector<Matrix<double>> hs;
    for (const auto& d : random_tangents(l.working_gram(), 3, kHeightSeed)) hs.push_back(d.h);
    int strict = 0;
    double literal = 0, corrected = 0;
    for (const HeightRow& row : height_compare(l, hs)) {
      strict += row.strict_minimum_at_zero;
      // row.predicted is T / (2(n+2)); the literal target is T / (n+2)
      literal = std::max(literal, std::abs(row.quadratic / (2 * row.predicted) - 1));
      corrected = std::max(corrected, std::abs(row.quadratic / row.predicted - 1));
    }
    o.require(strict == 3, std::string(name) + " strict minimum at t=0 in " + std::to_string(strict) + "/3");
    o.require(literal <= kHeightTol, std::string(name) + " fit vs T/(n+2) off by " + sci(literal) +
                                         " (vs T/(2(n+2)) off by " + sci(corrected) + ")");
  }
  return o;
}

Outcome modular_criterion() {
  Outcome o;
  for (const auto& [name, level, bound, depth] :
       std::vector<std::tuple<std::string, int, int, int>>{{"E8", 1, 2, 5}, {"Leech", 1, 4, 3}, {"D4", 2, 2, 5}, {"K12", 3, 4, 3}}) {
    const ModularReport r = modular_check(catalog_lattice(name), level, depth);
    o.require(r.is_even && r.theta_match_depth == depth && r.extremal_bound == bound && r.min_norm == bound && r.is_extremal,
              name + " l=" + std::to_string(level) + " bound " + std::to_string(r.extremal_bound) + " min " +
                  r.min_norm.str() + (r.is_extremal ? " extremal" : " not extremal"));
  }
  return o;
}

Outcome perfection_criterion() {
  Outcome o;
  for (const auto& [name, dim, rank, perfect] :
       std::vector<std::tuple<std::string, int, std::size_t, bool>>{{"E8", 0, 36, true}, {"A2", 0, 3, true}, {"Zn", 4, 4, false}}) {
    const PerfectionReport r = is_perfect(catalog_lattice(name, dim));
    o.require(r.rank == rank && r.perfect == perfect,
              name + (dim ? std::to_string(dim) : "") + " rank " + std::to_string(r.rank) + "/" + std::to_string(r.required));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> expect_fail, only;
  app.add_option("--expect-fail", expect_fail, "criteria expected to fail")->delimiter(',');
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::tuple<int, std::string, std::function<Outcome()>, double>> criteria{
      {1, "shell counts", shell_counts_criterion, kShellSeconds},
      {2, "design certificates", design_criterion, kDesignSeconds},
      {3, "zeta values and functional equation", zeta_criterion, 0},
      {4, "second variation", second_variation_criterion, kVariationSeconds},
      {5, "first variation", first_variation_criterion, 0},
      {6, "strip negativity", strip_criterion, 0},
      {7, "theta criterion", theta_criterion, 0},
      {8, "height minimum", height_criterion, 0},
      {9, "modular table", modular_criterion, 0},
      {10, "perfection", perfection_criterion, 0},
  };
  const std::set<int> selected(only.begin(), only.end());
  std::set<int> failed, expected;
  for (const auto& [id, title, run, limit] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    if (std::find(expect_fail.begin(), expect_fail.end(), id) != expect_fail.end()) expected.insert(id);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit > 0) o.require(secs <= limit, "runtime limit " + sci(limit) + " s");
    if (!o.pass) failed.insert(id);
    std::printf("criterion %2d %s  %s: %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::string f;
  for (int id : failed) f += (f.empty() ? "" : ",") + std::to_string(id);
  std::printf("failed: %s\n", f.empty() ? "none" : f.c_str());
  return failed == expected ? 0 : 1;
}
