#include <doctest.h>

#include <cmath>
#include <random>

#include "designzeta/design.hpp"
#include "designzeta/errors.hpp"

using namespace dz;

namespace {

// Relative spread of sum_x (x'Au)^t / (u'Au)^{t/2} over random u; zero for a
// design of strength t.
double probe_spread(const Shell& s, const GramMatrix& gram, int t, int probes = 12) {
  const Matrix<double> a = gram.to_double();
  const Matrix<double> x = s.vectors.cast<double>();
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  double lo = INFINITY, hi = -INFINITY;
  for (int p = 0; p < probes; ++p) {
    Vector<double> u(a.rows());
    for (auto& v : u) v = g(rng);
    const Vector<double> au = a * u;
    const double q = u.dot(au);
    const double sum = (x * au).array().pow(t).sum();
    const double ratio = sum / std::pow(q, t / 2.0);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return (hi - lo) / hi;
}

}  // namespace

TEST_CASE("axis vectors are a 2-design but not a 4-design") {
  const Lattice z4 = catalog_lattice("Zn", 4);
  const Shell s = first_k_shells(z4, 1).front();
  const DesignVerdict t2 = is_t_design(s, z4.gram(), 2);
  CHECK(t2.pass);
  CHECK(t2.defect == 0);
  const DesignVerdict t4 = is_t_design(s, z4.gram(), 4);
  CHECK_FALSE(t4.pass);
  CHECK(t4.defect > 0);
  CHECK(probe_spread(s, z4.gram(), 4) > 0.1);
}

TEST_CASE("exact verdicts agree with random probes") {
  for (const auto& name : {"A2", "D4", "E6", "E7", "E8"}) {
    CAPTURE(name);
    const Lattice l = catalog_lattice(name);
    for (const Shell& s : first_k_shells(l, l.dim() <= 6 ? 3 : 2)) {
      for (int t : {2, 4, 6}) {
        const bool exact = is_t_design(s, l.gram(), t).pass;
        CHECK(exact == (probe_spread(s, l.gram(), t) < 1e-9));
        CHECK(exact == probe_design_check(s, l.gram(), t));
      }
    }
  }
}

TEST_CASE("E8 and BW16 first shells") {
  const Lattice e8 = catalog_lattice("E8");
  const Shell e8s = first_k_shells(e8, 1).front();
  CHECK(is_t_design(e8s, e8.gram(), 4).pass);
  CHECK(is_t_design(e8s, e8.gram(), 6).pass);
  const Lattice bw = catalog_lattice("BW16");
  const Shell bws = first_k_shells(bw, 1).front();
  CHECK(is_t_design(bws, bw.gram(), 6).pass);
}

TEST_CASE("trace of the degree 2 defect against A vanishes") {
  const Lattice z3 = catalog_lattice("Zn", 3);
  RationalMatrix g = z3.gram().matrix();
  g(0, 0) = 2;
  g(0, 1) = g(1, 0) = 1;
  const GramMatrix a(g);
  for (const Shell& s : first_k_shells(a, 4)) {
    const MomentTensor m2 = moment_tensor(s.vectors, 2);
    Rational tr = 0;
    const MonomialIndex idx(3, 2);
    for (const auto& e : idx.exponents(2)) {
      int i = -1, j = -1;
      for (int k = 0; k < 3; ++k)
        for (int r = 0; r < e[k]; ++r) (i < 0 ? i : j) = k;
      const Rational mult = i == j ? 1 : 2;
      tr += mult * a(i, j) * Rational(m2.at(e));
    }
    CHECK(tr == Rational(s.cardinality) * s.norm);
  }
}

TEST_CASE("scale invariance of verdicts") {
  const Lattice d4 = catalog_lattice("D4");
  const GramMatrix scaled = d4.gram().scaled(Rational(7, 3));
  const auto a = first_k_shells(d4.gram(), 2);
  const auto b = first_k_shells(scaled, 2);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (int t : {2, 4})
      CHECK(is_t_design(a[k], d4.gram(), t).pass == is_t_design(b[k], scaled, t).pass);
}

TEST_CASE("union of 4-design shells at a common norm stays a 4-design") {
  const Lattice d4 = catalog_lattice("D4");
  const auto shells = first_k_shells(d4, 2);
  // shell 2 of D4 is shell 1 scaled by sqrt 2 in a rotated frame; rescale by
  // the norm so both sit on the same sphere in the moment identity
  const MomentTensor m1 = moment_tensor(shells[0].vectors, 4);
  const MomentTensor m2 = moment_tensor(shells[1].vectors, 4);
  const auto t1 = design_target(d4.gram(), shells[0].cardinality, shells[0].norm, 4);
  const auto t2 = design_target(d4.gram(), shells[1].cardinality, shells[1].norm, 4);
  for (std::size_t i = 0; i < m1.entries.size(); ++i)
    CHECK(Rational(m1.entries[i]) * 4 + Rational(m2.entries[i]) == t1[i] * 4 + t2[i]);
}

TEST_CASE("certificates for whole lattices") {
  const CertificationReport d4 = certify_lattice(catalog_lattice("D4"), 5, 4);
  CHECK(d4.all_2_design);
  CHECK(d4.all_4_design);
  REQUIRE(d4.shells.size() == 5);
  for (const auto& c : d4.shells) CHECK(c.strength >= 4);

  const CertificationReport a2 = certify_lattice(catalog_lattice("A2"), 5, 4);
  CHECK(a2.all_4_design);

  const CertificationReport z4 = certify_lattice(catalog_lattice("Zn", 4), 3, 4);
  CHECK(z4.all_2_design);
  CHECK_FALSE(z4.all_4_design);
  CHECK_FALSE(z4.shells[0].checks[1].pass);
  CHECK(z4.shells[1].checks[1].pass);  // +-e_i +- e_j is a D4 root system
  CHECK_FALSE(z4.shells[2].checks[1].pass);
  REQUIRE(z4.shells[0].first_failure);
  CHECK(z4.shells[0].first_failure->t == 4);

  CHECK_THROWS_AS(certify_lattice(catalog_lattice("D4"), 0, 4), DomainError);
  CHECK_THROWS_AS(certify_lattice(catalog_lattice("D4"), 2, 3), DomainError);
}

TEST_CASE("streamed and materialised certificates agree") {
  CertificationOptions stored;
  stored.streaming = false;
  const Lattice e6 = catalog_lattice("E6");
  const auto a = certify_lattice(e6, 4, 6);
  const auto b = certify_lattice(e6, 4, 6, stored);
  for (std::size_t k = 0; k < a.shells.size(); ++k)
    for (std::size_t j = 0; j < a.shells[k].checks.size(); ++j) {
      CHECK(a.shells[k].checks[j].pass == b.shells[k].checks[j].pass);
      CHECK(a.shells[k].checks[j].defect == b.shells[k].checks[j].defect);
    }
}

TEST_CASE("certificate document") {
  const std::string doc = to_certificate_document(certify_lattice(catalog_lattice("A2"), 1, 4));
  CHECK(doc.find("\"m_k\": \"2\", \"a_k\": 6, \"t\": 4, \"pass\": true, \"defect\": \"0\"") != std::string::npos);
  CHECK(doc.find("shells 1..1 only") != std::string::npos);
}

TEST_CASE("strong criticality") {
  CHECK(strongly_critical(catalog_lattice("E8"), 10).strongly_critical);
  CHECK(strongly_critical(catalog_lattice("Zn", 3), 5).strongly_critical);
  CHECK(strongly_critical(catalog_lattice("E6"), 5).strongly_critical);
  RationalMatrix g(2, 2);
  g << 2, 1, 1, 3;
  CHECK_FALSE(strongly_critical(Lattice("generic", GramMatrix(g)), 2).strongly_critical);
}

TEST_CASE("series identity against zeta") {
  const Lattice e8 = catalog_lattice("E8");
  const SeriesIdentityResult a = series_identity_check(e8, 5, e8.working_gram(), 20);
  CHECK(a.within_bound);
  CHECK(a.lhs == doctest::Approx(a.rhs).epsilon(0.05));

  const Lattice d4 = catalog_lattice("D4");
  Matrix<double> h = Matrix<double>::Zero(4, 4);
  h(0, 0) = 1;
  h(1, 1) = -1;
  CHECK(series_identity_check(d4, 3, h, 20).within_bound);

  const Lattice z2 = catalog_lattice("Zn", 2);
  Matrix<double> hz = Matrix<double>::Zero(2, 2);
  hz(0, 0) = 1;
  hz(1, 1) = -1;
  CHECK_THROWS_AS(series_identity_check(z2, 2, hz, 10), PreconditionError);
  const SeriesIdentityResult neg = series_identity_check(z2, 2, hz, 10, false);
  CHECK_FALSE(neg.within_bound);
  CHECK(neg.residual > neg.bound);

  CHECK_THROWS_AS(series_identity_check(e8, 3, e8.working_gram(), 2), DomainError);
}
