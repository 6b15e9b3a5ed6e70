#include <doctest.h>

#include <cmath>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "designzeta/errors.hpp"
#include "designzeta/extremality.hpp"

using namespace dz;

TEST_CASE("tangent projection and random directions") {
  const Lattice d4 = rescale_to_covolume_one(catalog_lattice("D4"));
  const Matrix<double> a = d4.working_gram();
  const auto dirs = random_tangents(a, 4, 11);
  for (const auto& d : dirs) {
    CHECK(d.tangency_defect() < 1e-13);
    CHECK(d.h.norm() == doctest::Approx(1.0));
    CHECK((d.h - d.h.transpose()).norm() == 0.0);
  }
  const auto again = random_tangents(a, 4, 11);
  for (std::size_t i = 0; i < dirs.size(); ++i) CHECK(dirs[i].h == again[i].h);
  CHECK(random_tangents(a, 1, 12).front().h != dirs.front().h);
}

TEST_CASE("exponential map against the matrix exponential") {
  const Lattice e6 = rescale_to_covolume_one(catalog_lattice("E6"));
  const Matrix<double> a = e6.working_gram();
  const TangentDirection d = random_tangents(a, 1, 3).front();
  for (double t : {1e-3, 0.1, 0.7}) {
    const Matrix<double> oracle = a * (t * a.inverse() * d.h).exp();
    const Matrix<double> e = exp_map(a, d.h, t);
    CHECK((e - oracle).norm() < 1e-12 * oracle.norm());
    CHECK(e.determinant() == doctest::Approx(a.determinant()).epsilon(1e-12));
    const PathIncrement inc = path_increment(a, d.h, t);
    CHECK((a + inc.form - oracle).norm() < 1e-12 * oracle.norm());
    CHECK((a.inverse() + inc.inverse - oracle.inverse()).norm() < 1e-11 * oracle.inverse().norm());
  }
  CHECK(tangent_square_trace(a, d.h) > 0);
}

TEST_CASE("zeta along a path matches direct evaluation of the perturbed form") {
  const Lattice d4 = catalog_lattice("D4");
  const Matrix<double> a = d4.gram().to_double();
  const TangentDirection d = random_tangents(a, 1, 2).front();
  const std::vector<double> ts{0.05, -0.05};
  const PathEvaluation p = zeta_path(d4.gram(), d.h, ts, PathQuantity::zeta, 3.0);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    // ball A_t[x] <= R by brute force plus the continuum tail (pi^2/2) det^{-1/2} (n/2) R^{-1}
    const Matrix<double> b = exp_map(a, d.h, ts[i]);
    const double big_r = 400;
    const Matrix<double> binv = b.inverse();
    const int r = static_cast<int>(std::ceil(std::sqrt(big_r * binv.diagonal().maxCoeff())));
    long double sum = 0;
    Vector<double> x(4);
    for (int i0 = -r; i0 <= r; ++i0)
      for (int i1 = -r; i1 <= r; ++i1)
        for (int i2 = -r; i2 <= r; ++i2)
          for (int i3 = -r; i3 <= r; ++i3) {
            if (!i0 && !i1 && !i2 && !i3) continue;
            x << i0, i1, i2, i3;
            const double q = x.dot(b * x);
            if (q <= big_r) sum += std::pow(static_cast<long double>(q), -3.0L);
          }
    const double tail = (M_PI * M_PI / 2) / std::sqrt(b.determinant()) * 2 / big_r;
    const double value = p.base.to_double() + real_to_double(p.delta[i]);
    CHECK(value == doctest::Approx(static_cast<double>(sum) + tail).epsilon(1e-4));
  }
}

TEST_CASE("second variation fits") {
  for (const auto& [name, s] : std::vector<std::pair<std::string, double>>{{"D4", 3.0}, {"E8", 5.0}, {"E8", 2.0}, {"D4", 1.0}}) {
    CAPTURE(name);
    CAPTURE(s);
    const Lattice l = rescale_to_covolume_one(catalog_lattice(name));
    const TangentDirection d = random_tangents(l.working_gram(), 1, 1).front();
    const VariationReport r = zeta_second_variation_fit(l, s, d.h);
    CHECK(r.relative_gap <= 1e-6);
    CHECK(std::abs(r.linear) <= r.linear_bound);
    CHECK_FALSE(r.unreliable_fit);
    CHECK(r.verdict == "local-min-direction");
  }
  const Lattice d4 = rescale_to_covolume_one(catalog_lattice("D4"));
  const TangentDirection d = random_tangents(d4.working_gram(), 1, 1).front();
  CHECK_THROWS_AS(zeta_second_variation_fit(d4, 2.0, d.h), DomainError);
}

TEST_CASE("second variation fails for a lattice without 4-design shells") {
  const Lattice z3 = catalog_lattice("Zn", 3);
  const TangentDirection d = random_tangents(z3.working_gram(), 1, 1).front();
  const VariationReport r = zeta_second_variation_fit(z3, 3.0, d.h);
  CHECK(r.relative_gap > 1e-2);
}

TEST_CASE("first variation") {
  const Lattice e8 = catalog_lattice("E8");
  for (const auto& d : random_tangents(e8.working_gram(), 5, 9)) {
    const FirstVariation v = zeta_first_variation(e8, 5.0, d.h, 6);
    CHECK(v.within_bound);
  }
  RationalMatrix g(2, 2);
  g << 2, 1, 1, 3;
  const Lattice generic("generic", GramMatrix(g));
  const TangentDirection d = random_tangents(generic.working_gram(), 1, 1).front();
  CHECK_THROWS_AS(zeta_first_variation(generic, 2.0, d.h, 2), PreconditionError);
  CHECK_THROWS_AS(zeta_first_variation(e8, 3.0, random_tangents(e8.working_gram(), 1, 1).front().h, 2), DomainError);
}

TEST_CASE("height along the dual path") {
  for (const auto& name : {"E8", "D4"}) {
    CAPTURE(name);
    const Lattice l = rescale_to_covolume_one(catalog_lattice(name));
    std::vector<Matrix<double>> hs;
    for (const auto& d : random_tangents(l.working_gram(), 3, 4)) hs.push_back(d.h);
    for (const HeightRow& row : height_compare(l, hs)) {
      CHECK(row.strict_minimum_at_zero);
      CHECK(row.quadratic == doctest::Approx(row.predicted).epsilon(5e-3));
      CHECK(std::min_element(row.values.begin(), row.values.end()) - row.values.begin() == 2);
    }
  }
}

TEST_CASE("extremality report") {
  ExtremalityOptions o;
  o.strip_points = 9;
  const ExtremalityReport e8 = extremality_report(catalog_lattice("E8"), {2.0, 5.0}, 3, o);
  CHECK(e8.certificates.all_4_design);
  CHECK(e8.strip.all_negative);
  CHECK(e8.theta.sign == 1);
  REQUIRE(e8.verdicts.size() == 2);
  for (const auto& v : e8.verdicts) CHECK(v.evidence == Evidence::yes);
  const std::string doc = to_extremality_document(e8);
  CHECK(doc.find("evidence: yes") != std::string::npos);
  CHECK(to_extremality_document(extremality_report(catalog_lattice("E8"), {2.0, 5.0}, 3, o)) == doc);

  const ExtremalityReport z3 = extremality_report(catalog_lattice("Zn", 3), {3.0}, 2, o);
  CHECK(z3.verdicts.front().evidence == Evidence::no);

  RationalMatrix g(2, 2);
  g << 2, 1, 1, 3;
  CHECK_THROWS_AS(extremality_report(Lattice("generic", GramMatrix(g)), {2.0}, 1, o), PreconditionError);
}
