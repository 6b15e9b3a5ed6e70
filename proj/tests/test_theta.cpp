#include <doctest.h>

#include <cmath>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "designzeta/errors.hpp"
#include "designzeta/extremality.hpp"
#include "designzeta/theta.hpp"

using namespace dz;

namespace {

constexpr double pi = boost::math::constants::pi<double>();

long double jacobi_theta3(long double y) {
  long double sum = 1;
  for (int k = 1; k < 200; ++k) sum += 2 * std::exp(-static_cast<long double>(pi) * y * k * k);
  return sum;
}

}  // namespace

TEST_CASE("one dimensional theta against the Jacobi series") {
  const Lattice z1 = catalog_lattice("Zn", 1);
  for (double y : {0.01, 0.2, 1.0, 3.0}) {
    CAPTURE(y);
    const ThetaValue v = theta(z1, y);
    CHECK(v.to_double() == doctest::Approx(static_cast<double>(jacobi_theta3(y))).epsilon(1e-14));
    CHECK(v.err < 1e-13 * v.to_double());
  }
}

TEST_CASE("transformed and direct evaluation agree") {
  ThetaOptions direct;
  direct.modular_transform = false;
  direct.budget = 200'000'000;
  for (const auto& name : {"A2", "D4", "E6"}) {
    CAPTURE(name);
    const Lattice l = catalog_lattice(name);
    for (double y : {0.15, 0.4, 0.9}) {
      const ThetaValue t = theta(l, y);
      const ThetaValue d = theta(l, y, direct);
      CHECK(t.transformed == (y * std::pow(l.gram().det().convert_to<double>(), 1.0 / l.dim()) < 1));
      CHECK_FALSE(d.transformed);
      CHECK(t.to_double() == doctest::Approx(d.to_double()).epsilon(1e-13));
    }
  }
}

TEST_CASE("Mellin transform of theta reproduces zeta") {
  const Lattice e8 = catalog_lattice("E8");
  const double s = 5;
  boost::math::quadrature::exp_sinh<double> q;
  // below y0 the integrand is y^{s-1} (y^{-4} - 1) up to e^{-2 pi / y}
  const double y0 = 1e-3;
  const double head = y0 - std::pow(y0, s) / s;
  const double integral = head + q.integrate(
      [&](double t) {
        const double y = y0 + t;
        return y > 40 ? 0.0 : (theta(e8, y).to_double() - 1) * std::pow(y, s - 1);
      },
      0.0,
      std::numeric_limits<double>::infinity());
  const double value = std::pow(pi, s) / boost::math::tgamma(s) * integral;
  const double closed = 240 * std::pow(2.0, -s) * boost::math::zeta(s) * boost::math::zeta(s - 3);
  CHECK(value == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("theta and S(y) against a box sum") {
  const Lattice d4 = rescale_to_covolume_one(catalog_lattice("D4"));
  const Matrix<double> a = d4.working_gram();
  for (double y : {0.35, 0.8, 2.0}) {
    CAPTURE(y);
    long double th = 0, sy = 0;
    const int b = 14;
    Vector<double> x(4);
    for (int i = -b; i <= b; ++i)
      for (int j = -b; j <= b; ++j)
        for (int k = -b; k <= b; ++k)
          for (int m = -b; m <= b; ++m) {
            x << i, j, k, m;
            const long double u = static_cast<long double>(pi) * y * x.dot(a * x);
            th += std::exp(-u);
            sy += u * (u - 3) * std::exp(-u);
          }
    CHECK(theta(d4, y).to_double() == doctest::Approx(static_cast<double>(th)).epsilon(1e-14));
    CHECK(theta_min_sum(d4, y).to_double() == doctest::Approx(static_cast<double>(sy)).epsilon(1e-12));
  }
}

TEST_CASE("S(y) is positive beyond the threshold") {
  for (const auto& name : {"D4", "E8"}) {
    CAPTURE(name);
    const Lattice l = rescale_to_covolume_one(catalog_lattice(name));
    const double y0 = theta_threshold(l);
    const ThetaMinSum m = theta_min_sum(l, 1.01 * y0);
    CHECK(m.sign == 1);
    CHECK(std::abs(m.to_double()) > m.err);
    const ThetaThresholdScan scan = theta_threshold_scan(l, y0, 4 * y0, 16);
    CHECK(scan.certified_from > 0);
    CHECK(scan.certified_from <= 1.3 * y0);
  }
  CHECK(theta_threshold(catalog_lattice("E8")) == doctest::Approx(5 / (2 * pi)));
}

TEST_CASE("theta second variation") {
  const Lattice d4 = rescale_to_covolume_one(catalog_lattice("D4"));
  for (const auto& dir : random_tangents(d4.working_gram(), 2, 5)) {
    const ThetaVariationFit fit = theta_second_variation_fit(d4, 2.0, dir.h);
    CHECK(fit.relative_gap <= 1e-3);
  }
  RationalMatrix g(2, 2);
  g << 2, 1, 1, 3;
  const Lattice generic = rescale_to_covolume_one(Lattice("generic", GramMatrix(g)));
  const auto dir = random_tangents(generic.working_gram(), 1, 5).front();
  CHECK(theta_second_variation_fit(generic, 1.0, dir.h).relative_gap > 1e-2);
}

TEST_CASE("theta errors and output") {
  CHECK_THROWS_AS(theta(catalog_lattice("D4"), 0.0), DomainError);
  CHECK_THROWS_AS(theta_min_sum(catalog_lattice("D4"), -1.0), DomainError);
  std::ostringstream os;
  write_theta_csv(os, {theta(catalog_lattice("Zn", 1), 1.0)});
  CHECK(os.str().rfind("y,theta,err\n", 0) == 0);
  std::ostringstream ms;
  write_theta_min_csv(ms, {theta_min_sum(catalog_lattice("Zn", 1), 1.0)});
  CHECK(ms.str().rfind("y,S,err,sign\n", 0) == 0);
}
