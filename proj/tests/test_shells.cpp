#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/LU>

#include "designzeta/errors.hpp"
#include "designzeta/shells.hpp"

using namespace dz;

namespace {

// All x in the box |x_i| <= sqrt(R (A^{-1})_ii), norms in exact arithmetic.
std::map<Rational, std::uint64_t> brute_force(const GramMatrix& a, const Rational& bound) {
  const int n = a.dim();
  const Matrix<double> inv = a.to_double().inverse();
  std::vector<std::int64_t> box(n);
  for (int i = 0; i < n; ++i) box[i] = static_cast<std::int64_t>(std::floor(std::sqrt(bound.convert_to<double>() * inv(i, i)) + 1e-9));
  std::map<Rational, std::uint64_t> counts;
  IntVector x = IntVector::Zero(n);
  for (int i = 0; i < n; ++i) x(i) = -box[i];
  for (;;) {
    if (!x.isZero()) {
      const Rational v = a.eval(x);
      if (v <= bound) ++counts[v];
    }
    int i = 0;
    while (i < n && x(i) == box[i]) x(i) = -box[i], ++i;
    if (i == n) break;
    ++x(i);
  }
  return counts;
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

}  // namespace

TEST_CASE("enumeration matches brute force in small dimensions") {
  const std::vector<std::pair<std::string, int>> cases{{"Zn", 1}, {"Zn", 3}, {"A2", 0}, {"D4", 0}, {"E6", 0}, {"Zn", 5}};
  for (const auto& [name, dim] : cases) {
    CAPTURE(name);
    const Lattice l = catalog_lattice(name, dim);
    const Rational bound = l.dim() <= 4 ? 12 : 6;
    const auto oracle = brute_force(l.gram(), bound);
    const ShellList shells = enumerate_shells(l.gram(), bound);
    REQUIRE(shells.size() == oracle.size());
    std::size_t k = 0;
    for (const auto& [norm, count] : oracle) {
      CHECK(shells[k].norm == norm);
      CHECK(shells[k].cardinality == count);
      CHECK(shells[k].index == static_cast<int>(k + 1));
      ++k;
    }
  }
}

TEST_CASE("non-integral and inverse forms") {
  const GramMatrix a = catalog_lattice("E6").gram().inverse();
  const auto oracle = brute_force(a, Rational(3));
  const ShellList shells = enumerate_shells(a, Rational(3));
  REQUIRE(shells.size() == oracle.size());
  CHECK(shells.front().norm == Rational(4, 3));
  CHECK(shells.front().cardinality == 54);
}

TEST_CASE("stored shells are sorted, closed under negation and have the stated norm") {
  const Lattice d4 = catalog_lattice("D4");
  for (const Shell& s : first_k_shells(d4, 3)) {
    REQUIRE(s.has_vectors());
    CHECK(static_cast<std::uint64_t>(s.vectors.rows()) == s.cardinality);
    for (Eigen::Index r = 0; r < s.vectors.rows(); ++r) {
      const IntVector x = s.vectors.row(r).transpose();
      CHECK(d4.gram().eval(x) == s.norm);
      bool found = false;
      for (Eigen::Index q = 0; q < s.vectors.rows() && !found; ++q) found = (s.vectors.row(q).transpose() == -x);
      CHECK(found);
      if (r > 0) {
        const IntVector prev = s.vectors.row(r - 1).transpose();
        CHECK(std::lexicographical_compare(prev.begin(), prev.end(), x.begin(), x.end()));
      }
    }
  }
}

TEST_CASE("shell counts of E8 follow 240 sigma_3") {
  const ShellList shells = first_k_shells(catalog_lattice("E8").gram(), 5, {.keep_vectors = false});
  for (int k = 1; k <= 5; ++k) {
    CHECK(shells[k - 1].norm == 2 * k);
    CHECK(shells[k - 1].cardinality == 240 * sigma(k, 3));
  }
}

TEST_CASE("first shells of the 12 and 16 dimensional lattices") {
  EnumerationOptions o;
  o.keep_vectors = false;
  const auto k12 = first_k_shells(catalog_lattice("K12"), 2, o);
  CHECK(k12[0].norm == 4);
  CHECK(k12[0].cardinality == 756);
  CHECK(k12[1].norm == 6);
  CHECK(k12[1].cardinality == 4032);
  const auto bw = first_k_shells(catalog_lattice("BW16"), 2, o);
  CHECK(bw[0].norm == 4);
  CHECK(bw[0].cardinality == 4320);
  CHECK(bw[1].norm == 6);
  CHECK(bw[1].cardinality == 61440);
}

TEST_CASE("basis change leaves the shells invariant") {
  IntMatrix u = IntMatrix::Identity(6, 6);
  u(0, 3) = 2;
  u(5, 1) = -1;
  u(2, 4) = 3;
  const Lattice e6 = catalog_lattice("E6");
  const auto a = first_k_shells(e6, 4, {.keep_vectors = false});
  const auto b = first_k_shells(change_basis(e6, u), 4, {.keep_vectors = false});
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].norm == b[k].norm);
    CHECK(a[k].cardinality == b[k].cardinality);
  }
}

TEST_CASE("scaled lattices report working norms") {
  RationalMatrix g = RationalMatrix::Zero(2, 2);
  g(0, 0) = 4;
  g(1, 1) = 4;
  const Lattice u = rescale_to_covolume_one(Lattice("4Z2", GramMatrix(g)));
  CHECK(u.scale().is_rational());
  const auto shells = first_k_shells(u, 2);
  CHECK(shells[0].norm == 1);
  CHECK(shells[1].norm == 2);
  CHECK_THROWS_AS(first_k_shells(rescale_to_covolume_one(catalog_lattice("A2")), 1), DomainError);
}

TEST_CASE("shell helpers") {
  const GramMatrix e8 = catalog_lattice("E8").gram();
  CHECK(bound_for_shells(e8, 3) == 6);
  CHECK(norm_step(e8) == 2);
  CHECK(min_norm(catalog_lattice("D4")) == 2);
  CHECK(kissing(catalog_lattice("E7")) == 126);
  const auto counts = shell_counts(e8, 4);
  REQUIRE(counts.size() == 2);
  CHECK(counts[1].second == 2160);
}

TEST_CASE("budget and argument errors") {
  EnumerationOptions o;
  o.budget = 1000;
  CHECK_THROWS_AS(first_k_shells(catalog_lattice("E8").gram(), 3, o), ResourceError);
  CHECK_THROWS_AS(first_k_shells(catalog_lattice("E8").gram(), 0), DomainError);
  CHECK_THROWS_AS(enumerate_shells(catalog_lattice("E8").gram(), Rational(-1)), DomainError);
}

TEST_CASE("threaded enumeration gives identical results") {
  EnumerationOptions one;
  one.keep_vectors = false;
  EnumerationOptions four = one;
  four.threads = 4;
  const GramMatrix k12 = catalog_lattice("K12").gram();
  const auto a = enumerate_shells(k12, Rational(8), one);
  const auto b = enumerate_shells(k12, Rational(8), four);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].cardinality == b[k].cardinality);
}

TEST_CASE("shell dump format") {
  std::ostringstream os;
  write_shell_dump(os, "Z1", first_k_shells(catalog_lattice("Zn", 1), 2), true);
  CHECK(os.str() == "# shells of Z1\n# k m_k a_k\n1 1 2\n  -1\n  1\n2 4 2\n  -2\n  2\n");
}
