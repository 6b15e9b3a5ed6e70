#include "designzeta/lattice.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>

#include "designzeta/errors.hpp"
#include "designzeta/exact.hpp"

namespace dz {

// ------------------------------------------------------------- GramMatrix

GramMatrix::GramMatrix(RationalMatrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) throw DomainError("Gram matrix must be square and nonempty");
  if (!exact::is_symmetric(m_)) throw DomainError("Gram matrix is not symmetric");
  if (!exact::is_positive_definite(m_)) throw DomainError("Gram matrix is not positive definite");
  det_ = exact::determinant(m_);
}

GramMatrix GramMatrix::inverse() const { return GramMatrix(exact::inverse(m_)); }

GramMatrix GramMatrix::scaled(const Rational& factor) const {
  if (factor <= 0) throw DomainError("scale factor must be positive");
  RationalMatrix m = m_;
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] *= factor;
  return GramMatrix(std::move(m));
}

bool GramMatrix::integral() const { return denominator() == 1; }

bool GramMatrix::even() const {
  if (!integral()) return false;
  for (int i = 0; i < dim(); ++i)
    if (mp::numerator(m_(i, i)) % 2 != 0) return false;
  return true;
}

Rational GramMatrix::eval(const IntVector& x) const {
  Rational sum = 0;
  for (int i = 0; i < dim(); ++i) {
    if (x(i) == 0) continue;
    Rational row = 0;
    for (int j = 0; j < dim(); ++j)
      if (x(j) != 0) row += m_(i, j) * Rational(x(j));
    sum += row * Rational(x(i));
  }
  return sum;
}

// ------------------------------------------------------------------ Scale

double Scale::value() const { return value_as<double>(); }

Scale Scale::operator*(const Scale& o) const {
  if (o.is_rational()) return {coefficient * o.coefficient, base, exponent};
  if (is_rational()) return {coefficient * o.coefficient, o.base, o.exponent};
  if (base == o.base) return {coefficient * o.coefficient, base, exponent + o.exponent};
  throw DomainError("cannot combine symbolic scales with different bases");
}

std::string to_string(const Scale& s) {
  if (s.is_rational()) return to_string(s.coefficient);
  return to_string(s.coefficient) + "*(" + to_string(s.base) + ")^(" + to_string(s.exponent) + ")";
}

Scale parse_scale(std::string_view text) {
  const auto star = text.find('*');
  if (star == std::string_view::npos) {
    const Rational c = parse_rational(text);
    if (c <= 0) throw ParseError("scale must be positive");
    return {c, 1, 0};
  }
  const auto open1 = text.find('(', star);
  const auto close1 = text.find(')', open1);
  const auto open2 = text.find('(', close1);
  const auto close2 = text.find(')', open2);
  if (open1 == std::string_view::npos || close1 == std::string_view::npos || open2 == std::string_view::npos ||
      close2 == std::string_view::npos || text.find('^', close1) != close1 + 1)
    throw ParseError("malformed scale '" + std::string(text) + "'");
  Scale s{parse_rational(text.substr(0, star)), parse_rational(text.substr(open1 + 1, close1 - open1 - 1)),
          parse_rational(text.substr(open2 + 1, close2 - open2 - 1))};
  if (s.coefficient <= 0 || s.base <= 0) throw ParseError("scale must be positive");
  return s;
}

std::string_view to_string(Provenance::Kind kind) {
  switch (kind) {
    case Provenance::Kind::catalog: return "catalog";
    case Provenance::Kind::file: return "file";
    case Provenance::Kind::barnes_wall: return "barnes-wall";
    case Provenance::Kind::dual_of: return "dual-of";
    case Provenance::Kind::rescaled: return "rescaled";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Lattice

Lattice::Lattice(std::string name, GramMatrix gram, Scale scale, Provenance provenance)
    : name_(std::move(name)), gram_(std::move(gram)), scale_(std::move(scale)), provenance_(std::move(provenance)) {
  if (scale_.coefficient <= 0 || scale_.base <= 0) throw DomainError("scale must be positive");
  if (provenance_.even_flag && !gram_.even()) throw ConsistencyError("lattice '" + name_ + "' flagged even but is not");
}

Matrix<double> Lattice::working_gram() const { return scale_.value() * gram_.to_double(); }

double Lattice::working_det() const {
  return std::pow(scale_.value(), dim()) * gram_.det().convert_to<double>();
}

// ---------------------------------------------------------------- catalog

namespace {

RationalMatrix cartan_from_edges(int n, std::initializer_list<std::pair<int, int>> edges) {
  RationalMatrix m = RationalMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 2;
  for (auto [a, b] : edges) {
    m(a, b) = -1;
    m(b, a) = -1;
  }
  return m;
}

Lattice make_catalog(std::string name, RationalMatrix gram) {
  GramMatrix g(std::move(gram));
  Provenance p{Provenance::Kind::catalog, name, 0, g.even()};
  return Lattice(std::move(name), std::move(g), {}, std::move(p));
}

RationalMatrix gram_of_rows(const IntegerMatrix& basis, const RationalMatrix& inner) {
  const Eigen::Index n = basis.rows();
  RationalMatrix b(n, basis.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < basis.cols(); ++j) b(i, j) = Rational(basis(i, j));
  return b * inner * b.transpose();
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"Zn", "A2", "D4", "E6", "E7", "E8", "K12", "BW16", "Leech", "BW32"};
  return names;
}

Lattice catalog_lattice(std::string_view name, int dim) {
  std::string key(name);
  if (key.size() > 1 && key[0] == 'Z' && key != "Zn" &&
      std::all_of(key.begin() + 1, key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    dim = std::stoi(key.substr(1));
    key = "Zn";
  }
  if (key == "Zn") {
    if (dim < 1) throw CatalogError("Zn needs a dimension >= 1");
    auto l = make_catalog("Z" + std::to_string(dim), RationalMatrix::Identity(dim, dim));
    return l;
  }
  if (key == "A2") {
    RationalMatrix m(2, 2);
    m << 2, 1, 1, 2;
    return make_catalog("A2", m);
  }
  if (key == "D4") return make_catalog("D4", cartan_from_edges(4, {{0, 1}, {1, 2}, {1, 3}}));
  if (key == "E6") return make_catalog("E6", cartan_from_edges(6, {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 3}}));
  if (key == "E7")
    return make_catalog("E7", cartan_from_edges(7, {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {1, 3}}));
  if (key == "E8")
    return make_catalog("E8", cartan_from_edges(8, {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}}));
  if (key == "K12") return coxeter_todd_lattice();
  if (key == "BW16") return barnes_wall(4);
  if (key == "Leech") return leech_lattice();
  if (key == "BW32") return barnes_wall(5);

  std::string valid;
  for (const auto& n : catalog_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw CatalogError("unknown lattice '" + std::string(name) + "'; valid names: " + valid);
}

// ------------------------------------------------------------ Barnes-Wall

namespace {

using Bits = std::uint64_t;  // subset of F_2^k (k <= 5), bit u set iff u in U

std::vector<std::pair<Bits, int>> affine_subspaces(int k) {
  const int size = 1 << k;
  // Linear subspaces by closure from {0}.
  std::set<Bits> linear{Bits{1}};
  std::vector<Bits> frontier{Bits{1}};
  while (!frontier.empty()) {
    std::vector<Bits> next;
    for (Bits v : frontier) {
      for (int a = 1; a < size; ++a) {
        if (v >> a & 1) continue;
        Bits w = v;
        for (int u = 0; u < size; ++u)
          if (v >> u & 1) w |= Bits{1} << (u ^ a);
        if (linear.insert(w).second) next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
  std::set<Bits> seen;
  std::vector<std::pair<Bits, int>> out;
  for (Bits v : linear) {
    const int card = std::popcount(v);
    const int d = std::countr_zero(static_cast<unsigned>(card));
    for (int a = 0; a < size; ++a) {
      Bits coset = 0;
      for (int u = 0; u < size; ++u)
        if (v >> u & 1) coset |= Bits{1} << (u ^ a);
      if (seen.insert(coset).second) out.emplace_back(coset, d);
    }
  }
  return out;
}

Integer gcd_of_entries(const RationalMatrix& m) {
  Integer g = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) g = mp::gcd(g, mp::numerator(m.data()[i]));
  return g;
}

}  // namespace

Lattice barnes_wall(int k) {
  if (k < 2 || k > 5) throw UnsupportedDimensionError("Barnes-Wall construction supports 2 <= k <= 5, got " + std::to_string(k));
  const int n = 1 << k;
  const auto subspaces = affine_subspaces(k);
  IntegerMatrix gens(static_cast<Eigen::Index>(subspaces.size()), n);
  gens.setZero();
  for (std::size_t r = 0; r < subspaces.size(); ++r) {
    const auto [bits, d] = subspaces[r];
    const Integer weight = Integer(1) << ((k - d + 1) / 2);
    for (int u = 0; u < n; ++u)
      if (bits >> u & 1) gens(static_cast<Eigen::Index>(r), u) = weight;
  }
  const IntegerMatrix basis = exact::hermite_basis(gens);
  RationalMatrix gram = gram_of_rows(basis, RationalMatrix::Identity(n, n));
  const Integer g = gcd_of_entries(gram);
  for (Eigen::Index i = 0; i < gram.size(); ++i) gram.data()[i] /= Rational(g);
  GramMatrix gm(std::move(gram));
  const std::string name = "BW" + std::to_string(n);
  Provenance p{Provenance::Kind::barnes_wall, name, k, gm.even()};
  return Lattice(name, std::move(gm), {}, std::move(p));
}

// ------------------------------------------------------------------ Leech

const std::vector<std::string>& golay_generator_rows() {
  // Cyclic shifts of x^11+x^10+x^6+x^5+x^4+x^2+1 (length-23 quadratic-residue
  // code), extended by an overall parity bit.
  static const std::vector<std::string> rows{
      "101011100011000000000001", "010101110001100000000001", "001010111000110000000001",
      "000101011100011000000001", "000010101110001100000001", "000001010111000110000001",
      "000000101011100011000001", "000000010101110001100001", "000000001010111000110001",
      "000000000101011100011001", "000000000010101110001101", "000000000001010111000111",
  };
  return rows;
}

Lattice leech_lattice() {
  constexpr int n = 24;
  const auto& golay = golay_generator_rows();
  // Coordinates scaled by sqrt(8): 2c for codewords c, 4(e_0 + e_j), 8 e_0,
  // and the odd vector (-3, 1^23).
  IntegerMatrix gens = IntegerMatrix::Zero(12 + 23 + 1 + 1, n);
  Eigen::Index r = 0;
  for (const auto& row : golay) {
    for (int j = 0; j < n; ++j) gens(r, j) = row[static_cast<std::size_t>(j)] == '1' ? 2 : 0;
    ++r;
  }
  for (int j = 1; j < n; ++j, ++r) {
    gens(r, 0) = 4;
    gens(r, j) = 4;
  }
  gens(r++, 0) = 8;
  for (int j = 0; j < n; ++j) gens(r, j) = 1;
  gens(r, 0) = -3;

  const IntegerMatrix basis = exact::hermite_basis(gens);
  RationalMatrix gram = gram_of_rows(basis, RationalMatrix::Identity(n, n) / Rational(8));
  GramMatrix gm(std::move(gram));
  if (gm.det() != 1 || !gm.even()) throw ConsistencyError("Leech construction did not give an even unimodular Gram");
  Provenance p{Provenance::Kind::catalog, "Leech", 0, true};
  return Lattice("Leech", std::move(gm), {}, std::move(p));
}

// ----------------------------------------------------------- Coxeter-Todd

Lattice coxeter_todd_lattice() {
  // Eisenstein coordinates: z = a + b w, w = exp(2 pi i / 3), stored as (a, b).
  constexpr int m = 6;
  using C = std::array<std::int64_t, 2>;
  auto mul_w = [](C z) { return C{-z[1], z[0] - z[1]}; };
  auto mul_theta = [](C z) { return C{z[0] - 2 * z[1], 2 * z[0] - z[1]}; };  // theta = w - w^2 = 1 + 2w

  std::vector<std::array<C, m>> gens;
  auto add_with_w = [&](const std::array<C, m>& v) {
    gens.push_back(v);
    std::array<C, m> w;
    for (int i = 0; i < m; ++i) w[i] = mul_w(v[i]);
    gens.push_back(w);
  };
  std::array<C, m> ones;
  ones.fill(C{1, 0});
  add_with_w(ones);
  for (int j = 1; j < m; ++j) {
    std::array<C, m> v;
    v.fill(C{0, 0});
    v[0] = mul_theta(C{1, 0});
    v[j] = mul_theta(C{-1, 0});
    add_with_w(v);
  }
  std::array<C, m> three;
  three.fill(C{0, 0});
  three[0] = C{3, 0};
  add_with_w(three);

  IntegerMatrix g(static_cast<Eigen::Index>(gens.size()), 2 * m);
  for (std::size_t r = 0; r < gens.size(); ++r)
    for (int i = 0; i < m; ++i) {
      g(static_cast<Eigen::Index>(r), 2 * i) = gens[r][i][0];
      g(static_cast<Eigen::Index>(r), 2 * i + 1) = gens[r][i][1];
    }
  const IntegerMatrix basis = exact::hermite_basis(g);

  // Re(z conj(z')) in (a, b) coordinates, times 2/3.
  RationalMatrix inner = RationalMatrix::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    inner(2 * i, 2 * i) = 1;
    inner(2 * i + 1, 2 * i + 1) = 1;
    inner(2 * i, 2 * i + 1) = Rational(-1, 2);
    inner(2 * i + 1, 2 * i) = Rational(-1, 2);
  }
  inner *= Rational(2, 3);
  GramMatrix gm(gram_of_rows(basis, inner));
  if (gm.det() != 729 || !gm.even()) throw ConsistencyError("Coxeter-Todd construction did not give det 729, even");
  Provenance p{Provenance::Kind::catalog, "K12", 0, true};
  return Lattice("K12", std::move(gm), {}, std::move(p));
}

// ------------------------------------------------------------- operations

Lattice dual(const Lattice& l) {
  Scale inv_scale;
  const Scale& s = l.scale();
  if (!s.is_one()) inv_scale = Scale{1 / s.coefficient, s.base, -s.exponent};
  if (inv_scale.is_rational()) inv_scale = Scale{inv_scale.coefficient, 1, 0};
  Provenance p{Provenance::Kind::dual_of, l.name(), 0, false};
  GramMatrix g = l.gram().inverse();
  p.even_flag = false;
  return Lattice(l.name() + "*", std::move(g), inv_scale, std::move(p));
}

namespace {

std::optional<Integer> exact_root(const Integer& z, int n) {
  const double guess = std::round(std::pow(z.convert_to<double>(), 1.0 / n));
  for (double c : {guess - 1, guess, guess + 1}) {
    if (c < 1) continue;
    const Integer r(static_cast<long long>(c));
    if (mp::pow(r, static_cast<unsigned>(n)) == z) return r;
  }
  return std::nullopt;
}

}  // namespace

Lattice rescale_to_covolume_one(const Lattice& l) {
  const Rational& det = l.gram().det();
  const int n = l.dim();
  Scale s;
  const auto p = exact_root(numerator_of(det), n);
  const auto q = exact_root(denominator_of(det), n);
  if (p && q)
    s = Scale{Rational(*q, *p), 1, 0};
  else if (det != 1)
    s = Scale{1, det, Rational(-1, n)};
  if (s == l.scale()) return l;
  Provenance prov{Provenance::Kind::rescaled, l.name(), 0, false};
  return Lattice(l.name(), l.gram(), s, std::move(prov));
}

Lattice change_basis(const Lattice& l, const IntMatrix& u) {
  const int n = l.dim();
  if (u.rows() != n || u.cols() != n) throw DomainError("change of basis has wrong shape");
  RationalMatrix ur(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ur(i, j) = Rational(u(i, j));
  const Rational d = exact::determinant(ur);
  if (d != 1 && d != -1) throw DomainError("change of basis is not unimodular");
  GramMatrix g(RationalMatrix(ur.transpose() * l.gram().matrix() * ur));
  return Lattice(l.name(), std::move(g), l.scale(), l.provenance());
}

std::int64_t modular_extremal_bound(int n, int level) {
  return 2 * (1 + (static_cast<std::int64_t>(n) * (1 + level)) / 48);
}

}  // namespace dz
