#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "designzeta/numeric.hpp"
#include "designzeta/rational.hpp"

namespace dz {

/// Exact symmetric positive definite Gram matrix A of a lattice basis; the
/// squared length of the vector with coordinates x is A[x] = x'Ax.
class GramMatrix {
 public:
  /// Throws DomainError unless m is square, symmetric and positive definite.
  explicit GramMatrix(RationalMatrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Rational& operator()(int i, int j) const { return m_(i, j); }
  const RationalMatrix& matrix() const { return m_; }

  const Rational& det() const { return det_; }
  GramMatrix inverse() const;
  GramMatrix scaled(const Rational& factor) const;
  bool integral() const;
  /// Diagonal entries even and off-diagonal entries integral.
  bool even() const;
  Integer denominator() const { return common_denominator(m_); }

  Rational eval(const IntVector& x) const;
  Matrix<double> to_double() const { return dz::to_double(m_); }

  bool operator==(const GramMatrix& o) const { return m_ == o.m_; }

 private:
  RationalMatrix m_;
  Rational det_;
};

/// Multiplier lambda^2 applied to the Gram matrix at evaluation time:
/// coefficient * base^exponent. Kept symbolic so the exact Gram is never
/// touched by irrational factors.
struct Scale {
  Rational coefficient = 1;
  Rational base = 1;
  Rational exponent = 0;

  bool is_rational() const { return exponent == 0 || base == 1; }
  bool is_one() const { return is_rational() && coefficient == 1; }
  double value() const;
  template <class Real>
  Real value_as() const;

  Scale operator*(const Scale& o) const;
  bool operator==(const Scale& o) const = default;
};

std::string to_string(const Scale& s);
/// Accepts a rational string or the symbolic form "c*(b)^(e)".
Scale parse_scale(std::string_view text);

struct Provenance {
  enum class Kind { catalog, file, barnes_wall, dual_of, rescaled };
  Kind kind = Kind::catalog;
  /// Catalog identifier, file path, parent lattice name, ...
  std::string detail;
  int parameter = 0;
  bool even_flag = false;

  bool operator==(const Provenance& o) const = default;
};

std::string_view to_string(Provenance::Kind kind);

class Lattice {
 public:
  Lattice(std::string name, GramMatrix gram, Scale scale = {}, Provenance provenance = {});

  const std::string& name() const { return name_; }
  const GramMatrix& gram() const { return gram_; }
  const Scale& scale() const { return scale_; }
  const Provenance& provenance() const { return provenance_; }
  int dim() const { return gram_.dim(); }

  /// Gram matrix of the working form scale * gram in floating point.
  Matrix<double> working_gram() const;
  /// Determinant of the working form, scale^n * det(gram).
  double working_det() const;

 private:
  std::string name_;
  GramMatrix gram_;
  Scale scale_;
  Provenance provenance_;
};

// ---------------------------------------------------------------- catalog

/// Names accepted by catalog_lattice.
const std::vector<std::string>& catalog_names();

/// name in {Zn, A2, D4, E6, E7, E8, K12, BW16, Leech, BW32}; Zn needs dim >= 1
/// (also accepted as "Z<dim>"). Throws CatalogError for anything else.
Lattice catalog_lattice(std::string_view name, int dim = 0);

/// Barnes-Wall lattice in dimension 2^k, 2 <= k <= 5, from the affine
/// subspaces of F_2^k. The Gram matrix is normalised to be integral and
/// primitive (gcd of entries 1).
Lattice barnes_wall(int k);

/// Extended binary Golay code, 12 x 24 generator rows (0/1).
const std::vector<std::string>& golay_generator_rows();

/// Leech lattice from the Golay code construction, Gram scaled by 1/8 so that
/// it is even unimodular with minimum 4.
Lattice leech_lattice();

/// Coxeter-Todd lattice as an Eisenstein lattice, Gram scaled to be even with
/// minimum 4 and determinant 3^6.
Lattice coxeter_todd_lattice();

// ------------------------------------------------------------- operations

/// Gram matrix inverted exactly; dual(dual(L)) has L's Gram.
Lattice dual(const Lattice& l);

/// Attaches scale so that scale^n * det(gram) = 1. Idempotent.
Lattice rescale_to_covolume_one(const Lattice& l);

/// Same lattice with Gram U'AU (U unimodular integer matrix).
Lattice change_basis(const Lattice& l, const IntMatrix& u);

struct PerfectionReport {
  std::size_t rank = 0;
  std::size_t required = 0;
  std::uint64_t minimal_vectors = 0;
  bool perfect = false;
};

PerfectionReport is_perfect(const Lattice& l);

struct ModularReport {
  int level = 0;
  bool is_even = false;
  /// Number of leading shells on which (m_k, a_k) of L and sqrt(level) L*
  /// coincide (at most the requested depth).
  int theta_match_depth = 0;
  int depth = 0;
  std::int64_t extremal_bound = 0;
  Rational min_norm;
  bool is_extremal = false;
};

/// Bound 2 (1 + floor(n (1 + level) / 48)) on the minimum of a level-modular
/// lattice.
std::int64_t modular_extremal_bound(int n, int level);

/// Requires an integral Gram (DomainError otherwise); depth >= 1.
ModularReport modular_check(const Lattice& l, int level, int depth = 5);

// ------------------------------------------------------------------- files

/// JSON document {"name", "dim", "gram": [["p/q", ...], ...], "scale"?}.
std::string to_lattice_document(const Lattice& l);
Lattice parse_lattice_document(std::string_view text, std::string_view origin = "");
void write_lattice_file(const Lattice& l, const std::filesystem::path& path);
Lattice read_lattice_file(const std::filesystem::path& path);

template <class Real>
Real Scale::value_as() const {
  Real v = to_real<Real>(coefficient);
  if (!is_rational()) {
    using std::pow;
    v *= pow(to_real<Real>(base), to_real<Real>(exponent));
  }
  return v;
}

}  // namespace dz
