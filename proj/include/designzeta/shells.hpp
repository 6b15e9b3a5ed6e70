#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "designzeta/lattice.hpp"

namespace dz {

/// The k-th layer of a lattice: all vectors of the k-th smallest nonzero norm.
struct Shell {
  int index = 0;  // 1-based
  Rational norm;
  std::uint64_t cardinality = 0;
  /// One vector per row, lexicographically sorted, closed under negation.
  /// Empty when the shell was too large to materialise.
  IntMatrix vectors;

  bool has_vectors() const { return vectors.rows() > 0 || cardinality == 0; }
};

using ShellList = std::vector<Shell>;

struct EnumerationOptions {
  /// Maximum number of lattice vectors (both signs) an enumeration may visit.
  std::uint64_t budget = 10'000'000;
  bool keep_vectors = true;
  /// Shells larger than this are counted but not stored.
  std::uint64_t max_stored_per_shell = 1'000'000;
  unsigned threads = 1;
};

/// All shells of the exact form with norm <= bound (gram units).
ShellList enumerate_shells(const GramMatrix& gram, const Rational& bound, const EnumerationOptions& opts = {});

/// Norms are reported in working units (scale * gram). The scale must be
/// rational; symbolic scales are rejected with DomainError.
ShellList enumerate_shells(const Lattice& l, const Rational& bound, const EnumerationOptions& opts = {});

ShellList first_k_shells(const GramMatrix& gram, int k, const EnumerationOptions& opts = {});
ShellList first_k_shells(const Lattice& l, int k, const EnumerationOptions& opts = {});

/// Norm and cardinality of the k-th shell only; cheap counting passes.
std::vector<std::pair<Rational, std::uint64_t>> shell_counts(const GramMatrix& gram, const Rational& bound,
                                                             const EnumerationOptions& opts = {});

/// All norms of the form lie in norm_step * Z.
Rational norm_step(const GramMatrix& gram);

/// Smallest bound R such that at least k shells have norm <= R.
Rational bound_for_shells(const GramMatrix& gram, int k, const EnumerationOptions& opts = {});

Rational min_norm(const Lattice& l);
std::uint64_t kissing(const Lattice& l);

/// Text dump: header line then one record "k m_k a_k" per shell, followed by
/// the vectors when include_vectors is set.
void write_shell_dump(std::ostream& os, const std::string& lattice_name, const ShellList& shells,
                      bool include_vectors);

}  // namespace dz
