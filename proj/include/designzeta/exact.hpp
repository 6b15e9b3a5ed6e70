#pragma once

#include <cstddef>
#include <vector>

#include "designzeta/rational.hpp"

namespace dz::exact {

Rational determinant(RationalMatrix m);

/// Throws DomainError on a singular matrix.
RationalMatrix inverse(const RationalMatrix& m);

std::size_t rank(RationalMatrix m);

bool is_symmetric(const RationalMatrix& m);

/// All leading principal minors strictly positive (exact LDL' pivots).
bool is_positive_definite(const RationalMatrix& m);

/// Integer row reduction of a generating set to a basis of the Z-module it
/// spans (rows of the result, Hermite normal form: upper echelon, positive
/// pivots, entries above each pivot reduced into [0, pivot)).
IntegerMatrix hermite_basis(const IntegerMatrix& generators);

/// Incremental exact rank of a growing family of rational vectors; stops
/// doing work once the ambient dimension is reached.
class RankAccumulator {
 public:
  explicit RankAccumulator(std::size_t dimension);

  /// Returns true when v increased the rank.
  bool add(RationalVector v);

  std::size_t rank() const { return rows_.size(); }
  bool full() const { return rows_.size() == dim_; }

 private:
  std::size_t dim_;
  std::vector<RationalVector> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace dz::exact
