#include "designzeta/exact.hpp"

#include <utility>

#include "designzeta/errors.hpp"

namespace dz::exact {

Rational determinant(RationalMatrix m) {
  const Eigen::Index n = m.rows();
  Rational det = 1;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.row(p).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      const Rational f = m(r, c) / m(c, c);
      for (Eigen::Index k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

RationalMatrix inverse(const RationalMatrix& a) {
  const Eigen::Index n = a.rows();
  RationalMatrix m = a;
  RationalMatrix inv = RationalMatrix::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) throw DomainError("matrix is singular");
    if (p != c) {
      m.row(p).swap(m.row(c));
      inv.row(p).swap(inv.row(c));
    }
    const Rational piv = m(c, c);
    for (Eigen::Index k = 0; k < n; ++k) {
      m(c, k) /= piv;
      inv(c, k) /= piv;
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c || m(r, c) == 0) continue;
      const Rational f = m(r, c);
      for (Eigen::Index k = 0; k < n; ++k) {
        m(r, k) -= f * m(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

std::size_t rank(RationalMatrix m) {
  std::size_t r = 0;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  for (Eigen::Index c = 0; c < cols && static_cast<Eigen::Index>(r) < rows; ++c) {
    Eigen::Index p = static_cast<Eigen::Index>(r);
    while (p < rows && m(p, c) == 0) ++p;
    if (p == rows) continue;
    m.row(p).swap(m.row(static_cast<Eigen::Index>(r)));
    const Eigen::Index pr = static_cast<Eigen::Index>(r);
    for (Eigen::Index i = pr + 1; i < rows; ++i) {
      if (m(i, c) == 0) continue;
      const Rational f = m(i, c) / m(pr, c);
      for (Eigen::Index k = c; k < cols; ++k) m(i, k) -= f * m(pr, k);
    }
    ++r;
  }
  return r;
}

bool is_symmetric(const RationalMatrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

bool is_positive_definite(const RationalMatrix& a) {
  if (!is_symmetric(a)) return false;
  RationalMatrix m = a;
  const Eigen::Index n = m.rows();
  // Symmetric elimination without pivoting; pivot k is the ratio of the
  // (k+1)-th and k-th leading principal minors.
  for (Eigen::Index c = 0; c < n; ++c) {
    if (m(c, c) <= 0) return false;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      const Rational f = m(r, c) / m(c, c);
      for (Eigen::Index k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return true;
}

namespace {

// Extended gcd on the pair (a, b): returns g and coefficients with
// s*a + t*b = g, plus the cofactors u = -b/g, v = a/g so the 2x2 transform
// [[s, t], [u, v]] is unimodular.
struct Bezout {
  Integer g, s, t, u, v;
};

Bezout bezout(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Integer q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t, -b / old_r, a / old_r};
}

Integer floor_mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

IntegerMatrix hermite_basis(const IntegerMatrix& generators) {
  const Eigen::Index cols = generators.cols();
  // Echelon rows indexed by pivot column; empty rows mean "no pivot yet".
  std::vector<Vector<Integer>> basis(static_cast<std::size_t>(cols));
  std::vector<bool> present(static_cast<std::size_t>(cols), false);

  for (Eigen::Index g = 0; g < generators.rows(); ++g) {
    Vector<Integer> v = generators.row(g).transpose();
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (v(c) == 0) continue;
      auto& slot = basis[static_cast<std::size_t>(c)];
      if (!present[static_cast<std::size_t>(c)]) {
        if (v(c) < 0) v = -v;
        slot = v;
        present[static_cast<std::size_t>(c)] = true;
        v.setZero();
        break;
      }
      const Bezout b = bezout(slot(c), v(c));
      Vector<Integer> new_pivot = b.s * slot + b.t * v;
      Vector<Integer> rest = b.u * slot + b.v * v;
      slot = std::move(new_pivot);
      v = std::move(rest);
    }
  }

  std::vector<Eigen::Index> pivot_cols;
  for (Eigen::Index c = 0; c < cols; ++c)
    if (present[static_cast<std::size_t>(c)]) pivot_cols.push_back(c);

  // Reduce entries above each pivot into [0, pivot).
  for (std::size_t i = pivot_cols.size(); i-- > 0;) {
    const Eigen::Index c = pivot_cols[i];
    const auto& prow = basis[static_cast<std::size_t>(c)];
    for (std::size_t j = 0; j < i; ++j) {
      auto& row = basis[static_cast<std::size_t>(pivot_cols[j])];
      const Integer q = (row(c) - floor_mod(row(c), prow(c))) / prow(c);
      if (q != 0) row -= q * prow;
    }
  }

  IntegerMatrix out(static_cast<Eigen::Index>(pivot_cols.size()), cols);
  for (std::size_t i = 0; i < pivot_cols.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = basis[static_cast<std::size_t>(pivot_cols[i])].transpose();
  return out;
}

RankAccumulator::RankAccumulator(std::size_t dimension) : dim_(dimension) {}

bool RankAccumulator::add(RationalVector v) {
  if (full()) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::size_t p = pivots_[i];
    const Eigen::Index pi = static_cast<Eigen::Index>(p);
    if (v(pi) != 0) v -= v(pi) * rows_[i];
  }
  Eigen::Index p = 0;
  while (p < v.size() && v(p) == 0) ++p;
  if (p == v.size()) return false;
  v /= v(p);
  // Keep the stored rows fully reduced against the new pivot.
  for (auto& r : rows_)
    if (r(p) != 0) r -= r(p) * v;
  rows_.push_back(std::move(v));
  pivots_.push_back(static_cast<std::size_t>(p));
  return true;
}

}  // namespace dz::exact
