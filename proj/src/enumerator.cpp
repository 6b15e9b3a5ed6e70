#include "designzeta/enumerator.hpp"

#include <boost/multiprecision/integer.hpp>

namespace dz {

namespace {

// LLL with delta = 0.99 on an integral Gram matrix. The Gram matrix and the
// basis transform are updated in exact integer arithmetic; only the
// Gram-Schmidt data used to choose the steps is floating.
IntMatrix lll_transform(IntMatrix& g) {
  const int n = static_cast<int>(g.rows());
  IntMatrix u = IntMatrix::Identity(n, n);
  Matrix<double> mu(n, n);
  Vector<double> b(n);

  auto gso = [&](int upto) {
    for (int i = 0; i <= upto; ++i) {
      for (int j = 0; j < i; ++j) {
        double r = static_cast<double>(g(i, j));
        for (int k = 0; k < j; ++k) r -= mu(j, k) * mu(i, k) * b(k);
        mu(i, j) = r / b(j);
      }
      double r = static_cast<double>(g(i, i));
      for (int k = 0; k < i; ++k) r -= mu(i, k) * mu(i, k) * b(k);
      b(i) = r;
    }
  };
  // b_k <- b_k - r b_j
  auto sub = [&](int k, int j, std::int64_t r) {
    u.col(k) -= r * u.col(j);
    g.col(k) -= r * g.col(j);
    g.row(k) -= r * g.row(j);
  };
  auto swap = [&](int k) {
    u.col(k).swap(u.col(k - 1));
    g.col(k).swap(g.col(k - 1));
    g.row(k).swap(g.row(k - 1));
  };

  int k = 1;
  gso(n - 1);
  std::size_t guard = 0;
  while (k < n) {
    if (++guard > 1'000'000) throw ConsistencyError("lattice reduction did not terminate");
    gso(k);
    for (int j = k - 1; j >= 0; --j) {
      const double r = std::round(mu(k, j));
      if (r != 0.0) {
        sub(k, j, static_cast<std::int64_t>(r));
        gso(k);
      }
    }
    if (b(k) < (0.99 - mu(k, k - 1) * mu(k, k - 1)) * b(k - 1)) {
      swap(k);
      k = std::max(k - 1, 1);
    } else {
      ++k;
    }
  }
  return u;
}

}  // namespace

EnumerationSpace::EnumerationSpace(const GramMatrix& gram, const Rational& bound, bool reduce)
    : n_(gram.dim()), rational_bound_(bound) {
  if (bound <= 0) throw DomainError("enumeration bound must be positive");
  den_ = gram.denominator();
  form_.resize(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const Rational v = gram(i, j) * Rational(den_);
      form_(i, j) = to_int64(mp::numerator(v));
    }
  basis_ = IntMatrix::Identity(n_, n_);
  if (reduce && n_ > 1) {
    basis_ = lll_transform(form_);
    reduced_ = basis_ != IntMatrix::Identity(n_, n_);
  }
  const Rational scaled = bound * Rational(den_);
  bound_ = to_int64(Integer(mp::numerator(scaled) / mp::denominator(scaled)));

  RationalMatrix working(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) working(i, j) = Rational(form_(i, j)) / Rational(den_);
  const GramMatrix wg(std::move(working));

  // |y_i|^2 <= R (A^{-1})_ii, by Cauchy-Schwarz in the A-metric.
  const RationalMatrix inv = wg.inverse().matrix();
  coord_bound_ = 0;
  for (int i = 0; i < n_; ++i) {
    const Rational r = bound * inv(i, i);
    const Integer fl = mp::numerator(r) / mp::denominator(r);
    coord_bound_ = std::max(coord_bound_, to_int64(Integer(mp::sqrt(fl))));
  }

  const Matrix<double> a = wg.to_double();
  Eigen::LLT<Matrix<double>> llt(a);
  if (llt.info() != Eigen::Success) throw DomainError("floating Cholesky factorisation failed");
  const Matrix<double> l = llt.matrixL();
  mu_ = Matrix<double>::Zero(n_, n_);
  q_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    q_(i) = l(i, i) * l(i, i);
    for (int j = i + 1; j < n_; ++j) mu_(i, j) = l(j, i) / l(i, i);
  }
  const double r = bound.convert_to<double>();
  float_bound_ = r * (1.0 + 1e-8) + 1e-12;
}

}  // namespace dz
