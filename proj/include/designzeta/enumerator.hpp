#pragma once

// Fincke-Pohst style enumeration of integer vectors x with A[x] <= R for an
// exact Gram matrix A. A floating Cholesky factor prunes the search tree; the
// norm of every candidate is recomputed in exact integer arithmetic (A scaled
// to an integral form) and only exact comparisons decide membership.
//
// Only one vector of each pair {x, -x} is visited: the one whose highest
// nonzero coordinate is positive.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "designzeta/errors.hpp"
#include "designzeta/lattice.hpp"

namespace dz {

/// Integral rescaling of a Gram matrix together with its pruning data.
class EnumerationSpace {
 public:
  /// Vectors with gram[x] <= bound. bound > 0. With reduce set, the search
  /// runs in an LLL-reduced basis; visitors then see coordinates y in that
  /// basis, related to the input coordinates by x = basis() * y.
  EnumerationSpace(const GramMatrix& gram, const Rational& bound, bool reduce = true);

  int dim() const { return n_; }
  /// U' (gram * denominator()) U with U = basis(); integral.
  const IntMatrix& form() const { return form_; }
  /// Unimodular change of basis U (identity without reduction).
  const IntMatrix& basis() const { return basis_; }
  bool reduced() const { return reduced_; }
  void to_input(const std::int64_t* y, std::int64_t* x) const {
    for (int i = 0; i < n_; ++i) {
      std::int64_t acc = 0;
      for (int j = 0; j < n_; ++j) acc += basis_(i, j) * y[j];
      x[i] = acc;
    }
  }
  const Integer& denominator() const { return den_; }
  /// floor(bound * denominator()).
  std::int64_t bound() const { return bound_; }
  const Rational& rational_bound() const { return rational_bound_; }

  /// Exact norm (in gram units) of an integral scaled norm value.
  Rational norm_of(std::int64_t scaled) const { return Rational(scaled) / Rational(den_); }

  /// Upper bound on |y_i| over all enumerated vectors.
  std::int64_t coordinate_bound() const { return coord_bound_; }

  // Pruning data: A = sum_i q_i (x_i + sum_{j>i} mu(i,j) x_j)^2.
  const Matrix<double>& mu() const { return mu_; }
  const Vector<double>& q() const { return q_; }
  double float_bound() const { return float_bound_; }

 private:
  int n_;
  IntMatrix form_;
  IntMatrix basis_;
  bool reduced_ = false;
  Integer den_;
  std::int64_t bound_;
  Rational rational_bound_;
  std::int64_t coord_bound_;
  Matrix<double> mu_;
  Vector<double> q_;
  double float_bound_;
};

/// Extra real quadratic forms (in input coordinates) evaluated alongside the
/// exact norm, e.g. perturbations of the Gram matrix. Values are passed to
/// Visitor::leaf.
struct RealForms {
  std::vector<Matrix<double>> forms;
  std::size_t size() const { return forms.size(); }
};

/// Visitor protocol (all members required, empty bodies are fine):
///   void begin(int level)               -- a fresh subtree over coordinates 0..level starts
///   void end(int level, int64 value)    -- that subtree is finished; coordinate level+1 holds value
///   void leaf(const int64* y, int64 scaled_norm, const double* form_values)
///   void merge(Visitor&& other)         -- add the results of a disjoint part of the tree
/// Coordinates y are in the enumeration basis (see EnumerationSpace::basis).
template <class Visitor>
class Enumerator {
 public:
  Enumerator(const EnumerationSpace& space, const RealForms* forms = nullptr)
      : s_(space), forms_(forms), n_(space.dim()), f_(forms ? forms->size() : 0) {
    const auto n = static_cast<std::size_t>(n_);
    x_.assign(n, 0);
    xd_.assign(n, 0.0);
    sig_.assign(n * (n + 1), 0.0);
    isig_.assign(n * (n + 1), 0);
    fsig_.assign(f_ * n * (n + 1), 0.0);
    fform_.assign(f_ * n * n, 0.0);
    fpart_.assign((n + 1) * std::max<std::size_t>(f_, 1), 0.0);
    fvals_.assign(std::max<std::size_t>(f_, 1), 0.0);
    stale_.assign(n, n_ - 1);
    const Matrix<double> u = s_.basis().cast<double>();
    for (std::size_t f = 0; f < f_; ++f) {
      const Matrix<double> m = u.transpose() * forms->forms[f] * u;
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) fform_[(f * n + static_cast<std::size_t>(i)) * n + static_cast<std::size_t>(j)] = m(i, j);
    }
  }

  /// Visits the whole half-space of vectors. With threads > 1 the tree is
  /// split on its two top coordinates; partial results are merged in a fixed
  /// order so the outcome does not depend on the thread count.
  void run(Visitor& visitor, unsigned threads = 1) {
    const int split = std::min(2, n_ - 1);
    if (split <= 0 || threads <= 1) {
      visitor_ = &visitor;
      forced_.clear();
      visitor.begin(n_ - 1);
      recurse(n_ - 1, 0.0, 0, true);
      return;
    }
    // Collect top prefixes, then process each as an independent task.
    prefixes_.clear();
    collecting_ = true;
    split_level_ = n_ - split;
    Visitor probe = visitor;
    visitor_ = &probe;
    recurse(n_ - 1, 0.0, 0, true);
    collecting_ = false;
    auto prefixes = prefixes_;

    std::vector<Visitor> parts(prefixes.size(), visitor);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
      try {
        for (std::size_t t = next++; t < prefixes.size(); t = next++) {
          Enumerator local(s_, forms_);
          local.visitor_ = &parts[t];
          local.forced_ = prefixes[t];
          parts[t].begin(n_ - 1);
          local.recurse(n_ - 1, 0.0, 0, true);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = prefixes.size();
      }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    for (auto& p : parts) visitor.merge(std::move(p));
  }

 private:
  std::size_t at(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(j);
  }

  // Brings row i of the partial sums up to date with the current x.
  void refresh(int i) {
    const auto& mu = s_.mu();
    const auto& form = s_.form();
    const auto n = static_cast<std::size_t>(n_);
    for (int j = stale_[static_cast<std::size_t>(i)]; j > i; --j) {
      const std::int64_t xj = x_[static_cast<std::size_t>(j)];
      const double xd = xd_[static_cast<std::size_t>(j)];
      sig_[at(i, j)] = sig_[at(i, j + 1)] + mu(i, j) * xd;
      isig_[at(i, j)] = isig_[at(i, j + 1)] + form(i, j) * xj;
      for (std::size_t f = 0; f < f_; ++f)
        fsig_[f * n * (n + 1) + at(i, j)] =
            fsig_[f * n * (n + 1) + at(i, j + 1)] + fform_[(f * n + static_cast<std::size_t>(i)) * n + static_cast<std::size_t>(j)] * xd;
    }
    stale_[static_cast<std::size_t>(i)] = i;
  }

  void touch(int k) {
    if (k > 0) stale_[static_cast<std::size_t>(k - 1)] = std::max(stale_[static_cast<std::size_t>(k - 1)], k);
  }

  // Row k of the partial sums must be current on entry.
  void recurse(int k, double partial, std::int64_t exact_partial, bool zero_suffix) {
    const auto n = static_cast<std::size_t>(n_);
    const double c = -sig_[at(k, k + 1)];
    const std::int64_t cross = isig_[at(k, k + 1)];
    const double r2 = (s_.float_bound() - partial) / s_.q()(k);
    if (r2 < 0) return;
    const double r = std::sqrt(r2);
    std::int64_t lo = static_cast<std::int64_t>(std::ceil(c - r));
    std::int64_t hi = static_cast<std::int64_t>(std::floor(c + r));
    if (zero_suffix) lo = std::max<std::int64_t>(lo, k == 0 ? 1 : 0);

    if (!forced_.empty() && k >= n_ - static_cast<int>(forced_.size())) {
      const std::int64_t v = forced_[static_cast<std::size_t>(n_ - 1 - k)];
      if (v < lo || v > hi) return;
      lo = hi = v;
    }
    if (lo > hi) return;

    const std::size_t fw = std::max<std::size_t>(f_, 1);
    const std::size_t level_off = static_cast<std::size_t>(k) * fw;
    const std::size_t parent_off = static_cast<std::size_t>(k + 1) * fw;
    const std::int64_t akk = s_.form()(k, k);
    for (std::int64_t xi = lo; xi <= hi; ++xi) {
      x_[static_cast<std::size_t>(k)] = xi;
      const double xid = static_cast<double>(xi);
      xd_[static_cast<std::size_t>(k)] = xid;
      const std::int64_t norm = exact_partial + akk * xi * xi + 2 * xi * cross;
      for (std::size_t f = 0; f < f_; ++f) {
        const double fkk = fform_[(f * n + static_cast<std::size_t>(k)) * n + static_cast<std::size_t>(k)];
        fpart_[level_off + f] = fpart_[parent_off + f] + fkk * xid * xid + 2.0 * xid * fsig_[f * n * (n + 1) + at(k, k + 1)];
      }
      if (k == 0) {
        if (norm > 0 && norm <= s_.bound()) {
          for (std::size_t f = 0; f < f_; ++f) fvals_[f] = fpart_[level_off + f];
          visitor_->leaf(x_.data(), norm, fvals_.data());
        }
        continue;
      }
      touch(k);
      if (collecting_ && k == split_level_) {
        prefixes_.emplace_back(x_.rbegin(), x_.rbegin() + (n_ - k));
        continue;
      }
      const double d = xid - c;
      const double next_partial = partial + s_.q()(k) * d * d;
      if (k >= 2)
        stale_[static_cast<std::size_t>(k - 2)] =
            std::max(stale_[static_cast<std::size_t>(k - 2)], stale_[static_cast<std::size_t>(k - 1)]);
      refresh(k - 1);
      visitor_->begin(k - 1);
      recurse(k - 1, next_partial, norm, zero_suffix && xi == 0);
      visitor_->end(k - 1, xi);
    }
    x_[static_cast<std::size_t>(k)] = 0;
    xd_[static_cast<std::size_t>(k)] = 0.0;
    touch(k);
  }

  const EnumerationSpace& s_;
  const RealForms* forms_;
  int n_;
  std::size_t f_;
  Visitor* visitor_ = nullptr;
  std::vector<std::int64_t> x_;
  std::vector<double> xd_;
  std::vector<double> sig_;
  std::vector<std::int64_t> isig_;
  std::vector<double> fsig_;
  std::vector<double> fform_;
  std::vector<double> fpart_;
  std::vector<double> fvals_;
  std::vector<int> stale_;
  std::vector<std::int64_t> forced_;
  bool collecting_ = false;
  int split_level_ = -1;
  std::vector<std::vector<std::int64_t>> prefixes_;
};

}  // namespace dz
