#include "designzeta/shells.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>

#include "designzeta/enumerator.hpp"
#include "designzeta/errors.hpp"

namespace dz {

namespace {

class BudgetCounter {
 public:
  explicit BudgetCounter(std::uint64_t budget) : budget_(budget), used_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

  void charge() {
    if (++pending_ == 4096) flush();
  }
  void flush() {
    const auto total = used_->fetch_add(pending_) + pending_;
    pending_ = 0;
    if (2 * total > budget_)
      throw ResourceError("enumeration exceeded the vector budget of " + std::to_string(budget_));
  }

 private:
  std::uint64_t budget_;
  std::shared_ptr<std::atomic<std::uint64_t>> used_;
  std::uint64_t pending_ = 0;
};

class CountVisitor {
 public:
  CountVisitor(std::int64_t bound, std::uint64_t budget) : budget_(budget) {
    if (bound < (1 << 22)) dense_.assign(static_cast<std::size_t>(bound) + 1, 0);
  }

  void begin(int) {}
  void end(int, std::int64_t) {}
  void leaf(const std::int64_t*, std::int64_t norm, const double*) {
    budget_.charge();
    if (!dense_.empty())
      ++dense_[static_cast<std::size_t>(norm)];
    else
      ++sparse_[norm];
  }
  void merge(CountVisitor&& o) {
    for (std::size_t i = 0; i < dense_.size(); ++i) dense_[i] += o.dense_[i];
    for (auto [k, v] : o.sparse_) sparse_[k] += v;
  }
  void finish() { budget_.flush(); }

  std::map<std::int64_t, std::uint64_t> counts() const {
    std::map<std::int64_t, std::uint64_t> out = sparse_;
    for (std::size_t i = 0; i < dense_.size(); ++i)
      if (dense_[i]) out[static_cast<std::int64_t>(i)] += dense_[i];
    return out;
  }

 private:
  BudgetCounter budget_;
  std::vector<std::uint64_t> dense_;
  std::map<std::int64_t, std::uint64_t> sparse_;
};

class CollectVisitor {
 public:
  CollectVisitor(const EnumerationSpace& space, std::uint64_t budget, std::uint64_t max_stored)
      : space_(&space), n_(space.dim()), budget_(budget), max_stored_(max_stored), buf_(static_cast<std::size_t>(n_)) {}

  void begin(int) {}
  void end(int, std::int64_t) {}
  void leaf(const std::int64_t* x, std::int64_t norm, const double*) {
    budget_.charge();
    auto& rec = shells_[norm];
    ++rec.half_count;
    if (2 * rec.half_count > max_stored_) return;
    space_->to_input(x, buf_.data());
    rec.coords.insert(rec.coords.end(), buf_.begin(), buf_.end());
  }
  void merge(CollectVisitor&& o) {
    for (auto& [norm, rec] : o.shells_) {
      auto& mine = shells_[norm];
      mine.half_count += rec.half_count;
      mine.coords.insert(mine.coords.end(), rec.coords.begin(), rec.coords.end());
    }
  }
  void finish() { budget_.flush(); }

  struct Record {
    std::uint64_t half_count = 0;
    std::vector<std::int64_t> coords;
  };
  std::map<std::int64_t, Record>& shells() { return shells_; }

 private:
  const EnumerationSpace* space_;
  int n_;
  BudgetCounter budget_;
  std::uint64_t max_stored_;
  std::vector<std::int64_t> buf_;
  std::map<std::int64_t, Record> shells_;
};

IntMatrix expand_and_sort(const std::vector<std::int64_t>& half, int n) {
  const std::size_t m = half.size() / static_cast<std::size_t>(n);
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(2 * m);
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<std::int64_t> v(half.begin() + static_cast<std::ptrdiff_t>(r * n),
                                half.begin() + static_cast<std::ptrdiff_t>((r + 1) * n));
    rows.push_back(v);
    for (auto& c : v) c = -c;
    rows.push_back(std::move(v));
  }
  std::sort(rows.begin(), rows.end());
  IntMatrix out(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < n; ++j) out(static_cast<Eigen::Index>(r), j) = rows[r][static_cast<std::size_t>(j)];
  return out;
}

Rational rational_scale(const Lattice& l) {
  if (!l.scale().is_rational())
    throw DomainError("lattice '" + l.name() + "' carries a symbolic scale; enumerate its exact Gram instead");
  return l.scale().coefficient;
}

ShellList rescale_shells(ShellList shells, const Rational& factor) {
  for (auto& s : shells) s.norm *= factor;
  return shells;
}

}  // namespace

namespace {

std::string gram_key(const GramMatrix& g) {
  std::string key;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j <= i; ++j) key += to_string(g(i, j)) + ',';
  return key;
}

struct CountCache {
  std::mutex mutex;
  // Gram -> (bound, counts of all shells up to bound)
  std::map<std::string, std::pair<Rational, std::vector<std::pair<Rational, std::uint64_t>>>> entries;
};

CountCache& count_cache() {
  static CountCache cache;
  return cache;
}

std::optional<std::vector<std::pair<Rational, std::uint64_t>>> cached_counts(const std::string& key,
                                                                             const Rational& bound) {
  auto& cache = count_cache();
  std::lock_guard lock(cache.mutex);
  const auto it = cache.entries.find(key);
  if (it == cache.entries.end() || it->second.first < bound) return std::nullopt;
  std::vector<std::pair<Rational, std::uint64_t>> out;
  for (const auto& c : it->second.second)
    if (c.first <= bound) out.push_back(c);
  return out;
}

}  // namespace

std::vector<std::pair<Rational, std::uint64_t>> shell_counts(const GramMatrix& gram, const Rational& bound,
                                                             const EnumerationOptions& opts) {
  if (bound <= 0) throw DomainError("enumeration bound must be positive");
  const std::string key = gram_key(gram);
  if (auto hit = cached_counts(key, bound)) return *hit;
  // An integral unimodular form and its inverse have the same shells (x -> Ax
  // is a bijection of Z^n carrying one norm to the other).
  if (gram.det() == 1 && gram.integral()) {
    const GramMatrix inv = gram.inverse();
    if (inv.integral())
      if (auto hit = cached_counts(gram_key(inv), bound)) return *hit;
  }
  const EnumerationSpace space(gram, bound);
  CountVisitor v(space.bound(), opts.budget);
  Enumerator<CountVisitor> e(space);
  e.run(v, opts.threads);
  v.finish();
  std::vector<std::pair<Rational, std::uint64_t>> out;
  for (auto [norm, half] : v.counts()) out.emplace_back(space.norm_of(norm), 2 * half);
  auto& cache = count_cache();
  std::lock_guard lock(cache.mutex);
  auto& slot = cache.entries[key];
  if (slot.second.empty() || slot.first < bound) slot = {bound, out};
  return out;
}

ShellList enumerate_shells(const GramMatrix& gram, const Rational& bound, const EnumerationOptions& opts) {
  const EnumerationSpace space(gram, bound);
  const int n = gram.dim();
  ShellList out;
  if (!opts.keep_vectors) {
    int k = 0;
    for (auto& [norm, count] : shell_counts(gram, bound, opts)) out.push_back({++k, norm, count, IntMatrix()});
    return out;
  }
  CollectVisitor v(space, opts.budget, opts.max_stored_per_shell);
  Enumerator<CollectVisitor> e(space);
  e.run(v, opts.threads);
  v.finish();
  int k = 0;
  for (auto& [norm, rec] : v.shells()) {
    Shell s{++k, space.norm_of(norm), 2 * rec.half_count, IntMatrix()};
    if (2 * rec.half_count <= opts.max_stored_per_shell) s.vectors = expand_and_sort(rec.coords, n);
    std::vector<std::int64_t>().swap(rec.coords);
    out.push_back(std::move(s));
  }
  return out;
}

ShellList enumerate_shells(const Lattice& l, const Rational& bound, const EnumerationOptions& opts) {
  const Rational c = rational_scale(l);
  return rescale_shells(enumerate_shells(l.gram(), bound / c, opts), c);
}

Rational norm_step(const GramMatrix& gram) {
  // g = gcd(A_ii, 2 A_ij) of the integral form.
  const Integer den = gram.denominator();
  Integer g = 0;
  for (int i = 0; i < gram.dim(); ++i)
    for (int j = 0; j <= i; ++j) {
      const Integer e = mp::numerator(gram(i, j) * Rational(den));
      g = mp::gcd(g, i == j ? e : Integer(2 * e));
    }
  return Rational(g) / Rational(den);
}

Rational bound_for_shells(const GramMatrix& gram, int k, const EnumerationOptions& opts) {
  if (k < 1) throw DomainError("shell count must be >= 1");
  const int n = gram.dim();
  const Rational step = norm_step(gram);
  Rational r = gram(0, 0);
  for (int i = 1; i < n; ++i) r = std::min(r, gram(i, i));
  for (;;) {
    const auto counts = shell_counts(gram, r, opts);
    if (static_cast<int>(counts.size()) >= k) return counts[static_cast<std::size_t>(k - 1)].first;
    r = std::max(r + step, r * Rational(2 * n + 1, 2 * n));
  }
}

ShellList first_k_shells(const GramMatrix& gram, int k, const EnumerationOptions& opts) {
  ShellList shells = enumerate_shells(gram, bound_for_shells(gram, k, opts), opts);
  shells.resize(static_cast<std::size_t>(k));
  return shells;
}

ShellList first_k_shells(const Lattice& l, int k, const EnumerationOptions& opts) {
  const Rational c = rational_scale(l);
  return rescale_shells(first_k_shells(l.gram(), k, opts), c);
}

Rational min_norm(const Lattice& l) {
  EnumerationOptions opts;
  opts.keep_vectors = false;
  return first_k_shells(l, 1, opts).front().norm;
}

std::uint64_t kissing(const Lattice& l) {
  EnumerationOptions opts;
  opts.keep_vectors = false;
  return first_k_shells(l, 1, opts).front().cardinality;
}

void write_shell_dump(std::ostream& os, const std::string& lattice_name, const ShellList& shells,
                      bool include_vectors) {
  os << "# shells of " << lattice_name << "\n# k m_k a_k\n";
  for (const auto& s : shells) {
    os << s.index << ' ' << to_string(s.norm) << ' ' << s.cardinality << '\n';
    if (!include_vectors) continue;
    for (Eigen::Index r = 0; r < s.vectors.rows(); ++r) {
      os << "  ";
      for (Eigen::Index j = 0; j < s.vectors.cols(); ++j) os << (j ? " " : "") << s.vectors(r, j);
      os << '\n';
    }
  }
}

}  // namespace dz
