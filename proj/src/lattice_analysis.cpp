#include "designzeta/errors.hpp"
#include "designzeta/exact.hpp"
#include "designzeta/lattice.hpp"
#include "designzeta/shells.hpp"

namespace dz {

PerfectionReport is_perfect(const Lattice& l) {
  const int n = l.dim();
  EnumerationOptions opts;
  opts.max_stored_per_shell = 50'000'000;
  const Shell first = first_k_shells(l.gram(), 1, opts).front();
  PerfectionReport r;
  r.required = static_cast<std::size_t>(n * (n + 1) / 2);
  r.minimal_vectors = first.cardinality;
  exact::RankAccumulator acc(r.required);
  // x and -x give the same xx'; every other row suffices after the sort.
  for (Eigen::Index row = 0; row < first.vectors.rows() && !acc.full(); ++row) {
    RationalVector v(static_cast<Eigen::Index>(r.required));
    Eigen::Index k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) v(k++) = Rational(first.vectors(row, i) * first.vectors(row, j));
    acc.add(std::move(v));
  }
  r.rank = acc.rank();
  r.perfect = r.rank == r.required;
  return r;
}

ModularReport modular_check(const Lattice& l, int level, int depth) {
  if (level < 1) throw DomainError("modular level must be a positive integer");
  if (depth < 1) throw DomainError("modular check depth must be >= 1");
  if (!l.gram().integral()) throw DomainError("modular check needs an integral Gram matrix");
  const GramMatrix rescaled_dual = l.gram().inverse().scaled(Rational(level));
  EnumerationOptions opts;
  opts.keep_vectors = false;
  opts.budget = 1'000'000'000;
  const ShellList a = first_k_shells(l.gram(), depth, opts);
  const ShellList b = first_k_shells(rescaled_dual, depth, opts);

  ModularReport r;
  r.level = level;
  r.depth = depth;
  r.is_even = l.gram().even();
  while (r.theta_match_depth < depth) {
    const auto k = static_cast<std::size_t>(r.theta_match_depth);
    if (a[k].norm != b[k].norm || a[k].cardinality != b[k].cardinality) break;
    ++r.theta_match_depth;
  }
  r.extremal_bound = modular_extremal_bound(l.dim(), level);
  r.min_norm = a.front().norm;
  r.is_extremal = r.min_norm == Rational(r.extremal_bound);
  return r;
}

}  // namespace dz
