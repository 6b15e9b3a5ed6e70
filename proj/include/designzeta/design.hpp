#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "designzeta/lattice.hpp"
#include "designzeta/shells.hpp"

namespace dz {

/// Monomials x^e of total degree p in d variables, ordered recursively by the
/// exponent of the last variable (then the same order on the rest).
class MonomialIndex {
 public:
  MonomialIndex(int dim, int max_degree);

  int dim() const { return n_; }
  std::size_t size(int d, int p) const;
  /// Offset of the block with x_{d-1}^r inside the (d, p) layout.
  std::size_t block_offset(int d, int p, int r) const;
  std::size_t rank(const std::vector<int>& exponents) const;
  std::vector<std::vector<int>> exponents(int p) const;

 private:
  int n_;
  int t_;
  std::vector<std::size_t> size_;  // (d, p) -> count, d in 0..n
};

/// Fully symmetric tensor sum_x x^{(x) t}, stored once per monomial: the entry
/// for exponents e equals sum_x prod_i x_i^{e_i}.
struct MomentTensor {
  int dim = 0;
  int degree = 0;
  std::vector<Integer> entries;

  const Integer& at(const std::vector<int>& exponents) const;
};

/// Direct accumulation over explicit vectors (rows).
MomentTensor moment_tensor(const IntMatrix& vectors, int degree);

/// Contracts two indices against the symmetric matrix a.
std::vector<Rational> contract_twice(const MomentTensor& t, const RationalMatrix& a);

struct DesignVerdict {
  int t = 0;
  bool pass = false;
  /// Max-norm of sum x^{(x)t} - c Sym(G^{(x)t/2}), G = gram^{-1}; 0 iff pass.
  Rational defect;
};

/// Exact check that sum_x (x'Au)^t = c (u'Au)^{t/2} identically in u.
/// t in {2, 4, 6}; the shell vectors must all have the stated norm.
DesignVerdict is_t_design(const Shell& shell, const GramMatrix& gram, int t);

/// The same decision through the scalar identity evaluated at a unisolvent
/// set of integer probes u (all exponent vectors of degree t).
bool probe_design_check(const Shell& shell, const GramMatrix& gram, int t);

/// Target tensor c * sum over perfect matchings of prod G_{pair}, c =
/// a m^{t/2} / (n (n+2) ... (n+t-2)).
std::vector<Rational> design_target(const GramMatrix& gram, std::uint64_t cardinality, const Rational& norm,
                                    int t);

struct DesignCertificate {
  int shell = 0;
  Rational norm;
  std::uint64_t cardinality = 0;
  /// Largest t with every even t' <= t passing (0 if t = 2 fails).
  int strength = 0;
  std::vector<DesignVerdict> checks;  // t = 2, 4, ..., t_max
  /// Smallest failing t and its defect, if any.
  std::optional<DesignVerdict> first_failure;
};

struct CertificationReport {
  std::string lattice;
  int depth = 0;
  int t_max = 0;
  std::vector<DesignCertificate> shells;
  bool all_2_design = false;
  bool all_4_design = false;
  bool all_6_design = false;
  /// Verdicts are evidence for shells 1..depth only.
  std::string scope_note;
};

struct CertificationOptions {
  std::uint64_t budget = 2'000'000'000;
  unsigned threads = 1;
  /// Moment tensors from the streaming tree (true) or from materialised
  /// shells (false).
  bool streaming = true;
};

/// Certificates for shells 1..depth of the exact Gram of l.
CertificationReport certify_lattice(const Lattice& l, int depth, int t_max, const CertificationOptions& opts = {});

/// Moments of all vectors with 0 < A[x] <= bound, degrees 0..t_max (both
/// signs), accumulated on the enumeration tree without storing vectors.
std::vector<MomentTensor> cumulative_moments(const GramMatrix& gram, const Rational& bound, int t_max,
                                             const CertificationOptions& opts = {});

struct StrongCriticality {
  bool strongly_critical = false;
  int depth = 0;
  std::string scope_note;
};

StrongCriticality strongly_critical(const Lattice& l, int depth);

struct SeriesIdentityResult {
  double s = 0;
  double lhs = 0;
  double rhs = 0;
  double residual = 0;
  double bound = 0;
  bool within_bound = false;
};

/// sum_x H[x]^2 / A[x]^{s+2} against zeta(A,s)/(n(n+2)) ((Tr GH)^2 + 2 Tr (GH)^2)
/// with H a symmetric form in lattice coordinates. Requires s > n/2 and
/// passing 4-design certificates up to depth (PreconditionError otherwise,
/// unless require_designs is false).
SeriesIdentityResult series_identity_check(const Lattice& l, double s, const Matrix<double>& h, int depth,
                                           bool require_designs = true);

/// Structured text document: one record per (shell, t).
std::string to_certificate_document(const CertificationReport& r);

}  // namespace dz
