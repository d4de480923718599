#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itermean/polynomial.hpp"

namespace itermean {

/// The pair (n, k) of f^k = (1/(n+1)) sum_{i=0}^{n} f^i.
class CharProblem {
 public:
  /// Throws DomainError unless n >= 2 and 0 <= k <= n.
  CharProblem(int n, int k);

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  bool k_odd() const noexcept { return k_ % 2 != 0; }
  bool n_odd() const noexcept { return n_ % 2 != 0; }
  bool interior() const noexcept { return 0 < k_ && k_ < n_; }

  friend bool operator==(const CharProblem&, const CharProblem&) = default;

 private:
  int n_;
  int k_;
};

enum class CaseLabel { K0, KN, C1, C2, C3, C4, C5, C6, C7, C8, C9, C10 };

std::string_view to_string(CaseLabel label);

struct Bracket {
  double lo;
  double hi;
  bool degenerate() const noexcept { return lo == hi; }
};

struct ExpectedRoot {
  Bracket bracket;
  int multiplicity;
};

struct CaseAnalysis {
  CaseLabel label;
  /// ((k+1)/(n-k+1))^{1/(n-k)}; only for k < n.
  std::optional<double> r_min;
  /// -r_min; only when n-k is even.
  std::optional<double> r_max;
  /// Root 1 first, then the lemma's brackets in the order listed there.
  std::vector<ExpectedRoot> expected_real_roots;
  /// Both parities even with 0 < k < n: the solution problem is unsolved.
  bool open_problem = false;
};

struct RealRoot {
  double value;
  int multiplicity;
  Bracket bracket;
};

struct RootReport {
  CharProblem problem;
  CaseLabel label;
  std::vector<RealRoot> real_roots;
  std::vector<ComplexRoot> complex_roots;
  double max_modulus = 0.0;
  bool bound_2n1_ok = false;
  /// 2n+1 - max modulus over all roots.
  double bound_margin = 0.0;
  /// min ||z| - |r0|| over non-real z and real r0; nullopt when the parity
  /// hypothesis (one of k, n odd) fails, +inf when there are no non-real roots.
  std::optional<double> modulus_separation_min_gap;
  bool expectation_matched = false;
  std::vector<std::string> mismatches;

  int total_multiplicity() const;
  /// Unique real root strictly below zero, if the report has exactly one.
  std::optional<double> negative_root() const;
  /// Unique positive real root other than 1, if the report has exactly one.
  std::optional<double> positive_root_not_one() const;
};

/// (n+1) r^k - sum_{i=0}^{n} r^i with integer coefficients; the r^n
/// coefficient is -1 for k < n and n for k = n.
Polynomial build_char_poly(const CharProblem& prob);

/// G(r) = r^{n+1} - (n+1) r^k (r - 1) - 1, which equals (1 - r) times the
/// characteristic polynomial. Requires 0 < k < n.
Polynomial build_G(const CharProblem& prob);

/// g(r) = r^{n-k+1} - (k+1) r + k, with G' = (n+1) r^{k-1} g. Requires 0 < k < n.
Polynomial build_g(const CharProblem& prob);

CaseAnalysis classify(const CharProblem& prob);

/// Multiplicity of root 1 in the characteristic polynomial (2 iff n = 2k).
int root_one_multiplicity(const CharProblem& prob);

/// Deflates root 1 symbolically, bisects every expected bracket, computes
/// the remaining complex spectrum and checks the count, bound and
/// separation claims. Mismatches are recorded in the report; a bracket
/// without a sign change throws BracketFailure.
RootReport analyze_roots(const CharProblem& prob, double tol = kDefaultResidualTol);

}  // namespace itermean
