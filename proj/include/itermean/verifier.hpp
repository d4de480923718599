#pragma once

#include <optional>
#include <vector>

#include "itermean/charspec.hpp"
#include "itermean/families.hpp"
#include "itermean/meanframe.hpp"
#include "itermean/polynomial.hpp"

namespace itermean {

/// Iterates x_m = f(x_{m-1}), extended backwards by x_{-m} = f^{-1}(x_{-m+1}).
struct Orbit {
  double x0 = 0.0;
  /// Index of points.front(); <= 0.
  int m_lo = 0;
  std::vector<double> points;
  bool escaped = false;
  /// First index that could not be computed inside the domain.
  std::optional<int> escape_index;

  int m_hi() const noexcept { return m_lo + static_cast<int>(points.size()) - 1; }
  double at(int m) const { return points.at(static_cast<std::size_t>(m - m_lo)); }
  /// Forward part x_0, x_1, ...
  std::vector<double> forward() const;
};

/// Throws DomainError if x0 is outside the domain. Iteration stops (with the
/// escape flag set) at the first iterate that leaves the domain or, going
/// backwards, the image.
Orbit iterate(const SolutionSpec& s, double x0, int m_lo, int m_hi);

/// (-1)^m (x_m - x_{m-1}) keeps one sign (zeros allowed) over the orbit.
bool is_anti_monotone(const Orbit& orbit);
/// x_m - x_{m-1} keeps one sign (zeros allowed) over the orbit.
bool is_monotone(const Orbit& orbit);

struct VerifyReport {
  double max_residual = 0.0;
  bool pass = false;
  int points_evaluated = 0;
  int points_escaped = 0;
  /// 1 + max |f^i(x)| over evaluated points; the residual is judged against tol * scale.
  double scale = 1.0;
};

constexpr int kDefaultSamples = 1000;
constexpr double kDefaultVerifyTol = 1e-9;
/// Minimum fraction of grid points that must stay in the domain.
constexpr double kMinEvaluatedFraction = 0.9;

/// Uniform grid over [max(lo,-10), min(hi,10)]; open endpoints are pulled
/// inward by 1e-6 of the window width.
std::vector<double> verification_grid(const Interval& domain, int samples);

/// Residual of f^k = (1/(n+1)) sum_{i=0}^{n} f^i.
VerifyReport verify_mean(const SolutionSpec& s, const CharProblem& prob, int samples = kDefaultSamples,
                         double tol = kDefaultVerifyTol);

/// Residual of F^k = M(x, F, ..., F^n) with M the quasi-arithmetic mean of gen.
/// gen is applied on F's domain, which must lie in the generator's domain.
VerifyReport verify_general(const SolutionSpec& F, const Generator& gen, const CharProblem& prob,
                            int samples = kDefaultSamples, double tol = kDefaultVerifyTol);

/// Residual of sum_i a_i f^i(x) = 0, normalised by max |a_i|.
VerifyReport verify_polynomial(const SolutionSpec& s, const Polynomial& coeffs, int samples = kDefaultSamples,
                               double tol = kDefaultVerifyTol);

struct DualReport {
  VerifyReport primal;
  /// sum_i a_i g^{n-i} = 0 for g = f^{-1}.
  VerifyReport dual;
  bool consistent = false;
};

/// Throws NotInvertible unless s is a bijection of its domain.
DualReport verify_dual(const SolutionSpec& s, const Polynomial& coeffs, int samples = kDefaultSamples,
                       double tol = kDefaultVerifyTol);

/// Residual of f^2 - (1+rho) f + rho x.
VerifyReport verify_second_order(const SolutionSpec& s, double rho, int samples = kDefaultSamples,
                                 double tol = kDefaultVerifyTol);

/// Residual of M(f^m, f^{2m}, ..., f^{nm}) = x with M the mean of gen; with
/// the identity generator and m = 1 this is the k = 0 equation.
VerifyReport verify_iterate_mean(const SolutionSpec& s, const Generator& gen, int m, int n,
                                 int samples = kDefaultSamples, double tol = kDefaultVerifyTol);

}  // namespace itermean
