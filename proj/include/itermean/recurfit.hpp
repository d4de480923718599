#pragma once

#include <vector>

#include "itermean/charspec.hpp"
#include "itermean/families.hpp"
#include "itermean/polynomial.hpp"
#include "itermean/verifier.hpp"

namespace itermean {

/// Distinct characteristic roots with multiplicities; non-real roots are
/// listed once per conjugate pair with im > 0.
struct Spectrum {
  struct Real {
    double lambda;
    int multiplicity;
  };
  struct Pair {
    double modulus;
    /// Argument in (0, pi).
    double argument;
    int multiplicity;
  };
  std::vector<Real> real;
  std::vector<Pair> pairs;

  /// sum of multiplicities, counting each pair twice.
  int degree() const;

  static Spectrum from_roots(const std::vector<ComplexRoot>& roots);
  static Spectrum from_report(const RootReport& report);
};

/// x_j = sum A_k(j) lambda_k^j + sum (B_k(j) cos j phi_k + C_k(j) sin j phi_k) |mu_k|^j,
/// polynomial coefficients stored constant term first.
struct ClosedForm {
  struct RealTerm {
    double lambda;
    std::vector<double> poly_coeffs;
  };
  struct ComplexTerm {
    double modulus;
    double argument;
    std::vector<double> cos_poly;
    std::vector<double> sin_poly;
  };
  std::vector<RealTerm> real_terms;
  std::vector<ComplexTerm> complex_terms;

  int parameter_count() const;
};

struct RecurrenceReport {
  double max_residual = 0.0;
  bool pass = false;
  int windows = 0;
};

/// max over windows of |sum a_i x_{m+i}| / (max|a_i| (1 + max_i |x_{m+i}|)).
/// Throws TooShort when the orbit has fewer than degree + 1 points.
RecurrenceReport check_recurrence(const Orbit& orbit, const Polynomial& coeffs, double tol = 1e-9);

constexpr double kConditionLimit = 1e12;

/// Solves the generalized Vandermonde system matching x_0 .. x_{D-1} where
/// D = spectrum.degree(). Columns are scaled to unit max-norm before the
/// condition estimate; a condition number above 1e12 throws SingularSystem,
/// as does an orbit with fewer than D forward points.
ClosedForm fit_closed_form(const std::vector<double>& forward_values, const Spectrum& spectrum);
ClosedForm fit_closed_form(const Orbit& orbit, const Spectrum& spectrum);
ClosedForm fit_closed_form(const Orbit& orbit, const RootReport& report);

double predict(const ClosedForm& cf, int j);

/// The linear regime an orbit of s stays in: the whole line for affine maps,
/// or one piece of a three-piece map. Throws MixedRegime when the orbit
/// crosses pieces; conjugates have no linear regime and throw as well.
enum class Regime { Linear, BelowA, Middle, AboveB };
Regime single_regime_certificate(const SolutionSpec& s, const Orbit& orbit);

/// Roots governing orbits of s: {1} for the identity, {1 (x2)} for
/// translations, {1, slope} for affine and three-piece maps, {1, -1} for
/// involutions. Throws DomainError for conjugates.
Spectrum family_spectrum(const SolutionSpec& s);

struct PredictionReport {
  ClosedForm fit;
  double anchor_residual = 0.0;
  double max_relative_error = 0.0;
  int held_out = 0;
};

/// Fits on the first D forward points and measures the relative error
/// |predicted - actual| / max(|actual|, 1e-8 max_j |x_j|) at every later index.
PredictionReport fit_and_predict(const Orbit& orbit, const Spectrum& spectrum);

}  // namespace itermean
