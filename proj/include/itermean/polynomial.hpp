#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace itermean {

/// Real polynomial with coefficients stored constant-term first, so that
/// coeffs()[i] multiplies r^i. Trailing zeros are stripped on construction;
/// the zero polynomial is represented by the single coefficient {0}.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  /// Monic polynomial with the given real roots.
  static Polynomial from_roots(std::span<const double> roots);

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  double leading() const noexcept { return coeffs_.back(); }
  double operator[](int i) const noexcept {
    return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : 0.0;
  }

  /// max_i |coeffs[i]|
  double max_abs_coeff() const noexcept;

  /// Horner evaluation.
  double operator()(double r) const noexcept;
  std::complex<double> operator()(std::complex<double> z) const noexcept;

  /// sum_i |coeffs[i]| |r|^i, the natural scale for rounding error of p(r).
  double magnitude_at(double abs_r) const noexcept;

  Polynomial derivative() const;
  Polynomial operator-() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void normalize();
  std::vector<double> coeffs_;
};

struct ComplexRoot {
  double re = 0.0;
  double im = 0.0;
  int multiplicity = 1;
  double modulus = 0.0;

  ComplexRoot() = default;
  ComplexRoot(double re_, double im_, int mult = 1);

  bool is_real() const noexcept { return im == 0.0; }
  std::complex<double> value() const noexcept { return {re, im}; }
};

struct Division {
  Polynomial quotient;
  Polynomial remainder;
};

constexpr double kDefaultResidualTol = 1e-12;
constexpr double kDefaultBisectTol = 1e-10;

double eval(const Polynomial& p, double r);

/// p(r) * (r - root_shift).
Polynomial multiply_linear(const Polynomial& p, double root_shift);

/// Synthetic division by (r - root); the remainder equals p(root).
Division divide_linear(const Polynomial& p, double root);

/// Quotient of p by (r - root). Throws RootMismatch when
/// |p(root)| > tol * max|coeffs|.
Polynomial deflate(const Polynomial& p, double root, double tol = kDefaultResidualTol);

/// Long division p = q*d + rem with deg rem < deg d.
Division divide(const Polynomial& p, const Polynomial& d);

/// True when d divides p up to a remainder of at most tol * max|coeffs(p)|.
bool divides(const Polynomial& d, const Polynomial& p, double tol = 1e-10);

/// Bisection on a sign-changing bracket. Throws NoSignChange when
/// p(lo) p(hi) >= 0 and NonConvergence when max_iter halvings do not bring
/// the bracket width below 2*tol.
double bisect_root(const Polynomial& p, double lo, double hi,
                   double tol = kDefaultBisectTol, int max_iter = 400);

/// All complex roots by Aberth-Ehrlich simultaneous iteration.
///
/// Starting points lie on a circle of radius 1 + max|c_i / c_deg|. Each
/// converged root z must satisfy |p(z)| <= tol * max(max|c_i|, sum|c_i||z|^i).
/// Roots closer than 10*tol (relative) are merged; wider clusters are merged
/// only when p and its first m-1 derivatives vanish at the cluster mean.
/// Non-real roots are returned in exact conjugate pairs, sorted by (re, im).
std::vector<ComplexRoot> all_roots(const Polynomial& p, double tol = kDefaultResidualTol);

}  // namespace itermean
