#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "itermean/charspec.hpp"
#include "itermean/interval.hpp"
#include "itermean/meanframe.hpp"

namespace itermean {

class SolutionSpec;

enum class FamilyKind { Identity, Translation, Affine, ThreePiece, Involution, Conjugate };

std::string_view to_string(FamilyKind kind);
/// Inverse of to_string; throws ParseError.
FamilyKind family_kind_from_string(std::string_view name);

/// Continuous strictly decreasing branch f0 used to assemble involutions.
class DecreasingBranch {
 public:
  enum class Kind { Reciprocal, Linear, Table };

  /// x -> scale / x on (0, inf); scale > 0.
  static DecreasingBranch reciprocal(double scale);
  /// x -> intercept + slope * x; slope < 0.
  static DecreasingBranch linear(double slope, double intercept);
  /// Piecewise-linear through (xs[i], ys[i]); xs strictly increasing and ys
  /// strictly decreasing, at least two breakpoints.
  static DecreasingBranch table(std::vector<double> xs, std::vector<double> ys);

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return a_; }
  double slope() const noexcept { return a_; }
  double intercept() const noexcept { return b_; }
  const std::vector<double>& xs() const noexcept { return xs_; }
  const std::vector<double>& ys() const noexcept { return ys_; }

  double operator()(double x) const;
  double inverse(double y) const;
  /// Value, or one-sided limit, of the branch as its argument tends to x.
  double limit_toward(double x) const;

 private:
  DecreasingBranch(Kind kind, double a, double b, std::vector<double> xs, std::vector<double> ys);

  Kind kind_;
  double a_;
  double b_;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

struct IdentityForm {};
struct TranslationForm {
  double c;
};
struct AffineForm {
  double slope;
  double c;
};
/// slope*(x-a)+a for x <= a, x on (a,b), slope*(x-b)+b for x >= b.
struct ThreePieceForm {
  double a;
  double b;
  double slope;
};
/// f0 on x <= a, f0^{-1} on x > a.
struct InvolutionForm {
  double a;
  DecreasingBranch f0;
};

enum class ConjugateDirection {
  /// x -> phi^{-1}(inner(phi(x))); inner lives on phi(I).
  Pullback,
  /// y -> phi(inner(phi^{-1}(y))); inner lives on I.
  Pushforward,
};

struct ConjugateForm {
  Generator gen;
  std::shared_ptr<const SolutionSpec> inner;
  ConjugateDirection direction;
};

using SolutionForm =
    std::variant<IdentityForm, TranslationForm, AffineForm, ThreePieceForm, InvolutionForm, ConjugateForm>;

/// An immutable, evaluable and invertible candidate solution on a domain.
class SolutionSpec {
 public:
  static SolutionSpec identity(Interval domain);
  /// Rejects c != 0 when x + c cannot map the domain into itself.
  static SolutionSpec translation(Interval domain, double c);
  /// slope != 0; |slope| > 1 is rejected on bounded domains; the image must
  /// lie in the domain.
  static SolutionSpec affine(Interval domain, double slope, double c);
  /// slope > 0, slope != 1, a <= b in the closure of the domain, image in the domain.
  static SolutionSpec three_piece(Interval domain, double a, double b, double slope);

  const Interval& domain() const noexcept { return domain_; }
  const SolutionForm& form() const noexcept { return form_; }
  FamilyKind family() const noexcept;

  /// Throws DomainError for x outside the domain.
  double operator()(double x) const;
  /// Throws NotSurjective for y outside the image.
  double inverse(double y) const;

  Interval image() const;
  bool decreasing() const;
  /// The image equals the domain.
  bool self_bijective(double rel_tol = 1e-12) const;

 private:
  friend SolutionSpec build_involution(Interval, double, DecreasingBranch, double);
  friend SolutionSpec conjugate(const Generator&, const SolutionSpec&);
  friend SolutionSpec transport(const Generator&, const SolutionSpec&);

  SolutionSpec(Interval domain, SolutionForm form);
  double eval_unchecked(double x) const;
  double invert_unchecked(double y) const;

  Interval domain_;
  SolutionForm form_;
};

double eval_solution(const SolutionSpec& s, double x);
double invert_solution(const SolutionSpec& s, double y);

/// f = f0 on x <= a and f0^{-1} beyond. The domain must be open or closed,
/// a interior, f0(a) = a and f0 -> sup I at inf I (BadAnchor otherwise);
/// f(f(x)) = x is then checked on a 1000-point grid (NotAnInvolution).
SolutionSpec build_involution(Interval domain, double a, DecreasingBranch f0, double tol = 1e-9);

/// F = phi^{-1} o f o phi on gen.domain(); f must live on phi(I) (DomainMismatch).
SolutionSpec conjugate(const Generator& gen, const SolutionSpec& f);
/// f = phi o F o phi^{-1} on phi(I); F must live on gen.domain() (DomainMismatch).
SolutionSpec transport(const Generator& gen, const SolutionSpec& F);

struct FamilyDescriptor {
  FamilyKind kind;
  /// Fixed slope pulled from the characteristic roots; empty for identity
  /// and translation.
  std::optional<double> slope;
  std::vector<std::string> free_params;
  std::string note;
};

enum class FamilyStatus { Ok, OpenProblem };

struct FamilyList {
  FamilyStatus status = FamilyStatus::Ok;
  std::vector<FamilyDescriptor> families;
};

/// Every family of continuous (surjective, for 0 < k < n) solutions on the
/// domain, with slopes taken from analyze_roots. 0 < k < n with both k and n
/// even yields OpenProblem.
FamilyList enumerate_families(const CharProblem& prob, const Interval& domain);

struct SecondOrderProblem {
  double rho;
  Interval domain;
};

/// Families of f^2 - (1+rho) f + rho x = 0; throws DomainError for rho = 0.
FamilyList second_order_families(const SecondOrderProblem& prob);

using ParamMap = std::map<std::string, double>;

/// Concrete member of a family; parameters missing from params fall back to
/// values anchored at domain.anchor(). Keys other than the family's free
/// parameters are ignored.
SolutionSpec instantiate(const FamilyDescriptor& family, const Interval& domain,
                         const ParamMap& params = {});

}  // namespace itermean
