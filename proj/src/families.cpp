#include "itermean/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "itermean/errors.hpp"

namespace itermean {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool near(double a, double b, double tol) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// Limit of x -> slope*x + c at an endpoint; keeps infinities exact.
double affine_at(double slope, double c, double x) {
  if (std::isinf(x)) return (slope > 0.0) == (x > 0.0) ? kInf : -kInf;
  return slope * x + c;
}

double three_piece_raw(const ThreePieceForm& t, double x) {
  if (x <= t.a) return t.slope * (x - t.a) + t.a;
  if (x < t.b) return x;
  return t.slope * (x - t.b) + t.b;
}

void require_image_inside(const Interval& domain, const Interval& image, const char* what) {
  if (!domain.contains_interval(image)) {
    throw DomainError(std::string(what) + ": image " + image.to_string() + " is not inside the domain " +
                      domain.to_string());
  }
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Identity: return "identity";
    case FamilyKind::Translation: return "translation";
    case FamilyKind::Affine: return "affine";
    case FamilyKind::ThreePiece: return "three_piece";
    case FamilyKind::Involution: return "involution";
    case FamilyKind::Conjugate: return "conjugate";
  }
  return "?";
}

FamilyKind family_kind_from_string(std::string_view name) {
  for (auto k : {FamilyKind::Identity, FamilyKind::Translation, FamilyKind::Affine, FamilyKind::ThreePiece,
                 FamilyKind::Involution, FamilyKind::Conjugate}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown family '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// DecreasingBranch

DecreasingBranch::DecreasingBranch(Kind kind, double a, double b, std::vector<double> xs,
                                   std::vector<double> ys)
    : kind_(kind), a_(a), b_(b), xs_(std::move(xs)), ys_(std::move(ys)) {}

DecreasingBranch DecreasingBranch::reciprocal(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("reciprocal branch: scale must be positive");
  return {Kind::Reciprocal, scale, 0.0, {}, {}};
}

DecreasingBranch DecreasingBranch::linear(double slope, double intercept) {
  if (!(slope < 0.0) || !std::isfinite(slope) || !std::isfinite(intercept)) {
    throw DomainError("linear branch: slope must be negative and finite");
  }
  return {Kind::Linear, slope, intercept, {}, {}};
}

DecreasingBranch DecreasingBranch::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw DomainError("table branch: need at least two breakpoints with matching x and y");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw DomainError("table branch: x values must be strictly increasing");
    if (!(ys[i] < ys[i - 1])) throw DomainError("table branch: y values must be strictly decreasing");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw DomainError("table branch: non-finite breakpoint");
  }
  return {Kind::Table, 0.0, 0.0, std::move(xs), std::move(ys)};
}

double DecreasingBranch::operator()(double x) const {
  switch (kind_) {
    case Kind::Reciprocal: return a_ / x;
    case Kind::Linear: return b_ + a_ * x;
    case Kind::Table: {
      if (x < xs_.front() || x > xs_.back()) {
        throw DomainError("table branch: " + num(x) + " outside [" + num(xs_.front()) + ", " +
                          num(xs_.back()) + "]");
      }
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      if (it == xs_.end()) return ys_.back();
      const auto i = static_cast<std::size_t>(it - xs_.begin());
      const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
      return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
    }
  }
  return x;
}

double DecreasingBranch::inverse(double y) const {
  switch (kind_) {
    case Kind::Reciprocal: return a_ / y;
    case Kind::Linear: return (y - b_) / a_;
    case Kind::Table: {
      if (y > ys_.front() || y < ys_.back()) {
        throw DomainError("table branch: " + num(y) + " outside the tabulated range");
      }
      // ys is decreasing: find the first index with ys[i] < y.
      auto it = std::upper_bound(ys_.begin(), ys_.end(), y, std::greater<>());
      if (it == ys_.end()) return xs_.back();
      const auto i = static_cast<std::size_t>(it - ys_.begin());
      if (i == 0) return xs_.front();
      const double t = (y - ys_[i - 1]) / (ys_[i] - ys_[i - 1]);
      return xs_[i - 1] + t * (xs_[i] - xs_[i - 1]);
    }
  }
  return y;
}

double DecreasingBranch::limit_toward(double x) const {
  switch (kind_) {
    case Kind::Reciprocal:
      if (x == 0.0) return kInf;
      if (std::isinf(x)) return 0.0;
      return a_ / x;
    case Kind::Linear: return affine_at(a_, b_, x);
    case Kind::Table: return (*this)(std::clamp(x, xs_.front(), xs_.back()));
  }
  return x;
}

// ---------------------------------------------------------------------------
// SolutionSpec

SolutionSpec::SolutionSpec(Interval domain, SolutionForm form) : domain_(domain), form_(std::move(form)) {}

SolutionSpec SolutionSpec::identity(Interval domain) { return {domain, IdentityForm{}}; }

SolutionSpec SolutionSpec::translation(Interval domain, double c) {
  if (!std::isfinite(c)) throw DomainError("translation: c must be finite");
  SolutionSpec s(domain, TranslationForm{c});
  require_image_inside(domain, s.image(), "translation");
  return s;
}

SolutionSpec SolutionSpec::affine(Interval domain, double slope, double c) {
  if (slope == 0.0 || !std::isfinite(slope) || !std::isfinite(c)) {
    throw DomainError("affine: slope must be finite and nonzero, c finite");
  }
  if (domain.bounded() && std::abs(slope) > 1.0) {
    throw DomainError("affine: |slope| = " + num(std::abs(slope)) + " > 1 cannot map the bounded domain " +
                      domain.to_string() + " into itself");
  }
  SolutionSpec s(domain, AffineForm{slope, c});
  require_image_inside(domain, s.image(), "affine");
  return s;
}

SolutionSpec SolutionSpec::three_piece(Interval domain, double a, double b, double slope) {
  if (!(slope > 0.0) || slope == 1.0 || !std::isfinite(slope)) {
    throw DomainError("three_piece: slope must be positive, finite and different from 1");
  }
  if (!(a <= b)) throw DomainError("three_piece: need a <= b");
  if (!domain.in_closure(a) || !domain.in_closure(b) || a == kInf || b == -kInf) {
    throw DomainError("three_piece: anchors " + num(a) + ", " + num(b) + " must lie in the closure of " +
                      domain.to_string());
  }
  SolutionSpec s(domain, ThreePieceForm{a, b, slope});
  require_image_inside(domain, s.image(), "three_piece");
  return s;
}

FamilyKind SolutionSpec::family() const noexcept {
  return std::visit(overloaded{
                        [](const IdentityForm&) { return FamilyKind::Identity; },
                        [](const TranslationForm&) { return FamilyKind::Translation; },
                        [](const AffineForm&) { return FamilyKind::Affine; },
                        [](const ThreePieceForm&) { return FamilyKind::ThreePiece; },
                        [](const InvolutionForm&) { return FamilyKind::Involution; },
                        [](const ConjugateForm&) { return FamilyKind::Conjugate; },
                    },
                    form_);
}

double SolutionSpec::eval_unchecked(double x) const {
  return std::visit(overloaded{
                        [&](const IdentityForm&) { return x; },
                        [&](const TranslationForm& t) { return x + t.c; },
                        [&](const AffineForm& f) { return f.slope * x + f.c; },
                        [&](const ThreePieceForm& t) { return three_piece_raw(t, x); },
                        [&](const InvolutionForm& v) { return x <= v.a ? v.f0(x) : v.f0.inverse(x); },
                        [&](const ConjugateForm& c) {
                          if (c.direction == ConjugateDirection::Pullback) {
                            return c.gen.inverse((*c.inner)(c.gen.forward(x)));
                          }
                          return c.gen.forward((*c.inner)(c.gen.inverse(x)));
                        },
                    },
                    form_);
}

double SolutionSpec::invert_unchecked(double y) const {
  return std::visit(overloaded{
                        [&](const IdentityForm&) { return y; },
                        [&](const TranslationForm& t) { return y - t.c; },
                        [&](const AffineForm& f) { return (y - f.c) / f.slope; },
                        [&](const ThreePieceForm& t) {
                          if (y <= t.a) return (y - t.a) / t.slope + t.a;
                          if (y < t.b) return y;
                          return (y - t.b) / t.slope + t.b;
                        },
                        // An involution is its own inverse.
                        [&](const InvolutionForm& v) { return y <= v.a ? v.f0(y) : v.f0.inverse(y); },
                        [&](const ConjugateForm& c) {
                          if (c.direction == ConjugateDirection::Pullback) {
                            return c.gen.inverse(c.inner->inverse(c.gen.forward(y)));
                          }
                          return c.gen.forward(c.inner->inverse(c.gen.inverse(y)));
                        },
                    },
                    form_);
}

double SolutionSpec::operator()(double x) const {
  if (!domain_.contains(x)) {
    throw DomainError("solution: x = " + num(x) + " outside the domain " + domain_.to_string());
  }
  return eval_unchecked(x);
}

double SolutionSpec::inverse(double y) const {
  if (!image().contains(y)) {
    throw NotSurjective("solution: y = " + num(y) + " outside the image " + image().to_string());
  }
  return invert_unchecked(y);
}

Interval SolutionSpec::image() const {
  return std::visit(
      overloaded{
          [&](const IdentityForm&) { return domain_; },
          [&](const TranslationForm& t) {
            return map_interval(domain_, [&](double x) { return x + t.c; }, true);
          },
          [&](const AffineForm& f) {
            return map_interval(domain_, [&](double x) { return affine_at(f.slope, f.c, x); }, f.slope > 0.0);
          },
          [&](const ThreePieceForm& t) {
            return map_interval(
                domain_, [&](double x) { return std::isinf(x) ? x : three_piece_raw(t, x); }, true);
          },
          [&](const InvolutionForm&) { return domain_; },
          [&](const ConjugateForm& c) {
            const Interval inner = c.inner->image();
            if (c.direction == ConjugateDirection::Pullback) {
              return map_interval(inner, [&](double y) { return c.gen.inverse(y); }, c.gen.increasing());
            }
            return map_interval(inner, [&](double x) { return c.gen.forward(x); }, c.gen.increasing());
          },
      },
      form_);
}

bool SolutionSpec::decreasing() const {
  return std::visit(overloaded{
                        [](const AffineForm& f) { return f.slope < 0.0; },
                        [](const InvolutionForm&) { return true; },
                        [](const ConjugateForm& c) { return c.inner->decreasing(); },
                        [](const auto&) { return false; },
                    },
                    form_);
}

bool SolutionSpec::self_bijective(double rel_tol) const { return image().approx_equal(domain_, rel_tol); }

double eval_solution(const SolutionSpec& s, double x) { return s(x); }
double invert_solution(const SolutionSpec& s, double y) { return s.inverse(y); }

// ---------------------------------------------------------------------------
// Involutions

SolutionSpec build_involution(Interval domain, double a, DecreasingBranch f0, double tol) {
  if (!domain.is_open() && !domain.is_closed()) {
    throw DomainError("involution: domain " + domain.to_string() + " is neither open nor closed");
  }
  if (!(domain.lo() < a && a < domain.hi())) {
    throw DomainError("involution: anchor " + num(a) + " is not interior to " + domain.to_string());
  }
  if (f0.kind() == DecreasingBranch::Kind::Reciprocal && domain.lo() < 0.0) {
    throw DomainError("involution: reciprocal branch needs a domain inside (0, inf)");
  }
  if (f0.kind() == DecreasingBranch::Kind::Table &&
      (!near(f0.xs().front(), domain.lo(), tol) || !near(f0.xs().back(), a, tol))) {
    throw BadAnchor("involution: table must span [inf I, a]");
  }
  const double fa = f0(a);
  if (!near(fa, a, tol)) throw BadAnchor("involution: f0(a) = " + num(fa) + " differs from a = " + num(a));
  const double edge = f0.limit_toward(domain.lo());
  if (!near(edge, domain.hi(), tol)) {
    throw BadAnchor("involution: f0 tends to " + num(edge) + " at inf I, expected sup I = " + num(domain.hi()));
  }

  SolutionSpec s(domain, InvolutionForm{a, std::move(f0)});

  // f o f = id on the standard verification window.
  const double lo = std::max(domain.lo(), -10.0);
  const double hi = std::min(domain.hi(), 10.0);
  const double width = hi - lo;
  const double first = domain.contains(lo) ? lo : lo + 1e-6 * width;
  const double last = domain.contains(hi) ? hi : hi - 1e-6 * width;
  constexpr int kGrid = 1000;
  for (int i = 0; i < kGrid; ++i) {
    const double x = first + (last - first) * i / (kGrid - 1);
    const double back = s.eval_unchecked(s.eval_unchecked(x));
    if (!(std::abs(back - x) <= tol * std::max(1.0, std::abs(x)))) {
      throw NotAnInvolution("involution: f(f(" + num(x) + ")) = " + num(back));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Family enumeration

namespace {

// Some member of x -> slope*x + c maps the domain into itself.
bool affine_feasible(const Interval& domain, double slope) {
  if (domain.is_real_line()) return true;
  if (domain.bounded()) return std::abs(slope) <= 1.0;
  return slope > 0.0;
}

FamilyDescriptor identity_family(std::string note) {
  return {FamilyKind::Identity, std::nullopt, {}, std::move(note)};
}

FamilyDescriptor translation_family() {
  return {FamilyKind::Translation, std::nullopt, {"c"}, "f(x) = x + c"};
}

FamilyDescriptor affine_family(double slope, std::string note) {
  return {FamilyKind::Affine, slope, {"c"}, std::move(note)};
}

FamilyDescriptor three_piece_family(double slope) {
  return {FamilyKind::ThreePiece, slope, {"a", "b"},
          "identity on (a,b), slope r0 anchored at a and b; a = inf I, b = sup I gives the identity"};
}

}  // namespace

FamilyList enumerate_families(const CharProblem& prob, const Interval& domain) {
  FamilyList out;
  const int n = prob.n();
  const int k = prob.k();
  if (prob.interior() && !prob.k_odd() && !prob.n_odd()) {
    out.status = FamilyStatus::OpenProblem;
    return out;
  }
  const RootReport report = analyze_roots(prob);

  if (k == 0 || k == n) {
    out.families.push_back(identity_family("f(x) = x"));
    if (prob.n_odd()) return out;
    if (k == 0 && !domain.is_real_line()) return out;
    const double r0 = report.negative_root().value();
    if (affine_feasible(domain, r0)) {
      out.families.push_back(affine_family(r0, "f(x) = r0 x + c, r0 the negative characteristic root"));
    }
    return out;
  }

  if (prob.k_odd() && n == 2 * k) {
    out.families.push_back(translation_family());
    return out;
  }
  if (prob.k_odd() && !prob.n_odd()) {
    out.families.push_back(three_piece_family(report.positive_root_not_one().value()));
    return out;
  }
  // k even and n odd, or both odd.
  const double negative = report.negative_root().value();
  if (affine_feasible(domain, negative)) {
    out.families.push_back(affine_family(negative, "f(x) = r0 x + c, r0 the negative characteristic root"));
  }
  out.families.push_back(three_piece_family(report.positive_root_not_one().value()));
  return out;
}

FamilyList second_order_families(const SecondOrderProblem& prob) {
  const double rho = prob.rho;
  if (rho == 0.0 || !std::isfinite(rho)) throw DomainError("second_order_families: rho must be finite and nonzero");
  FamilyList out;
  if (rho == 1.0) {
    out.families.push_back(translation_family());
  } else if (rho > 0.0) {
    out.families.push_back(three_piece_family(rho));
  } else {
    out.families.push_back(identity_family("f(x) = x"));
    std::string note = "f(x) = rho x + c";
    if (rho < -1.0) note += " (for surjective f)";
    if (affine_feasible(prob.domain, rho)) out.families.push_back(affine_family(rho, note));
  }
  return out;
}

SolutionSpec instantiate(const FamilyDescriptor& family, const Interval& domain, const ParamMap& params) {
  auto param = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  const double m = domain.anchor();
  switch (family.kind) {
    case FamilyKind::Identity: return SolutionSpec::identity(domain);
    case FamilyKind::Translation: {
      double fallback = 0.0;
      if (domain.is_real_line() || (!domain.bounded() && std::isinf(domain.hi()))) fallback = 1.0;
      if (!domain.bounded() && std::isinf(domain.lo()) && !domain.is_real_line()) fallback = -1.0;
      return SolutionSpec::translation(domain, param("c", fallback));
    }
    case FamilyKind::Affine: {
      const double slope = family.slope.value();
      return SolutionSpec::affine(domain, slope, param("c", (1.0 - slope) * m));
    }
    case FamilyKind::ThreePiece: {
      const double slope = family.slope.value();
      double a = m;
      double b = m;
      if (slope > 1.0) {
        // Expanding pieces must start at the finite ends of the domain.
        a = std::isfinite(domain.lo()) ? domain.lo() : m;
        b = std::isfinite(domain.hi()) ? domain.hi() : std::max(a, m);
      }
      return SolutionSpec::three_piece(domain, param("a", a), param("b", b), slope);
    }
    case FamilyKind::Involution:
    case FamilyKind::Conjugate: break;
  }
  throw DomainError("instantiate: family '" + std::string(to_string(family.kind)) +
                    "' has no parametric default");
}

}  // namespace itermean
