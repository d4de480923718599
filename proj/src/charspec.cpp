#include "itermean/charspec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "itermean/errors.hpp"

namespace itermean {

namespace {

// Floor for the modulus-separation gap; smaller gaps are not distinguishable
// from root-finding noise at degree <= 40.
constexpr double kSeparationFloor = 1e-6;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_interior(const CharProblem& prob, const char* what) {
  if (!prob.interior()) {
    throw DomainError(std::string(what) + ": requires 0 < k < n, got n=" + std::to_string(prob.n()) +
                      ", k=" + std::to_string(prob.k()));
  }
}

}  // namespace

CharProblem::CharProblem(int n, int k) : n_(n), k_(k) {
  if (n < 2) throw DomainError("CharProblem: n must be at least 2, got " + std::to_string(n));
  if (k < 0 || k > n) {
    throw DomainError("CharProblem: k must lie in [0, n], got k=" + std::to_string(k) +
                      ", n=" + std::to_string(n));
  }
}

std::string_view to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::K0: return "K0";
    case CaseLabel::KN: return "KN";
    case CaseLabel::C1: return "C1";
    case CaseLabel::C2: return "C2";
    case CaseLabel::C3: return "C3";
    case CaseLabel::C4: return "C4";
    case CaseLabel::C5: return "C5";
    case CaseLabel::C6: return "C6";
    case CaseLabel::C7: return "C7";
    case CaseLabel::C8: return "C8";
    case CaseLabel::C9: return "C9";
    case CaseLabel::C10: return "C10";
  }
  return "?";
}

int RootReport::total_multiplicity() const {
  int total = 0;
  for (const auto& r : real_roots) total += r.multiplicity;
  for (const auto& z : complex_roots) total += z.multiplicity;
  return total;
}

std::optional<double> RootReport::negative_root() const {
  std::optional<double> found;
  for (const auto& r : real_roots) {
    if (r.value < 0.0) {
      if (found) return std::nullopt;
      found = r.value;
    }
  }
  return found;
}

std::optional<double> RootReport::positive_root_not_one() const {
  std::optional<double> found;
  for (const auto& r : real_roots) {
    if (r.value > 0.0 && r.value != 1.0) {
      if (found) return std::nullopt;
      found = r.value;
    }
  }
  return found;
}

Polynomial build_char_poly(const CharProblem& prob) {
  std::vector<double> c(static_cast<std::size_t>(prob.n() + 1), -1.0);
  c[static_cast<std::size_t>(prob.k())] = prob.n();
  return Polynomial(std::move(c));
}

Polynomial build_G(const CharProblem& prob) {
  require_interior(prob, "build_G");
  const int n = prob.n();
  const int k = prob.k();
  std::vector<double> c(static_cast<std::size_t>(n + 2), 0.0);
  c[0] = -1.0;
  c[static_cast<std::size_t>(n + 1)] += 1.0;
  c[static_cast<std::size_t>(k + 1)] -= n + 1;
  c[static_cast<std::size_t>(k)] += n + 1;
  return Polynomial(std::move(c));
}

Polynomial build_g(const CharProblem& prob) {
  require_interior(prob, "build_g");
  const int n = prob.n();
  const int k = prob.k();
  std::vector<double> c(static_cast<std::size_t>(n - k + 2), 0.0);
  c[0] = k;
  c[1] = -(k + 1.0);
  c[static_cast<std::size_t>(n - k + 1)] += 1.0;
  return Polynomial(std::move(c));
}

int root_one_multiplicity(const CharProblem& prob) {
  return prob.interior() && prob.n() == 2 * prob.k() ? 2 : 1;
}

CaseAnalysis classify(const CharProblem& prob) {
  const int n = prob.n();
  const int k = prob.k();
  const double big = 2.0 * n + 1.0;
  const Bracket above_one{1.0, big};
  const Bracket unit{0.0, 1.0};
  const Bracket small_negative{-1.0, 0.0};
  const Bracket large_negative{-big, -1.0};

  CaseAnalysis out;
  if (k < n) {
    out.r_min = std::pow((k + 1.0) / (n - k + 1.0), 1.0 / (n - k));
    if ((n - k) % 2 == 0) out.r_max = -*out.r_min;
  }
  out.expected_real_roots.push_back({Bracket{1.0, 1.0}, root_one_multiplicity(prob)});
  auto add = [&](Bracket b) { out.expected_real_roots.push_back({b, 1}); };

  if (k == 0) {
    out.label = CaseLabel::K0;
    if (!prob.n_odd()) add(large_negative);
    return out;
  }
  if (k == n) {
    out.label = CaseLabel::KN;
    if (!prob.n_odd()) add(small_negative);
    return out;
  }

  const bool k_odd = prob.k_odd();
  const bool n_odd = prob.n_odd();
  const bool below = n < 2 * k;
  if (n == 2 * k) {
    if (k_odd) {
      out.label = CaseLabel::C1;
    } else {
      out.label = CaseLabel::C8;
      add(small_negative);
      add(large_negative);
    }
  } else if (k_odd && !n_odd) {
    out.label = below ? CaseLabel::C2 : CaseLabel::C3;
    add(below ? above_one : unit);
  } else if (k_odd && n_odd) {
    out.label = below ? CaseLabel::C4 : CaseLabel::C5;
    add(below ? above_one : unit);
    add(large_negative);
  } else if (!k_odd && n_odd) {
    out.label = below ? CaseLabel::C6 : CaseLabel::C7;
    add(below ? above_one : unit);
    add(small_negative);
  } else {
    out.label = below ? CaseLabel::C9 : CaseLabel::C10;
    add(below ? above_one : unit);
    add(small_negative);
    add(large_negative);
  }
  out.open_problem = !k_odd && !n_odd;
  return out;
}

RootReport analyze_roots(const CharProblem& prob, double tol) {
  const CaseAnalysis ca = classify(prob);
  RootReport report{prob, ca.label, {}, {}, 0.0, false, 0.0, std::nullopt, false, {}};

  const Polynomial p = build_char_poly(prob);
  const int one_mult = ca.expected_real_roots.front().multiplicity;

  // Root 1 is exact; integer synthetic division leaves an exact quotient.
  Polynomial q = p;
  for (int i = 0; i < one_mult; ++i) {
    const auto div = divide_linear(q, 1.0);
    if (div.remainder[0] != 0.0) {
      throw RootMismatch("analyze_roots: r = 1 is not a root of multiplicity " +
                         std::to_string(one_mult));
    }
    q = div.quotient;
  }
  if (q(1.0) == 0.0) {
    report.mismatches.push_back("root 1 has multiplicity above " + std::to_string(one_mult));
  }
  report.real_roots.push_back({1.0, one_mult, Bracket{1.0, 1.0}});

  for (std::size_t i = 1; i < ca.expected_real_roots.size(); ++i) {
    const Bracket b = ca.expected_real_roots[i].bracket;
    const double flo = q(b.lo);
    const double fhi = q(b.hi);
    if (flo == 0.0 || fhi == 0.0 || (flo > 0.0) == (fhi > 0.0)) {
      throw BracketFailure("analyze_roots: no sign change on (" + fmt(b.lo) + ", " + fmt(b.hi) +
                           ") for n=" + std::to_string(prob.n()) +
                           ", k=" + std::to_string(prob.k()));
    }
    const double r = bisect_root(q, b.lo, b.hi, 0.0, 4000);
    if (!(b.lo < r && r < b.hi)) {
      report.mismatches.push_back("root " + fmt(r) + " not strictly inside its bracket");
    }
    report.real_roots.push_back({r, 1, b});
  }

  std::vector<ComplexRoot> spectrum;
  if (q.degree() >= 1) spectrum = all_roots(q, tol);

  // Cross-check: the simultaneous iteration must see exactly the bisected
  // real roots and nothing else on the real axis.
  std::vector<bool> matched(report.real_roots.size(), false);
  matched[0] = true;
  for (const auto& z : spectrum) {
    if (!z.is_real()) {
      report.complex_roots.push_back(z);
      continue;
    }
    bool found = false;
    for (std::size_t i = 1; i < report.real_roots.size(); ++i) {
      const double r = report.real_roots[i].value;
      if (!matched[i] && std::abs(z.re - r) <= 1e-6 * std::max(1.0, std::abs(r))) {
        matched[i] = found = true;
        if (z.multiplicity != 1) {
          report.mismatches.push_back("root " + fmt(r) + " is not simple");
        }
        break;
      }
    }
    if (!found) report.mismatches.push_back("unexpected real root " + fmt(z.re));
  }
  for (std::size_t i = 1; i < matched.size(); ++i) {
    if (!matched[i]) {
      report.mismatches.push_back("bisected root " + fmt(report.real_roots[i].value) +
                                  " missing from the full spectrum");
    }
  }
  if (report.total_multiplicity() != prob.n()) {
    report.mismatches.push_back("total multiplicity " + std::to_string(report.total_multiplicity()) +
                                " != degree " + std::to_string(prob.n()));
  }

  double max_mod = 0.0;
  for (const auto& r : report.real_roots) max_mod = std::max(max_mod, std::abs(r.value));
  for (const auto& z : report.complex_roots) max_mod = std::max(max_mod, z.modulus);
  report.max_modulus = max_mod;
  report.bound_margin = 2.0 * prob.n() + 1.0 - max_mod;
  report.bound_2n1_ok = report.bound_margin > 0.0;
  if (!report.bound_2n1_ok) report.mismatches.push_back("root modulus reaches 2n+1");

  if (prob.k_odd() || prob.n_odd()) {
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& z : report.complex_roots)
      for (const auto& r : report.real_roots) gap = std::min(gap, std::abs(z.modulus - std::abs(r.value)));
    report.modulus_separation_min_gap = gap;
    if (!(gap > kSeparationFloor)) {
      report.mismatches.push_back("modulus separation gap " + fmt(gap) + " too small");
    }
  }

  report.expectation_matched = report.mismatches.empty();
  return report;
}

}  // namespace itermean
