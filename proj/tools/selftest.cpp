#include "selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "cli.hpp"
#include "itermean/charspec.hpp"
#include "itermean/errors.hpp"
#include "itermean/families.hpp"
#include "itermean/meanframe.hpp"
#include "itermean/recurfit.hpp"
#include "itermean/verifier.hpp"

namespace itermean::selftest {

namespace {

constexpr double kResidualTol = 1e-9;
constexpr double kSeparationFloor = 1e-6;
constexpr double kAnchorTol = 1e-10;
constexpr double kPredictTol = 1e-6;
constexpr double kSlopeTol = 1e-9;
constexpr int kGrid = 1000;
constexpr int kOrbitLength = 30;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Collector {
  bool pass = true;
  std::ostringstream failures;
  int failed = 0;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failed++ < 3) failures << (failed > 1 ? "; " : "") << what;
  }
  std::string summary(const std::string& ok_detail) const {
    if (pass) return ok_detail;
    return std::to_string(failed) + " failure(s): " + failures.str();
  }
};

template <class Fn>
Criterion timed(int id, std::string title, Fn&& body) {
  Criterion c{id, std::move(title), false, "", 0.0};
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = std::string("unexpected error: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

// (n, k) with 2 <= n <= 15, 1 <= k < n and at least one of them odd.
std::vector<CharProblem> table_range() {
  std::vector<CharProblem> out;
  for (int n = 2; n <= 15; ++n) {
    for (int k = 1; k < n; ++k) {
      if (k % 2 == 0 && n % 2 == 0) continue;
      out.emplace_back(n, k);
    }
  }
  return out;
}

struct NamedSolution {
  std::string name;
  CharProblem prob;
  SolutionSpec spec;
  /// Coefficients the solution satisfies; the characteristic polynomial unless noted.
  Polynomial coeffs;
  double x0;
};

double root_or_nan(std::optional<double> r) { return r.value_or(std::numeric_limits<double>::quiet_NaN()); }

// The solutions named in the family-verification criterion, with slopes
// taken from the root analysis and checked against closed-form values.
std::vector<NamedSolution> verified_families(Collector& col) {
  const Interval line = Interval::real_line();
  std::vector<NamedSolution> out;
  auto add = [&](std::string name, CharProblem prob, SolutionSpec s, double x0) {
    out.push_back({std::move(name), prob, std::move(s), build_char_poly(prob), x0});
  };
  for (int n = 2; n <= 10; ++n) {
    for (int k = 0; k <= n; ++k) {
      add("identity(" + std::to_string(n) + "," + std::to_string(k) + ")", CharProblem(n, k),
          SolutionSpec::identity(line), 1.5);
    }
  }
  for (int k = 1; 2 * k <= 14; k += 2) {
    add("translation(" + std::to_string(2 * k) + "," + std::to_string(k) + ")", CharProblem(2 * k, k),
        SolutionSpec::translation(line, 1.0), 0.0);
  }

  const double s31n = root_or_nan(analyze_roots(CharProblem(3, 1)).negative_root());
  col.check(std::abs(s31n - (-1.0 - std::numbers::sqrt2)) <= kSlopeTol, "(3,1) negative root " + num(s31n));
  add("affine(3,1)", CharProblem(3, 1), SolutionSpec::affine(line, s31n, 0.0), 1.0);

  const double s20 = root_or_nan(analyze_roots(CharProblem(2, 0)).negative_root());
  col.check(std::abs(s20 + 2.0) <= kSlopeTol, "(2,0) negative root " + num(s20));
  add("affine(2,0)", CharProblem(2, 0), SolutionSpec::affine(line, s20, 0.0), 1.0);

  const double s22 = root_or_nan(analyze_roots(CharProblem(2, 2)).negative_root());
  col.check(std::abs(s22 + 0.5) <= kSlopeTol, "(2,2) negative root " + num(s22));
  add("affine(2,2)", CharProblem(2, 2), SolutionSpec::affine(line, s22, 0.0), 1.0);

  const double s41 = root_or_nan(analyze_roots(CharProblem(4, 1)).positive_root_not_one());
  // Root of r^3 + 2r^2 + 3r - 1, the cubic left after removing 1 and sign.
  col.check(std::abs(s41 - 0.27568220365098517) <= kSlopeTol, "(4,1) positive root " + num(s41));
  add("three_piece(4,1)", CharProblem(4, 1), SolutionSpec::three_piece(line, 0.0, 1.0, s41), -4.0);

  const double s31p = root_or_nan(analyze_roots(CharProblem(3, 1)).positive_root_not_one());
  col.check(std::abs(s31p - (std::numbers::sqrt2 - 1.0)) <= kSlopeTol, "(3,1) positive root " + num(s31p));
  add("three_piece(3,1)", CharProblem(3, 1), SolutionSpec::three_piece(line, 0.0, 1.0, s31p), 5.0);
  return out;
}

SolutionSpec reciprocal_involution() {
  return build_involution(Interval::open(0.0, kInf), 1.0, DecreasingBranch::reciprocal(1.0));
}

Criterion root_table() {
  return timed(1, "real-root case table", [](Criterion& c) {
    Collector col;
    int count = 0;
    int doubles = 0;
    for (const auto& prob : table_range()) {
      const RootReport r = analyze_roots(prob);
      ++count;
      const std::string tag = "(" + std::to_string(prob.n()) + "," + std::to_string(prob.k()) + ")";
      col.check(r.expectation_matched && r.mismatches.empty(), tag + " mismatch");
      col.check(r.total_multiplicity() == prob.n(), tag + " root count");
      const bool want_double = prob.n() == 2 * prob.k();
      const bool has_double = r.real_roots.front().value == 1.0 && r.real_roots.front().multiplicity == 2;
      col.check(want_double == has_double, tag + " multiplicity of root 1");
      doubles += has_double ? 1 : 0;
    }
    c.pass = col.pass;
    c.detail = col.summary(std::to_string(count) + " cases, " + std::to_string(doubles) +
                           " double roots at 1, zero mismatches");
  });
}

Criterion complex_bound() {
  return timed(2, "complex roots below 2n+1", [](Criterion& c) {
    Collector col;
    double margin = std::numeric_limits<double>::infinity();
    int roots = 0;
    for (const auto& prob : table_range()) {
      const RootReport r = analyze_roots(prob);
      for (const auto& z : r.complex_roots) {
        ++roots;
        const double m = 2.0 * prob.n() + 1.0 - z.modulus;
        margin = std::min(margin, m);
        col.check(m > 0.0, "(" + std::to_string(prob.n()) + "," + std::to_string(prob.k()) + ") |z| = " +
                               num(z.modulus));
      }
    }
    c.pass = col.pass;
    c.detail = col.summary(std::to_string(roots) + " complex roots, min margin " + num(margin));
  });
}

Criterion modulus_separation() {
  return timed(3, "modulus separation", [](Criterion& c) {
    Collector col;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& prob : table_range()) {
      const RootReport r = analyze_roots(prob);
      const std::string tag = "(" + std::to_string(prob.n()) + "," + std::to_string(prob.k()) + ")";
      col.check(r.modulus_separation_min_gap.has_value(), tag + " gap not computed");
      if (!r.modulus_separation_min_gap) continue;
      worst = std::min(worst, *r.modulus_separation_min_gap);
      col.check(*r.modulus_separation_min_gap > kSeparationFloor, tag + " gap " + num(*r.modulus_separation_min_gap));
    }
    c.pass = col.pass;
    c.detail = col.summary("min gap " + num(worst));
  });
}

Criterion family_verification() {
  return timed(4, "family verification", [](Criterion& c) {
    Collector col;
    const auto sols = verified_families(col);
    double worst = 0.0;
    for (const auto& s : sols) {
      const VerifyReport r = verify_mean(s.spec, s.prob, kGrid, kResidualTol);
      worst = std::max(worst, r.max_residual);
      col.check(r.pass && r.max_residual <= kResidualTol && r.points_evaluated >= kGrid,
                s.name + " residual " + num(r.max_residual));
    }
    c.pass = col.pass;
    c.detail = col.summary(std::to_string(sols.size()) + " solutions, max residual " + num(worst));
  });
}

Criterion conjugates() {
  return timed(5, "quasi-arithmetic conjugates", [](Criterion& c) {
    Collector col;
    const CharProblem prob(2, 2);
    const double r0 = root_or_nan(analyze_roots(prob).negative_root());
    std::string detail;

    // Geometric mean: F(x) = 2 x^{-1/2} on [1, 4].
    const Interval i_geo = Interval::closed(1.0, 4.0);
    const Generator geo = Generator::log(i_geo);
    const Interval j_geo = geo.image();
    const SolutionSpec f_geo = SolutionSpec::affine(j_geo, r0, std::log(2.0));
    const SolutionSpec big_f = conjugate(geo, f_geo);
    for (double x : {1.0, 1.7, 2.5, 4.0}) {
      const double want = 2.0 / std::sqrt(x);
      col.check(std::abs(big_f(x) - want) <= 1e-12 * want, "F(" + num(x) + ") != 2 x^{-1/2}");
    }
    const VerifyReport rg = verify_general(big_f, geo, prob, kGrid, kResidualTol);
    col.check(rg.pass && rg.max_residual <= kResidualTol, "geometric residual " + num(rg.max_residual));
    detail += "geometric " + num(rg.max_residual);

    // Power means with phi = x^{1/p}: p = 2 on [1, 9] and p = 1/2 on [1, 3].
    struct Case {
      double p;
      Interval domain;
      double intercept;
    };
    for (const Case& pc : {Case{2.0, Interval::closed(1.0, 9.0), 3.0}, Case{0.5, Interval::closed(1.0, 3.0), 7.5}}) {
      const Generator gen = Generator::power(pc.p, pc.domain);
      const SolutionSpec f = SolutionSpec::affine(gen.image(), r0, pc.intercept);
      const SolutionSpec big = conjugate(gen, f);
      const VerifyReport r = verify_general(big, gen, prob, kGrid, kResidualTol);
      col.check(r.pass && r.max_residual <= kResidualTol, "power p=" + num(pc.p) + " residual " + num(r.max_residual));
      detail += ", power p=" + num(pc.p) + " " + num(r.max_residual);
    }
    c.pass = col.pass;
    c.detail = col.summary(detail);
  });
}

Criterion involution() {
  return timed(6, "involution", [](Criterion& c) {
    Collector col;
    const SolutionSpec f = reciprocal_involution();
    double worst = 0.0;
    int points = 0;
    for (double x : verification_grid(f.domain(), kGrid)) {
      const double d = std::abs(f(f(x)) - x) / std::max(1.0, std::abs(x));
      worst = std::max(worst, d);
      ++points;
    }
    col.check(points >= kGrid && worst <= kResidualTol, "f(f(x)) - x = " + num(worst));
    const VerifyReport r = verify_iterate_mean(f, Generator::identity(f.domain()), 2, 3, kGrid, kResidualTol);
    col.check(r.pass && r.max_residual <= kResidualTol, "iterate mean residual " + num(r.max_residual));
    c.pass = col.pass;
    c.detail = col.summary("f(f(x)) - x " + num(worst) + ", m=2 n=3 residual " + num(r.max_residual));
  });
}

Criterion recurrence() {
  return timed(7, "recurrence closed form", [](Criterion& c) {
    Collector col;
    auto sols = verified_families(col);
    sols.push_back({"involution", CharProblem(2, 0), reciprocal_involution(), Polynomial{-1.0, 0.0, 1.0}, 2.0});
    sols.push_back({"three_piece(4,1) above b", CharProblem(4, 1),
                    SolutionSpec::three_piece(Interval::real_line(), 0.0, 1.0, 0.27568220365098517),
                    build_char_poly(CharProblem(4, 1)), 5.0});
    double worst_anchor = 0.0;
    double worst_pred = 0.0;
    bool saw_double = false;
    for (const auto& s : sols) {
      const Orbit orbit = iterate(s.spec, s.x0, 0, kOrbitLength);
      col.check(!orbit.escaped, s.name + " orbit escaped");
      try {
        single_regime_certificate(s.spec, orbit);
      } catch (const MixedRegime&) {
        col.check(false, s.name + " orbit crosses pieces");
        continue;
      }
      const Spectrum sp = family_spectrum(s.spec);
      saw_double = saw_double || (!sp.real.empty() && sp.real.front().multiplicity == 2);
      const PredictionReport p = fit_and_predict(orbit, sp);
      worst_anchor = std::max(worst_anchor, p.anchor_residual);
      worst_pred = std::max(worst_pred, p.max_relative_error);
      col.check(p.anchor_residual <= kAnchorTol, s.name + " anchor residual " + num(p.anchor_residual));
      col.check(p.max_relative_error <= kPredictTol, s.name + " prediction error " + num(p.max_relative_error));
      col.check(p.held_out + sp.degree() == kOrbitLength + 1, s.name + " did not predict up to index 30");
    }
    col.check(saw_double, "no double-root case covered");
    c.pass = col.pass;
    c.detail = col.summary(std::to_string(sols.size()) + " orbits, anchor residual " + num(worst_anchor) +
                           ", prediction error " + num(worst_pred));
  });
}

Criterion duality() {
  return timed(8, "duality", [](Criterion& c) {
    Collector col;
    auto sols = verified_families(col);
    sols.push_back({"involution", CharProblem(2, 0), reciprocal_involution(), Polynomial{-1.0, 0.0, 1.0}, 2.0});
    int checked = 0;
    for (const auto& s : sols) {
      if (!s.spec.self_bijective()) continue;
      const DualReport d = verify_dual(s.spec, s.coeffs, kGrid, kResidualTol);
      ++checked;
      col.check(d.consistent, s.name + " primal " + (d.primal.pass ? "pass" : "fail") + " vs dual " +
                                  (d.dual.pass ? "pass" : "fail"));
      col.check(d.primal.pass, s.name + " primal fails");
    }
    c.pass = col.pass && checked > 0;
    c.detail = col.summary(std::to_string(checked) + " bijective solutions, primal and dual agree");
  });
}

Criterion anti_monotone() {
  return timed(9, "anti-monotone orbits", [](Criterion& c) {
    Collector col;
    auto sols = verified_families(col);
    sols.push_back({"involution", CharProblem(2, 0), reciprocal_involution(), Polynomial{-1.0, 0.0, 1.0}, 2.0});
    int checked = 0;
    for (const auto& s : sols) {
      if (!s.spec.decreasing()) continue;
      for (double x0 : {s.x0, 0.5 * s.x0 + 0.3, -3.0, 7.0}) {
        if (!s.spec.domain().contains(x0)) continue;
        const Orbit orbit = iterate(s.spec, x0, 0, kOrbitLength);
        ++checked;
        col.check(!orbit.escaped && orbit.m_hi() == kOrbitLength, s.name + " orbit escaped");
        col.check(is_anti_monotone(orbit), s.name + " from " + num(x0) + " is not anti-monotone");
      }
    }
    c.pass = col.pass && checked > 0;
    c.detail = col.summary(std::to_string(checked) + " orbits of decreasing solutions, m = 1..30");
  });
}

Criterion negative_control() {
  return timed(10, "negative control", [](Criterion& c) {
    Collector col;
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run({"solve", "--n", "4", "--k", "2", "--interval", "(-inf,inf)"}, out, err);
    col.check(code == cli::kOpenProblem, "solve (4,2) exit code " + std::to_string(code));
    col.check(out.str().find("open_problem") != std::string::npos, "solve (4,2) did not report open_problem");

    const CharProblem prob(4, 1);
    const double r0 = root_or_nan(analyze_roots(prob).positive_root_not_one());
    const SolutionSpec wrong = SolutionSpec::three_piece(Interval::real_line(), 0.0, 1.0, r0 + 1e-3);
    const VerifyReport r = verify_mean(wrong, prob, kGrid, kResidualTol);
    col.check(!r.pass && r.max_residual > 1e-5, "perturbed slope residual " + num(r.max_residual));
    c.pass = col.pass;
    c.detail = col.summary("open_problem exit 3; perturbed slope residual " + num(r.max_residual));
  });
}

}  // namespace

std::vector<Criterion> run_all() {
  std::vector<Criterion> out;
  out.push_back(root_table());
  out.push_back(complex_bound());
  out.push_back(modulus_separation());
  out.push_back(family_verification());
  out.push_back(conjugates());
  out.push_back(involution());
  out.push_back(recurrence());
  out.push_back(duality());
  out.push_back(anti_monotone());
  out.push_back(negative_control());

  // Runtime budgets: the root table in 5 s, family verification in 2 s.
  for (auto& c : out) {
    const double budget = c.id == 1 ? 5.0 : c.id == 4 ? 2.0 : 0.0;
    if (budget > 0.0 && c.seconds >= budget) {
      c.pass = false;
      c.detail += "; took " + num(c.seconds) + " s (budget " + num(budget) + " s)";
    }
  }
  return out;
}

bool report(const std::vector<Criterion>& results, std::ostream& out) {
  bool all = true;
  for (const auto& c : results) {
    all = all && c.pass;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", c.seconds);
    out << (c.pass ? "PASS" : "FAIL") << ' ' << c.id << ' ' << c.title << ": " << c.detail << " [" << secs
        << " s]\n";
  }
  return all;
}

}  // namespace itermean::selftest
