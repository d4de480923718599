#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "itermean/charspec.hpp"
#include "itermean/errors.hpp"
#include "itermean/families.hpp"
#include "itermean/meanframe.hpp"
#include "itermean/verifier.hpp"
#include "oracles.hpp"

using namespace itermean;

namespace {

const Interval kLine = Interval::real_line();

double slope_root(int n, int k, bool negative) {
  const RootReport r = analyze_roots(CharProblem(n, k));
  return negative ? r.negative_root().value() : r.positive_root_not_one().value();
}

}  // namespace

TEST_CASE("iterate examples") {
  const Orbit id = iterate(SolutionSpec::identity(kLine), 3.0, 0, 5);
  CHECK(id.points == std::vector<double>(6, 3.0));
  const Orbit aff = iterate(SolutionSpec::affine(kLine, -2.0, 0.0), 1.0, 0, 3);
  CHECK(aff.points == std::vector<double>{1.0, -2.0, 4.0, -8.0});
  const Orbit tr = iterate(SolutionSpec::translation(kLine, 0.5), 0.0, -2, 2);
  CHECK(tr.m_lo == -2);
  CHECK(tr.m_hi() == 2);
  CHECK(tr.points == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(tr.at(0) == 0.0);
  CHECK(tr.forward() == std::vector<double>{0.0, 0.5, 1.0});
  CHECK_THROWS_AS(iterate(SolutionSpec::identity(Interval::closed(0.0, 1.0)), 2.0, 0, 3), DomainError);
  CHECK_THROWS_AS(iterate(SolutionSpec::identity(kLine), 0.0, 1, 3), DomainError);
}

TEST_CASE("backward iteration stops at the image") {
  const SolutionSpec s = SolutionSpec::affine(Interval::closed(0.0, 1.0), 0.5, 0.0);
  const Orbit o = iterate(s, 0.8, -3, 2);
  CHECK(o.escaped);
  CHECK(o.m_lo == 0);
  CHECK(o.escape_index.value() == -1);
}

TEST_CASE("stored orbit points follow the map") {
  const SolutionSpec s = SolutionSpec::three_piece(kLine, 0.0, 1.0, 0.27568220365098517);
  const Orbit o = iterate(s, -4.0, -10, 20);
  for (int m = o.m_lo; m < o.m_hi(); ++m) {
    CHECK(std::abs(s(o.at(m)) - o.at(m + 1)) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(o.at(m + 1)));
  }
}

TEST_CASE("verification grid") {
  const auto g = verification_grid(Interval::open(0.0, 1.0), 11);
  REQUIRE(g.size() == 11);
  CHECK(g.front() > 0.0);
  CHECK(g.back() < 1.0);
  const auto r = verification_grid(kLine, 1000);
  CHECK(r.front() == -10.0);
  CHECK(r.back() == 10.0);
  const auto far = verification_grid(Interval::closed(100.0, 200.0), 5);
  CHECK(far.front() == 100.0);
  CHECK(far.back() == 120.0);
  CHECK_THROWS_AS(verification_grid(kLine, 0), DomainError);
}

TEST_CASE("verify_mean examples") {
  for (int n = 2; n <= 6; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto r = verify_mean(SolutionSpec::identity(kLine), CharProblem(n, k));
      CHECK(r.pass);
      CHECK(r.max_residual == 0.0);
      CHECK(r.points_evaluated == 1000);
    }
  }
  const auto a20 = verify_mean(SolutionSpec::affine(kLine, -2.0, 5.0), CharProblem(2, 0));
  CHECK(a20.pass);
  const auto a31 = verify_mean(SolutionSpec::affine(kLine, -1.0 - std::numbers::sqrt2, 0.0), CharProblem(3, 1));
  CHECK(a31.pass);
  const auto t41 =
      verify_mean(SolutionSpec::three_piece(kLine, 0.0, 1.0, slope_root(4, 1, false)), CharProblem(4, 1));
  CHECK(t41.pass);
  CHECK(t41.max_residual <= 1e-9);
  const auto wrong = verify_mean(SolutionSpec::affine(kLine, -2.0, 0.0), CharProblem(3, 1));
  CHECK_FALSE(wrong.pass);
}

TEST_CASE("every enumerated family verifies on several domains") {
  const std::vector<Interval> domains{kLine, Interval::open(0.0, kInf), Interval::parse("(-inf,0)"),
                                      Interval::closed(-1.0, 3.0), Interval::open(2.0, 5.0)};
  for (int n = 2; n <= 9; ++n) {
    for (int k = 0; k <= n; ++k) {
      for (const auto& d : domains) {
        const CharProblem prob(n, k);
        const FamilyList list = enumerate_families(prob, d);
        if (list.status == FamilyStatus::OpenProblem) continue;
        for (const auto& fam : list.families) {
          CAPTURE(n);
          CAPTURE(k);
          CAPTURE(d.to_string());
          const SolutionSpec s = instantiate(fam, d);
          const auto r = verify_mean(s, prob);
          CHECK(r.pass);
        }
      }
    }
  }
}

TEST_CASE("verify_general examples") {
  const CharProblem p22(2, 2);
  const Interval i = Interval::closed(1.0, 4.0);
  const Generator lg = Generator::log(i);
  const SolutionSpec F = conjugate(lg, SolutionSpec::affine(lg.image(), -0.5, std::log(2.0)));
  const auto r = verify_general(F, lg, p22);
  CHECK(r.pass);
  CHECK(r.max_residual <= 1e-9);

  // Identity generator agrees with verify_mean bit for bit.
  const SolutionSpec t = SolutionSpec::three_piece(kLine, 0.0, 1.0, slope_root(4, 1, false));
  const auto a = verify_general(t, Generator::identity(kLine), CharProblem(4, 1));
  const auto b = verify_mean(t, CharProblem(4, 1));
  CHECK(a.max_residual == b.max_residual);
  CHECK(a.pass == b.pass);

  for (int n = 2; n <= 5; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto id = verify_general(SolutionSpec::identity(Interval::open(0.0, kInf)),
                                     Generator::log(Interval::open(0.0, kInf)), CharProblem(n, k));
      CHECK(id.max_residual == 0.0);
    }
  }
  CHECK_THROWS_AS(verify_general(SolutionSpec::identity(kLine), lg, p22), DomainError);
}

TEST_CASE("verify_dual examples") {
  const auto d20 = verify_dual(SolutionSpec::affine(kLine, -2.0, 0.0), build_char_poly(CharProblem(2, 0)));
  CHECK(d20.primal.pass);
  CHECK(d20.dual.pass);
  CHECK(d20.consistent);

  const auto id = verify_dual(SolutionSpec::identity(kLine), Polynomial{1.0, -3.0, 2.0});
  CHECK(id.primal.pass);
  CHECK(id.dual.pass);

  // THREE_PIECE(0,1,0.5) against the equation of its slope, (r - 1)(r - 0.5).
  const auto tp = verify_dual(SolutionSpec::three_piece(kLine, 0.0, 1.0, 0.5), Polynomial{0.5, -1.5, 1.0});
  CHECK(tp.primal.pass);
  CHECK(tp.consistent);

  // Both fail for the wrong coefficients.
  const auto bad = verify_dual(SolutionSpec::affine(kLine, -2.0, 0.0), Polynomial{1.0, 1.0, 1.0});
  CHECK_FALSE(bad.primal.pass);
  CHECK_FALSE(bad.dual.pass);
  CHECK(bad.consistent);

  CHECK_THROWS_AS(verify_dual(SolutionSpec::affine(Interval::closed(0.0, 1.0), 0.5, 0.0), Polynomial{0.0, 1.0}),
                  NotInvertible);
}

TEST_CASE("verify_second_order examples and telescoping") {
  CHECK(verify_second_order(SolutionSpec::translation(kLine, 0.7), 1.0).max_residual == 0.0);
  for (double rho : {-0.9, -0.5, -0.1, 0.3, 0.5, 2.0}) {
    CHECK(verify_second_order(SolutionSpec::affine(kLine, rho, 1.25), rho).pass);
  }
  const SolutionSpec tp = SolutionSpec::three_piece(kLine, -1.0, 2.0, 0.5);
  CHECK(verify_second_order(tp, 0.5).pass);

  // f^{m+1}(x) - rho f^m(x) stays equal to f(x) - rho x.
  for (double x : verification_grid(kLine, 101)) {
    const Orbit o = iterate(tp, x, 0, 11);
    const double base = o.at(1) - 0.5 * o.at(0);
    for (int m = 0; m <= 10; ++m) CHECK(std::abs(o.at(m + 1) - 0.5 * o.at(m) - base) <= 1e-9);
  }
}

TEST_CASE("orbit envelope for contracting negative slopes") {
  const double rho = -0.5;
  const double c = 3.0;
  const double limit = c / (1.0 - rho);
  const SolutionSpec s = SolutionSpec::affine(kLine, rho, c);
  for (double x0 : {-7.0, 0.0, 9.5}) {
    const Orbit o = iterate(s, x0, 0, 40);
    for (int m = 0; m <= 40; ++m) {
      CHECK(std::abs(o.at(m) - limit) <= std::pow(std::abs(rho), m) * std::abs(x0 - limit) + 1e-12);
    }
    CHECK(is_anti_monotone(o));
    CHECK_FALSE(is_monotone(o));
  }
  CHECK(is_monotone(iterate(SolutionSpec::translation(kLine, 1.0), 0.0, 0, 10)));
  CHECK_FALSE(is_anti_monotone(iterate(SolutionSpec::translation(kLine, 1.0), 0.0, 0, 10)));
}

TEST_CASE("anti-monotone orbits of decreasing solutions") {
  auto gen = oracle::rng(31);
  std::uniform_real_distribution<double> u(-9.0, 9.0);
  const std::vector<SolutionSpec> dec{
      SolutionSpec::affine(kLine, -2.0, 1.0), SolutionSpec::affine(kLine, -0.5, -2.0),
      SolutionSpec::affine(kLine, -1.0 - std::numbers::sqrt2, 0.3),
      build_involution(kLine, 0.0, DecreasingBranch::linear(-3.0, 0.0))};
  for (const auto& s : dec) {
    for (int t = 0; t < 50; ++t) {
      const Orbit o = iterate(s, u(gen), 0, 30);
      CHECK(is_anti_monotone(o));
    }
  }
}

TEST_CASE("grid refinement never flips a pass") {
  const SolutionSpec t = SolutionSpec::three_piece(kLine, 0.0, 1.0, slope_root(4, 1, false));
  for (int samples : {100, 200, 400, 800, 1600, 3200}) CHECK(verify_mean(t, CharProblem(4, 1), samples).pass);
}

TEST_CASE("iterate-mean reduction for involutions") {
  const SolutionSpec inv = build_involution(Interval::open(0.0, kInf), 1.0, DecreasingBranch::reciprocal(1.0));
  const Generator id = Generator::identity(inv.domain());
  CHECK(verify_iterate_mean(inv, id, 2, 3).pass);
  CHECK(verify_iterate_mean(inv, Generator::log(inv.domain()), 2, 5).pass);
  CHECK_FALSE(verify_iterate_mean(inv, id, 1, 3).pass);
  CHECK_THROWS_AS(verify_iterate_mean(inv, id, 0, 3), DomainError);
}

TEST_CASE("a translation fails an equation it does not solve") {
  const SolutionSpec s = SolutionSpec::translation(Interval::open(0.0, kInf), 1.0);
  const auto r = verify_mean(s, CharProblem(4, 1));
  CHECK(r.points_escaped == 0);
  CHECK(r.points_evaluated == 1000);
  CHECK_FALSE(r.pass);
}
