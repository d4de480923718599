#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "itermean/errors.hpp"
#include "itermean/families.hpp"
#include "itermean/interval.hpp"
#include "itermean/meanframe.hpp"
#include "itermean/verifier.hpp"
#include "oracles.hpp"

using namespace itermean;

TEST_CASE("interval parsing and printing") {
  const Interval a = Interval::parse("(-inf,+inf)");
  CHECK(a.is_real_line());
  CHECK(a.is_open());
  const Interval b = Interval::parse("[0, 1)");
  CHECK(b.lo() == 0.0);
  CHECK(b.hi() == 1.0);
  CHECK(b.lo_closed());
  CHECK_FALSE(b.hi_closed());
  CHECK_FALSE(b.is_open());
  CHECK_FALSE(b.is_closed());
  CHECK(Interval::parse("(0,inf)").hi() == kInf);
  CHECK(Interval::parse("[-2.5,3]").is_closed());
  CHECK(Interval::parse(b.to_string()) == b);
  CHECK_THROWS_AS(Interval::parse("0,1"), ParseError);
  CHECK_THROWS_AS(Interval::parse("(1,0)"), ParseError);
  CHECK_THROWS_AS(Interval::parse("[-inf,0]"), ParseError);
  CHECK_THROWS_AS(Interval::parse("(a,1)"), ParseError);
}

TEST_CASE("interval membership") {
  const Interval b = Interval::parse("[0,1)");
  CHECK(b.contains(0.0));
  CHECK_FALSE(b.contains(1.0));
  CHECK(b.in_closure(1.0));
  CHECK(Interval::real_line().contains_interval(b));
  CHECK_FALSE(b.contains_interval(Interval::closed(0.0, 1.0)));
  CHECK(Interval::closed(0.0, 1.0).contains_interval(b));
  CHECK(Interval::open(0.0, 4.0).anchor() == 2.0);
  CHECK(Interval::real_line().anchor() == 0.0);
  CHECK(Interval::open(3.0, kInf).anchor() == 4.0);
}

TEST_CASE("qa_mean examples") {
  const Interval pos = Interval::open(0.0, kInf);
  const double a[] = {1.0, 2.0, 3.0};
  CHECK(qa_mean(Generator::identity(Interval::real_line()), a) == 2.0);
  const double b[] = {1.0, 4.0};
  CHECK(qa_mean(Generator::log(pos), b) == doctest::Approx(2.0).epsilon(1e-15));
  const double c[] = {1.0, 9.0};
  CHECK(qa_mean(Generator::power(2.0, pos), c) == doctest::Approx(4.0).epsilon(1e-15));
  const double d[] = {7.25, 7.25, 7.25, 7.25};
  CHECK(qa_mean(Generator::identity(Interval::real_line()), d) == 7.25);
  CHECK(qa_mean(Generator::log(pos), d) == 7.25);
  const double bad[] = {1.0, -1.0};
  CHECK_THROWS_AS(qa_mean(Generator::log(pos), bad), DomainError);
  CHECK_THROWS_AS(qa_mean(Generator::identity(Interval::real_line()), std::span<const double>{}), DomainError);
}

TEST_CASE("generators need a positive domain") {
  CHECK_THROWS_AS(Generator::log(Interval::real_line()), DomainError);
  CHECK_THROWS_AS(Generator::power(2.0, Interval::closed(0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(Generator::power(0.0, Interval::open(0.0, 1.0)), DomainError);
  CHECK_NOTHROW(Generator::power(-1.0, Interval::open(0.0, 1.0)));
}

TEST_CASE("generator forward and inverse compose to the identity within 4 ulps") {
  auto gen = oracle::rng(11);
  std::uniform_real_distribution<double> u(0.01, 50.0);
  const Interval pos = Interval::open(0.0, kInf);
  const std::vector<Generator> gens{Generator::log(pos), Generator::power(2.0, pos), Generator::power(0.5, pos),
                                    Generator::power(3.0, pos), Generator::power(-1.0, pos)};
  for (const auto& g : gens) {
    for (int i = 0; i < 500; ++i) {
      const double x = u(gen);
      const double back = g.inverse(g.forward(x));
      CHECK(std::abs(back - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x * (g.kind() == GeneratorKind::Log ? 8.0 : 1.0));
    }
  }
}

TEST_CASE("generator image respects orientation") {
  const Interval i = Interval::parse("[1,4)");
  const Interval sq = Generator::power(2.0, i).image();
  CHECK(sq.lo() == 1.0);
  CHECK(sq.hi() == 2.0);
  CHECK(sq.lo_closed());
  CHECK_FALSE(sq.hi_closed());
  const Interval rec = Generator::power(-1.0, i).image();
  CHECK(rec.lo() == 0.25);
  CHECK(rec.hi() == 1.0);
  CHECK_FALSE(rec.lo_closed());
  CHECK(rec.hi_closed());
  const Interval lg = Generator::log(Interval::open(0.0, kInf)).image();
  CHECK(lg.is_real_line());
}

TEST_CASE("internality of quasi-arithmetic means") {
  auto gen = oracle::rng(12);
  std::uniform_real_distribution<double> u(0.001, 100.0);
  std::uniform_int_distribution<int> len(1, 16);
  const Interval pos = Interval::open(0.0, kInf);
  const std::vector<Generator> gens{Generator::identity(pos), Generator::log(pos), Generator::power(2.0, pos),
                                    Generator::power(0.5, pos), Generator::power(-2.0, pos)};
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(len(gen)));
    for (auto& x : v) x = u(gen);
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    for (const auto& g : gens) {
      const double m = qa_mean(g, v);
      CHECK(lo <= m);
      CHECK(m <= hi);
    }
  }
}

TEST_CASE("conjugation examples") {
  const Interval pos = Interval::open(0.0, kInf);
  const Generator lg = Generator::log(pos);
  const double c = 3.0;
  const SolutionSpec f = SolutionSpec::affine(Interval::real_line(), -0.5, std::log(c));
  const SolutionSpec F = conjugate(lg, f);
  CHECK(F.family() == FamilyKind::Conjugate);
  CHECK(F.domain() == pos);
  for (double x : {0.1, 1.0, 2.0, 17.0}) CHECK(F(x) == doctest::Approx(c * std::pow(x, -0.5)).epsilon(1e-13));

  const SolutionSpec id = conjugate(Generator::identity(Interval::real_line()), f);
  for (double x : {-3.0, 0.0, 2.0}) CHECK(id(x) == f(x));

  // POWER(p) uses phi(x) = x^{1/p}: F = (r0 x^{1/p} + c')^p.
  const Interval i = Interval::closed(1.0, 9.0);
  const Generator pw = Generator::power(2.0, i);
  const SolutionSpec g = SolutionSpec::affine(pw.image(), -0.5, 3.0);
  const SolutionSpec G = conjugate(pw, g);
  for (double x : {1.0, 4.0, 9.0}) CHECK(G(x) == doctest::Approx(std::pow(-0.5 * std::sqrt(x) + 3.0, 2.0)).epsilon(1e-14));
  // POWER(1/p) gives the form (r0 x^p + c)^{1/p}.
  const Interval i2 = Interval::closed(1.0, 3.0);
  const Generator half = Generator::power(0.5, i2);
  const SolutionSpec h = SolutionSpec::affine(half.image(), -0.5, 7.5);
  const SolutionSpec H = conjugate(half, h);
  for (double x : {1.0, 2.0, 3.0}) CHECK(H(x) == doctest::Approx(std::sqrt(-0.5 * x * x + 7.5)).epsilon(1e-14));

  CHECK_THROWS_AS(conjugate(pw, SolutionSpec::identity(Interval::closed(0.0, 1.0))), DomainMismatch);
  CHECK_THROWS_AS(transport(pw, SolutionSpec::identity(Interval::closed(0.0, 1.0))), DomainMismatch);
}

TEST_CASE("conjugation round-trip on a 100-point grid") {
  const Interval i = Interval::closed(1.0, 4.0);
  for (const Generator& gen : {Generator::log(i), Generator::power(2.0, i), Generator::power(0.5, i),
                               Generator::power(-1.0, i)}) {
    const SolutionSpec F = build_involution(Interval::open(0.0, 4.0), 2.0, DecreasingBranch::linear(-1.0, 4.0));
    const Generator g = gen.on(F.domain());
    const SolutionSpec f = transport(g, F);
    const SolutionSpec back = conjugate(g, f);
    for (double x : verification_grid(F.domain(), 100)) {
      CHECK(std::abs(back(x) - F(x)) <= 1e-10 * (1.0 + std::abs(F(x))));
    }
  }
}

TEST_CASE("residuals correspond under conjugation") {
  // A slightly wrong conjugate: its residual in the generator frame and the
  // residual of the transported map in the arithmetic frame agree up to the
  // local Lipschitz constant of phi.
  const CharProblem prob(2, 2);
  const Interval i = Interval::closed(1.0, 4.0);
  const Generator lg = Generator::log(i);
  const SolutionSpec f = SolutionSpec::affine(lg.image(), -0.45, std::log(2.0));
  const SolutionSpec F = conjugate(lg, f);
  for (double x : verification_grid(F.domain(), 50)) {
    const std::vector<double> outer{x, F(x), F(F(x))};
    const double r_outer = outer[2] - qa_mean(lg, outer);
    const double y = lg.forward(x);
    const std::vector<double> inner{y, f(y), f(f(y))};
    const double r_inner = inner[2] - (inner[0] + inner[1] + inner[2]) / 3.0;
    // phi = log has derivative between 1/4 and 1 on [1, 4].
    if (std::abs(r_inner) > 1e-12) {
      const double ratio = std::abs(r_inner) / std::abs(r_outer);
      CHECK(ratio >= 0.25 / 10.0);
      CHECK(ratio <= 1.0 * 10.0);
    }
  }
}
