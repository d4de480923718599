#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "itermean/errors.hpp"
#include "itermean/families.hpp"
#include "itermean/meanframe.hpp"
#include "oracles.hpp"

using namespace itermean;

namespace {

const Interval kLine = Interval::real_line();

std::vector<SolutionSpec> sample_specs() {
  const Interval pos = Interval::open(0.0, kInf);
  const Interval unit = Interval::closed(0.0, 1.0);
  std::vector<SolutionSpec> out{
      SolutionSpec::identity(kLine),
      SolutionSpec::translation(kLine, 1.5),
      SolutionSpec::affine(kLine, -2.0, 5.0),
      SolutionSpec::affine(kLine, 0.3, -1.0),
      SolutionSpec::affine(unit, -0.5, 0.75),
      SolutionSpec::three_piece(kLine, 0.0, 1.0, 0.5),
      SolutionSpec::three_piece(kLine, -1.0, 2.0, 3.0),
      build_involution(pos, 1.0, DecreasingBranch::reciprocal(1.0)),
      build_involution(Interval::open(0.0, 2.0), 1.0, DecreasingBranch::linear(-1.0, 2.0)),
      build_involution(kLine, 0.0, DecreasingBranch::linear(-3.0, 0.0)),
      build_involution(Interval::closed(0.0, 4.0), 1.0,
                       DecreasingBranch::table({0.0, 0.5, 1.0}, {4.0, 2.0, 1.0})),
      conjugate(Generator::log(pos), SolutionSpec::affine(kLine, -0.5, std::log(2.0))),
  };
  return out;
}

}  // namespace

TEST_CASE("family names round-trip") {
  for (auto k : {FamilyKind::Identity, FamilyKind::Translation, FamilyKind::Affine, FamilyKind::ThreePiece,
                 FamilyKind::Involution, FamilyKind::Conjugate}) {
    CHECK(family_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(family_kind_from_string("spline"), ParseError);
}

TEST_CASE("evaluation and inversion examples") {
  const SolutionSpec tp = SolutionSpec::three_piece(kLine, 0.0, 1.0, 0.5);
  CHECK(eval_solution(tp, -2.0) == -1.0);
  CHECK(eval_solution(tp, 0.5) == 0.5);
  CHECK(eval_solution(tp, 3.0) == 2.0);
  CHECK(invert_solution(tp, -1.0) == -2.0);
  CHECK(eval_solution(SolutionSpec::affine(kLine, -2.0, 0.0), 3.0) == -6.0);
  CHECK(invert_solution(SolutionSpec::identity(kLine), 7.5) == 7.5);
  const SolutionSpec inv = build_involution(Interval::open(0.0, kInf), 1.0, DecreasingBranch::reciprocal(1.0));
  CHECK(invert_solution(inv, 4.0) == 0.25);
  CHECK(inv(4.0) == 0.25);
  CHECK_THROWS_AS(inv(-1.0), DomainError);
  const SolutionSpec shrink = SolutionSpec::affine(Interval::closed(0.0, 1.0), 0.5, 0.0);
  CHECK_THROWS_AS(shrink.inverse(0.9), NotSurjective);
}

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(SolutionSpec::affine(Interval::closed(0.0, 1.0), -2.0, 1.0), DomainError);
  CHECK_THROWS_AS(SolutionSpec::affine(Interval::closed(0.0, 1.0), 0.5, 0.75), DomainError);
  CHECK_THROWS_AS(SolutionSpec::affine(kLine, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(SolutionSpec::affine(Interval::open(0.0, kInf), -0.5, 1.0), DomainError);
  CHECK_THROWS_AS(SolutionSpec::translation(Interval::closed(0.0, 1.0), 0.5), DomainError);
  CHECK_THROWS_AS(SolutionSpec::translation(Interval::open(0.0, kInf), -1.0), DomainError);
  CHECK_NOTHROW(SolutionSpec::translation(Interval::open(0.0, kInf), 1.0));
  CHECK_THROWS_AS(SolutionSpec::three_piece(kLine, 1.0, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(SolutionSpec::three_piece(kLine, 0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(SolutionSpec::three_piece(kLine, 0.0, 1.0, -0.5), DomainError);
  CHECK_THROWS_AS(SolutionSpec::three_piece(Interval::closed(0.0, 1.0), 0.0, 2.0, 0.5), DomainError);
  CHECK_THROWS_AS(SolutionSpec::three_piece(Interval::closed(0.0, 1.0), 0.5, 0.5, 2.0), DomainError);
}

TEST_CASE("involution construction") {
  const Interval pos = Interval::open(0.0, kInf);
  CHECK_THROWS_AS(build_involution(pos, 1.0, DecreasingBranch::linear(-1.0, 2.0)), BadAnchor);
  const SolutionSpec ok = build_involution(Interval::open(0.0, 2.0), 1.0, DecreasingBranch::linear(-1.0, 2.0));
  for (double x : {0.1, 0.7, 1.0, 1.3, 1.9}) CHECK(ok(ok(x)) == doctest::Approx(x).epsilon(1e-15));
  CHECK_THROWS_AS(build_involution(pos, 2.0, DecreasingBranch::reciprocal(1.0)), BadAnchor);
  CHECK_THROWS_AS(build_involution(Interval::parse("(0,2]"), 1.0, DecreasingBranch::linear(-1.0, 2.0)),
                  DomainError);
  CHECK_THROWS_AS(build_involution(Interval::closed(0.0, 2.0), 2.0, DecreasingBranch::linear(-1.0, 4.0)),
                  DomainError);
  CHECK_THROWS_AS(DecreasingBranch::linear(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(DecreasingBranch::table({0.0, 1.0}, {0.0, 1.0}), DomainError);
}

TEST_CASE("every solution is strictly monotone") {
  auto gen = oracle::rng(21);
  for (const auto& s : sample_specs()) {
    const Interval d = s.domain();
    const double lo = std::isfinite(d.lo()) ? d.lo() : -20.0;
    const double hi = std::isfinite(d.hi()) ? d.hi() : 20.0;
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> xs;
    for (int i = 0; i < 300; ++i) {
      const double x = u(gen);
      if (d.contains(x)) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    const bool dec = s.decreasing();
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (dec) {
        CHECK(s(xs[i]) < s(xs[i - 1]));
      } else {
        CHECK(s(xs[i]) > s(xs[i - 1]));
      }
    }
  }
  CHECK(SolutionSpec::affine(kLine, -2.0, 0.0).decreasing());
  CHECK_FALSE(SolutionSpec::three_piece(kLine, 0.0, 1.0, 0.5).decreasing());
}

TEST_CASE("eval then invert round-trips on 1000 samples") {
  auto gen = oracle::rng(22);
  for (const auto& s : sample_specs()) {
    const Interval d = s.domain();
    const double lo = std::isfinite(d.lo()) ? d.lo() : -50.0;
    const double hi = std::isfinite(d.hi()) ? d.hi() : 50.0;
    std::uniform_real_distribution<double> u(lo, hi);
    int checked = 0;
    while (checked < 1000) {
      const double x = u(gen);
      if (!d.contains(x)) continue;
      ++checked;
      CHECK(std::abs(s.inverse(s(x)) - x) <= 1e-9 * (1.0 + std::abs(x)));
    }
  }
}

TEST_CASE("three-piece limits") {
  const Interval d = Interval::closed(-3.0, 5.0);
  const SolutionSpec wide = SolutionSpec::three_piece(d, -3.0, 5.0, 0.5);
  const SolutionSpec same = SolutionSpec::three_piece(kLine, 0.7, 0.7, 0.25);
  const SolutionSpec aff = SolutionSpec::affine(kLine, 0.25, 0.7 * 0.75);
  for (int i = 0; i <= 100; ++i) {
    const double x = -3.0 + 8.0 * i / 100.0;
    CHECK(wide(x) == x);
    CHECK(same(x) == doctest::Approx(aff(x)).epsilon(1e-15));
  }
}

TEST_CASE("involutions are their own inverse on 1000 samples") {
  for (const auto& s : sample_specs()) {
    if (s.family() != FamilyKind::Involution) continue;
    const Interval d = s.domain();
    const double lo = std::max(d.lo(), -10.0);
    const double hi = std::min(d.hi(), 10.0);
    for (int i = 1; i <= 1000; ++i) {
      const double x = lo + (hi - lo) * i / 1001.0;
      CHECK(std::abs(s(s(x)) - x) <= 1e-9 * std::max(1.0, std::abs(x)));
    }
  }
}

TEST_CASE("enumerate_families examples") {
  const auto f63 = enumerate_families(CharProblem(6, 3), kLine);
  REQUIRE(f63.families.size() == 1);
  CHECK(f63.families[0].kind == FamilyKind::Translation);

  const auto f31 = enumerate_families(CharProblem(3, 1), kLine);
  REQUIRE(f31.families.size() == 2);
  CHECK(f31.families[0].kind == FamilyKind::Affine);
  CHECK(f31.families[0].slope.value() == doctest::Approx(-1.0 - std::numbers::sqrt2).epsilon(1e-14));
  CHECK(f31.families[1].kind == FamilyKind::ThreePiece);
  CHECK(f31.families[1].slope.value() == doctest::Approx(std::numbers::sqrt2 - 1.0).epsilon(1e-14));

  const auto f20 = enumerate_families(CharProblem(2, 0), Interval::open(0.0, 1.0));
  REQUIRE(f20.families.size() == 1);
  CHECK(f20.families[0].kind == FamilyKind::Identity);
  const auto f20r = enumerate_families(CharProblem(2, 0), kLine);
  REQUIRE(f20r.families.size() == 2);
  CHECK(f20r.families[1].slope.value() == -2.0);

  CHECK(enumerate_families(CharProblem(4, 2), kLine).status == FamilyStatus::OpenProblem);
  CHECK(enumerate_families(CharProblem(4, 4), kLine).status == FamilyStatus::Ok);
  const auto f22 = enumerate_families(CharProblem(2, 2), Interval::closed(0.0, 1.0));
  REQUIRE(f22.families.size() == 2);
  CHECK(f22.families[1].slope.value() == -0.5);
  CHECK(enumerate_families(CharProblem(3, 3), kLine).families.size() == 1);
  const auto f41 = enumerate_families(CharProblem(4, 1), kLine);
  REQUIRE(f41.families.size() == 1);
  CHECK(f41.families[0].kind == FamilyKind::ThreePiece);
}

TEST_CASE("second-order families") {
  const auto one = second_order_families({1.0, kLine});
  REQUIRE(one.families.size() == 1);
  CHECK(one.families[0].kind == FamilyKind::Translation);
  const auto half = second_order_families({0.5, kLine});
  REQUIRE(half.families.size() == 1);
  CHECK(half.families[0].kind == FamilyKind::ThreePiece);
  const auto neg = second_order_families({-0.5, kLine});
  REQUIRE(neg.families.size() == 2);
  CHECK(neg.families[0].kind == FamilyKind::Identity);
  CHECK(neg.families[1].kind == FamilyKind::Affine);
  CHECK(neg.families[1].slope.value() == -0.5);
  CHECK_THROWS_AS(second_order_families({0.0, kLine}), DomainError);
}

TEST_CASE("instantiate fills defaults and honours parameters") {
  const auto f41 = enumerate_families(CharProblem(4, 1), kLine).families.at(0);
  const SolutionSpec s = instantiate(f41, kLine, {{"a", 0.0}, {"b", 1.0}});
  const auto& tp = std::get<ThreePieceForm>(s.form());
  CHECK(tp.a == 0.0);
  CHECK(tp.b == 1.0);
  CHECK(tp.slope == doctest::Approx(0.27568220365098517).epsilon(1e-14));

  const auto tr = enumerate_families(CharProblem(6, 3), kLine).families.at(0);
  CHECK(std::get<TranslationForm>(instantiate(tr, kLine).form()).c == 1.0);
  CHECK(std::get<TranslationForm>(instantiate(tr, kLine, {{"c", 0.25}}).form()).c == 0.25);
  CHECK(std::get<TranslationForm>(instantiate(tr, Interval::closed(0.0, 1.0)).form()).c == 0.0);

  const auto aff = enumerate_families(CharProblem(2, 2), Interval::closed(0.0, 2.0)).families.at(1);
  const SolutionSpec a = instantiate(aff, Interval::closed(0.0, 2.0));
  CHECK(a(1.0) == doctest::Approx(1.0).epsilon(1e-15));
}
