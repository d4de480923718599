#include "itermean/meanframe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itermean/errors.hpp"
#include "itermean/families.hpp"

namespace itermean {

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Identity: return "identity";
    case GeneratorKind::Power: return "power";
    case GeneratorKind::Log: return "log";
  }
  return "?";
}

Generator::Generator(GeneratorKind kind, double p, Interval domain)
    : kind_(kind), p_(p), domain_(domain) {
  if (kind_ == GeneratorKind::Identity) return;
  if (kind_ == GeneratorKind::Power && (p_ == 0.0 || !std::isfinite(p_))) {
    throw DomainError("power generator: p must be finite and nonzero");
  }
  const bool positive = domain_.lo() > 0.0 || (domain_.lo() == 0.0 && !domain_.lo_closed());
  if (!positive) {
    throw DomainError(std::string(to_string(kind_)) + " generator: domain " + domain_.to_string() +
                      " is not inside (0, inf)");
  }
}

Generator Generator::identity(Interval domain) { return {GeneratorKind::Identity, 1.0, domain}; }
Generator Generator::power(double p, Interval domain) { return {GeneratorKind::Power, p, domain}; }
Generator Generator::log(Interval domain) { return {GeneratorKind::Log, 1.0, domain}; }

Generator Generator::on(Interval domain) const { return {kind_, p_, domain}; }

double Generator::forward(double x) const {
  switch (kind_) {
    case GeneratorKind::Identity: return x;
    case GeneratorKind::Log: return std::log(x);
    case GeneratorKind::Power:
      if (p_ == 2.0) return std::sqrt(x);
      if (p_ == 0.5) return x * x;
      return std::pow(x, 1.0 / p_);
  }
  return x;
}

double Generator::inverse(double y) const {
  switch (kind_) {
    case GeneratorKind::Identity: return y;
    case GeneratorKind::Log: return std::exp(y);
    case GeneratorKind::Power:
      if (p_ == 2.0) return y * y;
      if (p_ == 0.5) return std::sqrt(y);
      return std::pow(y, p_);
  }
  return y;
}

double Generator::derivative(double x) const {
  switch (kind_) {
    case GeneratorKind::Identity: return 1.0;
    case GeneratorKind::Log: return 1.0 / x;
    case GeneratorKind::Power: return std::pow(x, 1.0 / p_ - 1.0) / p_;
  }
  return 1.0;
}

bool Generator::increasing() const noexcept { return kind_ != GeneratorKind::Power || p_ > 0.0; }

Interval Generator::image() const {
  return map_interval(domain_, [this](double x) { return forward(x); }, increasing());
}

double qa_mean(const Generator& gen, std::span<const double> values) {
  if (values.empty()) throw DomainError("qa_mean: no values");
  double sum = 0.0;
  double lo = values.front();
  double hi = values.front();
  for (double v : values) {
    if (!gen.domain().contains(v)) {
      throw DomainError("qa_mean: value " + std::to_string(v) + " outside " + gen.domain().to_string());
    }
    sum += gen.forward(v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double m = gen.inverse(sum / static_cast<double>(values.size()));
  return std::clamp(m, lo, hi);
}

SolutionSpec conjugate(const Generator& gen, const SolutionSpec& f) {
  const Interval j = gen.image();
  if (!f.domain().approx_equal(j)) {
    throw DomainMismatch("conjugate: inner solution lives on " + f.domain().to_string() +
                         " but the generator maps onto " + j.to_string());
  }
  return SolutionSpec(gen.domain(),
                      ConjugateForm{gen, std::make_shared<const SolutionSpec>(f), ConjugateDirection::Pullback});
}

SolutionSpec transport(const Generator& gen, const SolutionSpec& F) {
  if (!F.domain().approx_equal(gen.domain())) {
    throw DomainMismatch("transport: solution lives on " + F.domain().to_string() +
                         " but the generator is defined on " + gen.domain().to_string());
  }
  return SolutionSpec(gen.image(), ConjugateForm{gen, std::make_shared<const SolutionSpec>(F),
                                                 ConjugateDirection::Pushforward});
}

}  // namespace itermean
