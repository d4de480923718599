#pragma once

#include <span>
#include <string_view>

#include "itermean/interval.hpp"

namespace itermean {

enum class GeneratorKind { Identity, Power, Log };

std::string_view to_string(GeneratorKind kind);

/// Continuous strictly monotone generator phi of a quasi-arithmetic mean,
/// together with the interval I it is defined on.
///
/// Power(p) uses phi(x) = x^{1/p}, so its mean is the power mean with
/// exponent 1/p. Log uses phi = log and yields the geometric mean. Both
/// require I to lie in (0, inf).
class Generator {
 public:
  static Generator identity(Interval domain);
  static Generator power(double p, Interval domain);
  static Generator log(Interval domain);

  GeneratorKind kind() const noexcept { return kind_; }
  /// Exponent parameter of Power; 1 for the other kinds.
  double p() const noexcept { return p_; }
  const Interval& domain() const noexcept { return domain_; }

  /// Same kind and parameter on a different interval.
  Generator on(Interval domain) const;

  double forward(double x) const;
  double inverse(double y) const;
  double derivative(double x) const;
  bool increasing() const noexcept;

  /// J = phi(I), with endpoint orientation and closedness transported.
  Interval image() const;

 private:
  Generator(GeneratorKind kind, double p, Interval domain);

  GeneratorKind kind_;
  double p_;
  Interval domain_;
};

/// phi^{-1}(mean of phi(x_i)), clamped into [min x_i, max x_i].
/// Throws DomainError when a value lies outside gen.domain() or the span is empty.
double qa_mean(const Generator& gen, std::span<const double> values);

}  // namespace itermean
