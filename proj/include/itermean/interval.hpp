#pragma once

#include <limits>
#include <string>
#include <string_view>

namespace itermean {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Non-trivial real interval. Infinite endpoints are always open.
class Interval {
 public:
  /// Throws DomainError unless lo < hi and infinite endpoints are open.
  Interval(double lo, double hi, bool lo_closed, bool hi_closed);

  static Interval real_line() { return {-kInf, kInf, false, false}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }

  /// Accepts "(lo,hi)", "[lo,hi]" and mixed brackets; "-inf", "+inf" and
  /// "inf" are recognised. Throws ParseError.
  static Interval parse(std::string_view text);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool lo_closed() const noexcept { return lo_closed_; }
  bool hi_closed() const noexcept { return hi_closed_; }

  bool contains(double x) const noexcept;
  /// x in the closure, with infinite endpoints allowed when they are endpoints.
  bool in_closure(double x) const noexcept;
  /// other is a subset of *this, up to a relative slack on finite endpoints.
  bool contains_interval(const Interval& other, double rel_tol = 1e-12) const noexcept;
  bool approx_equal(const Interval& other, double rel_tol = 1e-12) const noexcept;

  bool bounded() const noexcept;
  bool is_real_line() const noexcept;
  /// Both endpoints excluded (the real line and open half-lines included).
  bool is_open() const noexcept { return !lo_closed_ && !hi_closed_; }
  /// Both endpoints included; only bounded intervals qualify.
  bool is_closed() const noexcept { return lo_closed_ && hi_closed_; }

  /// Deterministic reference point: the midpoint when bounded, 0 on the
  /// real line, one unit inside a half-line.
  double anchor() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
  bool lo_closed_;
  bool hi_closed_;
};

/// Image of an interval under a continuous strictly monotone map. fn must
/// accept the interval endpoints including infinities (returning the limit).
template <class Fn>
Interval map_interval(const Interval& in, Fn&& fn, bool increasing) {
  const double a = fn(in.lo());
  const double b = fn(in.hi());
  if (increasing) return Interval(a, b, in.lo_closed(), in.hi_closed());
  return Interval(b, a, in.hi_closed(), in.lo_closed());
}

}  // namespace itermean
