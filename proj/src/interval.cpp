#include "itermean/interval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "itermean/errors.hpp"

namespace itermean {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_endpoint(const std::string& tok) {
  if (tok == "-inf" || tok == "-infinity") return -kInf;
  if (tok == "inf" || tok == "+inf" || tok == "infinity" || tok == "+infinity") return kInf;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size() || std::isnan(v)) {
    throw ParseError("interval: cannot parse endpoint '" + tok + "'");
  }
  return v;
}

bool close_to(double a, double b, double rel_tol) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string endpoint_string(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Interval::Interval(double lo, double hi, bool lo_closed, bool hi_closed)
    : lo_(lo), hi_(hi), lo_closed_(lo_closed), hi_closed_(hi_closed) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw DomainError("interval: need lo < hi, got " + endpoint_string(lo) + ", " +
                      endpoint_string(hi));
  }
  if ((std::isinf(lo) && lo_closed) || (std::isinf(hi) && hi_closed)) {
    throw DomainError("interval: infinite endpoints must be open");
  }
}

Interval Interval::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s.size() < 5) throw ParseError("interval: '" + s + "' is too short");
  const char open = s.front();
  const char close = s.back();
  if ((open != '(' && open != '[') || (close != ')' && close != ']')) {
    throw ParseError("interval: expected brackets around '" + s + "'");
  }
  const std::string body = s.substr(1, s.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos) {
    throw ParseError("interval: expected exactly one comma in '" + s + "'");
  }
  const double lo = parse_endpoint(trim(body.substr(0, comma)));
  const double hi = parse_endpoint(trim(body.substr(comma + 1)));
  try {
    return Interval(lo, hi, open == '[', close == ']');
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

bool Interval::contains(double x) const noexcept {
  if (std::isnan(x)) return false;
  const bool above = lo_closed_ ? x >= lo_ : x > lo_;
  const bool below = hi_closed_ ? x <= hi_ : x < hi_;
  return above && below;
}

bool Interval::in_closure(double x) const noexcept { return !std::isnan(x) && lo_ <= x && x <= hi_; }

bool Interval::contains_interval(const Interval& o, double rel_tol) const noexcept {
  // Near-coincident endpoints: an included endpoint of o needs an included
  // endpoint here unless it lies strictly inside.
  bool lo_ok = std::isinf(lo_) || o.lo_ > lo_;
  if (!lo_ok && close_to(o.lo_, lo_, rel_tol)) lo_ok = lo_closed_ || !o.lo_closed_;
  bool hi_ok = std::isinf(hi_) || o.hi_ < hi_;
  if (!hi_ok && close_to(o.hi_, hi_, rel_tol)) hi_ok = hi_closed_ || !o.hi_closed_;
  return lo_ok && hi_ok;
}

bool Interval::approx_equal(const Interval& o, double rel_tol) const noexcept {
  return close_to(lo_, o.lo_, rel_tol) && close_to(hi_, o.hi_, rel_tol) &&
         lo_closed_ == o.lo_closed_ && hi_closed_ == o.hi_closed_;
}

bool Interval::bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }

bool Interval::is_real_line() const noexcept { return std::isinf(lo_) && std::isinf(hi_); }

double Interval::anchor() const noexcept {
  if (bounded()) return lo_ + 0.5 * (hi_ - lo_);
  if (is_real_line()) return 0.0;
  return std::isfinite(lo_) ? lo_ + 1.0 : hi_ - 1.0;
}

std::string Interval::to_string() const {
  return std::string(lo_closed_ ? "[" : "(") + endpoint_string(lo_) + "," + endpoint_string(hi_) +
         (hi_closed_ ? "]" : ")");
}

}  // namespace itermean
