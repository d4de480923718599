#include "itermean/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>

#include "itermean/errors.hpp"

namespace itermean {

std::vector<double> Orbit::forward() const {
  std::vector<double> out;
  for (int m = 0; m <= m_hi(); ++m) out.push_back(at(m));
  return out;
}

Orbit iterate(const SolutionSpec& s, double x0, int m_lo, int m_hi) {
  if (m_lo > 0 || m_hi < 0) throw DomainError("iterate: need m_lo <= 0 <= m_hi");
  if (!s.domain().contains(x0)) throw DomainError("iterate: x0 outside " + s.domain().to_string());

  Orbit orbit;
  orbit.x0 = x0;
  std::vector<double> fwd{x0};
  for (int m = 1; m <= m_hi; ++m) {
    const double y = s(fwd.back());
    if (!s.domain().contains(y)) {
      orbit.escaped = true;
      orbit.escape_index = m;
      break;
    }
    fwd.push_back(y);
  }
  std::vector<double> back;
  if (m_lo < 0) {
    const Interval img = s.image();
    double cur = x0;
    for (int m = -1; m >= m_lo; --m) {
      if (!img.contains(cur)) {
        orbit.escaped = true;
        if (!orbit.escape_index) orbit.escape_index = m;
        break;
      }
      const double y = s.inverse(cur);
      if (!s.domain().contains(y)) {
        orbit.escaped = true;
        if (!orbit.escape_index) orbit.escape_index = m;
        break;
      }
      back.push_back(y);
      cur = y;
    }
  }
  orbit.m_lo = -static_cast<int>(back.size());
  orbit.points.assign(back.rbegin(), back.rend());
  orbit.points.insert(orbit.points.end(), fwd.begin(), fwd.end());
  return orbit;
}

namespace {

bool one_sign(const Orbit& orbit, bool alternate) {
  bool pos = false;
  bool neg = false;
  for (int m = orbit.m_lo + 1; m <= orbit.m_hi(); ++m) {
    double d = orbit.at(m) - orbit.at(m - 1);
    if (alternate && (m % 2 != 0)) d = -d;
    pos = pos || d > 0.0;
    neg = neg || d < 0.0;
  }
  return !(pos && neg);
}

using Step = std::function<double(double)>;
using Combine = std::function<double(std::span<const double>)>;

// Shared grid driver: for each grid point builds x, step(x), step^2(x), ...
// up to depth and feeds the sequence to combine. Points whose iterates
// leave the domain are skipped and counted.
VerifyReport run_grid(const Interval& domain, int samples, double tol, int depth, const Step& step,
                      const Combine& combine) {
  VerifyReport rep;
  double max_abs = 0.0;
  std::vector<double> iters(static_cast<std::size_t>(depth + 1));
  for (double x : verification_grid(domain, samples)) {
    iters[0] = x;
    bool escaped = false;
    double r = 0.0;
    try {
      for (int i = 1; i <= depth && !escaped; ++i) {
        const double y = step(iters[static_cast<std::size_t>(i - 1)]);
        if (!domain.contains(y)) escaped = true;
        iters[static_cast<std::size_t>(i)] = y;
      }
      if (!escaped) r = combine(iters);
    } catch (const Error&) {
      escaped = true;
    }
    if (escaped || !std::isfinite(r)) {
      ++rep.points_escaped;
      continue;
    }
    ++rep.points_evaluated;
    rep.max_residual = std::max(rep.max_residual, std::abs(r));
    for (double v : iters) max_abs = std::max(max_abs, std::abs(v));
  }
  rep.scale = 1.0 + max_abs;
  const bool enough = rep.points_evaluated > 0 && rep.points_evaluated >= kMinEvaluatedFraction * samples;
  rep.pass = enough && rep.max_residual <= tol * rep.scale;
  return rep;
}

Step forward_step(const SolutionSpec& s) {
  return [&s](double x) { return s.domain().contains(x) ? s(x) : std::nan(""); };
}

Step backward_step(const SolutionSpec& s) {
  return [&s, img = s.image()](double y) { return img.contains(y) ? s.inverse(y) : std::nan(""); };
}

double weighted_sum(const Polynomial& a, std::span<const double> iters, bool reversed) {
  const int n = a.degree();
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) acc += a[i] * iters[static_cast<std::size_t>(reversed ? n - i : i)];
  return acc / a.max_abs_coeff();
}

}  // namespace

bool is_anti_monotone(const Orbit& orbit) { return one_sign(orbit, true); }
bool is_monotone(const Orbit& orbit) { return one_sign(orbit, false); }

std::vector<double> verification_grid(const Interval& domain, int samples) {
  if (samples < 1) throw DomainError("verification_grid: samples must be positive");
  double lo = std::max(domain.lo(), -10.0);
  double hi = std::min(domain.hi(), 10.0);
  if (!(lo < hi)) {
    // Domain misses [-10, 10]: fall back to a window of width 20 at its near end.
    lo = std::isfinite(domain.lo()) ? domain.lo() : domain.hi() - 20.0;
    hi = std::isfinite(domain.hi()) ? std::min(domain.hi(), lo + 20.0) : lo + 20.0;
    lo = std::max(lo, hi - 20.0);
  }
  const double width = hi - lo;
  if (!domain.contains(lo)) lo += 1e-6 * width;
  if (!domain.contains(hi)) hi -= 1e-6 * width;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(samples));
  if (samples == 1) {
    grid.push_back(lo + 0.5 * (hi - lo));
    return grid;
  }
  for (int i = 0; i < samples; ++i) grid.push_back(lo + (hi - lo) * i / (samples - 1));
  return grid;
}

VerifyReport verify_general(const SolutionSpec& F, const Generator& gen, const CharProblem& prob, int samples,
                            double tol) {
  if (!gen.domain().contains_interval(F.domain())) {
    throw DomainError("verify_general: solution domain " + F.domain().to_string() +
                      " is not inside the generator domain " + gen.domain().to_string());
  }
  const auto k = static_cast<std::size_t>(prob.k());
  return run_grid(F.domain(), samples, tol, prob.n(), forward_step(F),
                  [&](std::span<const double> it) { return it[k] - qa_mean(gen, it); });
}

VerifyReport verify_mean(const SolutionSpec& s, const CharProblem& prob, int samples, double tol) {
  return verify_general(s, Generator::identity(s.domain()), prob, samples, tol);
}

VerifyReport verify_polynomial(const SolutionSpec& s, const Polynomial& coeffs, int samples, double tol) {
  if (coeffs.is_zero()) throw DomainError("verify_polynomial: zero coefficient vector");
  return run_grid(s.domain(), samples, tol, coeffs.degree(), forward_step(s),
                  [&](std::span<const double> it) { return weighted_sum(coeffs, it, false); });
}

DualReport verify_dual(const SolutionSpec& s, const Polynomial& coeffs, int samples, double tol) {
  if (!s.self_bijective()) {
    throw NotInvertible("verify_dual: solution maps " + s.domain().to_string() + " onto " +
                        s.image().to_string() + ", not onto itself");
  }
  if (coeffs.is_zero()) throw DomainError("verify_dual: zero coefficient vector");
  DualReport out;
  out.primal = verify_polynomial(s, coeffs, samples, tol);
  out.dual = run_grid(s.domain(), samples, tol, coeffs.degree(), backward_step(s),
                      [&](std::span<const double> it) { return weighted_sum(coeffs, it, true); });
  out.consistent = out.primal.pass == out.dual.pass;
  return out;
}

VerifyReport verify_second_order(const SolutionSpec& s, double rho, int samples, double tol) {
  return run_grid(s.domain(), samples, tol, 2, forward_step(s), [rho](std::span<const double> it) {
    return it[2] - (1.0 + rho) * it[1] + rho * it[0];
  });
}

VerifyReport verify_iterate_mean(const SolutionSpec& s, const Generator& gen, int m, int n, int samples,
                                 double tol) {
  if (m < 1 || n < 1) throw DomainError("verify_iterate_mean: need m >= 1 and n >= 1");
  if (!gen.domain().contains_interval(s.domain())) {
    throw DomainError("verify_iterate_mean: solution domain is not inside the generator domain");
  }
  std::vector<double> picked(static_cast<std::size_t>(n));
  return run_grid(s.domain(), samples, tol, m * n, forward_step(s), [&](std::span<const double> it) {
    for (int j = 1; j <= n; ++j) picked[static_cast<std::size_t>(j - 1)] = it[static_cast<std::size_t>(j * m)];
    return qa_mean(gen, picked) - it[0];
  });
}

}  // namespace itermean
