#include "itermean/recurfit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "itermean/errors.hpp"

namespace itermean {

int Spectrum::degree() const {
  int d = 0;
  for (const auto& r : real) d += r.multiplicity;
  for (const auto& p : pairs) d += 2 * p.multiplicity;
  return d;
}

Spectrum Spectrum::from_roots(const std::vector<ComplexRoot>& roots) {
  Spectrum s;
  for (const auto& z : roots) {
    if (z.im == 0.0) {
      s.real.push_back({z.re, z.multiplicity});
    } else if (z.im > 0.0) {
      s.pairs.push_back({z.modulus, std::atan2(z.im, z.re), z.multiplicity});
    }
  }
  return s;
}

Spectrum Spectrum::from_report(const RootReport& report) {
  Spectrum s;
  for (const auto& r : report.real_roots) s.real.push_back({r.value, r.multiplicity});
  for (const auto& z : report.complex_roots) {
    if (z.im > 0.0) s.pairs.push_back({z.modulus, std::atan2(z.im, z.re), z.multiplicity});
  }
  return s;
}

int ClosedForm::parameter_count() const {
  int total = 0;
  for (const auto& t : real_terms) total += static_cast<int>(t.poly_coeffs.size());
  for (const auto& t : complex_terms) total += static_cast<int>(t.cos_poly.size() + t.sin_poly.size());
  return total;
}

RecurrenceReport check_recurrence(const Orbit& orbit, const Polynomial& coeffs, double tol) {
  if (coeffs.is_zero()) throw DomainError("check_recurrence: zero coefficient vector");
  const int deg = coeffs.degree();
  const int len = static_cast<int>(orbit.points.size());
  if (len < deg + 1) {
    throw TooShort("check_recurrence: orbit has " + std::to_string(len) + " points, need " +
                   std::to_string(deg + 1));
  }
  RecurrenceReport rep;
  const double norm = coeffs.max_abs_coeff();
  for (int start = 0; start + deg < len; ++start) {
    double acc = 0.0;
    double mag = 0.0;
    for (int i = 0; i <= deg; ++i) {
      const double x = orbit.points[static_cast<std::size_t>(start + i)];
      acc += coeffs[i] * x;
      mag = std::max(mag, std::abs(x));
    }
    rep.max_residual = std::max(rep.max_residual, std::abs(acc) / (norm * (1.0 + mag)));
    ++rep.windows;
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

namespace {

double ipow(double j, int t) { return t == 0 ? 1.0 : std::pow(j, t); }

// Basis functions in the fixed order real terms (t ascending), then for each
// pair the cos columns followed by the sin columns.
std::vector<double> basis_row(const Spectrum& s, int j) {
  std::vector<double> row;
  const double jd = j;
  for (const auto& r : s.real) {
    const double base = std::pow(r.lambda, j);
    for (int t = 0; t < r.multiplicity; ++t) row.push_back(ipow(jd, t) * base);
  }
  for (const auto& p : s.pairs) {
    const double mag = std::pow(p.modulus, j);
    const double c = std::cos(jd * p.argument) * mag;
    const double sn = std::sin(jd * p.argument) * mag;
    for (int t = 0; t < p.multiplicity; ++t) row.push_back(ipow(jd, t) * c);
    for (int t = 0; t < p.multiplicity; ++t) row.push_back(ipow(jd, t) * sn);
  }
  return row;
}

}  // namespace

ClosedForm fit_closed_form(const std::vector<double>& values, const Spectrum& spectrum) {
  const int d = spectrum.degree();
  if (d < 1) throw SingularSystem("fit_closed_form: empty spectrum");
  for (const auto& p : spectrum.pairs) {
    if (!(p.argument > 0.0 && p.argument < std::numbers::pi)) {
      throw SingularSystem("fit_closed_form: pair argument must lie in (0, pi)");
    }
  }
  if (static_cast<int>(values.size()) < d) {
    throw SingularSystem("fit_closed_form: spectrum of degree " + std::to_string(d) + " needs " +
                         std::to_string(d) + " orbit values, got " + std::to_string(values.size()));
  }

  Eigen::MatrixXd a(d, d);
  Eigen::VectorXd rhs(d);
  for (int j = 0; j < d; ++j) {
    const auto row = basis_row(spectrum, j);
    for (int c = 0; c < d; ++c) a(j, c) = row[static_cast<std::size_t>(c)];
    rhs(j) = values[static_cast<std::size_t>(j)];
  }
  Eigen::VectorXd col_scale(d);
  for (int c = 0; c < d; ++c) {
    const double m = a.col(c).cwiseAbs().maxCoeff();
    if (!(m > 0.0) || !std::isfinite(m)) throw SingularSystem("fit_closed_form: degenerate column");
    col_scale(c) = 1.0 / m;
    a.col(c) *= col_scale(c);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= kConditionLimit)) {
    throw SingularSystem("fit_closed_form: condition number " + std::to_string(cond) + " exceeds 1e12");
  }
  const Eigen::VectorXd sol = svd.solve(rhs).cwiseProduct(col_scale);

  ClosedForm cf;
  int c = 0;
  for (const auto& r : spectrum.real) {
    ClosedForm::RealTerm term{r.lambda, {}};
    for (int t = 0; t < r.multiplicity; ++t) term.poly_coeffs.push_back(sol(c++));
    cf.real_terms.push_back(std::move(term));
  }
  for (const auto& p : spectrum.pairs) {
    ClosedForm::ComplexTerm term{p.modulus, p.argument, {}, {}};
    for (int t = 0; t < p.multiplicity; ++t) term.cos_poly.push_back(sol(c++));
    for (int t = 0; t < p.multiplicity; ++t) term.sin_poly.push_back(sol(c++));
    cf.complex_terms.push_back(std::move(term));
  }
  return cf;
}

ClosedForm fit_closed_form(const Orbit& orbit, const Spectrum& spectrum) {
  return fit_closed_form(orbit.forward(), spectrum);
}

ClosedForm fit_closed_form(const Orbit& orbit, const RootReport& report) {
  return fit_closed_form(orbit.forward(), Spectrum::from_report(report));
}

double predict(const ClosedForm& cf, int j) {
  const double jd = j;
  double acc = 0.0;
  for (const auto& t : cf.real_terms) {
    double poly = 0.0;
    for (std::size_t i = t.poly_coeffs.size(); i-- > 0;) poly = poly * jd + t.poly_coeffs[i];
    acc += poly * std::pow(t.lambda, j);
  }
  for (const auto& t : cf.complex_terms) {
    double pc = 0.0;
    double ps = 0.0;
    for (std::size_t i = t.cos_poly.size(); i-- > 0;) pc = pc * jd + t.cos_poly[i];
    for (std::size_t i = t.sin_poly.size(); i-- > 0;) ps = ps * jd + t.sin_poly[i];
    acc += (pc * std::cos(jd * t.argument) + ps * std::sin(jd * t.argument)) * std::pow(t.modulus, j);
  }
  return acc;
}

Regime single_regime_certificate(const SolutionSpec& s, const Orbit& orbit) {
  if (const auto* tp = std::get_if<ThreePieceForm>(&s.form())) {
    const auto all = [&](auto pred) { return std::all_of(orbit.points.begin(), orbit.points.end(), pred); };
    if (all([&](double x) { return x <= tp->a; })) return Regime::BelowA;
    if (all([&](double x) { return x >= tp->b; })) return Regime::AboveB;
    if (all([&](double x) { return tp->a <= x && x <= tp->b; })) return Regime::Middle;
    throw MixedRegime("orbit crosses the pieces of the three-piece map");
  }
  if (std::holds_alternative<ConjugateForm>(s.form())) {
    throw MixedRegime("conjugate solutions follow no single linear law");
  }
  return Regime::Linear;
}

Spectrum family_spectrum(const SolutionSpec& s) {
  Spectrum sp;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, IdentityForm>) {
          sp.real.push_back({1.0, 1});
        } else if constexpr (std::is_same_v<T, TranslationForm>) {
          sp.real.push_back({1.0, 2});
        } else if constexpr (std::is_same_v<T, AffineForm> || std::is_same_v<T, ThreePieceForm>) {
          if (f.slope == 1.0) {
            sp.real.push_back({1.0, 2});
          } else {
            sp.real.push_back({1.0, 1});
            sp.real.push_back({f.slope, 1});
          }
        } else if constexpr (std::is_same_v<T, InvolutionForm>) {
          sp.real.push_back({1.0, 1});
          sp.real.push_back({-1.0, 1});
        } else {
          throw DomainError("family_spectrum: conjugate solutions have no linear spectrum");
        }
      },
      s.form());
  return sp;
}

PredictionReport fit_and_predict(const Orbit& orbit, const Spectrum& spectrum) {
  const auto values = orbit.forward();
  PredictionReport rep;
  rep.fit = fit_closed_form(values, spectrum);
  const int d = spectrum.degree();
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  for (int j = 0; j < d; ++j) {
    const double x = values[static_cast<std::size_t>(j)];
    rep.anchor_residual = std::max(rep.anchor_residual, std::abs(predict(rep.fit, j) - x) / std::max(1.0, scale));
  }
  const double floor = std::max(1e-8 * scale, 1e-300);
  for (int j = d; j < static_cast<int>(values.size()); ++j) {
    const double x = values[static_cast<std::size_t>(j)];
    const double err = std::abs(predict(rep.fit, j) - x) / std::max(std::abs(x), floor);
    rep.max_relative_error = std::max(rep.max_relative_error, err);
    ++rep.held_out;
  }
  return rep;
}

}  // namespace itermean
