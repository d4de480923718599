#include "itermean/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "itermean/errors.hpp"

namespace itermean {

namespace {

using cd = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double scale_of(double abs_z) { return std::max(1.0, abs_z); }

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) {
  normalize();
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  normalize();
}

void Polynomial::normalize() {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::from_roots(std::span<const double> roots) {
  Polynomial p{1.0};
  for (double r : roots) p = multiply_linear(p, r);
  return p;
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::operator()(double r) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const noexcept {
  cd acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Polynomial::magnitude_at(double abs_r) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * abs_r + std::abs(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial{0.0};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator-() const { return -1.0 * *this; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> c = p.coeffs_;
  for (double& v : c) v *= s;
  return Polynomial(std::move(c));
}

ComplexRoot::ComplexRoot(double re_, double im_, int mult)
    : re(re_), im(im_), multiplicity(mult), modulus(std::hypot(re_, im_)) {}

double eval(const Polynomial& p, double r) { return p(r); }

Polynomial multiply_linear(const Polynomial& p, double root_shift) {
  const auto& c = p.coeffs();
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i + 1] += c[i];
    out[i] -= root_shift * c[i];
  }
  return Polynomial(std::move(out));
}

Division divide_linear(const Polynomial& p, double root) {
  const auto& c = p.coeffs();
  if (c.size() == 1) return {Polynomial{0.0}, p};
  std::vector<double> q(c.size() - 1);
  double carry = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    q[i] = carry;
    carry = c[i] + carry * root;
  }
  return {Polynomial(std::move(q)), Polynomial{carry}};
}

Polynomial deflate(const Polynomial& p, double root, double tol) {
  const double residual = std::abs(p(root));
  if (residual > tol * p.max_abs_coeff()) {
    throw RootMismatch("deflate: |p(" + std::to_string(root) + ")| = " + std::to_string(residual) +
                       " exceeds tolerance");
  }
  return divide_linear(p, root).quotient;
}

Division divide(const Polynomial& p, const Polynomial& d) {
  if (d.is_zero()) throw DomainError("divide: division by the zero polynomial");
  std::vector<double> rem = p.coeffs();
  const int dd = d.degree();
  if (p.degree() < dd) return {Polynomial{0.0}, p};
  std::vector<double> q(static_cast<std::size_t>(p.degree() - dd + 1), 0.0);
  for (int i = p.degree() - dd; i >= 0; --i) {
    const double f = rem[static_cast<std::size_t>(i + dd)] / d.leading();
    q[static_cast<std::size_t>(i)] = f;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(i + j)] -= f * d[j];
  }
  rem.resize(static_cast<std::size_t>(std::max(dd, 1)));
  return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
}

bool divides(const Polynomial& d, const Polynomial& p, double tol) {
  const auto rem = divide(p, d).remainder;
  return rem.max_abs_coeff() <= tol * std::max(1.0, p.max_abs_coeff());
}

double bisect_root(const Polynomial& p, double lo, double hi, double tol, int max_iter) {
  if (lo > hi) std::swap(lo, hi);
  double flo = p(lo);
  const double fhi = p(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NoSignChange("bisect_root: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  for (int iter = 0; iter < max_iter; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (hi - lo <= 2.0 * tol || mid == lo || mid == hi) return mid;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  throw NonConvergence("bisect_root: bracket width " + std::to_string(hi - lo) +
                           " still above tolerance",
                       hi - lo);
}

namespace {

struct Cluster {
  cd value;
  int multiplicity;
};

// Single-linkage grouping of roots whose distance is below radius(z).
template <class Radius>
std::vector<std::vector<std::size_t>> link_groups(const std::vector<Cluster>& roots, Radius radius) {
  std::vector<std::size_t> parent(roots.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i].value - roots[j].value) <=
          radius(std::max(std::abs(roots[i].value), std::abs(roots[j].value))))
        parent[find(i)] = find(j);
  std::vector<std::vector<std::size_t>> groups(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) groups[find(i)].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

Cluster merged(const std::vector<Cluster>& roots, const std::vector<std::size_t>& group) {
  cd sum = 0.0;
  int mult = 0;
  for (std::size_t i : group) {
    sum += static_cast<double>(roots[i].multiplicity) * roots[i].value;
    mult += roots[i].multiplicity;
  }
  return {sum / static_cast<double>(mult), mult};
}

// p, p', ..., p^(m-1) all small at c relative to their own rounding scale.
bool is_multiple_root(const Polynomial& p, cd c, int m, double theta) {
  Polynomial d = p;
  for (int j = 0; j < m; ++j) {
    const double scale = std::max(d.max_abs_coeff(), d.magnitude_at(std::abs(c)));
    if (std::abs(d(c)) > theta * scale) return false;
    d = d.derivative();
  }
  return true;
}

}  // namespace

std::vector<ComplexRoot> all_roots(const Polynomial& p, double tol) {
  const int n = p.degree();
  if (n < 1) throw DomainError("all_roots: degree must be at least 1");

  const double lead = p.leading();
  double radius = 0.0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(p[i] / lead));
  radius += 1.0;

  std::vector<cd> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / n + 0.4;
    z[static_cast<std::size_t>(i)] = std::polar(radius, angle);
  }

  const Polynomial dp = p.derivative();
  const double noise = 4.0 * (n + 1) * kEps;
  std::vector<bool> done(z.size(), false);
  constexpr int kMaxIter = 2000;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    bool all_done = true;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (done[i]) continue;
      const cd pz = p(z[i]);
      if (std::abs(pz) <= noise * p.magnitude_at(std::abs(z[i]))) {
        done[i] = true;
        continue;
      }
      all_done = false;
      cd dz = dp(z[i]);
      if (dz == 0.0) dz = cd(kEps, kEps);
      const cd ratio = pz / dz;
      cd repulsion = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j)
        if (j != i && z[j] != z[i]) repulsion += 1.0 / (z[i] - z[j]);
      const cd step = ratio / (1.0 - ratio * repulsion);
      z[i] -= step;
      if (std::abs(step) <= 2.0 * kEps * scale_of(std::abs(z[i]))) done[i] = true;
    }
    if (all_done) break;
  }

  const double coeff_scale = p.max_abs_coeff();
  double worst = 0.0;
  for (const cd& r : z) {
    const double allowed = tol * std::max(coeff_scale, p.magnitude_at(std::abs(r)));
    worst = std::max(worst, std::abs(p(r)) / allowed);
  }
  if (worst > 1.0) {
    throw NonConvergence("all_roots: residual exceeds tolerance by factor " + std::to_string(worst),
                         worst * tol);
  }

  // Snap near-real approximations onto the axis.
  const double snap = std::sqrt(tol);
  std::vector<Cluster> roots;
  for (const cd& r : z) {
    cd v = r;
    if (std::abs(v.imag()) <= snap * scale_of(std::abs(v))) v = cd(v.real(), 0.0);
    roots.push_back({v, 1});
  }

  // Tight clusters are merged unconditionally.
  {
    std::vector<Cluster> next;
    for (const auto& g : link_groups(roots, [&](double a) { return 10.0 * tol * scale_of(a); }))
      next.push_back(merged(roots, g));
    roots = std::move(next);
  }
  // Wider clusters only when the derivatives confirm a multiple root.
  {
    std::vector<Cluster> next;
    for (const auto& g : link_groups(roots, [](double a) { return 1e-3 * scale_of(a); })) {
      if (g.size() == 1) {
        next.push_back(roots[g.front()]);
        continue;
      }
      Cluster c = merged(roots, g);
      if (std::abs(c.value.imag()) <= snap * scale_of(std::abs(c.value))) c.value = c.value.real();
      if (is_multiple_root(p, c.value, c.multiplicity, snap)) {
        next.push_back(c);
      } else {
        for (std::size_t i : g) next.push_back(roots[i]);
      }
    }
    roots = std::move(next);
  }

  // Enforce exact conjugate symmetry.
  std::vector<ComplexRoot> out;
  std::vector<Cluster> upper, lower;
  for (const auto& r : roots) {
    if (r.value.imag() == 0.0) {
      out.emplace_back(r.value.real(), 0.0, r.multiplicity);
    } else if (r.value.imag() > 0.0) {
      upper.push_back(r);
    } else {
      lower.push_back(r);
    }
  }
  if (upper.size() != lower.size()) {
    throw NonConvergence("all_roots: non-real roots do not pair into conjugates", worst * tol);
  }
  std::vector<bool> used(lower.size(), false);
  for (const auto& u : upper) {
    std::size_t best = lower.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j] || lower[j].multiplicity != u.multiplicity) continue;
      const double d = std::abs(u.value - std::conj(lower[j].value));
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == lower.size()) {
      throw NonConvergence("all_roots: unmatched non-real root", worst * tol);
    }
    used[best] = true;
    const cd avg = 0.5 * (u.value + std::conj(lower[best].value));
    out.emplace_back(avg.real(), avg.imag(), u.multiplicity);
    out.emplace_back(avg.real(), -avg.imag(), u.multiplicity);
  }

  std::sort(out.begin(), out.end(), [](const ComplexRoot& a, const ComplexRoot& b) {
    return a.re != b.re ? a.re < b.re : a.im < b.im;
  });
  return out;
}

}  // namespace itermean
