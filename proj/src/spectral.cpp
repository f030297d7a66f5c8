// SPDX-License-Identifier: Apache-2.0
#include "helmres/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace helmres {

const char *to_string(Region r) {
  switch (r) {
    case Region::neck: return "neck";
    case Region::strip: return "strip";
    case Region::cavity: return "cavity";
  }
  return "?";
}

const char *to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

template <> double pi_v<double>() { return M_PI; }
template <> DoubleDouble pi_v<DoubleDouble>() { return DoubleDouble::pi(); }

int TransverseMode::sign() const {
  if (region != Region::cavity) return 1;
  // sin(q pi (y + b/2) / b) = sin(q pi / 2) cos(q pi y / b) + cos(q pi / 2) sin(q pi y / b)
  const int m = index % 2 == 1 ? (index - 1) / 2 : index / 2;
  return m % 2 == 0 ? 1 : -1;
}

template <class Real> Real TransverseMode::wavenumber() const {
  return Real(index) * pi_v<Real>() / Real(2.0 * half_width);
}

double TransverseMode::value(double y) const {
  if (std::fabs(y) > half_width) return 0.0;
  const double w = wavenumber<double>();
  const double amp = sign() / std::sqrt(half_width);
  return parity() == Parity::even ? amp * std::cos(w * y) : amp * std::sin(w * y);
}

TransverseMode neck_mode(int k, double eps) {
  if (k < 1) throw std::domain_error("neck mode index must be >= 1");
  return {Region::neck, k, eps};
}
TransverseMode strip_mode(int j) {
  if (j < 1) throw std::domain_error("strip mode index must be >= 1");
  return {Region::strip, j, 1.0};
}
TransverseMode cavity_mode_y(int q, double b) {
  if (q < 1) throw std::domain_error("cavity mode index must be >= 1");
  return {Region::cavity, q, 0.5 * b};
}

template <class Real> Real alpha(int k) {
  if (k < 1) throw std::domain_error("alpha_k requires k >= 1");
  return Real(k) * pi_v<Real>() / Real(2.0);
}

template <class Real> Complex<Real> principal_sqrt(const Complex<Real> &z) {
  using std::abs;
  using std::sqrt;
  const Real x = z.real();
  const Real y = z.imag();
  if (y == Real(0.0)) {
    if (x >= Real(0.0)) return {sqrt(x), Real(0.0)};
    return {Real(0.0), sqrt(-x)};
  }
  // Cancellation-free half-angle form.
  const Real r = hypot(x, y);
  if (x >= Real(0.0)) {
    const Real re = sqrt(Real(0.5) * (r + x));
    return {re, y / (Real(2.0) * re)};
  }
  Real im = sqrt(Real(0.5) * (r - x));
  if (y < Real(0.0)) im = -im;
  return {y / (Real(2.0) * im), im};
}

template <class Real> Complex<Real> theta(int k, double eps, const Complex<Real> &rho) {
  if (!(eps > 0.0)) throw std::domain_error("theta requires eps > 0");
  const Real a = alpha<Real>(k);
  const Real e2 = Real(eps) * Real(eps);
  return principal_sqrt<Real>(Complex<Real>(a * a - e2 * rho.real(), -e2 * rho.imag()));
}

template <class Real> Complex<Real> sqrt_prop(int j, const Complex<Real> &rho) {
  const Real a = alpha<Real>(j);
  const Complex<Real> arg(a * a - rho.real(), -rho.imag());
  if (arg.real() == Real(0.0) && arg.imag() == Real(0.0))
    throw BranchPointError("rho lies exactly on the threshold alpha_" + std::to_string(j) + "^2");
  return principal_sqrt<Real>(arg);
}

template <class Real> Complex<Real> open_wavenumber(int j, const Complex<Real> &rho) {
  const Real a = alpha<Real>(j);
  const Complex<Real> arg(rho.real() - a * a, rho.imag());
  if (arg.real() == Real(0.0) && arg.imag() == Real(0.0))
    throw BranchPointError("rho lies exactly on the threshold alpha_" + std::to_string(j) + "^2");
  return principal_sqrt<Real>(arg);
}

namespace {

// sin(d h) / d with the analytic limit near d = 0.
template <class Real> Real sin_ratio(const Real &d, const Real &h, bool degenerate) {
  using std::sin;
  if (degenerate) {
    const Real t = d * h;
    const Real t2 = t * t;
    return h * (Real(1.0) - t2 / Real(6.0) + t2 * t2 / Real(120.0));
  }
  return sin(d * h) / d;
}

}  // namespace

template <class Real> Real overlap(const TransverseMode &a, const TransverseMode &b) {
  using std::abs;
  using std::sqrt;
  if (a.parity() != b.parity()) return Real(0.0);
  const double h = std::min(a.half_width, b.half_width);
  const Real hr(h);
  const Real w1 = a.wavenumber<Real>();
  const Real w2 = b.wavenumber<Real>();
  const Real diff = w1 - w2;
  const Real sum = w1 + w2;
  // Relative window of 1e-6 around coincident wavenumbers (e.g. eps j = 1).
  const bool degenerate = abs(diff) <= Real(1e-6) * max(w1, w2);
  const Real first = sin_ratio<Real>(diff, hr, degenerate);
  const Real second = sin_ratio<Real>(sum, hr, false);
  const Real amp = Real(double(a.sign() * b.sign())) / sqrt(Real(a.half_width) * Real(b.half_width));
  return a.parity() == Parity::even ? amp * (first + second) : amp * (first - second);
}

const GaussRule &gauss_legendre(int order) {
  if (order < 2) throw std::invalid_argument("Gauss-Legendre order must be >= 2");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it_newton = 0; it_newton < 100; ++it_newton) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= order; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= order; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

double overlap_quadrature(const TransverseMode &a, const TransverseMode &b, int order) {
  const double h = std::min(a.half_width, b.half_width);
  return integrate([&](double y) { return a.value(y) * b.value(y); }, -h, h, order);
}

template double TransverseMode::wavenumber<double>() const;
template DoubleDouble TransverseMode::wavenumber<DoubleDouble>() const;

#define HELMRES_INSTANTIATE(Real)                                                        \
  template Real alpha<Real>(int);                                                        \
  template Complex<Real> principal_sqrt<Real>(const Complex<Real> &);                    \
  template Complex<Real> theta<Real>(int, double, const Complex<Real> &);                \
  template Complex<Real> sqrt_prop<Real>(int, const Complex<Real> &);                    \
  template Complex<Real> open_wavenumber<Real>(int, const Complex<Real> &);              \
  template Real overlap<Real>(const TransverseMode &, const TransverseMode &);

HELMRES_INSTANTIATE(double)
HELMRES_INSTANTIATE(DoubleDouble)
#undef HELMRES_INSTANTIATE

}  // namespace helmres
