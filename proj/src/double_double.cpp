// SPDX-License-Identifier: Apache-2.0
#include "helmres/double_double.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace helmres {

DoubleDouble abs(const DoubleDouble &x) { return x.hi() < 0.0 ? -x : x; }
DoubleDouble fabs(const DoubleDouble &x) { return abs(x); }

DoubleDouble sqrt(const DoubleDouble &x) {
  if (x.hi() <= 0.0) {
    if (x.hi() == 0.0) return DoubleDouble(0.0);
    return DoubleDouble(std::numeric_limits<double>::quiet_NaN());
  }
  // One Newton step from the double root doubles the accurate bits.
  const double r = std::sqrt(x.hi());
  const DoubleDouble rr(r);
  return rr + (x - rr * rr) / DoubleDouble(2.0 * r);
}

DoubleDouble floor(const DoubleDouble &x) {
  double hi = std::floor(x.hi());
  double lo = 0.0;
  if (hi == x.hi()) lo = std::floor(x.lo());
  return DoubleDouble(hi) + DoubleDouble(lo);
}

DoubleDouble ldexp(const DoubleDouble &x, int e) {
  return {std::ldexp(x.hi(), e), std::ldexp(x.lo(), e)};
}

namespace {

// exp(r) - 1 for |r| <= ln2/2^10 by Taylor series.
DoubleDouble expm1_small(const DoubleDouble &r) {
  DoubleDouble term = r;
  DoubleDouble sum = r;
  for (int n = 2; n < 30; ++n) {
    term = term * r / DoubleDouble(n);
    sum += term;
    if (std::fabs(term.hi()) < 1e-34 * std::fabs(sum.hi())) break;
  }
  return sum;
}

// Taylor series for sin and cos on |x| <= pi/4.
DoubleDouble sin_taylor(const DoubleDouble &x) {
  const DoubleDouble x2 = x * x;
  DoubleDouble term = x;
  DoubleDouble sum = x;
  for (int n = 1; n < 30; ++n) {
    term = -term * x2 / DoubleDouble((2 * n) * (2 * n + 1));
    sum += term;
    if (std::fabs(term.hi()) < 1e-34) break;
  }
  return sum;
}

DoubleDouble cos_taylor(const DoubleDouble &x) {
  const DoubleDouble x2 = x * x;
  DoubleDouble term(1.0);
  DoubleDouble sum(1.0);
  for (int n = 1; n < 30; ++n) {
    term = -term * x2 / DoubleDouble((2 * n - 1) * (2 * n));
    sum += term;
    if (std::fabs(term.hi()) < 1e-34) break;
  }
  return sum;
}

}  // namespace

DoubleDouble expm1(const DoubleDouble &x) {
  if (std::fabs(x.hi()) < 1e-3) return expm1_small(x);
  return exp(x) - DoubleDouble(1.0);
}

DoubleDouble exp(const DoubleDouble &x) {
  if (x.hi() > 709.7) return DoubleDouble(std::numeric_limits<double>::infinity());
  if (x.hi() < -745.0) return DoubleDouble(0.0);
  if (x.hi() == 0.0) return DoubleDouble(1.0);
  // x = k ln2 + r, then exp(r) = (1 + expm1(r / 2^10))^(2^10).
  const double k = std::nearbyint(x.hi() / DoubleDouble::ln2().hi());
  const DoubleDouble r = ldexp(x - DoubleDouble::ln2() * DoubleDouble(k), -10);
  DoubleDouble e = expm1_small(r);
  for (int i = 0; i < 10; ++i) e = e * (e + DoubleDouble(2.0));  // (1+e)^2 - 1
  e += DoubleDouble(1.0);
  return ldexp(e, static_cast<int>(k));
}

DoubleDouble log(const DoubleDouble &x) {
  if (x.hi() <= 0.0) {
    return DoubleDouble(x.hi() == 0.0 ? -std::numeric_limits<double>::infinity()
                                      : std::numeric_limits<double>::quiet_NaN());
  }
  if (std::isinf(x.hi())) return x;
  // Newton on exp(y) = x starting from the double logarithm.
  DoubleDouble y(std::log(x.hi()));
  y = y + x * exp(-y) - DoubleDouble(1.0);
  return y;
}

void sincos(const DoubleDouble &x, DoubleDouble &s, DoubleDouble &c) {
  if (!std::isfinite(x.hi())) {
    s = c = DoubleDouble(std::numeric_limits<double>::quiet_NaN());
    return;
  }
  const double n = std::nearbyint(x.hi() / DoubleDouble::half_pi().hi());
  if (std::fabs(n) > 1e15) throw std::domain_error("sincos: argument too large for double-double reduction");
  const DoubleDouble r = x - DoubleDouble::half_pi() * DoubleDouble(n);
  const DoubleDouble sr = sin_taylor(r);
  const DoubleDouble cr = cos_taylor(r);
  const auto q = static_cast<std::int64_t>(n) & 3;
  switch (q) {
    case 0: s = sr; c = cr; break;
    case 1: s = cr; c = -sr; break;
    case 2: s = -sr; c = -cr; break;
    default: s = -cr; c = sr; break;
  }
}

DoubleDouble sin(const DoubleDouble &x) {
  DoubleDouble s, c;
  sincos(x, s, c);
  return s;
}

DoubleDouble cos(const DoubleDouble &x) {
  DoubleDouble s, c;
  sincos(x, s, c);
  return c;
}

DoubleDouble sinh(const DoubleDouble &x) {
  if (std::fabs(x.hi()) < 0.5) {
    const DoubleDouble e = expm1(x);
    return (e + e / (e + DoubleDouble(1.0))) * DoubleDouble(0.5);
  }
  const DoubleDouble e = exp(x);
  return (e - DoubleDouble(1.0) / e) * DoubleDouble(0.5);
}

DoubleDouble cosh(const DoubleDouble &x) {
  const DoubleDouble e = exp(abs(x));
  return (e + DoubleDouble(1.0) / e) * DoubleDouble(0.5);
}

DoubleDouble hypot(const DoubleDouble &x, const DoubleDouble &y) {
  DoubleDouble ax = abs(x);
  DoubleDouble ay = abs(y);
  if (ax < ay) std::swap(ax, ay);
  if (ax.hi() == 0.0) return DoubleDouble(0.0);
  if (std::isinf(ax.hi())) return ax;
  const DoubleDouble t = ay / ax;
  return ax * sqrt(DoubleDouble(1.0) + t * t);
}

DoubleDouble atan2(const DoubleDouble &y, const DoubleDouble &x) {
  if (x.hi() == 0.0 && y.hi() == 0.0) return DoubleDouble(0.0);
  // Newton on the angle using the double estimate; sin/cos are accurate in dd.
  DoubleDouble a(std::atan2(y.hi(), x.hi()));
  const DoubleDouble r = hypot(x, y);
  const DoubleDouble xn = x / r;
  const DoubleDouble yn = y / r;
  for (int i = 0; i < 2; ++i) {
    DoubleDouble s, c;
    sincos(a, s, c);
    a += c * yn - s * xn;
  }
  return a;
}

DoubleDouble pow(const DoubleDouble &x, const DoubleDouble &y) { return exp(y * log(x)); }

std::string to_string(const DoubleDouble &x, int digits) {
  // Adequate for diagnostics: hi part to full precision plus the residual.
  std::ostringstream os;
  os << std::setprecision(17) << x.hi();
  if (x.lo() != 0.0 && digits > 17) os << (x.lo() < 0 ? " - " : " + ") << std::setprecision(17) << std::fabs(x.lo());
  return os.str();
}

std::ostream &operator<<(std::ostream &os, const DoubleDouble &x) { return os << to_string(x); }

}  // namespace helmres
