// SPDX-License-Identifier: Apache-2.0
#pragma once

// Unevaluated-sum double-double arithmetic (~106-bit significand). Error-free
// transforms follow Dekker / Knuth; transcendental functions use argument
// reduction followed by Taylor series evaluated entirely in double-double.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <type_traits>

#include <Eigen/Core>

namespace helmres {

class DoubleDouble {
public:
  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double x) : hi_(x), lo_(0.0) {}  // NOLINT(google-explicit-constructor)
  template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
  constexpr DoubleDouble(I x) : hi_(static_cast<double>(x)), lo_(0.0) {}  // NOLINT
  constexpr DoubleDouble(double hi, double lo) : hi_(hi), lo_(lo) {}

  constexpr double hi() const { return hi_; }
  constexpr double lo() const { return lo_; }
  explicit constexpr operator double() const { return hi_ + lo_; }

  static DoubleDouble pi() { return {3.141592653589793116e+00, 1.224646799147353207e-16}; }
  static DoubleDouble half_pi() { return {1.570796326794896558e+00, 6.123233995736766036e-17}; }
  static DoubleDouble ln2() { return {6.931471805599452862e-01, 2.319046813846299558e-17}; }

  constexpr DoubleDouble operator-() const { return {-hi_, -lo_}; }

  DoubleDouble &operator+=(const DoubleDouble &o) {
    double s, e;
    two_sum(hi_, o.hi_, s, e);
    if (!std::isfinite(s)) {
      *this = DoubleDouble(s);
      return *this;
    }
    double t, f;
    two_sum(lo_, o.lo_, t, f);
    e += t;
    quick_two_sum(s, e, s, e);
    e += f;
    quick_two_sum(s, e, hi_, lo_);
    return *this;
  }
  DoubleDouble &operator-=(const DoubleDouble &o) { return *this += -o; }
  DoubleDouble &operator*=(const DoubleDouble &o) {
    double p = hi_ * o.hi_;
    if (!std::isfinite(p) || p == 0.0) {
      *this = DoubleDouble(p);
      return *this;
    }
    double e = std::fma(hi_, o.hi_, -p);
    e += hi_ * o.lo_ + lo_ * o.hi_;
    quick_two_sum(p, e, hi_, lo_);
    return *this;
  }
  DoubleDouble &operator/=(const DoubleDouble &o) {
    // Long division: q1 + q2 + q3 with exact remainders.
    double q1 = hi_ / o.hi_;
    if (!std::isfinite(q1) || q1 == 0.0) {
      *this = DoubleDouble(q1);
      return *this;
    }
    DoubleDouble r = *this - o * DoubleDouble(q1);
    double q2 = r.hi_ / o.hi_;
    r -= o * DoubleDouble(q2);
    double q3 = r.hi_ / o.hi_;
    double s, e;
    quick_two_sum(q1, q2, s, e);
    *this = DoubleDouble(s, e) + DoubleDouble(q3);
    return *this;
  }

  friend DoubleDouble operator+(DoubleDouble a, const DoubleDouble &b) { return a += b; }
  friend DoubleDouble operator-(DoubleDouble a, const DoubleDouble &b) { return a -= b; }
  friend DoubleDouble operator*(DoubleDouble a, const DoubleDouble &b) { return a *= b; }
  friend DoubleDouble operator/(DoubleDouble a, const DoubleDouble &b) { return a /= b; }

  friend bool operator==(const DoubleDouble &a, const DoubleDouble &b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }
  friend bool operator!=(const DoubleDouble &a, const DoubleDouble &b) { return !(a == b); }
  friend bool operator<(const DoubleDouble &a, const DoubleDouble &b) {
    return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
  }
  friend bool operator>(const DoubleDouble &a, const DoubleDouble &b) { return b < a; }
  friend bool operator<=(const DoubleDouble &a, const DoubleDouble &b) { return !(b < a); }
  friend bool operator>=(const DoubleDouble &a, const DoubleDouble &b) { return !(a < b); }

  friend std::ostream &operator<<(std::ostream &os, const DoubleDouble &x);

private:
  static void two_sum(double a, double b, double &s, double &e) {
    s = a + b;
    double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
  }
  static void quick_two_sum(double a, double b, double &s, double &e) {
    s = a + b;
    e = b - (s - a);
  }

  double hi_ = 0.0;
  double lo_ = 0.0;
};

using dd_real = DoubleDouble;

// Math functions found by ADL, so generic code (including libstdc++'s
// std::complex<T> fallbacks and Eigen) picks them up.
DoubleDouble abs(const DoubleDouble &x);
DoubleDouble fabs(const DoubleDouble &x);
DoubleDouble sqrt(const DoubleDouble &x);
DoubleDouble exp(const DoubleDouble &x);
DoubleDouble expm1(const DoubleDouble &x);
DoubleDouble log(const DoubleDouble &x);
DoubleDouble sin(const DoubleDouble &x);
DoubleDouble cos(const DoubleDouble &x);
void sincos(const DoubleDouble &x, DoubleDouble &s, DoubleDouble &c);
DoubleDouble sinh(const DoubleDouble &x);
DoubleDouble cosh(const DoubleDouble &x);
DoubleDouble atan2(const DoubleDouble &y, const DoubleDouble &x);
DoubleDouble hypot(const DoubleDouble &x, const DoubleDouble &y);
DoubleDouble floor(const DoubleDouble &x);
DoubleDouble ldexp(const DoubleDouble &x, int e);
DoubleDouble pow(const DoubleDouble &x, const DoubleDouble &y);
inline bool isfinite(const DoubleDouble &x) { return std::isfinite(x.hi()); }
inline bool isnan(const DoubleDouble &x) { return std::isnan(x.hi()); }
inline bool isinf(const DoubleDouble &x) { return std::isinf(x.hi()); }
inline DoubleDouble max(const DoubleDouble &a, const DoubleDouble &b) { return a < b ? b : a; }
inline DoubleDouble min(const DoubleDouble &a, const DoubleDouble &b) { return b < a ? b : a; }

std::string to_string(const DoubleDouble &x, int digits = 32);

}  // namespace helmres

namespace std {
template <> class numeric_limits<helmres::DoubleDouble> {
public:
  static constexpr bool is_specialized = true;
  static constexpr bool is_signed = true;
  static constexpr bool is_integer = false;
  static constexpr bool is_exact = false;
  static constexpr bool has_infinity = true;
  static constexpr bool has_quiet_NaN = true;
  static constexpr int digits = 106;
  static constexpr int digits10 = 31;
  static constexpr int max_digits10 = 33;
  static constexpr int radix = 2;
  // Smallest value whose square is still a full-precision double-double, so the
  // unscaled std::complex<DoubleDouble> division never divides by an underflowed norm.
  static constexpr int min_exponent = -484;
  static constexpr int max_exponent = numeric_limits<double>::max_exponent;
  static constexpr helmres::DoubleDouble min() noexcept {
    return helmres::DoubleDouble(0x1p-485);
  }
  static constexpr helmres::DoubleDouble max() noexcept {
    return helmres::DoubleDouble(numeric_limits<double>::max());
  }
  static constexpr helmres::DoubleDouble lowest() noexcept { return -max(); }
  static constexpr helmres::DoubleDouble epsilon() noexcept {
    return helmres::DoubleDouble(4.93038065763132e-32);  // 2^-104
  }
  static constexpr helmres::DoubleDouble round_error() noexcept { return helmres::DoubleDouble(0.5); }
  static constexpr helmres::DoubleDouble infinity() noexcept {
    return helmres::DoubleDouble(numeric_limits<double>::infinity());
  }
  static constexpr helmres::DoubleDouble quiet_NaN() noexcept {
    return helmres::DoubleDouble(numeric_limits<double>::quiet_NaN());
  }
  static constexpr helmres::DoubleDouble denorm_min() noexcept { return min(); }
};
}  // namespace std

namespace Eigen {
template <> struct NumTraits<helmres::DoubleDouble> : GenericNumTraits<helmres::DoubleDouble> {
  using Real = helmres::DoubleDouble;
  using NonInteger = helmres::DoubleDouble;
  using Nested = helmres::DoubleDouble;
  using Literal = helmres::DoubleDouble;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 20,
    MulCost = 20
  };
  static inline Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static inline Real dummy_precision() { return Real(1e-28); }
  static inline Real highest() { return std::numeric_limits<Real>::max(); }
  static inline Real lowest() { return std::numeric_limits<Real>::lowest(); }
  static inline int digits10() { return 31; }
  static inline int digits() { return 106; }
  static inline Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static inline Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
};
}  // namespace Eigen
