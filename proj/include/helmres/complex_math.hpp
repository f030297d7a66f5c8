// SPDX-License-Identifier: Apache-2.0
#pragma once

// Elementary complex functions written against the real-type interface
// (sin, cos, exp, sinh, cosh found by ADL) so they work for double and
// DoubleDouble alike.

#include <cmath>
#include <complex>

#include "helmres/double_double.hpp"

namespace helmres::cmath {

template <class Real> std::complex<Real> exp(const std::complex<Real> &z) {
  using std::cos;
  using std::exp;
  using std::sin;
  const Real m = exp(z.real());
  if (z.imag() == Real(0.0)) return {m, Real(0.0)};
  return {m * cos(z.imag()), m * sin(z.imag())};
}

template <class Real> std::complex<Real> sinh(const std::complex<Real> &z) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  return {sinh(z.real()) * cos(z.imag()), cosh(z.real()) * sin(z.imag())};
}

template <class Real> std::complex<Real> cosh(const std::complex<Real> &z) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  return {cosh(z.real()) * cos(z.imag()), sinh(z.real()) * sin(z.imag())};
}

/// sinh(z) / z, entire, with the series near the origin.
template <class Real> std::complex<Real> sinhc(const std::complex<Real> &z) {
  using std::abs;
  if (abs(z) < Real(1e-2)) {
    const std::complex<Real> z2 = z * z;
    std::complex<Real> sum(Real(1.0));
    std::complex<Real> term(Real(1.0));
    for (int n = 1; n <= 6; ++n) {
      term = term * z2 / Real(double((2 * n) * (2 * n + 1)));
      sum += term;
    }
    return sum;
  }
  return cmath::sinh(z) / z;
}

/// cosh(z) / cosh(l) and sinh(z) / cosh(l) for real l >= 0, without forming either factor.
template <class Real> std::complex<Real> cosh_ratio(const std::complex<Real> &z, const Real &l) {
  using std::exp;
  const std::complex<Real> lc(l);
  return (cmath::exp(z - lc) + cmath::exp(-z - lc)) / (Real(1.0) + exp(Real(-2.0) * l));
}

template <class Real> std::complex<Real> sinh_ratio(const std::complex<Real> &z, const Real &l) {
  using std::exp;
  const std::complex<Real> lc(l);
  return (cmath::exp(z - lc) - cmath::exp(-z - lc)) / (Real(1.0) + exp(Real(-2.0) * l));
}

/// sinhc(z) / cosh(l).
template <class Real> std::complex<Real> sinhc_ratio(const std::complex<Real> &z, const Real &l) {
  using std::abs;
  using std::cosh;
  if (abs(z) < Real(1.0)) return cmath::sinhc(z) / cosh(l);
  return sinh_ratio(z, l) / z;
}

template <class Real> Real norm(const std::complex<Real> &z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

template <class Real> Real abs(const std::complex<Real> &z) {
  using std::hypot;
  return hypot(z.real(), z.imag());
}

template <class To, class From> std::complex<To> convert(const std::complex<From> &z) {
  return {To(z.real()), To(z.imag())};
}

}  // namespace helmres::cmath
