// SPDX-License-Identifier: Apache-2.0
#pragma once

// Transverse bases of the three regions, branch-controlled square roots for
// the longitudinal exponents, and junction overlap integrals.
//
// All transverse modes share one shape: s * h^{-1/2} * trig(n pi y / (2 h))
// on (-h, h), where h is the half-width of the region, trig is cos for odd n
// and sin for even n, and s = +-1 is only non-trivial for the cavity basis,
// which is written as sin(q pi (y + b/2) / b) in cavity coordinates.

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "helmres/double_double.hpp"

namespace helmres {

template <class Real> using Complex = std::complex<Real>;

enum class Region { neck, strip, cavity };
enum class Parity { even, odd };

const char *to_string(Region r);
const char *to_string(Parity p);

/// Raised when a longitudinal exponent is requested exactly at a threshold,
/// where the square root has its branch point.
class BranchPointError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct TransverseMode {
  Region region = Region::neck;
  int index = 1;
  double half_width = 1.0;

  /// y-parity; odd index means cosine type for every basis used here.
  Parity parity() const { return index % 2 == 1 ? Parity::even : Parity::odd; }
  /// Sign s of the cosine/sine representation (cavity modes only).
  int sign() const;
  /// Transverse wavenumber n pi / (2 h); its square is the transverse eigenvalue.
  template <class Real = double> Real wavenumber() const;
  double value(double y) const;
};

TransverseMode neck_mode(int k, double eps);
TransverseMode strip_mode(int j);
TransverseMode cavity_mode_y(int q, double b);

template <class Real = double> Real pi_v();

/// alpha_k = k pi / 2, the square roots of the strip thresholds.
template <class Real = double> Real alpha(int k);

/// Principal square root with the branch cut on the negative real axis and
/// sqrt(-x) = +i sqrt(x) for x > 0, independent of the sign of a zero
/// imaginary part.
template <class Real> Complex<Real> principal_sqrt(const Complex<Real> &z);

/// theta_k = sqrt(alpha_k^2 - eps^2 rho), principal branch.
template <class Real> Complex<Real> theta(int k, double eps, const Complex<Real> &rho);

/// Longitudinal exponent sqrt(alpha_j^2 - rho) of strip channel j (principal).
/// Throws BranchPointError when rho sits exactly on the threshold.
template <class Real> Complex<Real> sqrt_prop(int j, const Complex<Real> &rho);

/// Rotated form sqrt(rho - alpha_j^2) used for open channels, where the
/// outgoing wave is exp(i (x - L) sqrt(rho - alpha_j^2)).  For Im rho <= 0
/// this equals -i sqrt_prop(j, rho) but stays analytic across Im rho = 0.
template <class Real> Complex<Real> open_wavenumber(int j, const Complex<Real> &rho);

/// Closed-form overlap of two transverse modes over the smaller interval.
template <class Real = double> Real overlap(const TransverseMode &a, const TransverseMode &b);

/// Gauss-Legendre quadrature of the same product; independent oracle.
double overlap_quadrature(const TransverseMode &a, const TransverseMode &b, int order);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule &gauss_legendre(int order);

/// Integrate f over [lo, hi] with a single Gauss-Legendre rule.
template <class F> auto integrate(F &&f, double lo, double hi, int order) {
  const GaussRule &rule = gauss_legendre(order);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  decltype(f(mid)) sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

}  // namespace helmres
