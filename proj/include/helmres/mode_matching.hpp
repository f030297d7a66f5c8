// SPDX-License-Identifier: Apache-2.0
#pragma once

// Three-region modal representation and the square matching system T(rho).
//
// Unknowns, in column order:
//   c_q       cavity amplitudes of sinh(kappa_q (x+a)) / (kappa_q cosh(l_q))
//   P_k       growing neck branch, referenced at x = L   (A_{k,+})
//   Q_k       decaying neck branch, referenced at x = 0  (a_{k,-})
//   b_j       strip amplitudes at x = L
// so the neck field is sum_k (P_k e^{theta_k (x-L)/eps} + Q_k e^{-theta_k x/eps}) psi_k
// and the only exponential that ever appears is T_k = e^{-theta_k L/eps} <= 1.
// A_{k,-} = Q_k T_k.

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "helmres/double_double.hpp"
#include "helmres/geometry.hpp"
#include "helmres/spectral.hpp"

namespace helmres {

enum class Precision { binary64, double_double };
const char *to_string(Precision p);

template <class Real> constexpr Precision precision_of() {
  return std::is_same_v<Real, double> ? Precision::binary64 : Precision::double_double;
}

/// Raised when a quantity cannot be represented at the working precision.
class PrecisionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Truncation {
  int M = 40;
  int K = 40;
  int J = 40;
  int quadrature_order = 200;

  void check(int j0) const;
  Truncation doubled() const { return {2 * M, 2 * K, 2 * J, 2 * quadrature_order}; }
  bool operator==(const Truncation &) const = default;
};

enum class Termination { open_strip, dirichlet };

struct BasisLayout {
  std::vector<int> cavity;
  std::vector<int> neck;
  std::vector<int> strip;  // empty for the Dirichlet termination

  Eigen::Index nc() const { return Eigen::Index(cavity.size()); }
  Eigen::Index nk() const { return Eigen::Index(neck.size()); }
  Eigen::Index nj() const { return Eigen::Index(strip.size()); }
  Eigen::Index c_offset() const { return 0; }
  Eigen::Index p_offset() const { return nc(); }
  Eigen::Index q_offset() const { return nc() + nk(); }
  Eigen::Index b_offset() const { return nc() + 2 * nk(); }
  Eigen::Index size() const { return nc() + 2 * nk() + nj(); }
};

template <class Real> using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real> using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <class Real> using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real> using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// rho-independent data of one configuration: bases, overlaps, cavity scales.
class MatchingContext {
public:
  MatchingContext(const Geometry &geom, const Truncation &trunc, int j0, std::optional<Parity> parity,
                  Termination termination, Complex<double> rho_ref);

  const Geometry &geometry() const { return geom_; }
  const Truncation &truncation() const { return trunc_; }
  int j0() const { return j0_; }
  Termination termination() const { return termination_; }
  std::optional<Parity> parity() const { return parity_; }
  const BasisLayout &layout() const { return layout_; }

  /// Cavity/neck overlaps (nc x nk) and strip/neck overlaps (nj x nk).
  template <class Real> const RMatrix<Real> &cavity_overlap() const;
  template <class Real> const RMatrix<Real> &strip_overlap() const;
  /// ln-scale l_q = |kappa_q(rho_ref)| a; cavity columns are divided by cosh(l_q),
  /// held fixed so T(rho) stays analytic.
  template <class Real> const RVector<Real> &cavity_scale() const;

private:
  Geometry geom_;
  Truncation trunc_;
  int j0_;
  std::optional<Parity> parity_;
  Termination termination_;
  BasisLayout layout_;
  RMatrix<double> oc_d_, os_d_;
  RMatrix<DoubleDouble> oc_dd_, os_dd_;
  RVector<double> s_d_;
  RVector<DoubleDouble> s_dd_;
};

template <class Real> struct MatchingSystem {
  CMatrix<Real> matrix;
  BasisLayout layout;
  Eigen::VectorXd row_scale;
  Precision precision = precision_of<Real>();
};

template <class Real> MatchingSystem<Real> assemble(const MatchingContext &ctx, const Complex<Real> &rho);

/// Longitudinal exponent of strip channel j in the outgoing selection:
/// i sqrt(rho - alpha_j^2) for j <= j0, -sqrt(alpha_j^2 - rho) otherwise.
template <class Real> Complex<Real> strip_exponent(int j, int j0, const Complex<Real> &rho);

/// kappa_q = sqrt((q pi / b)^2 - rho).
template <class Real> Complex<Real> cavity_kappa(int q, double b, const Complex<Real> &rho);

struct ModalExpansion {
  Geometry geom;
  int j0 = 0;
  Termination termination = Termination::open_strip;
  Complex<double> rho{0.0, 0.0};
  std::vector<int> cavity_index, neck_index, strip_index;
  Eigen::VectorXcd c, A_plus, a_minus, b;
  Eigen::VectorXd cavity_scale;  // l_q, profiles divided by cosh(l_q)

  Eigen::VectorXcd theta() const;
  Eigen::VectorXcd transfer() const;  // e^{-theta_k L / eps}
  Eigen::VectorXcd A_minus() const;   // a_{k,-} e^{-theta_k L / eps}
  Eigen::VectorXcd C() const;         // aperture trace coefficients A_{k,+} + A_{k,-}
  Eigen::VectorXcd kappa() const;
  Eigen::VectorXcd gamma() const;     // strip exponents

  bool empty() const { return c.size() == 0 && A_plus.size() == 0; }
  void scale(Complex<double> s);
};

/// Expansion from a kernel vector of assemble(ctx, rho).
ModalExpansion make_expansion(const MatchingContext &ctx, Complex<double> rho, const Eigen::VectorXcd &v);

/// Pointwise field and x-derivative.  The region is inferred from (x, y);
/// points outside the closed domain throw std::out_of_range.
Complex<double> field(const ModalExpansion &e, double x, double y);
Complex<double> field_dx(const ModalExpansion &e, double x, double y);
Complex<double> field(const ModalExpansion &e, Region r, double x, double y);
Complex<double> field_dx(const ModalExpansion &e, Region r, double x, double y);

/// Squared L2 norm over cavity, neck and the strip section [L, x_end], in closed form.
double norm_squared(const ModalExpansion &e, double x_end);

/// Scales to unit L2 norm over the domain truncated at x_end and rotates the
/// phase so the dominant cavity coefficient is real positive.
void normalize(ModalExpansion &e, double x_end);

struct JunctionResidual {
  double r0 = 0.0;  // mismatch of (u, d_x u) at x = 0
  double rL = 0.0;  // mismatch at x = L
};

/// L2 norms of the trace and derivative mismatches, by composite quadrature.
JunctionResidual junction_residual(const ModalExpansion &e, int order = 200);

}  // namespace helmres
