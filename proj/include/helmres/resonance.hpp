// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "helmres/double_double.hpp"
#include "helmres/geometry.hpp"
#include "helmres/mode_matching.hpp"

namespace helmres {

enum class PrecisionPolicy { fast, extended, automatic };
const char *to_string(PrecisionPolicy p);
PrecisionPolicy parse_precision_policy(const std::string &s);

struct SolverOptions {
  PrecisionPolicy policy = PrecisionPolicy::automatic;
  double extended_threshold = 25.0;  // switch to double-double when pi L / eps exceeds this
  double precision_limit = 700.0;    // beyond this even double-double cannot hold e^{-pi L / eps}
  int max_iterations = 40;
  double rel_tol = 1e-12;
  double rel_tol_extended = 1e-26;
  double fd_step = 1e-6;             // relative step of the central difference for T'(rho)
  double window_margin = 0.1;
  int scan_points = 57;
  double norm_station = 1.0;         // kernel normalized over the domain cut at x = L + norm_station
};

/// Precision a solve at this geometry needs under the given policy.
/// Throws PrecisionError past the representable range.
Precision required_precision(const Geometry &g, const SolverOptions &opts);

struct ClosedEigen {
  DoubleDouble lambda;
  double imag_residual = 0.0;  // |sin(arg D)| of the phase-corrected determinant at the root
  int iterations = 0;
  Precision precision = Precision::binary64;
};

/// Real eigenvalue of cavity + neck sealed at x = L, bracketed on the channel
/// window (alpha_{j0}^2, alpha_{j0+1}^2) and refined by bisection and Illinois steps.
/// The root closest to `seed` is returned.
ClosedEigen closed_eigen(const Geometry &g, const CavityMode &mode, const Truncation &trunc, double seed,
                         const SolverOptions &opts = {});

struct Iterate {
  Complex<double> rho;
  double sigma_min = 0.0;
  double step = 0.0;
};

struct Resonance {
  Complex<DoubleDouble> rho_extended;
  Complex<double> rho;
  double eps = 0.0;
  std::vector<Iterate> history;
  Precision precision = Precision::binary64;
  double sigma_min = 0.0;
  double sigma_next = 0.0;
  bool converged = false;
  bool imag_resolved = false;  // |Im rho| clearly above the working-precision floor
  ModalExpansion kernel;
};

/// Newton iteration on the smallest singular triplet of T(rho).
Resonance find_resonance(const Geometry &g, const CavityMode &mode, const Truncation &trunc,
                         Complex<double> seed, const SolverOptions &opts = {},
                         Termination termination = Termination::open_strip);

struct FluxImag {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();
  double open_flux = 0.0;              // -sum_{j<=j0} |b_j|^2 Re w_j e^{-2 Im w_j D}
  double evanescent_correction = 0.0;  //  sum_{j>j0}  |b_j|^2 Im s_j e^{-2 Re s_j D}
  double norm_sq = 0.0;
  double station = 0.0;
  double value() const { return sign * std::exp(log_abs); }
};

/// Im rho from the flux through the station x = L + offset, divided by the
/// squared norm of the field on the domain cut there.
FluxImag imag_via_flux(const ModalExpansion &e, double offset = 1.0);

struct SweepRecord {
  double eps = 0.0;
  Complex<double> rho;
  Complex<DoubleDouble> rho_extended;
  DoubleDouble lambda;
  double lambda_imag_residual = 0.0;
  double log_abs_rho_minus_lambda = std::numeric_limits<double>::quiet_NaN();
  double log_abs_im_direct = std::numeric_limits<double>::quiet_NaN();
  int flux_sign = 0;
  double log_abs_im_flux = std::numeric_limits<double>::quiet_NaN();
  JunctionResidual residual;
  double log_abs_A1_minus = std::numeric_limits<double>::quiet_NaN();
  double log_sum_open_b = std::numeric_limits<double>::quiet_NaN();       // sum_{j<=j0} |b_j|
  double log_sum_closed_jb2 = std::numeric_limits<double>::quiet_NaN();   // sum_{j>j0} j |b_j|^2
  double log_sum_k_Aplus2 = std::numeric_limits<double>::quiet_NaN();     // sum_k k |A_{k,+}|^2
  Precision precision = Precision::binary64;
  int iterations = 0;
  double sigma_min = 0.0;
  bool converged = false;
  bool imag_resolved = false;
  std::string error;
  std::optional<ModalExpansion> kernel;

  bool ok() const { return error.empty(); }
};

/// One grid point: closed eigenvalue, resonance seeded from it, summaries.
SweepRecord solve_point(const Geometry &g, const CavityMode &mode, const Truncation &trunc, double lambda_seed,
                        const SolverOptions &opts = {}, bool keep_kernel = true);

/// Continuation along a descending eps grid.  Per-point failures are recorded
/// with the failing eps and do not stop the sweep.
std::vector<SweepRecord> sweep(const Geometry &base, const CavityMode &mode, const std::vector<double> &eps_grid,
                               const Truncation &trunc, const SolverOptions &opts = {}, bool keep_kernels = true);

}  // namespace helmres
