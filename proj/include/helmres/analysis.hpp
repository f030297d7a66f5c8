// SPDX-License-Identifier: Apache-2.0
#pragma once

// Checks of the resonance-width law, the auxiliary constants, the coefficient
// inequalities and the decay estimates against sweep data.  Exponentially small
// quantities are handled as natural logarithms throughout.

#include <string>
#include <vector>

#include "helmres/mode_matching.hpp"
#include "helmres/resonance.hpp"

namespace helmres {

struct WidthLawFit {
  double slope = 0.0;     // coefficient of 1/eps
  double exponent = 0.0;  // coefficient of ln eps
  double intercept = 0.0;
  double residual = 0.0;  // Euclidean norm of the log residuals
  double eps_min = 0.0;
  double eps_max = 0.0;
  int points = 0;
};

/// Least-squares fit of log_values = s / eps + N ln eps + c.
WidthLawFit fit_width_law(const std::vector<double> &eps, const std::vector<double> &log_values);
/// Fit on the flux-based log|Im rho| of the successful records.
WidthLawFit fit_width_law(const std::vector<SweepRecord> &records);

struct PointBound {
  double eps = 0.0;
  double log_value = 0.0;
  double log_lower = 0.0;  // -inf when there is no lower bound
  double log_upper = 0.0;
  bool ok = false;
};

struct WidthLawCheck {
  WidthLawFit fit;
  double target_slope = 0.0;  // -pi L
  bool slope_ok = false;
  bool residual_ok = false;
  double log_C = 0.0;         // upper constant fitted at the largest eps
  std::vector<PointBound> sandwich;
  bool sandwich_ok = false;
  bool pass() const { return slope_ok && sandwich_ok; }
};

/// |s + pi L| <= slope_tol pi L and eps^N0 e^{-pi L/eps} <= |Im rho| <= C e^{-(1-delta) pi L/eps}.
WidthLawCheck check_width_law(const std::vector<double> &eps, const std::vector<double> &log_abs_im, double L,
                              double N0 = 10.0, double delta = 0.25, double slope_tol = 0.1,
                              double residual_tol = 0.5);
WidthLawCheck check_width_law(const std::vector<SweepRecord> &records, double L);

struct ProximityCheck {
  double log_C = 0.0;
  std::vector<PointBound> points;
  bool pass = false;
};

/// |rho - lambda| <= C e^{-(1-delta) pi L/eps} with C fitted at the largest eps.
ProximityCheck check_proximity(const std::vector<SweepRecord> &records, double L, double delta = 0.25);

struct GammaSample {
  double eps = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

struct ConstantsReport {
  double gamma0 = 0.0;
  double I1 = 0.0;          // quadrature
  double I1_closed = 0.0;
  double I2 = 0.0;          // quadrature
  double I2_closed = 0.0;
  double tau1_limit = 0.0;  // (1/2) (sum_{k>=2} k^-2)^{1/2}
  double tau2_limit = 0.0;  // (4 I1 + 6/pi^2 I2)^{1/2}
  double tau_sum_sq = 0.0;
  std::vector<GammaSample> samples;
};

double gamma1_sum(double eps, int j0);
double gamma2_sum(double eps);
ConstantsReport constants(int j0 = 2, const std::vector<double> &eps_samples = {0.1, 0.05, 0.02, 0.01});

struct XmaxResult {
  double numeric_max = 0.0;
  double numeric_argmax = 0.0;
  double closed_max = 0.0;
  double closed_argmax = 0.0;
  double abs_error = 0.0;
};

/// Maximizes X -> tau1 sqrt(A^2 - X) + tau2 sqrt(X) on [0, A^2] by golden section.
XmaxResult xmax_check(double A, double tau1, double tau2);

struct ChainEntry {
  double eps = 0.0;
  bool amplitude_ratio_applicable = false;
  double log_amplitude_ratio = 0.0;  // ln(sqrt(eps) |A_{1,-}| / sum_{j<=j0} |b_j|)
  double a1_floor = 0.0;           // ln|A_{1,-}| + pi L/(2 eps) - 4.5 ln eps
  double neck_tail = 0.0;             // ln sum_{k>=2} k |A_{k,-}|^2 + 2 pi L/eps + (1/2) ln eps
};

struct ChainReport {
  std::vector<ChainEntry> entries;
  double amplitude_ratio_band = 0.0;  // max/min of the amplitude ratio ratio over the sweep
  bool amplitude_ratio_ok = false;
  bool a1_floor_ok = false;
  bool neck_tail_ok = false;
  bool pass() const { return amplitude_ratio_ok && a1_floor_ok; }
};

ChainEntry verify_coefficient_chain(const ModalExpansion &e, double L);
/// Bands: amplitude ratio ratio within `band`; a1_floor and neck_tail within ln(band) of their largest-eps value.
ChainReport check_coefficient_chain(const std::vector<SweepRecord> &records, double L, double band = 10.0);

struct DecaySums {
  double eps = 0.0;
  double S_plus = 0.0;   // sum_k k |a_{k,+} e^{c theta_k}|^2
  double S_minus = 0.0;  // sum_k k |a_{k,-} e^{-c theta_k}|^2
  double open_b2 = 0.0;  // sum_{j<=j0} |b_j|^2
  double strip_sum = 0.0;     // open_b2 + sum_{j>j0} |b_j|^2 e^{-Re sqrt(alpha_j^2 - rho)}
};

DecaySums verify_decay_sums(const ModalExpansion &e, double c = 1.0);

struct DecayReport {
  std::vector<DecaySums> entries;
  WidthLawFit open_b2_fit;
  bool open_b2_slope_ok = false;  // fitted slope within 15% of -pi L
  std::vector<PointBound> strip_bound;
  bool strip_bound_ok = false;
  std::vector<PointBound> growth;  // S eps^{1/2} bounded
  bool growth_ok = false;
  bool pass() const { return open_b2_slope_ok && strip_bound_ok && growth_ok; }
};

DecayReport check_decay_sums(const std::vector<SweepRecord> &records, double L, double c = 1.0,
                              double delta = 0.25, double slope_tol = 0.15, double band = 10.0);

struct KStability {
  double eps = 0.0;
  DecaySums base, refined;
  double rel_change_plus = 0.0;
  double rel_change_minus = 0.0;
  double k3_C_base = 0.0, k3_C_refined = 0.0;  // sum k^3 |C_k|^2
  bool ok = false;
};

/// Decay partial sums at K and 2K (other counts fixed).
KStability decay_sums_k_stability(const Geometry &g, const CavityMode &mode, const Truncation &trunc,
                                const SolverOptions &opts = {}, double c = 1.0, double tol = 0.1);

struct TruncationRobustness {
  double eps = 0.0;
  Truncation base, refined;
  Complex<double> rho_base, rho_refined;
  double rel_change = 0.0;
  JunctionResidual residual_base, residual_refined;
  bool rho_ok = false;        // rel_change <= tol
  bool residuals_ok = false;  // both residuals decrease
  bool pass() const { return rho_ok && residuals_ok; }
};

/// Resonance and junction residuals at `trunc` and at doubled M, K, J.
TruncationRobustness truncation_robustness(const Geometry &g, const CavityMode &mode, const Truncation &trunc,
                                           const SolverOptions &opts = {}, double tol = 1e-8);

struct GreenReport {
  bool applicable = false;
  double im_rho = 0.0;
  double boundary_term = 0.0;       // Im int u d_x conj(u) dy / ||u||^2 at x = L + 1
  double rel_error = 0.0;
  double boundary_term_far = 0.0;   // same at x = L + 2 with the norm extended
  double rel_error_far = 0.0;
  double open_flux_near = 0.0;      // open-channel flux from projections, decay factor removed
  double open_flux_far = 0.0;
  double open_flux_rel_diff = 0.0;
};

/// Green identity check from pointwise field evaluation in the strip.
GreenReport verify_green(const ModalExpansion &e, double im_rho, int order = 200);

}  // namespace helmres
