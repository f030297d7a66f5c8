// SPDX-License-Identifier: Apache-2.0
// helmres_acceptance <n> : evaluates acceptance criterion n (1..10) and prints
// one line "criterion <n> <name>: PASS|FAIL (details)".  Exit status 0 on PASS.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "helmres/analysis.hpp"
#include "helmres/run.hpp"

using namespace helmres;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

const std::vector<double> kGrid = {0.4, 0.3, 0.25, 0.2, 0.15, 0.12};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct UnitSquare {
  Geometry g{1.0, 1.0, 1.0, 0.4};
  CavityMode mode = cavity_eigenpair(g, 1, 1);
  Truncation trunc{};
};

std::vector<SweepRecord> unit_square_sweep() {
  const UnitSquare u;
  return sweep(u.g, u.mode, kGrid, u.trunc);
}

bool all_ok(const std::vector<SweepRecord> &recs, std::string &why) {
  for (const auto &r : recs)
    if (!r.ok()) {
      why = r.error;
      return false;
    }
  return true;
}

Verdict constants_check() {
  const ConstantsReport c = constants();
  const auto chk = check_constants(c);
  Verdict v;
  v.pass = chk["pass"].get<bool>();
  v.detail = fmt("I1=%.9f closed=%.9f, I2=%.9f closed=%.9f, tau1^2+tau2^2=%.4f", c.I1, c.I1_closed, c.I2,
                 c.I2_closed, c.tau_sum_sq);
  for (const auto &kv : chk.items())
    if (!kv.value().get<bool>()) v.detail += ", failed " + kv.key();
  return v;
}

Verdict overlaps() {
  double worst = 0.0;
  std::string where;
  int degenerate = 0;
  auto track = [&](const TransverseMode &a, const TransverseMode &b, double eps) {
    const double err = std::fabs(overlap<double>(a, b) - overlap_quadrature(a, b, 400));
    if (err > worst) {
      worst = err;
      where = fmt("eps=%g %s%d/%s%d", eps, to_string(a.region), a.index, to_string(b.region), b.index);
    }
  };
  for (double eps : {0.05, 0.1, 0.2, 0.3})
    for (int k = 1; k <= 60; ++k) {
      const TransverseMode nk = neck_mode(k, eps);
      for (int j = 1; j <= 60; ++j) {
        if (std::fabs(eps * j - k) < 1e-9) ++degenerate;
        track(nk, strip_mode(j), eps);
        track(cavity_mode_y(j, 1.0), nk, eps);
      }
    }
  return {worst <= 1e-12 && degenerate > 0,
          fmt("max abs error %.3e (%s), %d degenerate pairs", worst, where.c_str(), degenerate)};
}

Verdict closed_cavity() {
  const UnitSquare u;
  const double lambda0 = u.mode.eigenvalue;
  const ClosedEigen hi = closed_eigen(u.g.with_eps(0.4), u.mode, u.trunc, lambda0);
  const ClosedEigen lo = closed_eigen(u.g.with_eps(0.12), u.mode, u.trunc, double(hi.lambda));
  const double d_hi = std::fabs(double(hi.lambda) - lambda0), d_lo = std::fabs(double(lo.lambda) - lambda0);
  // complex solve of the sealed problem from an off-axis seed
  SolverOptions o;
  const Resonance r_hi = find_resonance(u.g.with_eps(0.4), u.mode, u.trunc, {double(hi.lambda), 0.01}, o,
                                        Termination::dirichlet);
  const Resonance r_lo = find_resonance(u.g.with_eps(0.12), u.mode, u.trunc, {double(lo.lambda), 0.01}, o,
                                        Termination::dirichlet);
  auto rel_im = [](const Resonance &r) {
    return std::fabs(double(r.rho_extended.imag())) / std::abs(r.rho);
  };
  const double tol_hi = r_hi.precision == Precision::binary64 ? o.rel_tol : o.rel_tol_extended;
  const double tol_lo = r_lo.precision == Precision::binary64 ? o.rel_tol : o.rel_tol_extended;
  const bool real = hi.imag_residual <= 1e-8 && lo.imag_residual <= 1e-8 && rel_im(r_hi) <= 10 * tol_hi &&
                    rel_im(r_lo) <= 10 * tol_lo;
  const bool agree = std::fabs(r_lo.rho.real() - double(lo.lambda)) <= 1e-10 * double(lo.lambda) &&
                     std::fabs(r_hi.rho.real() - double(hi.lambda)) <= 1e-10 * double(hi.lambda);
  return {d_lo < d_hi && real && agree,
          fmt("lambda0=%.12f lambda(0.4)=%.12f lambda(0.12)=%.12f, |Im|/|rho| = %.1e, %.1e", lambda0,
              double(hi.lambda), double(lo.lambda), rel_im(r_hi), rel_im(r_lo))};
}

Verdict sandwich() {
  const auto recs = unit_square_sweep();
  std::string why;
  if (!all_ok(recs, why)) return {false, why};
  const WidthLawCheck w = check_width_law(recs, 1.0);
  return {w.pass(), fmt("slope %.4f (target %.4f), N %.3f, residual %.3f, sandwich %s", w.fit.slope,
                        w.target_slope, w.fit.exponent, w.fit.residual, w.sandwich_ok ? "holds" : "violated")};
}

Verdict proximity() {
  const auto recs = unit_square_sweep();
  std::string why;
  if (!all_ok(recs, why)) return {false, why};
  const ProximityCheck p = check_proximity(recs, 1.0);
  std::string d = fmt("ln C = %.3f;", p.log_C);
  for (const auto &pt : p.points) d += fmt(" eps=%g: %.2f <= %.2f", pt.eps, pt.log_value, pt.log_upper);
  return {p.pass, d};
}

Verdict green() {
  const auto recs = unit_square_sweep();
  std::string why;
  if (!all_ok(recs, why)) return {false, why};
  bool pass = true;
  std::string d;
  for (const auto &r : recs) {
    if (r.eps < 0.25) continue;
    const double direct = double(r.rho_extended.imag());
    const double flux = r.flux_sign * std::exp(r.log_abs_im_flux);
    const double rel = std::fabs(direct - flux) / std::fabs(direct);
    pass = pass && r.imag_resolved && rel <= 5e-4;
    d += fmt("eps=%g: direct %.6e flux %.6e rel %.1e; ", r.eps, direct, flux, rel);
  }
  return {pass, d};
}

Verdict chain() {
  const auto recs = unit_square_sweep();
  std::string why;
  if (!all_ok(recs, why)) return {false, why};
  const ChainReport c = check_coefficient_chain(recs, 1.0);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto &e : c.entries) {
    lo = std::min(lo, e.a1_floor);
    hi = std::max(hi, e.a1_floor);
  }
  return {c.amplitude_ratio_ok && c.a1_floor_ok,
          fmt("amplitude ratio band %.3f (limit 10), a1_floor in [%.3f, %.3f]", c.amplitude_ratio_band, lo, hi)};
}

Verdict truncation() {
  const UnitSquare u;
  const TruncationRobustness t = truncation_robustness(u.g.with_eps(0.2), u.mode, u.trunc);
  return {t.pass(), fmt("rel change %.3e (limit 1e-8); residual x=0 %.3e -> %.3e, x=L %.3e -> %.3e", t.rel_change,
                        t.residual_base.r0, t.residual_refined.r0, t.residual_base.rL, t.residual_refined.rL)};
}

Verdict xmax() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> A(0.1, 10.0), tau(0.01, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const XmaxResult r = xmax_check(A(rng), tau(rng), tau(rng));
    worst = std::max(worst, r.abs_error / std::max(1.0, r.closed_max));
  }
  return {worst <= 1e-9, fmt("max error %.3e over 100 triples", worst)};
}

Verdict decay_sums() {
  const UnitSquare u;
  const auto recs = unit_square_sweep();
  std::string why;
  if (!all_ok(recs, why)) return {false, why};
  const DecayReport a = check_decay_sums(recs, 1.0);
  const KStability k = decay_sums_k_stability(u.g.with_eps(0.2), u.mode, u.trunc);
  return {a.pass() && k.ok, fmt("open |b|^2 slope %.4f (target %.4f), strip_sum %s, growth %s, K-doubling change %.2e/%.2e",
                                a.open_b2_fit.slope, -M_PI, a.strip_bound_ok ? "ok" : "violated",
                                a.growth_ok ? "ok" : "violated", k.rel_change_plus, k.rel_change_minus)};
}

}  // namespace

int main(int argc, char **argv) {
  const std::map<int, std::pair<const char *, std::function<Verdict()>>> criteria = {
      {1, {"constants", constants_check}}, {2, {"overlaps", overlaps}},     {3, {"closed-cavity", closed_cavity}},
      {4, {"sandwich", sandwich}},         {5, {"proximity", proximity}},   {6, {"green-flux", green}},
      {7, {"coefficient-chain", chain}},   {8, {"truncation", truncation}}, {9, {"xmax", xmax}},
      {10, {"decay-sums", decay_sums}},
  };
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion 1..10>\n", argv[0]);
    return 2;
  }
  const int n = std::atoi(argv[1]);
  const auto it = criteria.find(n);
  if (it == criteria.end()) {
    std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
    return 2;
  }
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = it->second.second();
  } catch (const std::exception &e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("criterion %d %s: %s (%s) [%.2f s]\n", n, it->second.first, v.pass ? "PASS" : "FAIL",
              v.detail.c_str(), secs);
  return v.pass ? 0 : 1;
}
