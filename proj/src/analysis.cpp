// SPDX-License-Identifier: Apache-2.0
#include "helmres/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace helmres {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

std::vector<const SweepRecord *> usable(const std::vector<SweepRecord> &records) {
  std::vector<const SweepRecord *> out;
  for (const auto &r : records)
    if (r.ok() && std::isfinite(r.log_abs_im_flux)) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](auto *a, auto *b) { return a->eps > b->eps; });
  return out;
}

}  // namespace

WidthLawFit fit_width_law(const std::vector<double> &eps, const std::vector<double> &log_values) {
  if (eps.size() != log_values.size()) throw std::invalid_argument("width-law fit: size mismatch");
  if (eps.size() < 4) throw std::invalid_argument("width-law fit: at least 4 points are needed");
  const Eigen::Index n = Eigen::Index(eps.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0 / eps[i];
    X(i, 1) = std::log(eps[i]);
    X(i, 2) = 1.0;
    y(i) = log_values[i];
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  WidthLawFit fit;
  fit.slope = beta(0);
  fit.exponent = beta(1);
  fit.intercept = beta(2);
  fit.residual = (X * beta - y).norm();
  fit.eps_min = *std::min_element(eps.begin(), eps.end());
  fit.eps_max = *std::max_element(eps.begin(), eps.end());
  fit.points = int(n);
  return fit;
}

WidthLawFit fit_width_law(const std::vector<SweepRecord> &records) {
  std::vector<double> e, v;
  for (const SweepRecord *r : usable(records)) {
    e.push_back(r->eps);
    v.push_back(r->log_abs_im_flux);
  }
  return fit_width_law(e, v);
}

WidthLawCheck check_width_law(const std::vector<double> &eps, const std::vector<double> &log_abs_im, double L,
                              double N0, double delta, double slope_tol, double residual_tol) {
  WidthLawCheck chk;
  chk.fit = fit_width_law(eps, log_abs_im);
  chk.target_slope = -M_PI * L;
  chk.slope_ok = std::fabs(chk.fit.slope - chk.target_slope) <= slope_tol * M_PI * L;
  chk.residual_ok = chk.fit.residual <= residual_tol;
  const auto imax = std::size_t(std::max_element(eps.begin(), eps.end()) - eps.begin());
  const double rate = (1.0 - delta) * M_PI * L;
  chk.log_C = log_abs_im[imax] + rate / eps[imax];
  chk.sandwich_ok = true;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    PointBound p;
    p.eps = eps[i];
    p.log_value = log_abs_im[i];
    p.log_lower = N0 * std::log(eps[i]) - M_PI * L / eps[i];
    p.log_upper = chk.log_C - rate / eps[i];
    // The upper constant is fitted on the largest-eps point, so allow rounding there.
    p.ok = p.log_value >= p.log_lower && p.log_value <= p.log_upper + 1e-12;
    chk.sandwich_ok = chk.sandwich_ok && p.ok;
    chk.sandwich.push_back(p);
  }
  return chk;
}

WidthLawCheck check_width_law(const std::vector<SweepRecord> &records, double L) {
  std::vector<double> e, v;
  for (const SweepRecord *r : usable(records)) {
    e.push_back(r->eps);
    v.push_back(r->log_abs_im_flux);
  }
  return check_width_law(e, v, L);
}

ProximityCheck check_proximity(const std::vector<SweepRecord> &records, double L, double delta) {
  ProximityCheck chk;
  const auto pts = usable(records);
  if (pts.empty()) return chk;
  const double rate = (1.0 - delta) * M_PI * L;
  chk.log_C = pts.front()->log_abs_rho_minus_lambda + rate / pts.front()->eps;
  chk.pass = true;
  for (const SweepRecord *r : pts) {
    PointBound p;
    p.eps = r->eps;
    p.log_value = r->log_abs_rho_minus_lambda;
    p.log_lower = kNegInf;
    p.log_upper = chk.log_C - rate / r->eps;
    p.ok = std::isfinite(p.log_value) && p.log_value <= p.log_upper + 1e-12;
    chk.pass = chk.pass && p.ok;
    chk.points.push_back(p);
  }
  return chk;
}

// ---------------------------------------------------------------------------

double gamma1_sum(double eps, int j0) {
  const double g0 = 1.0 + 2.0 / M_PI;
  double s = 0.0;
  for (long j = j0 + 1; double(j) <= g0 / eps; ++j) {
    const double t = eps * j + 1.0;
    s += eps * eps * j / (t * t);
  }
  return s;
}

double gamma2_sum(double eps) {
  const double g0 = 1.0 + 2.0 / M_PI;
  const long j_start = long(std::ceil(g0 / eps));
  const long j_end = j_start + long(2000.0 / eps);
  double s = 0.0;
  for (long j = j_end; j >= j_start; --j) {
    const double d = eps * eps * double(j) * double(j) - 1.0;
    s += eps * eps * j / (d * d);
  }
  // Tail beyond j_end by the integral from j_end + 1/2.
  const double x = eps * (double(j_end) + 0.5);
  return s + 1.0 / (2.0 * (x * x - 1.0));
}

ConstantsReport constants(int j0, const std::vector<double> &eps_samples) {
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::gauss_kronrod;
  ConstantsReport r;
  r.gamma0 = 1.0 + 2.0 / M_PI;
  const double g0 = r.gamma0;
  r.I1_closed = std::log(1.0 + g0) - g0 / (1.0 + g0);
  r.I2_closed = 1.0 / (2.0 * (g0 * g0 - 1.0));
  r.I1 = gauss_kronrod<double, 61>::integrate([](double t) { return t / ((t + 1.0) * (t + 1.0)); }, 0.0, g0, 15,
                                              1e-14);
  exp_sinh<double> es;
  r.I2 = es.integrate(
      [g0](double s) {
        const double t = g0 + s;
        const double d = t * t - 1.0;
        return t / (d * d);
      },
      1e-14);
  r.tau1_limit = 0.5 * std::sqrt(M_PI * M_PI / 6.0 - 1.0);
  r.tau2_limit = std::sqrt(4.0 * r.I1 + 6.0 / (M_PI * M_PI) * r.I2);
  r.tau_sum_sq = r.tau1_limit * r.tau1_limit + r.tau2_limit * r.tau2_limit;
  for (double e : eps_samples) r.samples.push_back({e, gamma1_sum(e, j0), gamma2_sum(e)});
  return r;
}

XmaxResult xmax_check(double A, double tau1, double tau2) {
  if (A < 0.0 || tau1 < 0.0 || tau2 < 0.0) throw std::invalid_argument("xmax_check: A, tau1, tau2 must be >= 0");
  const double A2 = A * A;
  auto f = [&](double X) { return tau1 * std::sqrt(std::max(A2 - X, 0.0)) + tau2 * std::sqrt(std::max(X, 0.0)); };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = A2;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-15 * std::max(A2, 1e-300)) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    }
    if (hi - lo < 1e-300) break;
  }
  XmaxResult r;
  r.numeric_argmax = 0.5 * (lo + hi);
  r.numeric_max = f(r.numeric_argmax);
  for (double X : {0.0, A2})
    if (f(X) > r.numeric_max) {
      r.numeric_max = f(X);
      r.numeric_argmax = X;
    }
  const double s2 = tau1 * tau1 + tau2 * tau2;
  r.closed_max = std::sqrt(s2) * A;
  r.closed_argmax = s2 > 0.0 ? tau2 * tau2 / s2 * A2 : 0.0;
  r.abs_error = std::fabs(r.numeric_max - r.closed_max);
  return r;
}

// ---------------------------------------------------------------------------

ChainEntry verify_coefficient_chain(const ModalExpansion &e, double L) {
  if (e.A_plus.size() == 0) throw std::invalid_argument("coefficient chain: expansion has no neck coefficients");
  ChainEntry c;
  const double eps = e.geom.eps;
  c.eps = eps;
  const Eigen::VectorXcd am = e.A_minus();
  double a1 = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < e.neck_index.size(); ++k) {
    if (e.neck_index[k] == 1)
      a1 = std::abs(am(k));
    else
      tail += e.neck_index[k] * std::norm(am(k));
  }
  double open_b = 0.0;
  for (std::size_t j = 0; j < e.strip_index.size(); ++j)
    if (e.strip_index[j] <= e.j0) open_b += std::abs(e.b(j));
  c.amplitude_ratio_applicable = open_b > 0.0 && e.termination == Termination::open_strip;
  c.log_amplitude_ratio = c.amplitude_ratio_applicable ? safe_log(a1) + 0.5 * std::log(eps) - std::log(open_b)
                                       : std::numeric_limits<double>::quiet_NaN();
  c.a1_floor = safe_log(a1) + M_PI * L / (2.0 * eps) - 4.5 * std::log(eps);
  c.neck_tail = safe_log(tail) + 2.0 * M_PI * L / eps + 0.5 * std::log(eps);
  return c;
}

ChainReport check_coefficient_chain(const std::vector<SweepRecord> &records, double L, double band) {
  ChainReport rep;
  for (const SweepRecord *r : usable(records))
    if (r->kernel) rep.entries.push_back(verify_coefficient_chain(*r->kernel, L));
  if (rep.entries.empty()) return rep;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  bool all_applicable = true;
  for (const auto &c : rep.entries) {
    if (!c.amplitude_ratio_applicable) {
      all_applicable = false;
      continue;
    }
    lo = std::min(lo, c.log_amplitude_ratio);
    hi = std::max(hi, c.log_amplitude_ratio);
  }
  rep.amplitude_ratio_band = all_applicable ? std::exp(hi - lo) : std::numeric_limits<double>::quiet_NaN();
  rep.amplitude_ratio_ok = all_applicable && hi - lo <= std::log(band);
  const ChainEntry &ref = rep.entries.front();  // largest eps
  rep.a1_floor_ok = true;
  rep.neck_tail_ok = true;
  for (const auto &c : rep.entries) {
    rep.a1_floor_ok = rep.a1_floor_ok && c.a1_floor >= ref.a1_floor - std::log(band);
    rep.neck_tail_ok = rep.neck_tail_ok && c.neck_tail <= ref.neck_tail + std::log(band);
  }
  return rep;
}

DecaySums verify_decay_sums(const ModalExpansion &e, double c) {
  DecaySums a;
  a.eps = e.geom.eps;
  if (e.A_plus.size() > 0) {
    const Eigen::VectorXcd th = e.theta();
    const Eigen::VectorXcd tr = e.transfer();
    for (Eigen::Index k = 0; k < th.size(); ++k) {
      // a_{k,+} = A_{k,+} T_k; the stored a_{k,-} is already referenced at x = 0.
      const double kk = e.neck_index[k];
      a.S_plus += kk * std::norm(e.A_plus(k) * tr(k) * std::exp(c * th(k)));
      a.S_minus += kk * std::norm(e.a_minus(k) * std::exp(-c * th(k)));
    }
  }
  if (e.b.size() > 0) {
    const Eigen::VectorXcd gm = e.gamma();
    for (Eigen::Index j = 0; j < e.b.size(); ++j) {
      if (e.strip_index[j] <= e.j0) {
        a.open_b2 += std::norm(e.b(j));
      } else {
        // gamma_j = -sqrt(alpha_j^2 - rho) for closed channels
        a.strip_sum += std::norm(e.b(j)) * std::exp(gm(j).real());
      }
    }
    a.strip_sum += a.open_b2;
  }
  return a;
}

DecayReport check_decay_sums(const std::vector<SweepRecord> &records, double L, double c, double delta,
                              double slope_tol, double band) {
  DecayReport rep;
  std::vector<double> e, v;
  for (const SweepRecord *r : usable(records))
    if (r->kernel) {
      rep.entries.push_back(verify_decay_sums(*r->kernel, c));
      e.push_back(r->eps);
      v.push_back(safe_log(rep.entries.back().open_b2));
    }
  if (rep.entries.size() < 4) return rep;
  rep.open_b2_fit = fit_width_law(e, v);
  rep.open_b2_slope_ok = std::fabs(rep.open_b2_fit.slope + M_PI * L) <= slope_tol * M_PI * L;

  const double rate = (1.0 - delta) * M_PI * L;
  const DecaySums &ref = rep.entries.front();
  const double logC = safe_log(ref.strip_sum) + rate / ref.eps;
  const double gref = std::max(safe_log(ref.S_plus), safe_log(ref.S_minus)) + 0.5 * std::log(ref.eps);
  rep.strip_bound_ok = true;
  rep.growth_ok = true;
  for (const auto &a : rep.entries) {
    PointBound p;
    p.eps = a.eps;
    p.log_value = safe_log(a.strip_sum);
    p.log_lower = kNegInf;
    p.log_upper = logC - rate / a.eps;
    p.ok = p.log_value <= p.log_upper + 1e-12;
    rep.strip_bound_ok = rep.strip_bound_ok && p.ok;
    rep.strip_bound.push_back(p);

    PointBound g;
    g.eps = a.eps;
    g.log_value = std::max(safe_log(a.S_plus), safe_log(a.S_minus)) + 0.5 * std::log(a.eps);
    g.log_lower = kNegInf;
    g.log_upper = gref + std::log(band);
    g.ok = g.log_value <= g.log_upper;
    rep.growth_ok = rep.growth_ok && g.ok;
    rep.growth.push_back(g);
  }
  return rep;
}

KStability decay_sums_k_stability(const Geometry &g, const CavityMode &mode, const Truncation &trunc,
                                const SolverOptions &opts, double c, double tol) {
  KStability ks;
  ks.eps = g.eps;
  Truncation refined = trunc;
  refined.K *= 2;
  auto k3 = [](const ModalExpansion &e) {
    const Eigen::VectorXcd C = e.C();
    double s = 0.0;
    for (Eigen::Index k = 0; k < C.size(); ++k) s += std::pow(double(e.neck_index[k]), 3) * std::norm(C(k));
    return s;
  };
  const SweepRecord r1 = solve_point(g, mode, trunc, mode.eigenvalue, opts);
  const SweepRecord r2 = solve_point(g, mode, refined, double(r1.lambda), opts);
  ks.base = verify_decay_sums(*r1.kernel, c);
  ks.refined = verify_decay_sums(*r2.kernel, c);
  ks.k3_C_base = k3(*r1.kernel);
  ks.k3_C_refined = k3(*r2.kernel);
  ks.rel_change_plus = std::fabs(ks.refined.S_plus - ks.base.S_plus) / ks.base.S_plus;
  ks.rel_change_minus = std::fabs(ks.refined.S_minus - ks.base.S_minus) / ks.base.S_minus;
  ks.ok = ks.rel_change_plus <= tol && ks.rel_change_minus <= tol;
  return ks;
}

TruncationRobustness truncation_robustness(const Geometry &g, const CavityMode &mode, const Truncation &trunc,
                                           const SolverOptions &opts, double tol) {
  TruncationRobustness tr;
  tr.eps = g.eps;
  tr.base = trunc;
  tr.refined = trunc;
  tr.refined.M *= 2;
  tr.refined.K *= 2;
  tr.refined.J *= 2;
  const SweepRecord r1 = solve_point(g, mode, tr.base, mode.eigenvalue, opts, false);
  const SweepRecord r2 = solve_point(g, mode, tr.refined, double(r1.lambda), opts, false);
  tr.rho_base = r1.rho;
  tr.rho_refined = r2.rho;
  tr.rel_change = std::abs(r2.rho - r1.rho) / std::abs(r1.rho);
  tr.residual_base = r1.residual;
  tr.residual_refined = r2.residual;
  tr.rho_ok = tr.rel_change <= tol;
  tr.residuals_ok = r2.residual.r0 < r1.residual.r0 && r2.residual.rL < r1.residual.rL;
  return tr;
}

// ---------------------------------------------------------------------------

namespace {

double boundary_term(const ModalExpansion &e, double X, int order) {
  const double v = integrate(
      [&](double y) { return (field(e, Region::strip, X, y) * std::conj(field_dx(e, Region::strip, X, y))).imag(); },
      -1.0, 1.0, order);
  return v / norm_squared(e, X);
}

double open_flux_projected(const ModalExpansion &e, double X, int order) {
  const Eigen::VectorXcd gm = e.gamma();
  double flux = 0.0;
  for (std::size_t j = 0; j < e.strip_index.size(); ++j) {
    if (e.strip_index[j] > e.j0) continue;
    const TransverseMode phi = strip_mode(e.strip_index[j]);
    const Complex<double> beta =
        integrate([&](double y) { return field(e, Region::strip, X, y) * phi.value(y); }, -1.0, 1.0, order);
    // gamma = i w; strip the real growth e^{Re(gamma) D}, keep the unimodular phase.
    const double undamped = std::abs(beta) * std::exp(-gm(j).real() * (X - e.geom.L));
    flux += gm(j).imag() * undamped * undamped;
  }
  return flux;
}

}  // namespace

GreenReport verify_green(const ModalExpansion &e, double im_rho, int order) {
  GreenReport rep;
  rep.im_rho = im_rho;
  if (e.termination != Termination::open_strip || e.b.size() == 0) {
    rep.applicable = true;
    return rep;
  }
  const double L = e.geom.L;
  rep.boundary_term = boundary_term(e, L + 1.0, order);
  rep.boundary_term_far = boundary_term(e, L + 2.0, order);
  rep.open_flux_near = open_flux_projected(e, L + 1.0, order);
  rep.open_flux_far = open_flux_projected(e, L + 2.0, order);
  rep.open_flux_rel_diff =
      std::fabs(rep.open_flux_near - rep.open_flux_far) / std::max(std::fabs(rep.open_flux_near), 1e-300);
  rep.applicable = std::isfinite(im_rho) && im_rho != 0.0;
  if (rep.applicable) {
    rep.rel_error = std::fabs(rep.boundary_term - im_rho) / std::fabs(im_rho);
    rep.rel_error_far = std::fabs(rep.boundary_term_far - im_rho) / std::fabs(im_rho);
  }
  return rep;
}

}  // namespace helmres
