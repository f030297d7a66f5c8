// SPDX-License-Identifier: Apache-2.0
#include "helmres/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "helmres/complex_math.hpp"

namespace helmres {

const char *to_string(PrecisionPolicy p) {
  switch (p) {
    case PrecisionPolicy::fast: return "fast";
    case PrecisionPolicy::extended: return "extended";
    case PrecisionPolicy::automatic: return "auto";
  }
  return "?";
}

PrecisionPolicy parse_precision_policy(const std::string &s) {
  if (s == "fast") return PrecisionPolicy::fast;
  if (s == "extended") return PrecisionPolicy::extended;
  if (s == "auto") return PrecisionPolicy::automatic;
  throw std::invalid_argument("unknown precision policy '" + s + "' (expected fast, extended or auto)");
}

Precision required_precision(const Geometry &g, const SolverOptions &opts) {
  const double decay = M_PI * g.L / g.eps;
  if (decay > opts.precision_limit) {
    std::ostringstream os;
    os << "pi L / eps = " << decay << " exceeds " << opts.precision_limit
       << ": e^{-pi L / eps} is not representable (eps = " << g.eps << ")";
    throw PrecisionError(os.str());
  }
  switch (opts.policy) {
    case PrecisionPolicy::fast: return Precision::binary64;
    case PrecisionPolicy::extended: return Precision::double_double;
    case PrecisionPolicy::automatic: break;
  }
  return decay > opts.extended_threshold ? Precision::double_double : Precision::binary64;
}

namespace {

template <class Real> double dbl(const Real &x) { return double(x); }

template <class Real> Complex<double> to_double(const Complex<Real> &z) { return {dbl(z.real()), dbl(z.imag())}; }

// Determinant of the sealed system divided by its trivial phase prod_k T_k theta_k,
// kept as mantissa * 2^exponent.  For real lambda the quotient is real.
template <class Real> struct ScaledDet {
  Complex<Real> mantissa;
  long exponent = 0;
};

template <class Real> ScaledDet<Real> sealed_det(const MatchingContext &ctx, const Real &lam) {
  using C = Complex<Real>;
  const C rho(lam, Real(0.0));
  const MatchingSystem<Real> sys = assemble<Real>(ctx, rho);
  Eigen::PartialPivLU<CMatrix<Real>> lu(sys.matrix);
  const CMatrix<Real> &m = lu.matrixLU();
  ScaledDet<Real> d;
  d.mantissa = C(Real(lu.permutationP().determinant()));
  auto renorm = [&d]() {
    using std::ldexp;
    int e = 0;
    std::frexp(dbl(cmath::abs(d.mantissa)), &e);
    if (e != 0) {
      d.mantissa = C(ldexp(d.mantissa.real(), -e), ldexp(d.mantissa.imag(), -e));
      d.exponent += e;
    }
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    d.mantissa *= m(i, i);
    renorm();
  }
  const Geometry &g = ctx.geometry();
  for (int k : ctx.layout().neck) {
    // phase of conj(theta e^{-theta L/eps}); the modulus may underflow
    const C th = theta<Real>(k, g.eps, rho);
    const C rot = cmath::exp(C(Real(0.0), th.imag() * Real(g.L) / Real(g.eps)));
    d.mantissa *= std::conj(th) / cmath::abs(th) * rot;
  }
  renorm();
  return d;
}

template <class Real> Real signed_value(const ScaledDet<Real> &d, long ref) {
  using std::ldexp;
  const long shift = std::clamp(d.exponent - ref, -1000L, 1000L);
  return ldexp(d.mantissa.real(), int(shift));
}

template <class Real> int sign_of(const ScaledDet<Real> &d) { return d.mantissa.real() < Real(0.0) ? -1 : 1; }

template <class Real>
ClosedEigen closed_eigen_impl(const MatchingContext &ctx, const ChannelSplit &split, double seed,
                              const SolverOptions &opts) {
  using std::abs;
  const double lo = split.lower() + opts.window_margin;
  const double hi = split.upper() - opts.window_margin;
  const int n = std::max(opts.scan_points, 3);
  std::vector<double> xs(n);
  std::vector<int> sg(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * i / (n - 1);
    sg[i] = sign_of(sealed_det<Real>(ctx, Real(xs[i])));
  }
  int best = -1;
  for (int i = 0; i + 1 < n; ++i)
    if (sg[i] != sg[i + 1] &&
        (best < 0 || std::fabs(0.5 * (xs[i] + xs[i + 1]) - seed) < std::fabs(0.5 * (xs[best] + xs[best + 1]) - seed)))
      best = i;
  if (best < 0) {
    std::ostringstream os;
    os << "closed eigenvalue: no sign change of the sealed determinant on (" << lo << ", " << hi
       << ") at eps = " << ctx.geometry().eps;
    throw std::runtime_error(os.str());
  }

  const double tol = precision_of<Real>() == Precision::binary64 ? 1e-14 : 1e-28;
  Real a(xs[best]), b(xs[best + 1]);
  ScaledDet<Real> da = sealed_det<Real>(ctx, a), db = sealed_det<Real>(ctx, b);
  ClosedEigen out;
  out.precision = precision_of<Real>();
  // Bisection to a narrow bracket, then Illinois regula falsi.
  while (dbl(b - a) > 1e-4 * dbl(b)) {
    const Real mid = (a + b) * Real(0.5);
    const ScaledDet<Real> dm = sealed_det<Real>(ctx, mid);
    ++out.iterations;
    if (sign_of(dm) == sign_of(da)) {
      a = mid;
      da = dm;
    } else {
      b = mid;
      db = dm;
    }
  }
  Real fa = signed_value(da, da.exponent), fb = signed_value(db, da.exponent);
  const long ref = da.exponent;
  int side = 0;
  Real x = a;
  for (int it = 0; it < 200 && dbl(b - a) > tol * dbl(abs(b)); ++it) {
    x = (a * fb - b * fa) / (fb - fa);
    if (!(x > a && x < b)) x = (a + b) * Real(0.5);
    const ScaledDet<Real> dx = sealed_det<Real>(ctx, x);
    ++out.iterations;
    const Real fx = signed_value(dx, ref);
    if (fx == Real(0.0)) {
      a = b = x;
      break;
    }
    if (sign_of(dx) == (fa < Real(0.0) ? -1 : 1)) {
      a = x;
      fa = fx;
      if (side == -1) fb = fb * Real(0.5);
      side = -1;
    } else {
      b = x;
      fb = fx;
      if (side == 1) fa = fa * Real(0.5);
      side = 1;
    }
  }
  out.lambda = DoubleDouble((a + b) * Real(0.5));
  const ScaledDet<Real> dr = sealed_det<Real>(ctx, (a + b) * Real(0.5));
  out.imag_residual = std::fabs(dbl(dr.mantissa.imag())) / std::max(dbl(cmath::abs(dr.mantissa)), 1e-300);
  return out;
}

template <class Real> struct Triplet {
  MatchingSystem<Real> sys;
  double sigma = 0.0;
  double sigma_next = 0.0;
  CVector<Real> u, v;
};

template <class Real> Triplet<Real> smallest_triplet(const MatchingContext &ctx, const Complex<Real> &rho) {
  Triplet<Real> t;
  t.sys = assemble<Real>(ctx, rho);
  // Divide and conquer loses accuracy on complex double-double input; Jacobi does not.
  using Svd = std::conditional_t<std::is_same_v<Real, double>, Eigen::BDCSVD<CMatrix<Real>>,
                                 Eigen::JacobiSVD<CMatrix<Real>>>;
  Svd svd(t.sys.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index n = t.sys.matrix.rows();
  t.sigma = dbl(svd.singularValues()(n - 1));
  t.sigma_next = dbl(svd.singularValues()(n - 2));
  t.u = svd.matrixU().col(n - 1);
  t.v = svd.matrixV().col(n - 1);
  return t;
}

template <class Real>
Resonance newton_impl(const MatchingContext &ctx, const Complex<Real> &seed, const SolverOptions &opts) {
  using C = Complex<Real>;
  const double tol = precision_of<Real>() == Precision::binary64 ? opts.rel_tol : opts.rel_tol_extended;
  Resonance res;
  res.eps = ctx.geometry().eps;
  res.precision = precision_of<Real>();

  C rho = seed;
  Triplet<Real> t = smallest_triplet<Real>(ctx, rho);
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Real h = Real(opts.fd_step) * cmath::abs(rho);
    const CMatrix<Real> dT =
        (assemble<Real>(ctx, rho + C(h)).matrix - assemble<Real>(ctx, rho - C(h)).matrix) / C(Real(2.0) * h);
    const C num = (t.u.adjoint() * t.sys.matrix * t.v)(0, 0);
    const C den = (t.u.adjoint() * dT * t.v)(0, 0);
    C step = -num / den;
    // Backtrack while the smallest singular value grows markedly.
    Triplet<Real> next = smallest_triplet<Real>(ctx, rho + step);
    for (int bt = 0; bt < 6 && next.sigma > 2.0 * t.sigma && next.sigma > 1e-300; ++bt) {
      step = step * Real(0.5);
      next = smallest_triplet<Real>(ctx, rho + step);
    }
    rho += step;
    t = std::move(next);
    const double rel = dbl(cmath::abs(step)) / dbl(cmath::abs(rho));
    res.history.push_back({to_double(rho), t.sigma, rel});
    if (rel <= tol) {
      res.converged = true;
      break;
    }
  }
  res.rho_extended = {DoubleDouble(rho.real()), DoubleDouble(rho.imag())};
  res.rho = to_double(rho);
  res.sigma_min = t.sigma;
  res.sigma_next = t.sigma_next;
  const double floor = 1e3 * dbl(std::numeric_limits<Real>::epsilon()) * std::abs(res.rho);
  res.imag_resolved = std::fabs(res.rho.imag()) > floor;

  Eigen::VectorXcd v(t.v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = to_double(t.v(i));
  res.kernel = make_expansion(ctx, res.rho, v);
  normalize(res.kernel, ctx.geometry().L + opts.norm_station);
  return res;
}

}  // namespace

ClosedEigen closed_eigen(const Geometry &g, const CavityMode &mode, const Truncation &trunc, double seed,
                         const SolverOptions &opts) {
  const ChannelSplit split = validate(g, mode, opts.window_margin);
  const MatchingContext ctx(g, trunc, split.j0, mode.parity, Termination::dirichlet, {mode.eigenvalue, 0.0});
  if (required_precision(g, opts) == Precision::double_double)
    return closed_eigen_impl<DoubleDouble>(ctx, split, seed, opts);
  return closed_eigen_impl<double>(ctx, split, seed, opts);
}

Resonance find_resonance(const Geometry &g, const CavityMode &mode, const Truncation &trunc, Complex<double> seed,
                         const SolverOptions &opts, Termination termination) {
  const ChannelSplit split = validate(g, mode, opts.window_margin);
  const MatchingContext ctx(g, trunc, split.j0, mode.parity, termination, {mode.eigenvalue, 0.0});
  Resonance res;
  if (required_precision(g, opts) == Precision::double_double) {
    res = newton_impl<DoubleDouble>(ctx, Complex<DoubleDouble>(seed.real(), seed.imag()), opts);
  } else {
    res = newton_impl<double>(ctx, seed, opts);
    if (opts.policy == PrecisionPolicy::automatic && termination == Termination::open_strip && !res.imag_resolved) {
      Resonance ext = newton_impl<DoubleDouble>(ctx, Complex<DoubleDouble>(res.rho.real(), res.rho.imag()), opts);
      ext.history.insert(ext.history.begin(), res.history.begin(), res.history.end());
      res = std::move(ext);
    }
  }
  if (!res.converged) {
    std::ostringstream os;
    os << "resonance: no convergence after " << opts.max_iterations << " iterations at eps = " << g.eps
       << " (last rho = " << res.rho << ")";
    throw std::runtime_error(os.str());
  }
  return res;
}

FluxImag imag_via_flux(const ModalExpansion &e, double offset) {
  FluxImag f;
  f.station = e.geom.L + offset;
  f.norm_sq = norm_squared(e, f.station);
  if (e.termination == Termination::dirichlet || e.b.size() == 0) return f;
  if (e.b.cwiseAbs().maxCoeff() == 0.0)
    throw PrecisionError("flux: every strip amplitude underflowed at the working precision");
  const Eigen::VectorXcd gm = e.gamma();
  for (Eigen::Index j = 0; j < e.b.size(); ++j) {
    // -Im(gamma_j) |b_j|^2 |e^{gamma_j D}|^2
    const double term = -gm(j).imag() * std::norm(e.b(j)) * std::exp(2.0 * gm(j).real() * offset);
    if (e.strip_index[j] <= e.j0)
      f.open_flux += term;
    else
      f.evanescent_correction += term;
  }
  const double total = f.open_flux + f.evanescent_correction;
  if (total != 0.0) {
    f.sign = total < 0.0 ? -1 : 1;
    f.log_abs = std::log(std::fabs(total)) - std::log(f.norm_sq);
  }
  return f;
}

namespace {

double log_or_nan(double x) { return x > 0.0 ? std::log(x) : std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

SweepRecord solve_point(const Geometry &g, const CavityMode &mode, const Truncation &trunc, double lambda_seed,
                        const SolverOptions &opts, bool keep_kernel) {
  SweepRecord rec;
  rec.eps = g.eps;
  rec.precision = required_precision(g, opts);
  const ClosedEigen ce = closed_eigen(g, mode, trunc, lambda_seed, opts);
  rec.lambda = ce.lambda;
  rec.lambda_imag_residual = ce.imag_residual;

  const Resonance res = find_resonance(g, mode, trunc, {double(ce.lambda), 0.0}, opts);
  rec.rho = res.rho;
  rec.rho_extended = res.rho_extended;
  rec.precision = res.precision;
  rec.iterations = int(res.history.size());
  rec.sigma_min = res.sigma_min;
  rec.converged = res.converged;
  rec.imag_resolved = res.imag_resolved;
  const Complex<DoubleDouble> diff(res.rho_extended.real() - ce.lambda, res.rho_extended.imag());
  rec.log_abs_rho_minus_lambda = std::log(double(hypot(diff.real(), diff.imag())));
  if (res.imag_resolved) rec.log_abs_im_direct = std::log(std::fabs(double(res.rho_extended.imag())));

  const ModalExpansion &e = res.kernel;
  const FluxImag flux = imag_via_flux(e, opts.norm_station);
  rec.flux_sign = flux.sign;
  rec.log_abs_im_flux = flux.log_abs;
  rec.residual = junction_residual(e, trunc.quadrature_order);

  const Eigen::VectorXcd am = e.A_minus();
  double open_b = 0.0, closed_jb2 = 0.0, k_ap2 = 0.0;
  for (std::size_t k = 0; k < e.neck_index.size(); ++k) {
    if (e.neck_index[k] == 1) rec.log_abs_A1_minus = log_or_nan(std::abs(am(k)));
    k_ap2 += e.neck_index[k] * std::norm(e.A_plus(k));
  }
  for (std::size_t j = 0; j < e.strip_index.size(); ++j) {
    if (e.strip_index[j] <= e.j0)
      open_b += std::abs(e.b(j));
    else
      closed_jb2 += e.strip_index[j] * std::norm(e.b(j));
  }
  rec.log_sum_open_b = log_or_nan(open_b);
  rec.log_sum_closed_jb2 = log_or_nan(closed_jb2);
  rec.log_sum_k_Aplus2 = log_or_nan(k_ap2);
  if (keep_kernel) rec.kernel = e;
  return rec;
}

std::vector<SweepRecord> sweep(const Geometry &base, const CavityMode &mode, const std::vector<double> &eps_grid,
                               const Truncation &trunc, const SolverOptions &opts, bool keep_kernels) {
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] < eps_grid[i - 1])) throw std::invalid_argument("sweep: eps grid must be strictly descending");
  std::vector<SweepRecord> out;
  double seed = mode.eigenvalue;
  for (double eps : eps_grid) {
    try {
      out.push_back(solve_point(base.with_eps(eps), mode, trunc, seed, opts, keep_kernels));
      seed = double(out.back().lambda);
    } catch (const std::exception &ex) {
      SweepRecord rec;
      rec.eps = eps;
      std::ostringstream os;
      os << "eps = " << eps << ": " << ex.what();
      rec.error = os.str();
      out.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace helmres
