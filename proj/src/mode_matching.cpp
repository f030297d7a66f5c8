// SPDX-License-Identifier: Apache-2.0
#include "helmres/mode_matching.hpp"

#include <cmath>
#include <sstream>

#include "helmres/complex_math.hpp"

namespace helmres {

const char *to_string(Precision p) { return p == Precision::binary64 ? "binary64" : "double-double"; }

void Truncation::check(int j0) const {
  std::ostringstream os;
  if (M < j0 + 1 || K < j0 + 1 || J < j0 + 1) os << "M, K, J must be >= j0 + 1 = " << j0 + 1 << "; ";
  if (K < 3) os << "K must be >= 3; ";
  if (quadrature_order < 2) os << "quadrature order must be >= 2; ";
  if (!os.str().empty()) throw std::invalid_argument("truncation: " + os.str());
}

namespace {

std::vector<int> indices(int n, std::optional<Parity> parity) {
  std::vector<int> out;
  for (int i = 1; i <= n; ++i) {
    const Parity p = i % 2 == 1 ? Parity::even : Parity::odd;
    if (!parity || *parity == p) out.push_back(i);
  }
  return out;
}

template <class Real>
RMatrix<Real> overlap_matrix(const std::vector<int> &rows, const std::vector<int> &cols,
                             TransverseMode (*row_mode)(int, double), double row_h, double eps) {
  RMatrix<Real> out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < cols.size(); ++k)
      out(i, k) = overlap<Real>(row_mode(rows[i], row_h), neck_mode(cols[k], eps));
  return out;
}

TransverseMode strip_mode_h(int j, double) { return strip_mode(j); }

}  // namespace

MatchingContext::MatchingContext(const Geometry &geom, const Truncation &trunc, int j0,
                                 std::optional<Parity> parity, Termination termination, Complex<double> rho_ref)
    : geom_(geom), trunc_(trunc), j0_(j0), parity_(parity), termination_(termination) {
  geom.check();
  trunc.check(j0);
  layout_.cavity = indices(trunc.M, parity);
  layout_.neck = indices(trunc.K, parity);
  if (termination == Termination::open_strip) layout_.strip = indices(trunc.J, parity);

  oc_d_ = overlap_matrix<double>(layout_.cavity, layout_.neck, cavity_mode_y, geom.b, geom.eps);
  oc_dd_ = overlap_matrix<DoubleDouble>(layout_.cavity, layout_.neck, cavity_mode_y, geom.b, geom.eps);
  os_d_ = overlap_matrix<double>(layout_.strip, layout_.neck, strip_mode_h, 1.0, geom.eps);
  os_dd_ = overlap_matrix<DoubleDouble>(layout_.strip, layout_.neck, strip_mode_h, 1.0, geom.eps);

  s_d_.resize(layout_.nc());
  s_dd_.resize(layout_.nc());
  for (Eigen::Index i = 0; i < layout_.nc(); ++i) {
    const double re = std::abs(cavity_kappa<double>(layout_.cavity[i], geom.b, rho_ref));
    s_d_(i) = re * geom.a;
    s_dd_(i) = DoubleDouble(re) * DoubleDouble(geom.a);
  }
}

template <> const RMatrix<double> &MatchingContext::cavity_overlap<double>() const { return oc_d_; }
template <> const RMatrix<DoubleDouble> &MatchingContext::cavity_overlap<DoubleDouble>() const { return oc_dd_; }
template <> const RMatrix<double> &MatchingContext::strip_overlap<double>() const { return os_d_; }
template <> const RMatrix<DoubleDouble> &MatchingContext::strip_overlap<DoubleDouble>() const { return os_dd_; }
template <> const RVector<double> &MatchingContext::cavity_scale<double>() const { return s_d_; }
template <> const RVector<DoubleDouble> &MatchingContext::cavity_scale<DoubleDouble>() const { return s_dd_; }

template <class Real> Complex<Real> cavity_kappa(int q, double b, const Complex<Real> &rho) {
  const Real w = Real(double(q)) * pi_v<Real>() / Real(b);
  return principal_sqrt<Real>(Complex<Real>(w * w - rho.real(), -rho.imag()));
}

template <class Real> Complex<Real> strip_exponent(int j, int j0, const Complex<Real> &rho) {
  if (j <= j0) return Complex<Real>(Real(0.0), Real(1.0)) * open_wavenumber<Real>(j, rho);
  return -sqrt_prop<Real>(j, rho);
}

template <class Real> MatchingSystem<Real> assemble(const MatchingContext &ctx, const Complex<Real> &rho) {
  using C = Complex<Real>;
  const Geometry &g = ctx.geometry();
  const BasisLayout &lay = ctx.layout();
  const RMatrix<Real> &oc = ctx.cavity_overlap<Real>();
  const RMatrix<Real> &os = ctx.strip_overlap<Real>();
  const RVector<Real> &sq = ctx.cavity_scale<Real>();
  const Eigen::Index nc = lay.nc(), nk = lay.nk(), nj = lay.nj();
  const Eigen::Index ip = lay.p_offset(), iq = lay.q_offset(), ib = lay.b_offset();
  const Real eps(g.eps);
  const Real a(g.a);

  MatchingSystem<Real> sys;
  sys.layout = lay;
  sys.matrix = CMatrix<Real>::Zero(lay.size(), lay.size());
  sys.row_scale = Eigen::VectorXd::Ones(lay.size());
  auto &T = sys.matrix;

  std::vector<C> f0(nc), f1(nc), th(nk), tr(nk);
  for (Eigen::Index i = 0; i < nc; ++i) {
    const C kap = cavity_kappa<Real>(lay.cavity[i], g.b, rho);
    const C z = kap * C(a);
    f0[i] = a * cmath::sinhc_ratio(z, sq(i));
    f1[i] = cmath::cosh_ratio(z, sq(i));
  }
  for (Eigen::Index k = 0; k < nk; ++k) {
    th[k] = theta<Real>(lay.neck[k], g.eps, rho);
    tr[k] = cmath::exp(C(-th[k] * Real(g.L) / eps));
  }

  // u continuity at x = 0 on the cavity basis (neck trace vanishes off the aperture).
  for (Eigen::Index q = 0; q < nc; ++q) {
    T(q, q) = f0[q];
    for (Eigen::Index k = 0; k < nk; ++k) {
      T(q, ip + k) = -oc(q, k) * tr[k];
      T(q, iq + k) = C(-oc(q, k));
    }
  }
  // d_x u continuity at x = 0 on the neck basis, rows scaled by eps / alpha_k.
  for (Eigen::Index k = 0; k < nk; ++k) {
    const Eigen::Index r = nc + k;
    const Real sc = eps / alpha<Real>(lay.neck[k]);
    sys.row_scale(r) = double(sc);
    for (Eigen::Index q = 0; q < nc; ++q) T(r, q) = oc(q, k) * f1[q] * sc;
    const C d = th[k] / eps * sc;
    T(r, ip + k) = -d * tr[k];
    T(r, iq + k) = d;
  }

  if (ctx.termination() == Termination::dirichlet) {
    for (Eigen::Index k = 0; k < nk; ++k) {
      const Eigen::Index r = nc + nk + k;
      T(r, ip + k) = C(Real(1.0));
      T(r, iq + k) = tr[k];
    }
  } else {
    // u continuity at x = L on the strip basis.
    for (Eigen::Index j = 0; j < nj; ++j) {
      const Eigen::Index r = nc + nk + j;
      T(r, ib + j) = C(Real(1.0));
      for (Eigen::Index k = 0; k < nk; ++k) {
        T(r, ip + k) = C(-os(j, k));
        T(r, iq + k) = -os(j, k) * tr[k];
      }
    }
    std::vector<C> gam(nj);
    for (Eigen::Index j = 0; j < nj; ++j) gam[j] = strip_exponent<Real>(lay.strip[j], ctx.j0(), rho);
    // d_x u continuity at x = L on the neck basis.
    for (Eigen::Index k = 0; k < nk; ++k) {
      const Eigen::Index r = nc + nk + nj + k;
      const Real sc = eps / alpha<Real>(lay.neck[k]);
      sys.row_scale(r) = double(sc);
      for (Eigen::Index j = 0; j < nj; ++j) T(r, ib + j) = os(j, k) * gam[j] * sc;
      const C d = th[k] / eps * sc;
      T(r, ip + k) = -d;
      T(r, iq + k) = d * tr[k];
    }
  }

  using std::isfinite;
  for (Eigen::Index i = 0; i < T.rows(); ++i)
    for (Eigen::Index j = 0; j < T.cols(); ++j)
      if (!isfinite(T(i, j).real()) || !isfinite(T(i, j).imag())) {
        std::ostringstream os_msg;
        os_msg << "matching matrix entry (" << i << "," << j << ") not finite at " << to_string(sys.precision)
               << " (eps = " << g.eps << ")";
        throw PrecisionError(os_msg.str());
      }
  return sys;
}

// ---------------------------------------------------------------------------

Eigen::VectorXcd ModalExpansion::theta() const {
  Eigen::VectorXcd out(neck_index.size());
  for (std::size_t k = 0; k < neck_index.size(); ++k) out(k) = helmres::theta<double>(neck_index[k], geom.eps, rho);
  return out;
}

Eigen::VectorXcd ModalExpansion::transfer() const {
  Eigen::VectorXcd th = theta();
  return (-th * (geom.L / geom.eps)).array().exp().matrix();
}

Eigen::VectorXcd ModalExpansion::A_minus() const { return a_minus.cwiseProduct(transfer()); }
Eigen::VectorXcd ModalExpansion::C() const { return A_plus + A_minus(); }

Eigen::VectorXcd ModalExpansion::kappa() const {
  Eigen::VectorXcd out(cavity_index.size());
  for (std::size_t i = 0; i < cavity_index.size(); ++i) out(i) = cavity_kappa<double>(cavity_index[i], geom.b, rho);
  return out;
}

Eigen::VectorXcd ModalExpansion::gamma() const {
  Eigen::VectorXcd out(strip_index.size());
  for (std::size_t i = 0; i < strip_index.size(); ++i) out(i) = strip_exponent<double>(strip_index[i], j0, rho);
  return out;
}

void ModalExpansion::scale(Complex<double> s) {
  c *= s;
  A_plus *= s;
  a_minus *= s;
  b *= s;
}

ModalExpansion make_expansion(const MatchingContext &ctx, Complex<double> rho, const Eigen::VectorXcd &v) {
  const BasisLayout &lay = ctx.layout();
  if (v.size() != lay.size()) throw std::invalid_argument("kernel vector has the wrong dimension");
  ModalExpansion e;
  e.geom = ctx.geometry();
  e.j0 = ctx.j0();
  e.termination = ctx.termination();
  e.rho = rho;
  e.cavity_index = lay.cavity;
  e.neck_index = lay.neck;
  e.strip_index = lay.strip;
  e.c = v.segment(lay.c_offset(), lay.nc());
  e.A_plus = v.segment(lay.p_offset(), lay.nk());
  e.a_minus = v.segment(lay.q_offset(), lay.nk());
  e.b = lay.strip.empty() ? Eigen::VectorXcd() : Eigen::VectorXcd(v.segment(lay.b_offset(), lay.nj()));
  e.cavity_scale = ctx.cavity_scale<double>();
  return e;
}

namespace {

constexpr double kWallTol = 1e-14;

Region locate(const ModalExpansion &e, double x, double y) {
  const Geometry &g = e.geom;
  const double ay = std::fabs(y);
  if (x >= -g.a && x <= 0.0 && ay <= 0.5 * g.b + kWallTol) return Region::cavity;
  if (x > 0.0 && x < g.L && ay <= g.eps + kWallTol) return Region::neck;
  if (x == g.L && ay <= g.eps) return Region::neck;
  if (x >= g.L && ay <= 1.0 + kWallTol && (e.termination == Termination::open_strip)) return Region::strip;
  std::ostringstream os;
  os << "point (" << x << ", " << y << ") is outside the resonator";
  throw std::out_of_range(os.str());
}

void check_in(const ModalExpansion &e, Region r, double x, double y) {
  const Geometry &g = e.geom;
  const double ay = std::fabs(y);
  bool ok = false;
  switch (r) {
    case Region::cavity: ok = x >= -g.a && x <= 0.0 && ay <= 0.5 * g.b + kWallTol; break;
    case Region::neck: ok = x >= 0.0 && x <= g.L && ay <= g.eps + kWallTol; break;
    case Region::strip: ok = x >= g.L && ay <= 1.0 + kWallTol && e.termination == Termination::open_strip; break;
  }
  if (!ok) {
    std::ostringstream os;
    os << "point (" << x << ", " << y << ") is outside the " << to_string(r);
    throw std::out_of_range(os.str());
  }
}

// derivative = false: u, true: d_x u
Complex<double> series(const ModalExpansion &e, Region r, double x, double y, bool derivative) {
  const Geometry &g = e.geom;
  Complex<double> sum = 0.0;
  switch (r) {
    case Region::cavity: {
      for (std::size_t i = 0; i < e.cavity_index.size(); ++i) {
        const double chi = cavity_mode_y(e.cavity_index[i], g.b).value(y);
        if (chi == 0.0) continue;
        const Complex<double> kap = cavity_kappa<double>(e.cavity_index[i], g.b, e.rho);
        const Complex<double> z = kap * (x + g.a);
        const double l = e.cavity_scale(i);
        const Complex<double> prof =
            derivative ? cmath::cosh_ratio(z, l) : (x + g.a) * cmath::sinhc_ratio(z, l);
        sum += e.c(i) * prof * chi;
      }
      break;
    }
    case Region::neck: {
      const Eigen::VectorXcd th = e.theta();
      for (std::size_t k = 0; k < e.neck_index.size(); ++k) {
        const double psi = neck_mode(e.neck_index[k], g.eps).value(y);
        if (psi == 0.0) continue;
        const Complex<double> t = th(k) / g.eps;
        const Complex<double> up = e.A_plus(k) * std::exp(t * (x - g.L));
        const Complex<double> dn = e.a_minus(k) * std::exp(-t * x);
        sum += (derivative ? t * (up - dn) : up + dn) * psi;
      }
      break;
    }
    case Region::strip: {
      const Eigen::VectorXcd gm = e.gamma();
      for (std::size_t j = 0; j < e.strip_index.size(); ++j) {
        const double phi = strip_mode(e.strip_index[j]).value(y);
        if (phi == 0.0) continue;
        const Complex<double> w = e.b(j) * std::exp(gm(j) * (x - g.L));
        sum += (derivative ? gm(j) * w : w) * phi;
      }
      break;
    }
  }
  return sum;
}

}  // namespace

Complex<double> field(const ModalExpansion &e, double x, double y) {
  return series(e, locate(e, x, y), x, y, false);
}
Complex<double> field_dx(const ModalExpansion &e, double x, double y) {
  return series(e, locate(e, x, y), x, y, true);
}
Complex<double> field(const ModalExpansion &e, Region r, double x, double y) {
  check_in(e, r, x, y);
  return series(e, r, x, y, false);
}
Complex<double> field_dx(const ModalExpansion &e, Region r, double x, double y) {
  check_in(e, r, x, y);
  return series(e, r, x, y, true);
}

namespace {

// integral_0^len exp(2 r s) ds
double exp_integral(double r, double len) {
  const double t = 2.0 * r * len;
  if (std::fabs(t) < 1e-12) return len;
  return std::expm1(t) / (2.0 * r);
}

}  // namespace

double norm_squared(const ModalExpansion &e, double x_end) {
  const Geometry &g = e.geom;
  double total = 0.0;
  // Cavity: int_0^a |sinh(kappa s)|^2 ds = (sinh(2ra)/(2r) - sin(2ia)/(2i)) / 2 with kappa = r + i i.
  const Eigen::VectorXcd kap = e.kappa();
  for (Eigen::Index q = 0; q < e.c.size(); ++q) {
    const double m2 = std::norm(e.c(q));
    if (m2 == 0.0) continue;
    const double r = std::fabs(kap(q).real());
    const double im = std::fabs(kap(q).imag());
    const double k2 = std::norm(kap(q));
    // profile / cosh(l)^2, with 1 / cosh(l)^2 = 4 e^{-2l} / (1 + e^{-2l})^2
    const double l = e.cavity_scale(q);
    const double w = 4.0 / ((1.0 + std::exp(-2.0 * l)) * (1.0 + std::exp(-2.0 * l)));
    double prof;
    if (k2 * g.a * g.a < 1e-12) {
      prof = g.a * g.a * g.a / 3.0 * w * std::exp(-2.0 * l);
    } else {
      const double sh = r * g.a < 1e-8 ? g.a * std::exp(-2.0 * l)
                                       : (std::exp(2.0 * (r * g.a - l)) - std::exp(-2.0 * (r * g.a + l))) / (4.0 * r);
      const double sn = im * g.a < 1e-8 ? g.a : std::sin(2.0 * im * g.a) / (2.0 * im);
      prof = 0.5 * (sh - sn * std::exp(-2.0 * l)) * w / k2;
    }
    total += m2 * prof;
  }
  // Neck: |P e^{t(x-L)} + Q e^{-t x}|^2 over [0, L], t = theta / eps.
  if (e.A_plus.size() > 0) {
    const Eigen::VectorXcd th = e.theta();
    const Eigen::VectorXcd tr = e.transfer();
    for (Eigen::Index k = 0; k < th.size(); ++k) {
      const Complex<double> t = th(k) / g.eps;
      const double r = t.real();
      const double grow = exp_integral(-r, g.L);  // int_0^L e^{-2 r s} ds
      const double phi = t.imag() * g.L;
      const double sinc = std::fabs(phi) < 1e-12 ? 1.0 : std::sin(phi) / phi;
      // int_0^L e^{t(x-L)} conj(e^{-t x}) dx = T L e^{i phi} sinc(phi)
      const Complex<double> cross = tr(k) * g.L * std::polar(1.0, phi) * sinc;
      total += (std::norm(e.A_plus(k)) + std::norm(e.a_minus(k))) * grow +
               2.0 * (e.A_plus(k) * std::conj(e.a_minus(k)) * cross).real();
    }
  }
  if (e.b.size() > 0 && x_end > g.L) {
    const Eigen::VectorXcd gm = e.gamma();
    for (Eigen::Index j = 0; j < e.b.size(); ++j)
      total += std::norm(e.b(j)) * exp_integral(gm(j).real(), x_end - g.L);
  }
  return total;
}

void normalize(ModalExpansion &e, double x_end) {
  const double n2 = norm_squared(e, x_end);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::runtime_error("cannot normalize a zero or non-finite field");
  Complex<double> s = 1.0 / std::sqrt(n2);
  if (e.c.size() > 0) {
    Eigen::Index imax = 0;
    e.c.cwiseAbs().maxCoeff(&imax);
    if (std::abs(e.c(imax)) > 0.0) s *= std::conj(e.c(imax)) / std::abs(e.c(imax));
  }
  e.scale(s);
}

JunctionResidual junction_residual(const ModalExpansion &e, int order) {
  const Geometry &g = e.geom;
  JunctionResidual res;
  auto sq = [](Complex<double> z) { return std::norm(z); };

  // x = 0: trace on the full cavity wall, derivative on the aperture.
  double tr0 = integrate([&](double y) { return sq(field(e, Region::cavity, 0.0, y) - field(e, Region::neck, 0.0, y)); },
                         -g.eps, g.eps, order);
  auto wall = [&](double y) { return sq(field(e, Region::cavity, 0.0, y)); };
  tr0 += integrate(wall, -0.5 * g.b, -g.eps, order) + integrate(wall, g.eps, 0.5 * g.b, order);
  const double dr0 = integrate(
      [&](double y) { return sq(field_dx(e, Region::cavity, 0.0, y) - field_dx(e, Region::neck, 0.0, y)); }, -g.eps,
      g.eps, order);
  res.r0 = std::sqrt(tr0 + g.eps * g.eps * dr0);

  if (e.termination == Termination::dirichlet) {
    res.rL = std::sqrt(integrate([&](double y) { return sq(field(e, Region::neck, g.L, y)); }, -g.eps, g.eps, order));
    return res;
  }
  double trL = integrate([&](double y) { return sq(field(e, Region::strip, g.L, y) - field(e, Region::neck, g.L, y)); },
                         -g.eps, g.eps, order);
  auto out = [&](double y) { return sq(field(e, Region::strip, g.L, y)); };
  trL += integrate(out, -1.0, -g.eps, order) + integrate(out, g.eps, 1.0, order);
  const double drL = integrate(
      [&](double y) { return sq(field_dx(e, Region::strip, g.L, y) - field_dx(e, Region::neck, g.L, y)); }, -g.eps,
      g.eps, order);
  res.rL = std::sqrt(trL + g.eps * g.eps * drL);
  return res;
}

#define HELMRES_INSTANTIATE(Real)                                                              \
  template Complex<Real> cavity_kappa<Real>(int, double, const Complex<Real> &);               \
  template Complex<Real> strip_exponent<Real>(int, int, const Complex<Real> &);                \
  template MatchingSystem<Real> assemble<Real>(const MatchingContext &, const Complex<Real> &);

HELMRES_INSTANTIATE(double)
HELMRES_INSTANTIATE(DoubleDouble)
#undef HELMRES_INSTANTIATE

}  // namespace helmres
