#include <doctest.h>

#include <cmath>

#include "helmres/resonance.hpp"

using namespace helmres;

namespace {

const Geometry kG{1.0, 1.0, 1.0, 0.3};

MatchingContext context(Termination t, Truncation tr = {12, 10, 10, 200}) {
  const CavityMode m = cavity_eigenpair(kG, 1, 1);
  const ChannelSplit s = validate(kG, m);
  return MatchingContext(kG, tr, s.j0, m.parity, t, {m.eigenvalue, 0.0});
}

// 2-D Gauss quadrature of |u|^2 over one rectangle
double region_norm(const ModalExpansion &e, Region r, double x0, double x1, double y0, double y1) {
  return integrate(
      [&](double x) {
        return integrate([&](double y) { return std::norm(field(e, r, x, y)); }, y0, y1, 120);
      },
      x0, x1, 120);
}

}  // namespace

TEST_CASE("system dimensions") {
  const auto open = context(Termination::open_strip);
  const auto sys = assemble<double>(open, Complex<double>(17.0, -0.01));
  CHECK(sys.matrix.rows() == open.layout().size());
  CHECK(sys.matrix.rows() == sys.matrix.cols());
  CHECK(open.layout().size() == open.layout().nc() + 2 * open.layout().nk() + open.layout().nj());
  const auto closed = context(Termination::dirichlet);
  CHECK(closed.layout().nj() == 0);
  CHECK(assemble<double>(closed, Complex<double>(17.0, 0.0)).matrix.rows() ==
        closed.layout().nc() + 2 * closed.layout().nk());
}

TEST_CASE("double and double-double assembly agree") {
  const auto ctx = context(Termination::open_strip);
  const Complex<double> rho(17.1, -0.002);
  const auto a = assemble<double>(ctx, rho);
  const auto b = assemble<DoubleDouble>(ctx, Complex<DoubleDouble>(rho.real(), rho.imag()));
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < a.matrix.cols(); ++j) {
      const Complex<double> d(double(b.matrix(i, j).real()), double(b.matrix(i, j).imag()));
      worst = std::max(worst, std::abs(d - a.matrix(i, j)));
    }
  CHECK(worst < 1e-13);
}

TEST_CASE("closed-form norm matches quadrature of the field") {
  const CavityMode m = cavity_eigenpair(kG, 1, 1);
  const Resonance r = find_resonance(kG, m, {16, 12, 12, 200}, {17.09, -0.001});
  ModalExpansion e = r.kernel;
  const double x_end = kG.L + 0.5;
  const double closed = norm_squared(e, x_end);
  const double quad = region_norm(e, Region::cavity, -kG.a, 0.0, -kG.b / 2, kG.b / 2) +
                      region_norm(e, Region::neck, 0.0, kG.L, -kG.eps, kG.eps) +
                      region_norm(e, Region::strip, kG.L, x_end, -1.0, 1.0);
  CHECK(closed == doctest::Approx(quad).epsilon(1e-9));
  normalize(e, x_end);
  CHECK(norm_squared(e, x_end) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("field evaluation domain") {
  const CavityMode m = cavity_eigenpair(kG, 1, 1);
  const Resonance r = find_resonance(kG, m, {16, 12, 12, 200}, {17.09, -0.001});
  CHECK_THROWS_AS(field(r.kernel, 0.5, 0.5), std::out_of_range);
  CHECK_THROWS_AS(field(r.kernel, -1.5, 0.0), std::out_of_range);
  CHECK_NOTHROW(field(r.kernel, 0.5, 0.0));
  CHECK_NOTHROW(field(r.kernel, 3.0, 0.9));
  // Dirichlet walls
  CHECK(std::abs(field(r.kernel, -0.5, 0.5)) < 1e-12);
  CHECK(std::abs(field(r.kernel, 2.0, 1.0)) < 1e-12);
}

TEST_CASE("matching residuals shrink with the truncation") {
  const CavityMode m = cavity_eigenpair(kG, 1, 1);
  const Resonance coarse = find_resonance(kG, m, {10, 8, 8, 200}, {17.09, -0.001});
  const Resonance fine = find_resonance(kG, m, {40, 32, 32, 200}, coarse.rho);
  const JunctionResidual rc = junction_residual(coarse.kernel), rf = junction_residual(fine.kernel);
  CHECK(rf.r0 < rc.r0);
  CHECK(rf.rL < rc.rL);
}
