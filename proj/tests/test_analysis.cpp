#include <doctest.h>

#include <cmath>
#include <random>

#include "helmres/analysis.hpp"

using namespace helmres;

TEST_CASE("width-law fit recovers synthetic parameters") {
  const std::vector<double> eps = {0.4, 0.3, 0.25, 0.2, 0.15, 0.12};
  std::vector<double> y;
  for (double e : eps) y.push_back(-3.1 / e + 2.5 * std::log(e) + 0.7);
  const WidthLawFit f = fit_width_law(eps, y);
  CHECK(f.slope == doctest::Approx(-3.1).epsilon(1e-10));
  CHECK(f.exponent == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(f.intercept == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(f.residual < 1e-10);
  CHECK_THROWS(fit_width_law({0.4, 0.3, 0.2}, {1.0, 2.0, 3.0}));
}

TEST_CASE("width-law check: exact law passes, constant sequence fails") {
  const std::vector<double> eps = {0.4, 0.3, 0.25, 0.2, 0.15, 0.12};
  std::vector<double> good, flat;
  for (double e : eps) {
    good.push_back(-M_PI / e + 3.0 * std::log(e));
    flat.push_back(-4.0);
  }
  const WidthLawCheck a = check_width_law(eps, good, 1.0);
  CHECK(a.pass());
  const WidthLawCheck b = check_width_law(eps, flat, 1.0);
  CHECK(std::fabs(b.fit.slope) < 1e-8);
  CHECK_FALSE(b.slope_ok);
  CHECK_FALSE(b.sandwich_ok);
}

TEST_CASE("constants") {
  const ConstantsReport c = constants();
  CHECK(c.gamma0 == doctest::Approx(1.0 + 2.0 / M_PI));
  CHECK(c.I1 == doctest::Approx(std::log(1 + c.gamma0) - c.gamma0 / (1 + c.gamma0)).epsilon(1e-9));
  CHECK(c.I2 == doctest::Approx(1.0 / (2.0 * (c.gamma0 * c.gamma0 - 1.0))).epsilon(1e-9));
  CHECK(c.tau_sum_sq <= 3.0);
  CHECK(c.tau1_limit == doctest::Approx(0.5 * std::sqrt(M_PI * M_PI / 6.0 - 1.0)));
  REQUIRE(c.samples.size() == 4);
  CHECK(std::fabs(c.samples.back().gamma1 - c.I1) < 0.05 * c.I1);
  CHECK(std::fabs(c.samples.back().gamma2 - c.I2) < 0.05 * c.I2);
}

TEST_CASE("xmax closed form") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double A = u(rng), t1 = u(rng), t2 = u(rng);
    const XmaxResult r = xmax_check(A, t1, t2);
    CHECK(r.closed_max == doctest::Approx(std::sqrt(t1 * t1 + t2 * t2) * A).epsilon(1e-12));
    CHECK(r.abs_error < 1e-9 * std::max(1.0, r.closed_max));
    CHECK(r.numeric_argmax >= 0.0);
    CHECK(r.numeric_argmax <= A * A * (1 + 1e-12));
  }
  CHECK_THROWS(xmax_check(-1.0, 1.0, 1.0));
}

TEST_CASE("coefficient diagnostics on the sealed problem") {
  const Geometry g{1.0, 1.0, 1.0, 0.3};
  const CavityMode m = cavity_eigenpair(g, 1, 1);
  const Truncation t{16, 12, 12, 200};
  const ClosedEigen ce = closed_eigen(g, m, t, m.eigenvalue);
  const Resonance r = find_resonance(g, m, t, {double(ce.lambda), 0.0}, {}, Termination::dirichlet);
  const ChainEntry c = verify_coefficient_chain(r.kernel, g.L);
  CHECK_FALSE(c.amplitude_ratio_applicable);
}

TEST_CASE("Green identity on a computed resonance") {
  const Geometry g{1.0, 1.0, 1.0, 0.3};
  const CavityMode m = cavity_eigenpair(g, 1, 1);
  const Resonance r = find_resonance(g, m, {24, 20, 20, 200}, {17.09, 0.0});
  const GreenReport gr = verify_green(r.kernel, r.rho.imag());
  CHECK(gr.applicable);
  CHECK(gr.rel_error < 1e-6);
  CHECK(gr.open_flux_rel_diff < 1e-6);
}
