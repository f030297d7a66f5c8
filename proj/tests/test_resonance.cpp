#include <doctest.h>

#include <cmath>

#include "helmres/resonance.hpp"

using namespace helmres;

namespace {
const Geometry kG{1.0, 1.0, 1.0, 0.3};
const Truncation kT{24, 20, 20, 200};
}  // namespace

TEST_CASE("precision selection") {
  SolverOptions o;
  CHECK(required_precision(kG, o) == Precision::binary64);
  CHECK(required_precision(kG.with_eps(0.12), o) == Precision::double_double);
  CHECK_THROWS_AS(required_precision(kG.with_eps(0.004), o), PrecisionError);
  o.policy = PrecisionPolicy::extended;
  CHECK(required_precision(kG, o) == Precision::double_double);
  o.policy = PrecisionPolicy::fast;
  CHECK(required_precision(kG.with_eps(0.12), o) == Precision::binary64);
  CHECK(parse_precision_policy("auto") == PrecisionPolicy::automatic);
  CHECK_THROWS_AS(parse_precision_policy("quad"), std::invalid_argument);
}

TEST_CASE("resonance lies below the real axis near the closed eigenvalue") {
  const CavityMode m = cavity_eigenpair(kG, 1, 1);
  const ClosedEigen ce = closed_eigen(kG, m, kT, m.eigenvalue);
  CHECK(ce.imag_residual < 1e-8);
  CHECK(double(ce.lambda) < m.eigenvalue);
  const Resonance r = find_resonance(kG, m, kT, {double(ce.lambda), 0.0});
  CHECK(r.converged);
  CHECK(r.rho.imag() < 0.0);
  CHECK(std::abs(r.rho - double(ce.lambda)) < 0.1);
  // isolated kernel
  CHECK(r.sigma_min < 1e-10 * r.sigma_next);
  const FluxImag f = imag_via_flux(r.kernel);
  CHECK(f.sign == -1);
  CHECK(f.value() == doctest::Approx(r.rho.imag()).epsilon(1e-6));
}

TEST_CASE("precision policies agree where both resolve the width") {
  const CavityMode m = cavity_eigenpair(kG, 1, 1);
  SolverOptions fast, ext;
  fast.policy = PrecisionPolicy::fast;
  ext.policy = PrecisionPolicy::extended;
  const Resonance a = find_resonance(kG, m, kT, {17.09, 0.0}, fast);
  const Resonance b = find_resonance(kG, m, kT, {17.09, 0.0}, ext);
  CHECK(b.precision == Precision::double_double);
  CHECK(std::abs(a.rho - b.rho) < 1e-11 * std::abs(a.rho));
}

TEST_CASE("sealed problem has a real eigenvalue and no flux") {
  const CavityMode m = cavity_eigenpair(kG, 1, 1);
  const ClosedEigen ce = closed_eigen(kG, m, kT, m.eigenvalue);
  const Resonance r = find_resonance(kG, m, kT, {double(ce.lambda), 0.05}, {}, Termination::dirichlet);
  CHECK(std::fabs(r.rho.imag()) < 1e-10);
  CHECK(r.rho.real() == doctest::Approx(double(ce.lambda)).epsilon(1e-10));
  CHECK(imag_via_flux(r.kernel).value() == 0.0);
}

TEST_CASE("sweep bookkeeping") {
  const CavityMode m = cavity_eigenpair(kG, 1, 1);
  CHECK_THROWS_AS(sweep(kG, m, {0.2, 0.3}, kT), std::invalid_argument);
  const auto recs = sweep(kG, m, {0.3, 0.004}, kT, {}, false);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].ok());
  CHECK_FALSE(recs[1].ok());
  CHECK(recs[1].error.rfind("eps = 0.004", 0) == 0);
  CHECK_FALSE(recs[0].kernel.has_value());
}
