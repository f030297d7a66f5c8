#include <doctest.h>

#include <cmath>
#include <random>

#include "helmres/spectral.hpp"

using namespace helmres;

TEST_CASE("principal square root branch") {
  const auto r = principal_sqrt<double>({-4.0, 0.0});
  CHECK(r.real() == doctest::Approx(0.0));
  CHECK(r.imag() == doctest::Approx(2.0));
  const auto s = principal_sqrt<double>({-4.0, -0.0});
  CHECK(s.imag() == doctest::Approx(2.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const Complex<double> z(u(rng), u(rng));
    const auto w = principal_sqrt(z);
    CHECK(w.real() >= 0.0);
    CHECK(std::abs(w * w - z) <= 1e-13 * std::abs(z));
  }
}

TEST_CASE("exponents on either side of a threshold") {
  const double eps = 0.2;
  // neck: theta_k real positive while eps^2 rho < alpha_k^2
  const auto th = theta<double>(1, eps, {18.0, 0.0});
  CHECK(th.real() > 0.0);
  CHECK(std::abs(th.imag()) < 1e-15);
  // strip: open channel oscillates, closed one decays
  const auto g_open = open_wavenumber<double>(1, {18.0, 0.0});
  CHECK(g_open.real() > 0.0);
  const auto g_closed = sqrt_prop<double>(3, {18.0, 0.0});
  CHECK(g_closed.real() > 0.0);
  CHECK(std::abs(g_closed.imag()) < 1e-15);
  CHECK_THROWS_AS(open_wavenumber<double>(2, {alpha<double>(2) * alpha<double>(2), 0.0}), BranchPointError);
}

TEST_CASE("transverse modes are orthonormal") {
  for (double h : {0.1, 0.5, 1.0}) {
    for (int m = 1; m <= 8; ++m)
      for (int n = 1; n <= 8; ++n) {
        const TransverseMode a{Region::neck, m, h}, b{Region::neck, n, h};
        const double ip = integrate([&](double y) { return a.value(y) * b.value(y); }, -h, h, 200);
        CHECK(ip == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
      }
  }
  const TransverseMode c = cavity_mode_y(3, 1.0);
  CHECK(c.value(0.0) == doctest::Approx(c.sign() * std::sqrt(2.0)));
  CHECK(c.value(0.6) == 0.0);
}

TEST_CASE("cavity modes equal sin(q pi (y + b/2) / b) normalized") {
  const double b = 1.3;
  for (int q = 1; q <= 6; ++q) {
    const TransverseMode m = cavity_mode_y(q, b);
    for (double y : {-0.5, -0.1, 0.2, 0.61})
      CHECK(m.value(y) == doctest::Approx(std::sqrt(2.0 / b) * std::sin(q * M_PI * (y + b / 2) / b)).epsilon(1e-13));
  }
}

TEST_CASE("neck modes are complete in the strip basis") {
  // sum_j <psi_k, phi_j>^2 = 1 for the neck mode extended by zero
  for (int k : {1, 2, 5}) {
    const TransverseMode nk = neck_mode(k, 0.1);
    double s = 0.0;
    for (int j = 1; j <= 4000; ++j) s += std::pow(overlap<double>(nk, strip_mode(j)), 2);
    CHECK(s == doctest::Approx(1.0).epsilon(2e-3));
  }
}

TEST_CASE("overlap closed forms, including the degenerate wavenumbers") {
  double worst = 0.0;
  for (double eps : {0.05, 0.125, 0.25})
    for (int k = 1; k <= 20; ++k)
      for (int j = 1; j <= 40; ++j) {
        const TransverseMode a = neck_mode(k, eps), b = strip_mode(j);
        worst = std::max(worst, std::fabs(overlap<double>(a, b) - overlap_quadrature(a, b, 400)));
      }
  CHECK(worst < 1e-12);
  // double and double-double agree
  const TransverseMode a = neck_mode(3, 0.1), b = strip_mode(30);
  CHECK(double(overlap<DoubleDouble>(a, b)) == doctest::Approx(overlap<double>(a, b)).epsilon(1e-14));
}
