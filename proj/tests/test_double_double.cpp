#include <doctest.h>

#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "helmres/double_double.hpp"

using helmres::DoubleDouble;
using Quad = boost::multiprecision::cpp_bin_float_50;

namespace {

Quad to_quad(const DoubleDouble &x) { return Quad(x.hi()) + Quad(x.lo()); }

double rel_err(const DoubleDouble &x, const Quad &ref) {
  const Quad d = abs(to_quad(x) - ref) / abs(ref);
  return d.convert_to<double>();
}

DoubleDouble from_quad(const Quad &q) {
  const double hi = q.convert_to<double>();
  return {hi, Quad(q - hi).convert_to<double>()};
}

}  // namespace

TEST_CASE("arithmetic against a 50-digit reference") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Quad qa = Quad(u(rng)) / 3 + Quad(u(rng)) * 1e-17, qb = Quad(u(rng)) / 7 + 1e-3;
    const DoubleDouble a = from_quad(qa), b = from_quad(qb);
    const Quad ra = to_quad(a), rb = to_quad(b);
    CHECK(rel_err(a + b, ra + rb) < 1e-30);
    CHECK(rel_err(a * b, ra * rb) < 1e-30);
    CHECK(rel_err(a / b, ra / rb) < 1e-30);
  }
}

TEST_CASE("elementary functions against a 50-digit reference") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 20.0);
  for (int i = 0; i < 100; ++i) {
    const DoubleDouble x = DoubleDouble(u(rng)) / DoubleDouble(3.0);
    const Quad q = to_quad(x);
    CHECK(rel_err(sqrt(x), sqrt(q)) < 1e-30);
    CHECK(rel_err(exp(x), exp(q)) < 1e-30);
    const Quad lq = log(q);
    CHECK(abs(to_quad(log(x)) - lq).convert_to<double>() < 1e-30 * std::max(1.0, abs(lq).convert_to<double>()));
    CHECK(rel_err(sinh(x), sinh(q)) < 1e-29);
    CHECK(rel_err(cosh(x), cosh(q)) < 1e-30);
    CHECK(abs(to_quad(sin(x)) - sin(q)).convert_to<double>() < 1e-30);
    CHECK(abs(to_quad(cos(x)) - cos(q)).convert_to<double>() < 1e-30);
  }
  CHECK(rel_err(DoubleDouble::pi(), boost::math::constants::pi<Quad>()) < 1e-32);
}

TEST_CASE("non-finite and extreme values") {
  const DoubleDouble zero(0.0), one(1.0);
  CHECK(std::isinf((one / zero).hi()));
  CHECK(std::isinf((DoubleDouble(1e300) * DoubleDouble(1e300)).hi()));
  CHECK((DoubleDouble(1e-200) * DoubleDouble(1e-200)).hi() == 0.0);
  CHECK(isnan(sqrt(DoubleDouble(-1.0))));
  CHECK(sqrt(zero) == zero);
  // squares of values above min() keep full precision
  const DoubleDouble m = std::numeric_limits<DoubleDouble>::min();
  CHECK((m * m).hi() >= std::numeric_limits<double>::min());
}
