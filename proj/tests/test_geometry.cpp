#include <doctest.h>

#include <cmath>
#include <random>

#include "helmres/geometry.hpp"

using namespace helmres;

TEST_CASE("unit square reference") {
  const Geometry g{1.0, 1.0, 1.0, 0.2};
  const CavityMode m = cavity_eigenpair(g, 1, 1);
  CHECK(m.eigenvalue == doctest::Approx(2.0 * M_PI * M_PI));
  const ChannelSplit s = validate(g, m);
  CHECK(s.j0 == 2);
  CHECK(s.lower() < m.eigenvalue);
  CHECK(m.eigenvalue < s.upper());
}

namespace {

HypothesisError::Kind kind_of(const Geometry &g, int p, int q) {
  try {
    validate(g, cavity_eigenpair(g, p, q));
  } catch (const HypothesisError &e) {
    return e.kind();
  }
  FAIL("no hypothesis violation");
  return {};
}

}  // namespace

TEST_CASE("each hypothesis violation is reported distinctly") {
  CHECK(kind_of({1.0, 1.0, 1.0, 0.2}, 1, 2) == HypothesisError::Kind::not_simple);
  CHECK(kind_of({4.0, 4.0, 1.0, 0.2}, 1, 1) == HypothesisError::Kind::below_first_threshold);
  // pi^2 (1/a^2 + 1) = alpha_3^2 when a = 2 / sqrt(5)
  CHECK(kind_of({2.0 / std::sqrt(5.0), 1.0, 1.0, 0.2}, 1, 1) == HypothesisError::Kind::near_threshold);
  CHECK(kind_of({1.0, 1.3, 1.0, 0.2}, 1, 2) == HypothesisError::Kind::nodal_aperture);

  try {
    validate(Geometry{4.0, 4.0, 1.0, 0.2}, cavity_eigenpair({4.0, 4.0, 1.0, 0.2}, 1, 1));
  } catch (const HypothesisError &e) {
    CHECK(std::string(e.what()).find("(H) violated: below first threshold") == 0);
  }
}

TEST_CASE("accepted configurations sit strictly between consecutive thresholds") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> side(0.4, 3.0);
  int accepted = 0;
  for (int i = 0; i < 400; ++i) {
    const Geometry g{side(rng), side(rng), 1.0, 0.1};
    const int p = 1 + int(rng() % 3), q = 1 + 2 * int(rng() % 2);
    try {
      const CavityMode m = cavity_eigenpair(g, p, q);
      const ChannelSplit s = validate(g, m);
      ++accepted;
      CHECK(s.j0 >= 1);
      CHECK(std::pow(s.j0 * M_PI / 2, 2) < m.eigenvalue);
      CHECK(m.eigenvalue < std::pow((s.j0 + 1) * M_PI / 2, 2));
    } catch (const HypothesisError &) {
    }
  }
  CHECK(accepted > 50);
}

TEST_CASE("geometry checks") {
  CHECK_THROWS(Geometry{1.0, 0.3, 1.0, 0.2}.check());
  CHECK_THROWS(Geometry{1.0, 3.0, 1.0, 1.2}.check());
  CHECK_THROWS(Geometry{-1.0, 1.0, 1.0, 0.2}.check());
  CHECK_NOTHROW(Geometry{1.0, 1.0, 1.0, 0.2}.check());
}
