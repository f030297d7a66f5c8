// SPDX-License-Identifier: Apache-2.0
#include "helmres/geometry.hpp"

#include <cmath>
#include <sstream>

namespace helmres {

void Geometry::check() const {
  if (!(a > 0.0) || !(b > 0.0) || !(L > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("geometry: a, b, L and eps must be positive");
  if (!(2.0 * eps < b)) throw std::invalid_argument("geometry: neck wider than the cavity (2 eps >= b)");
  if (!(eps < 1.0)) throw std::invalid_argument("geometry: neck wider than the strip (eps >= 1)");
}

const char *to_string(HypothesisError::Kind k) {
  switch (k) {
    case HypothesisError::Kind::not_simple: return "eigenvalue not simple";
    case HypothesisError::Kind::below_first_threshold: return "below first threshold";
    case HypothesisError::Kind::near_threshold: return "too close to a threshold";
    case HypothesisError::Kind::nodal_aperture: return "aperture on a nodal line";
  }
  return "?";
}

HypothesisError::HypothesisError(Kind kind, const std::string &detail)
    : std::invalid_argument(std::string("(H) violated: ") + helmres::to_string(kind) +
                            (detail.empty() ? "" : " (" + detail + ")")),
      kind_(kind) {}

CavityMode cavity_eigenpair(const Geometry &g, int p, int q) {
  if (p < 1 || q < 1) throw std::domain_error("cavity mode indices must be >= 1");
  CavityMode m;
  m.p = p;
  m.q = q;
  m.eigenvalue = M_PI * M_PI * (double(p * p) / (g.a * g.a) + double(q * q) / (g.b * g.b));
  m.parity = q % 2 == 1 ? Parity::even : Parity::odd;
  m.aperture_trace = q % 2 == 1 ? ((q - 1) / 2 % 2 == 0 ? 1.0 : -1.0) : 0.0;
  return m;
}

double CavityMode::value(const Geometry &g, double x, double y) const {
  if (x < -g.a || x > 0.0 || std::fabs(y) > 0.5 * g.b) return 0.0;
  return 2.0 / std::sqrt(g.a * g.b) * std::sin(p * M_PI * (x + g.a) / g.a) *
         std::sin(q * M_PI * (y + 0.5 * g.b) / g.b);
}

ChannelSplit validate(const Geometry &g, double lambda0, double margin) {
  g.check();
  const double a1 = std::pow(alpha(1), 2);
  if (!(lambda0 > a1)) {
    std::ostringstream os;
    os << "lambda0 = " << lambda0 << " <= alpha_1^2 = " << a1;
    throw HypothesisError(HypothesisError::Kind::below_first_threshold, os.str());
  }
  ChannelSplit split;
  for (int j = 1;; ++j) {
    const double t = std::pow(alpha(j), 2);
    split.thresholds.push_back(t);
    if (std::fabs(lambda0 - t) < margin) {
      std::ostringstream os;
      os << "|lambda0 - alpha_" << j << "^2| = " << std::fabs(lambda0 - t) << " < " << margin;
      throw HypothesisError(HypothesisError::Kind::near_threshold, os.str());
    }
    if (t > lambda0) break;
    split.j0 = j;
  }
  return split;
}

ChannelSplit validate(const Geometry &g, const CavityMode &mode, double margin) {
  g.check();
  const double lam = mode.eigenvalue;
  const double tol = 1e-10 * lam;
  const int pmax = int(std::ceil(g.a * std::sqrt(lam) / M_PI)) + 1;
  const int qmax = int(std::ceil(g.b * std::sqrt(lam) / M_PI)) + 1;
  for (int p = 1; p <= pmax; ++p)
    for (int q = 1; q <= qmax; ++q) {
      if (p == mode.p && q == mode.q) continue;
      if (std::fabs(cavity_eigenpair(g, p, q).eigenvalue - lam) <= tol) {
        std::ostringstream os;
        os << "lambda_{" << mode.p << "," << mode.q << "} = lambda_{" << p << "," << q << "}";
        throw HypothesisError(HypothesisError::Kind::not_simple, os.str());
      }
    }
  if (mode.aperture_trace == 0.0) {
    std::ostringstream os;
    os << "q = " << mode.q << " is even";
    throw HypothesisError(HypothesisError::Kind::nodal_aperture, os.str());
  }
  return validate(g, lam, margin);
}

}  // namespace helmres
