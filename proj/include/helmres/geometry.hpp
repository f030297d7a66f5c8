// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "helmres/spectral.hpp"

namespace helmres {

// Cavity (-a,0)x(-b/2,b/2), neck [0,L]x(-eps,eps) attached flush at x=0,
// exterior strip (L,inf)x(-1,1).  All walls Dirichlet.
struct Geometry {
  double a = 1.0;
  double b = 1.0;
  double L = 1.0;
  double eps = 0.2;

  void check() const;
  Geometry with_eps(double e) const {
    Geometry g = *this;
    g.eps = e;
    return g;
  }
};

struct CavityMode {
  int p = 1;
  int q = 1;
  double eigenvalue = 0.0;
  Parity parity = Parity::even;
  // sin(q pi / 2): value of the y-profile (up to normalization) at the aperture centre
  double aperture_trace = 0.0;

  double value(const Geometry &g, double x, double y) const;
};

struct ChannelSplit {
  int j0 = 0;
  std::vector<double> thresholds;  // alpha_1^2 ... alpha_{j0+1}^2

  double lower() const { return thresholds.at(j0 - 1); }
  double upper() const { return thresholds.at(j0); }
};

class HypothesisError : public std::invalid_argument {
public:
  enum class Kind { not_simple, below_first_threshold, near_threshold, nodal_aperture };
  HypothesisError(Kind kind, const std::string &detail);
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

const char *to_string(HypothesisError::Kind k);

CavityMode cavity_eigenpair(const Geometry &g, int p, int q);

/// Channel bookkeeping for a reference eigenvalue; rejects lambda0 <= alpha_1^2
/// and lambda0 within `margin` of any threshold.
ChannelSplit validate(const Geometry &g, double lambda0, double margin = 0.1);

/// Full check of a rectangle mode: simplicity, aperture trace, thresholds.
ChannelSplit validate(const Geometry &g, const CavityMode &mode, double margin = 0.1);

}  // namespace helmres
