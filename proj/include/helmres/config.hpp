// SPDX-License-Identifier: Apache-2.0
#pragma once

// Run configuration, read from and written to YAML.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "helmres/geometry.hpp"
#include "helmres/mode_matching.hpp"
#include "helmres/resonance.hpp"

namespace helmres {

struct LogSpacedGrid {
  double from = 0.4;
  double to = 0.12;
  int count = 6;
  bool operator==(const LogSpacedGrid &) const = default;
};

struct EpsGrid {
  std::vector<double> values;
  std::optional<LogSpacedGrid> log_spaced;  // used when values is empty

  /// Strictly descending list of eps.
  std::vector<double> resolve() const;
  bool operator==(const EpsGrid &) const = default;
};

struct VerifyToggles {
  bool width_law = true;
  bool proximity = true;
  bool green = true;
  bool coefficient_chain = true;
  bool decay_sums = true;
  bool k_stability = false;
  bool truncation = false;
  bool constants = true;
  bool operator==(const VerifyToggles &) const = default;
};

struct RunConfig {
  double a = 1.0;
  double b = 1.0;
  double L = 1.0;
  int p = 1;
  int q = 1;
  EpsGrid eps_grid;
  Truncation truncation;
  PrecisionPolicy precision = PrecisionPolicy::automatic;
  std::string output_dir = "out";
  VerifyToggles verify;

  Geometry geometry(double eps) const { return {a, b, L, eps}; }
  bool operator==(const RunConfig &) const = default;
};

/// Invalid configuration.  what() is "<source>:<line>:<column>: <message>"
/// when the position is known.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string &source, int line, int column, const std::string &message);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

RunConfig parse_config(const std::string &text, const std::string &source = "<config>");
RunConfig load_config(const std::filesystem::path &path);
std::string dump_config(const RunConfig &cfg);

/// Unit square, L = 1, eps in {0.4, 0.3, 0.25, 0.2, 0.15, 0.12}.
RunConfig default_config();

}  // namespace helmres
