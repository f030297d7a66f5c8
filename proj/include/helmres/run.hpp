// SPDX-License-Identifier: Apache-2.0
#pragma once

// Batch driver: sweep, analysis checks, output files.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "helmres/analysis.hpp"
#include "helmres/config.hpp"

namespace helmres {

enum ExitStatus : int {
  exit_ok = 0,
  exit_points_failed = 1,  // more than a quarter of the grid failed
  exit_invalid = 2,        // bad configuration or hypothesis violation
  exit_io = 3,
};

struct RunOptions {
  bool constants_only = false;
  std::optional<PrecisionPolicy> precision;
  std::optional<std::filesystem::path> out_dir;
  bool write_files = true;
};

struct RunOutcome {
  int status = exit_ok;
  std::filesystem::path out_dir;
  std::vector<SweepRecord> records;
  nlohmann::ordered_json report;
};

RunOutcome run(const RunConfig &cfg, const RunOptions &opts = {}, std::ostream *log = nullptr);

/// Per-point records; every column header carries its scale ([lin] or [ln]).
void write_records_csv(std::ostream &os, const std::vector<SweepRecord> &records);
/// Plot columns: 1/eps against ln|Im rho| and the width-law fit and bounds.
void write_width_law_dat(std::ostream &os, const std::vector<SweepRecord> &records, const WidthLawCheck *check);

nlohmann::ordered_json to_json(const ConstantsReport &c);
/// Pass/fail of the constants checks: closed forms, quoted values, tau bound, convergence of Gamma.
nlohmann::ordered_json check_constants(const ConstantsReport &c);

}  // namespace helmres
