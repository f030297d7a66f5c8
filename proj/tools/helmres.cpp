// SPDX-License-Identifier: Apache-2.0
// helmres run <config> [--constants-only] [--precision fast|extended|auto] [--out dir]

#include <iostream>

#include <CLI11.hpp>

#include "helmres/run.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Resonances of a cavity coupled to a strip through a thin neck"};
  app.require_subcommand(1);

  std::string config_path;
  bool constants_only = false;
  std::string precision;
  std::string out_dir;

  CLI::App *run = app.add_subcommand("run", "Run the sweep and the checks described by a config file");
  run->add_option("config", config_path, "YAML config");
  run->add_flag("--constants-only", constants_only, "Only evaluate the auxiliary constants, no solves");
  run->add_option("--precision", precision, "Precision policy")->check(CLI::IsMember({"fast", "extended", "auto"}));
  run->add_option("--out", out_dir, "Output directory (overrides the config)");

  CLI11_PARSE(app, argc, argv);

  helmres::RunConfig cfg = helmres::default_config();
  helmres::RunOptions opts;
  opts.constants_only = constants_only;
  if (!precision.empty()) opts.precision = helmres::parse_precision_policy(precision);
  if (!out_dir.empty()) opts.out_dir = out_dir;

  if (config_path.empty()) {
    if (!constants_only) {
      std::cerr << "run: a config file is required unless --constants-only is given\n";
      return helmres::exit_invalid;
    }
  } else {
    try {
      cfg = helmres::load_config(config_path);
    } catch (const helmres::ConfigError &e) {
      std::cerr << e.what() << '\n';
      return helmres::exit_invalid;
    }
  }

  const helmres::RunOutcome res = helmres::run(cfg, opts, &std::cerr);
  if (res.status == helmres::exit_ok) std::cerr << "wrote " << res.out_dir.string() << '\n';
  return res.status;
}
