#include <doctest.h>

#include <sstream>

#include "helmres/run.hpp"

using namespace helmres;

TEST_CASE("round trip") {
  RunConfig a = default_config();
  a.verify.truncation = true;
  a.truncation.M = 32;
  a.precision = PrecisionPolicy::extended;
  CHECK(parse_config(dump_config(a)) == a);

  RunConfig b = default_config();
  b.eps_grid.values.clear();
  b.eps_grid.log_spaced = LogSpacedGrid{0.4, 0.1, 5};
  b.a = 1.0 / 3.0;
  const RunConfig b2 = parse_config(dump_config(b));
  CHECK(b2 == b);
  const auto grid = b2.eps_grid.resolve();
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == 0.4);
  CHECK(grid.back() == 0.1);
  CHECK(grid[2] == doctest::Approx(0.2));
}

TEST_CASE("minimal config takes defaults") {
  const RunConfig c = parse_config("eps_grid: [0.3, 0.2]\n");
  CHECK(c.a == 1.0);
  CHECK(c.truncation == Truncation{});
  CHECK(c.precision == PrecisionPolicy::automatic);
  CHECK(c.eps_grid.values.size() == 2);
}

namespace {

std::string error_of(const std::string &text) {
  try {
    parse_config(text, "cfg.yaml");
  } catch (const ConfigError &e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("errors carry the offending line") {
  CHECK(error_of("geometry:\n  a: 1\n  c: 2\neps_grid: [0.3]\n").rfind("cfg.yaml:3:", 0) == 0);
  CHECK(error_of("eps_grid: [0.3]\nprecision: quad\n").rfind("cfg.yaml:2:", 0) == 0);
  CHECK(error_of("eps_grid: [0.2, 0.3]\n").find("descending") != std::string::npos);
  CHECK(error_of("geometry:\n  a: -1\neps_grid: [0.3]\n").rfind("cfg.yaml:2:", 0) == 0);
  CHECK(error_of("eps_grid: [0.3\n").rfind("cfg.yaml:", 0) == 0);
  CHECK(error_of("geometry:\n  mode: [1]\neps_grid: [0.3]\n").find("[p, q]") != std::string::npos);
  CHECK(error_of("geometry: {a: 1}\n").find("missing eps_grid") != std::string::npos);
}

TEST_CASE("hypothesis violation stops the run") {
  RunConfig c = default_config();
  c.a = c.b = 4.0;
  RunOptions o;
  o.write_files = false;
  std::ostringstream log;
  const RunOutcome r = run(c, o, &log);
  CHECK(r.status != 0);
  CHECK(log.str().find("(H) violated: below first threshold") != std::string::npos);
  CHECK(r.records.empty());
}

TEST_CASE("constants-only run does no solves") {
  RunOptions o;
  o.constants_only = true;
  o.write_files = false;
  const RunOutcome r = run(default_config(), o);
  CHECK(r.status == 0);
  CHECK(r.records.empty());
  CHECK(r.report["constants"]["I1"].get<double>() == doctest::Approx(0.35).epsilon(0.01));
  CHECK(r.report["constants"]["I2"].get<double>() == doctest::Approx(0.298).epsilon(0.002));
  CHECK(r.report["checks"]["constants"]["pass"].get<bool>());
}

TEST_CASE("records are deterministic and labelled") {
  RunConfig c = default_config();
  c.eps_grid.values = {0.4, 0.3, 0.25, 0.2};
  c.truncation = {20, 16, 16, 200};
  c.verify = {};
  c.verify.constants = false;
  RunOptions o;
  o.write_files = false;
  const RunOutcome a = run(c, o), b = run(c, o);
  std::ostringstream sa, sb;
  write_records_csv(sa, a.records);
  write_records_csv(sb, b.records);
  CHECK(sa.str() == sb.str());
  CHECK(a.status == 0);

  std::istringstream in(sa.str());
  std::string header;
  std::getline(in, header);
  std::istringstream cols(header);
  std::string col;
  while (std::getline(cols, col, ','))
    if (col != "precision" && col != "status") CHECK_MESSAGE(col.back() == ']', col);
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("a failing quarter of the grid is tolerated, more is not") {
  RunConfig c = default_config();
  c.truncation = {20, 16, 16, 200};
  c.verify = {};
  c.verify.constants = false;
  c.verify.width_law = false;
  c.verify.proximity = false;
  c.verify.decay_sums = false;
  c.verify.coefficient_chain = false;
  c.verify.green = false;
  RunOptions o;
  o.write_files = false;
  c.eps_grid.values = {0.4, 0.3, 0.25, 0.004};
  CHECK(run(c, o).status == 0);
  c.eps_grid.values = {0.4, 0.3, 0.004, 0.003};
  const RunOutcome r = run(c, o);
  CHECK(r.status == exit_points_failed);
  CHECK(r.records.size() == 4);
}
