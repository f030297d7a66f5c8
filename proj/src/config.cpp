// SPDX-License-Identifier: Apache-2.0
#include "helmres/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace helmres {

ConfigError::ConfigError(const std::string &source, int line, int column, const std::string &message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message
                                  : source + ": " + message),
      line_(line), column_(column) {}

std::vector<double> EpsGrid::resolve() const {
  std::vector<double> out = values;
  if (out.empty() && log_spaced) {
    const auto &ls = *log_spaced;
    if (ls.count == 1) {
      out.push_back(ls.from);
    } else {
      const double l0 = std::log(ls.from), l1 = std::log(ls.to);
      for (int i = 0; i < ls.count; ++i) out.push_back(std::exp(l0 + (l1 - l0) * i / (ls.count - 1)));
      out.front() = ls.from;
      out.back() = ls.to;
    }
  }
  return out;
}

namespace {

class Reader {
public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node &n, const std::string &msg) const {
    const YAML::Mark m = n.Mark();
    if (m.is_null()) throw ConfigError(source_, 0, 0, msg);
    throw ConfigError(source_, m.line + 1, m.column + 1, msg);
  }

  void expect_map(const YAML::Node &n, const std::string &what, const std::set<std::string> &keys) const {
    if (!n.IsMap()) fail(n, what + " must be a mapping");
    for (const auto &kv : n) {
      const std::string k = kv.first.as<std::string>();
      if (!keys.count(k)) fail(kv.first, "unknown key '" + k + "' in " + what);
    }
  }

  template <class T> T get(const YAML::Node &n, const std::string &what) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception &) {
      fail(n, "invalid value for " + what);
    }
  }

  template <class T> void opt(const YAML::Node &map, const char *key, T &out, const std::string &prefix) const {
    if (const YAML::Node n = map[key]) out = get<T>(n, prefix + key);
  }

  double positive(const YAML::Node &map, const char *key, double def, const std::string &prefix) const {
    double v = def;
    if (const YAML::Node n = map[key]) {
      v = get<double>(n, prefix + key);
      if (!(v > 0.0) || !std::isfinite(v)) fail(n, prefix + key + " must be positive");
    }
    return v;
  }

  int count(const YAML::Node &map, const char *key, int def, const std::string &prefix) const {
    int v = def;
    if (const YAML::Node n = map[key]) {
      v = get<int>(n, prefix + key);
      if (v < 1) fail(n, prefix + key + " must be >= 1");
    }
    return v;
  }

  const std::string &source() const { return source_; }

private:
  std::string source_;
};

}  // namespace

RunConfig parse_config(const std::string &text, const std::string &source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException &e) {
    throw ConfigError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  const Reader rd(source);
  if (!root || root.IsNull()) throw ConfigError(source, 0, 0, "empty configuration");
  rd.expect_map(root, "configuration", {"geometry", "eps_grid", "truncation", "precision", "output_dir", "verify"});

  RunConfig cfg;
  if (const YAML::Node g = root["geometry"]) {
    rd.expect_map(g, "geometry", {"a", "b", "L", "mode"});
    cfg.a = rd.positive(g, "a", cfg.a, "geometry.");
    cfg.b = rd.positive(g, "b", cfg.b, "geometry.");
    cfg.L = rd.positive(g, "L", cfg.L, "geometry.");
    if (const YAML::Node m = g["mode"]) {
      if (!m.IsSequence() || m.size() != 2) rd.fail(m, "geometry.mode must be [p, q]");
      cfg.p = rd.get<int>(m[0], "geometry.mode");
      cfg.q = rd.get<int>(m[1], "geometry.mode");
      if (cfg.p < 1 || cfg.q < 1) rd.fail(m, "geometry.mode indices must be >= 1");
    }
  }

  const YAML::Node grid = root["eps_grid"];
  if (!grid) throw ConfigError(source, 0, 0, "missing eps_grid");
  if (grid.IsSequence()) {
    cfg.eps_grid.values = rd.get<std::vector<double>>(grid, "eps_grid");
  } else {
    rd.expect_map(grid, "eps_grid", {"values", "log_spaced"});
    if (grid["values"] && grid["log_spaced"]) rd.fail(grid, "eps_grid takes either values or log_spaced");
    if (const YAML::Node v = grid["values"]) cfg.eps_grid.values = rd.get<std::vector<double>>(v, "eps_grid.values");
    if (const YAML::Node ls = grid["log_spaced"]) {
      rd.expect_map(ls, "eps_grid.log_spaced", {"from", "to", "count"});
      LogSpacedGrid l;
      l.from = rd.positive(ls, "from", l.from, "eps_grid.log_spaced.");
      l.to = rd.positive(ls, "to", l.to, "eps_grid.log_spaced.");
      l.count = rd.count(ls, "count", l.count, "eps_grid.log_spaced.");
      if (l.count > 1 && !(l.to < l.from)) rd.fail(ls, "eps_grid.log_spaced must run from large to small eps");
      cfg.eps_grid.log_spaced = l;
    }
  }
  const std::vector<double> eps = cfg.eps_grid.resolve();
  if (eps.empty()) rd.fail(grid, "eps_grid is empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || 2.0 * eps[i] >= cfg.b || eps[i] >= 1.0)
      rd.fail(grid, "eps = " + std::to_string(eps[i]) + " outside (0, min(1, b/2))");
    if (i > 0 && !(eps[i] < eps[i - 1])) rd.fail(grid, "eps_grid must be strictly descending");
  }

  if (const YAML::Node t = root["truncation"]) {
    rd.expect_map(t, "truncation", {"M", "K", "J", "quadrature_order"});
    auto &tr = cfg.truncation;
    tr.M = rd.count(t, "M", tr.M, "truncation.");
    tr.K = rd.count(t, "K", tr.K, "truncation.");
    tr.J = rd.count(t, "J", tr.J, "truncation.");
    tr.quadrature_order = rd.count(t, "quadrature_order", tr.quadrature_order, "truncation.");
  }

  if (const YAML::Node p = root["precision"]) {
    try {
      cfg.precision = parse_precision_policy(rd.get<std::string>(p, "precision"));
    } catch (const std::invalid_argument &e) {
      rd.fail(p, e.what());
    }
  }
  rd.opt(root, "output_dir", cfg.output_dir, "");

  if (const YAML::Node v = root["verify"]) {
    rd.expect_map(v, "verify",
                  {"width_law", "proximity", "green", "coefficient_chain", "decay_sums", "k_stability", "truncation",
                   "constants"});
    auto &t = cfg.verify;
    rd.opt(v, "width_law", t.width_law, "verify.");
    rd.opt(v, "proximity", t.proximity, "verify.");
    rd.opt(v, "green", t.green, "verify.");
    rd.opt(v, "coefficient_chain", t.coefficient_chain, "verify.");
    rd.opt(v, "decay_sums", t.decay_sums, "verify.");
    rd.opt(v, "k_stability", t.k_stability, "verify.");
    rd.opt(v, "truncation", t.truncation, "verify.");
    rd.opt(v, "constants", t.constants, "verify.");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string dump_config(const RunConfig &cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "a" << YAML::Value << cfg.a;
  out << YAML::Key << "b" << YAML::Value << cfg.b;
  out << YAML::Key << "L" << YAML::Value << cfg.L;
  out << YAML::Key << "mode" << YAML::Value << YAML::Flow << YAML::BeginSeq << cfg.p << cfg.q << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "eps_grid" << YAML::Value << YAML::BeginMap;
  if (!cfg.eps_grid.values.empty() || !cfg.eps_grid.log_spaced) {
    out << YAML::Key << "values" << YAML::Value << YAML::Flow << cfg.eps_grid.values;
  } else {
    const auto &ls = *cfg.eps_grid.log_spaced;
    out << YAML::Key << "log_spaced" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "from" << YAML::Value << ls.from;
    out << YAML::Key << "to" << YAML::Value << ls.to;
    out << YAML::Key << "count" << YAML::Value << ls.count;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "truncation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "M" << YAML::Value << cfg.truncation.M;
  out << YAML::Key << "K" << YAML::Value << cfg.truncation.K;
  out << YAML::Key << "J" << YAML::Value << cfg.truncation.J;
  out << YAML::Key << "quadrature_order" << YAML::Value << cfg.truncation.quadrature_order;
  out << YAML::EndMap;

  out << YAML::Key << "precision" << YAML::Value << to_string(cfg.precision);
  out << YAML::Key << "output_dir" << YAML::Value << cfg.output_dir;

  const auto &v = cfg.verify;
  out << YAML::Key << "verify" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "width_law" << YAML::Value << v.width_law;
  out << YAML::Key << "proximity" << YAML::Value << v.proximity;
  out << YAML::Key << "green" << YAML::Value << v.green;
  out << YAML::Key << "coefficient_chain" << YAML::Value << v.coefficient_chain;
  out << YAML::Key << "decay_sums" << YAML::Value << v.decay_sums;
  out << YAML::Key << "k_stability" << YAML::Value << v.k_stability;
  out << YAML::Key << "truncation" << YAML::Value << v.truncation;
  out << YAML::Key << "constants" << YAML::Value << v.constants;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.eps_grid.values = {0.4, 0.3, 0.25, 0.2, 0.15, 0.12};
  return cfg;
}

}  // namespace helmres
