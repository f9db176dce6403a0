#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sbs/solver.hpp"

namespace sbs {

struct SweepAxis {
  std::string name;  // epsilon, beta, mu1, mu2, m, v1.lambda, v2.a0, v1.center1, ...
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;  // declaration order
  std::size_t cap = 4096;

  std::size_t cell_count() const;
  // Values of cell `index`, one per axis; the last axis varies fastest.
  std::vector<double> cell(std::size_t index) const;
};

// Potential as written in a config; tabulated tables are loaded from `file`
// when the model is materialized on its grid.
struct PotentialConfig {
  PotentialSpec::Kind kind = PotentialSpec::Kind::Constant;
  double lambda = 1.0;
  std::array<double, 3> a{0.0, 0.0, 0.0};
  Point center{0.0, 0.0, 0.0};
  std::string file;

  bool operator==(const PotentialConfig&) const = default;
};

struct RunConfig {
  double epsilon = 1.0;
  double beta = 1.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  int m = 1;
  PotentialConfig v1;
  PotentialConfig v2;
  DomainSpec domain = DomainSpec::box(1, 20.0);
  int nodes_per_axis = 801;
  SolverConfig solver;
  std::string output_dir = ".";
  std::string suite;
  SweepSpec sweep;

  // Keys present in the parsed text, for override layering.
  std::set<std::string> explicit_keys;
};

bool operator==(const SolverConfig& a, const SolverConfig& b);
bool operator==(const SweepSpec& a, const SweepSpec& b);
// Compares the normalized content, ignoring explicit_keys.
bool same_settings(const RunConfig& a, const RunConfig& b);

// Parses `key = value` lines with `#` comments. Throws Error(Config) with a
// "line N:" prefix on unknown keys, duplicates and malformed values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
// Normalized text form: every key in fixed order, 17 significant digits.
std::string serialize_config(const RunConfig& cfg);

// Applies one setting, as parse_config would for a single line.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
// Applies a sweep value for an axis name.
void apply_axis(RunConfig& cfg, const std::string& axis, double value);
// Copies solver keys that `overrides` sets explicitly.
void apply_solver_overrides(SolverConfig& target, const RunConfig& overrides);

// Builds the discretized model, loading tabulated potentials.
DiscreteModel materialize(const RunConfig& cfg);
ModelSpec model_spec(const RunConfig& cfg);

std::string format_double(double v);

}  // namespace sbs
