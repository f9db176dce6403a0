#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbs/analysis.hpp"
#include "sbs/config.hpp"

namespace sbs {

enum class RunStatus { Converged, NotConverged, Collapsed, Failed };

const char* to_string(RunStatus s);

// Outcome of one configured solve. `report` is set whenever the solver ran.
struct RunOutcome {
  RunStatus status = RunStatus::Failed;
  std::string message;
  std::optional<GroundStateReport> report;
  std::optional<PeakReport> peaks;
  std::vector<BoxStage> stages;
  int nodes_per_axis = 0;
  double spacing = 0.0;
};

// Peak value under which a converged state counts as collapsed.
inline constexpr double kCollapsePeak = 1e-8;

// Runs solve_ground_state, or solve_whole_space when box doubling is on.
// Throws Error(Config / InvalidArgument) for unusable configurations.
RunOutcome run_solve(const RunConfig& cfg);

// Fixed-order CSV columns shared by report.csv and sweep.csv.
std::vector<std::string> report_columns();
std::vector<std::string> report_fields(const RunConfig& cfg, const RunOutcome& out);
std::string csv_line(const std::vector<std::string>& fields);

// Exit codes of the solve command: 0 converged, 2 not converged, 3 no
// nontrivial state (collapsed or subcritical). Config errors surface as
// exceptions and map to 1.
int exit_code(RunStatus s);

// Writes report.csv and u.sbsf, v1.sbsf, ... into cfg.output_dir.
void write_solve_outputs(const RunConfig& cfg, const RunOutcome& out);

struct SweepCell {
  std::size_t index = 0;
  std::vector<double> values;
  RunConfig config;
  RunOutcome outcome;
};

// Runs every cell of cfg.sweep concurrently; results come back in
// enumeration order. Throws Error(Config) when the cell count exceeds the cap.
std::vector<SweepCell> run_sweep(const RunConfig& cfg, std::size_t threads = 0);
std::string sweep_csv(const RunConfig& cfg, const std::vector<SweepCell>& cells);

// 8-bit binary PGM of a 2D field dump, linearly mapped [0, max] -> [0, 255].
std::vector<unsigned char> render_pgm(const FieldImage& image);
void render_pgm_file(const std::string& in_path, const std::string& out_path);

struct Check {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "==", ...
  bool pass = false;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  bool pass = false;
  double seconds = 0.0;
};

struct SuiteOptions {
  std::optional<RunConfig> overrides;
  std::size_t threads = 0;
};

const std::vector<std::string>& suite_names();
// Throws Error(InvalidArgument) for unknown suites.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts = {});
std::string suite_csv(const SuiteResult& r);
std::string suite_table(const SuiteResult& r);

}  // namespace sbs
