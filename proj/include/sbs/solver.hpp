#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbs/model.hpp"

namespace sbs {

struct SolverConfig {
  enum class Init { Gaussian, Random };

  long max_iters = 200000;
  // Relative change of the quotient merit between accepted steps.
  double tol_energy = 1e-12;
  // Normalized stationarity residual.
  double tol_residual = 1e-6;
  // Initial step of every line search; <= 0 selects 1.9 / (stiffness bound).
  double step0 = 0.0;
  double backtrack = 0.5;
  int max_halvings = 30;
  std::uint64_t seed = 0;
  Init init = Init::Gaussian;
  bool box_doubling = false;
  double box_tol = 1e-6;
  int max_doublings = 3;
  // Lets the solver attempt subcritical couplings (it will then report collapse).
  bool allow_subcritical = false;
  long history_stride = 100;

  void validate() const;
};

enum class Termination { Converged, MaxIters, Stalled };

const char* to_string(Termination t);

struct HistoryEntry {
  long iteration = 0;
  double energy = 0.0;
  double nehari_gap = 0.0;  // |G|
  double residual = 0.0;
};

struct GroundStateReport {
  ModelSpec model;
  State state;
  // Attained energy on the Nehari manifold.
  double c = 0.0;
  FormsReport forms;
  long iterations = 0;
  bool converged = false;
  Termination termination = Termination::MaxIters;
  double residual_norm = 0.0;
  double step0 = 0.0;
  std::vector<HistoryEntry> history;
};

// Co-centered Gaussian pair (alpha*w, w, ..., w) at the minimizer of V1+V2
// (the domain center for constant potentials); alpha is the first trial giving
// a positive quartic form. Throws InitFailed when none does.
State default_init(const DiscreteModel& mdl, const SolverConfig& cfg);

// Nehari-projected gradient descent on the energy with positivity clamping and
// backtracking on the quotient merit A^2/(4B).
GroundStateReport solve_ground_state(const DiscreteModel& mdl, const SolverConfig& cfg,
                                     const std::optional<State>& init = std::nullopt);

// Copies a state onto a larger grid with the same spacing and aligned nodes.
// Returns nullopt when the grids are not node-aligned.
std::optional<State> embed_state(const State& s, const GridPtr& target);

struct BoxStage {
  double size = 0.0;  // half-width (box) or radius (ball)
  double c = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct WholeSpaceReport {
  GroundStateReport report;
  std::vector<BoxStage> stages;
  bool settled = false;
};

// Repeats solve_ground_state on domains doubled about their center, same
// spacing, warm-started from the previous stage, until successive energies
// agree to cfg.box_tol. Throws NoBoxConvergence after cfg.max_doublings.
WholeSpaceReport solve_whole_space(const ModelSpec& model, int nodes_per_axis, const SolverConfig& cfg);

struct CMapEntry {
  Point point{};
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double c = 0.0;
  bool ok = false;
  std::string error;
};

struct CMapResult {
  std::vector<CMapEntry> entries;
  // Index of the smallest c among successful points; ties go to the
  // lexicographically smallest point. -1 if every point failed.
  long argmin = -1;
};

// Ground energy at eps = 1 of the constant-coefficient whole-space problem
// with (lambda1, lambda2) = (V1(x), V2(x)) for each sample x.
CMapResult c_map(const ModelSpec& model_template, int nodes_per_axis, const std::vector<Point>& samples,
                 const SolverConfig& cfg, std::size_t threads = 0);

}  // namespace sbs
