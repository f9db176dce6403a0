#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbs/grid.hpp"

namespace sbs {

struct PotentialSpec {
  enum class Kind { Constant, Harmonic, Tabulated };

  Kind kind = Kind::Constant;
  // Constant value, or the additive offset of a harmonic trap.
  double lambda = 1.0;
  // Harmonic: offset + sum_k a[k] * (x_k - center[k])^2.
  std::array<double, 3> a{0.0, 0.0, 0.0};
  Point center{0.0, 0.0, 0.0};
  std::optional<ScalarField> table;

  static PotentialSpec constant(double lambda);
  static PotentialSpec harmonic(std::array<double, 3> a, Point center, double offset = 0.0);
  static PotentialSpec tabulated(ScalarField table);

  // Pointwise value; tabulated potentials are only defined on their nodes.
  double value_at(const Point& x) const;
  // inf over R^N and the limit as |x| -> infinity (b^0 and b^inf).
  double infimum() const;
  double limit_at_infinity() const;
  bool is_constant() const;
};

struct ModelSpec {
  double epsilon = 1.0;
  double beta = 1.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  int m = 1;
  PotentialSpec v1 = PotentialSpec::constant(1.0);
  PotentialSpec v2 = PotentialSpec::constant(1.0);
  DomainSpec domain;

  void validate() const;
  // sqrt(mu1 * mu2): at or below it only the trivial state exists.
  double coupling_threshold() const;
  bool supercritical() const { return beta > coupling_threshold(); }
};

// Whether the existence condition for nonconstant traps can possibly hold,
// from the analytic b^0 / b^inf of each potential.
struct ExistenceDiagnostic {
  double b1_inf_value = 0.0, b1_limit = 0.0;
  double b2_inf_value = 0.0, b2_limit = 0.0;
  bool condition_may_hold = true;
  std::string note;
};

ExistenceDiagnostic existence_diagnostic(const ModelSpec& model);

ScalarField eval_potential(const PotentialSpec& p, const GridPtr& g);

// A model bound to a grid with its potentials evaluated once.
class DiscreteModel {
 public:
  DiscreteModel(ModelSpec spec, GridPtr grid);

  const ModelSpec& spec() const { return spec_; }
  const GridPtr& grid() const { return grid_; }
  const ScalarField& v1() const { return v1_; }
  const ScalarField& v2() const { return v2_; }

 private:
  ModelSpec spec_;
  GridPtr grid_;
  ScalarField v1_;
  ScalarField v2_;
};

DiscreteModel discretize(const ModelSpec& spec, int nodes_per_axis);

struct State {
  ScalarField u;
  std::vector<ScalarField> v;

  static State zeros(const GridPtr& g, int m);

  const GridPtr& grid() const { return u.grid(); }
  int m() const { return static_cast<int>(v.size()); }
  State scaled(double c) const;
  bool nonnegative() const;
  // Sets every negative value to zero.
  void clamp_nonnegative();
};

struct FormsReport {
  double A = 0.0;  // quadratic form
  double B = 0.0;  // quartic form
  double E = 0.0;  // A/2 - B/4
  double G = 0.0;  // Nehari residual A - B
};

double quadratic_form(const State& s, const DiscreteModel& mdl);
double quartic_form(const State& s, const DiscreteModel& mdl);
FormsReport energy(const State& s, const DiscreteModel& mdl);

// Scales s by sqrt(A/B) onto the Nehari manifold. Throws NotProjectable when B <= 0.
std::pair<State, double> nehari_project(const State& s, const DiscreteModel& mdl);
// A^2 / (4B) = sup_t E(sqrt(t) s). Throws NotProjectable when B <= 0.
double quotient_objective(const State& s, const DiscreteModel& mdl);
double quotient_objective(const FormsReport& forms);

// Left-hand sides of the stationarity equations; the energy gradient is -r.
struct Residual {
  ScalarField ru;
  std::vector<ScalarField> rv;
  double norm = 0.0;
};

Residual euler_lagrange_residual(const State& s, const DiscreteModel& mdl);

}  // namespace sbs
