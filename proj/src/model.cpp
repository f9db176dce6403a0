#include "sbs/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbs/error.hpp"

namespace sbs {

// --- potentials -------------------------------------------------------------

PotentialSpec PotentialSpec::constant(double lambda) {
  PotentialSpec p;
  p.kind = Kind::Constant;
  p.lambda = lambda;
  return p;
}

PotentialSpec PotentialSpec::harmonic(std::array<double, 3> a, Point center, double offset) {
  PotentialSpec p;
  p.kind = Kind::Harmonic;
  p.lambda = offset;
  p.a = a;
  p.center = center;
  return p;
}

PotentialSpec PotentialSpec::tabulated(ScalarField table) {
  PotentialSpec p;
  p.kind = Kind::Tabulated;
  p.lambda = 0.0;
  p.table = std::move(table);
  return p;
}

double PotentialSpec::value_at(const Point& x) const {
  switch (kind) {
    case Kind::Constant:
      return lambda;
    case Kind::Harmonic: {
      double v = lambda;
      for (int k = 0; k < 3; ++k) v += a[k] * (x[k] - center[k]) * (x[k] - center[k]);
      return v;
    }
    case Kind::Tabulated: {
      const Grid& g = *table->grid();
      const Point origin = g.box_point(0);
      std::array<std::uint32_t, 3> idx{0, 0, 0};
      for (int k = 0; k < g.dim(); ++k) {
        const double r = (x[k] - origin[k]) / g.spacing()[k];
        const double nearest = std::round(r);
        if (std::abs(r - nearest) > 1e-9 || nearest < 0 || nearest >= g.nodes()[k])
          throw Error(ErrorCode::OutOfDomain, "tabulated potential queried off its nodes");
        idx[k] = static_cast<std::uint32_t>(nearest);
      }
      const auto interior = g.interior_of_box(g.box_linear_index(idx));
      if (interior < 0) throw Error(ErrorCode::OutOfDomain, "tabulated potential queried on the boundary");
      return (*table)[static_cast<std::size_t>(interior)];
    }
  }
  return 0.0;
}

double PotentialSpec::infimum() const {
  if (kind == Kind::Tabulated) return table->min_value();
  return lambda;
}

double PotentialSpec::limit_at_infinity() const {
  switch (kind) {
    case Kind::Constant:
      return lambda;
    case Kind::Harmonic:
      for (double ak : a) {
        if (ak > 0.0) return std::numeric_limits<double>::infinity();
      }
      return lambda;
    case Kind::Tabulated:
      return std::numeric_limits<double>::quiet_NaN();
  }
  return lambda;
}

bool PotentialSpec::is_constant() const {
  if (kind == Kind::Constant) return true;
  if (kind == Kind::Harmonic) return a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0;
  return false;
}

ScalarField eval_potential(const PotentialSpec& p, const GridPtr& g) {
  ScalarField field;
  if (p.kind == PotentialSpec::Kind::Tabulated) {
    if (!p.table) throw Error(ErrorCode::InvalidArgument, "tabulated potential without a table");
    require_same_grid(*g, *p.table);
    field = ScalarField(g, std::vector<double>(p.table->values().begin(), p.table->values().end()));
  } else {
    field = ScalarField::from_function(g, [&](const Point& x) { return p.value_at(x); });
  }
  for (double v : field.values()) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "potential must be strictly positive on the interior");
  }
  return field;
}

// --- model ------------------------------------------------------------------

namespace {

void validate_potential(const PotentialSpec& p, const char* name) {
  const std::string n(name);
  switch (p.kind) {
    case PotentialSpec::Kind::Constant:
      if (!(p.lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, n + ": constant potential must be positive");
      break;
    case PotentialSpec::Kind::Harmonic:
      for (double ak : p.a) {
        if (!(ak >= 0.0)) throw Error(ErrorCode::InvalidArgument, n + ": harmonic coefficients must be >= 0");
      }
      if (!(p.lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, n + ": harmonic offset must be >= 0");
      break;
    case PotentialSpec::Kind::Tabulated:
      if (!p.table) throw Error(ErrorCode::InvalidArgument, n + ": tabulated potential without a table");
      break;
  }
}

}  // namespace

void ModelSpec::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (!std::isfinite(beta)) throw Error(ErrorCode::InvalidArgument, "beta must be finite");
  if (!(mu1 <= 0.0) || !(mu2 <= 0.0)) throw Error(ErrorCode::InvalidArgument, "mu1 and mu2 must be <= 0");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "component count m must be >= 1");
  validate_potential(v1, "V1");
  validate_potential(v2, "V2");
  domain.validate();
}

double ModelSpec::coupling_threshold() const { return std::sqrt(mu1 * mu2); }

ExistenceDiagnostic existence_diagnostic(const ModelSpec& model) {
  ExistenceDiagnostic d;
  d.b1_inf_value = model.v1.infimum();
  d.b1_limit = model.v1.limit_at_infinity();
  d.b2_inf_value = model.v2.infimum();
  d.b2_limit = model.v2.limit_at_infinity();
  if (model.v1.is_constant() && model.v2.is_constant()) {
    d.note = "constant potentials: ground state exists for any supercritical coupling";
  } else if (std::isinf(d.b1_limit) || std::isinf(d.b2_limit)) {
    d.note = "unbounded trap: existence holds";
  } else if (std::isnan(d.b1_limit) || std::isnan(d.b2_limit)) {
    d.note = "tabulated potential: limit at infinity unknown, condition not checked";
  } else if (d.b1_inf_value >= d.b1_limit && d.b2_inf_value >= d.b2_limit) {
    d.condition_may_hold = false;
    d.note = "potentials never dip below their limits: strict energy gap cannot hold";
  } else {
    d.note = "bounded trap dipping below its limit: condition verified only empirically";
  }
  return d;
}

DiscreteModel::DiscreteModel(ModelSpec spec, GridPtr grid) : spec_(std::move(spec)), grid_(std::move(grid)) {
  spec_.validate();
  if (!(grid_->domain() == spec_.domain)) throw Error(ErrorCode::GridMismatch, "grid does not discretize the model domain");
  v1_ = eval_potential(spec_.v1, grid_);
  v2_ = eval_potential(spec_.v2, grid_);
}

DiscreteModel discretize(const ModelSpec& spec, int nodes_per_axis) {
  return DiscreteModel(spec, build_grid(spec.domain, nodes_per_axis));
}

// --- state ------------------------------------------------------------------

State State::zeros(const GridPtr& g, int m) {
  State s;
  s.u = ScalarField(g);
  s.v.assign(static_cast<std::size_t>(m), ScalarField(g));
  return s;
}

State State::scaled(double c) const {
  State out = *this;
  out.u *= c;
  for (auto& vj : out.v) vj *= c;
  return out;
}

bool State::nonnegative() const {
  if (u.min_value() < 0.0) return false;
  for (const auto& vj : v) {
    if (vj.min_value() < 0.0) return false;
  }
  return true;
}

void State::clamp_nonnegative() {
  for (double& x : u.values()) x = x < 0.0 ? 0.0 : x;
  for (auto& vj : v) {
    for (double& x : vj.values()) x = x < 0.0 ? 0.0 : x;
  }
}

// --- forms ------------------------------------------------------------------

namespace {

void check_state(const State& s, const DiscreteModel& mdl) {
  const Grid& g = *mdl.grid();
  require_same_grid(g, s.u);
  for (const auto& vj : s.v) require_same_grid(g, vj);
  if (s.m() != mdl.spec().m) throw Error(ErrorCode::InvalidArgument, "state component count differs from the model");
}

double potential_part(const State& s, const DiscreteModel& mdl) {
  const auto v1 = mdl.v1().values();
  const auto v2 = mdl.v2().values();
  double sum = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    double acc = v1[i] * s.u[i] * s.u[i];
    for (const auto& vj : s.v) acc += v2[i] * vj[i] * vj[i];
    sum += acc;
  }
  return sum * mdl.grid()->cell_volume();
}

double quadratic_unchecked(const State& s, const DiscreteModel& mdl) {
  const Grid& g = *mdl.grid();
  const double eps2 = mdl.spec().epsilon * mdl.spec().epsilon;
  double grad = grad_norm_sq(g, s.u);
  for (const auto& vj : s.v) grad += grad_norm_sq(g, vj);
  return eps2 * grad + potential_part(s, mdl);
}

double quartic_unchecked(const State& s, const DiscreteModel& mdl) {
  const auto& p = mdl.spec();
  double sum = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const double u2 = s.u[i] * s.u[i];
    double v2 = 0.0, v4 = 0.0;
    for (const auto& vj : s.v) {
      const double w = vj[i] * vj[i];
      v2 += w;
      v4 += w * w;
    }
    sum += 2.0 * p.beta * u2 * v2 + p.mu1 * u2 * u2 + p.mu2 * v4;
  }
  return sum * mdl.grid()->cell_volume();
}

}  // namespace

double quadratic_form(const State& s, const DiscreteModel& mdl) {
  check_state(s, mdl);
  return quadratic_unchecked(s, mdl);
}

double quartic_form(const State& s, const DiscreteModel& mdl) {
  check_state(s, mdl);
  return quartic_unchecked(s, mdl);
}

FormsReport energy(const State& s, const DiscreteModel& mdl) {
  check_state(s, mdl);
  FormsReport f;
  f.A = quadratic_unchecked(s, mdl);
  f.B = quartic_unchecked(s, mdl);
  f.E = 0.5 * f.A - 0.25 * f.B;
  f.G = f.A - f.B;
  return f;
}

std::pair<State, double> nehari_project(const State& s, const DiscreteModel& mdl) {
  const FormsReport f = energy(s, mdl);
  if (!(f.B > 0.0)) throw Error(ErrorCode::NotProjectable, "quartic form is not positive: only the trivial state is admissible");
  const double t0 = f.A / f.B;
  return {s.scaled(std::sqrt(t0)), t0};
}

double quotient_objective(const FormsReport& forms) {
  if (!(forms.B > 0.0)) throw Error(ErrorCode::NotProjectable, "quartic form is not positive: only the trivial state is admissible");
  return forms.A * forms.A / (4.0 * forms.B);
}

double quotient_objective(const State& s, const DiscreteModel& mdl) { return quotient_objective(energy(s, mdl)); }

Residual euler_lagrange_residual(const State& s, const DiscreteModel& mdl) {
  check_state(s, mdl);
  const Grid& g = *mdl.grid();
  const auto& p = mdl.spec();
  const double eps2 = p.epsilon * p.epsilon;
  const auto v1 = mdl.v1().values();
  const auto v2 = mdl.v2().values();

  Residual r;
  r.ru = laplacian_apply(g, s.u);
  for (const auto& vj : s.v) r.rv.push_back(laplacian_apply(g, vj));

  const std::size_t n = s.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = s.u[i];
    double vsq = 0.0;
    for (const auto& vj : s.v) vsq += vj[i] * vj[i];
    r.ru[i] = eps2 * r.ru[i] - v1[i] * u + p.mu1 * u * u * u + p.beta * u * vsq;
    for (std::size_t j = 0; j < s.v.size(); ++j) {
      const double v = s.v[j][i];
      r.rv[j][i] = eps2 * r.rv[j][i] - v2[i] * v + p.mu2 * v * v * v + p.beta * u * u * v;
    }
  }

  double mass = 0.0;
  double worst = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += r.ru[i] * r.ru[i];
  worst = acc;
  for (std::size_t i = 0; i < n; ++i) mass += s.u[i] * s.u[i];
  for (std::size_t j = 0; j < s.v.size(); ++j) {
    acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += r.rv[j][i] * r.rv[j][i];
      mass += s.v[j][i] * s.v[j][i];
    }
    worst = std::max(worst, acc);
  }
  // Both sums carry the same cell volume, which cancels in the ratio.
  r.norm = mass > 0.0 ? std::sqrt(worst / mass) : 0.0;
  return r;
}

}  // namespace sbs
