#include "sbs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sbs/error.hpp"
#include "sbs/parallel.hpp"

namespace sbs {

void SolverConfig::validate() const {
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
  if (!(tol_energy > 0.0) || !(tol_residual > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw Error(ErrorCode::InvalidArgument, "backtrack factor must lie in (0,1)");
  if (max_halvings < 0) throw Error(ErrorCode::InvalidArgument, "max_halvings must be >= 0");
  if (!(box_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "box tolerance must be positive");
  if (max_doublings < 1) throw Error(ErrorCode::InvalidArgument, "max_doublings must be >= 1");
  if (!std::isfinite(step0)) throw Error(ErrorCode::InvalidArgument, "step0 must be finite");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIters: return "max_iters";
    case Termination::Stalled: return "stalled";
  }
  return "unknown";
}

namespace {

Point init_center(const DiscreteModel& mdl) {
  const auto& spec = mdl.spec();
  if (spec.v1.is_constant() && spec.v2.is_constant()) return spec.domain.center;
  const auto v1 = mdl.v1().values();
  const auto v2 = mdl.v2().values();
  std::size_t best = 0;
  for (std::size_t i = 1; i < v1.size(); ++i) {
    if (v1[i] + v2[i] < v1[best] + v2[best]) best = i;
  }
  return mdl.grid()->point(best);
}

// Largest eigenvalue bound of the linear part of the energy Hessian.
double linear_stiffness(const DiscreteModel& mdl) {
  const Grid& g = *mdl.grid();
  const double eps2 = mdl.spec().epsilon * mdl.spec().epsilon;
  double lap = 0.0;
  for (int k = 0; k < g.dim(); ++k) lap += 4.0 / (g.spacing()[k] * g.spacing()[k]);
  return eps2 * lap + std::max(mdl.v1().max_value(), mdl.v2().max_value());
}

void axpy_clamped(State& out, const State& s, double tau, const Residual& r) {
  const std::size_t n = s.u.size();
  for (std::size_t i = 0; i < n; ++i) out.u[i] = std::max(0.0, s.u[i] + tau * r.ru[i]);
  for (std::size_t j = 0; j < s.v.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) out.v[j][i] = std::max(0.0, s.v[j][i] + tau * r.rv[j][i]);
  }
}

}  // namespace

State default_init(const DiscreteModel& mdl, const SolverConfig& cfg) {
  const auto& spec = mdl.spec();
  if (!spec.supercritical() && !cfg.allow_subcritical)
    throw Error(ErrorCode::InitFailed, "coupling beta <= sqrt(mu1*mu2): no nontrivial state exists");

  const GridPtr& g = mdl.grid();
  const Point center = init_center(mdl);
  const double vmin = std::min(mdl.v1().min_value(), mdl.v2().min_value());
  const double width = spec.epsilon / std::sqrt(vmin);

  ScalarField w = ScalarField::from_function(g, [&](const Point& x) {
    const double r = distance(x, center) / width;
    return std::exp(-0.5 * r * r);
  });
  if (cfg.init == SolverConfig::Init::Random) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter(0.75, 1.25);
    for (double& x : w.values()) x *= jitter(rng);
  }

  std::vector<double> alphas{1.0};
  if (spec.mu1 < 0.0 && spec.mu2 < 0.0) alphas.push_back(std::pow(spec.mu2 / spec.mu1, 0.25));
  alphas.push_back(2.0);
  alphas.push_back(0.5);

  for (double alpha : alphas) {
    State s;
    s.u = w;
    s.u *= alpha;
    s.v.assign(static_cast<std::size_t>(spec.m), w);
    if (quartic_form(s, mdl) > 0.0) return s;
  }
  throw Error(ErrorCode::InitFailed, "no trial amplitude ratio gives a positive quartic form");
}

GroundStateReport solve_ground_state(const DiscreteModel& mdl, const SolverConfig& cfg, const std::optional<State>& init) {
  cfg.validate();
  const auto& spec = mdl.spec();
  if (!spec.supercritical() && !cfg.allow_subcritical)
    throw Error(ErrorCode::InitFailed, "coupling beta <= sqrt(mu1*mu2): no nontrivial state exists");

  State start = init ? *init : default_init(mdl, cfg);
  start.clamp_nonnegative();
  State s = nehari_project(start, mdl).first;
  FormsReport forms = energy(s, mdl);
  double merit = quotient_objective(forms);

  GroundStateReport rep;
  rep.model = spec;
  rep.step0 = cfg.step0 > 0.0 ? cfg.step0 : 1.9 / linear_stiffness(mdl);

  State trial = s;
  double rel_change = std::numeric_limits<double>::infinity();
  // Merit comparisons tolerate rounding-level noise only.
  constexpr double kSlack = 1e-14;

  long iter = 0;
  Residual r;
  for (;; ++iter) {
    r = euler_lagrange_residual(s, mdl);
    const bool done = rel_change <= cfg.tol_energy && r.norm <= cfg.tol_residual;
    if (iter % cfg.history_stride == 0 || done || iter >= cfg.max_iters)
      rep.history.push_back({iter, forms.E, std::abs(forms.G), r.norm});
    if (done) {
      rep.termination = Termination::Converged;
      break;
    }
    if (iter >= cfg.max_iters) {
      rep.termination = Termination::MaxIters;
      break;
    }

    double tau = rep.step0;
    bool accepted = false;
    bool any_projectable = false;
    FormsReport trial_forms;
    for (int h = 0; h <= cfg.max_halvings; ++h, tau *= cfg.backtrack) {
      axpy_clamped(trial, s, tau, r);
      trial_forms = energy(trial, mdl);
      if (!(trial_forms.B > 0.0)) continue;
      any_projectable = true;
      const double trial_merit = quotient_objective(trial_forms);
      if (trial_merit <= merit + kSlack * std::abs(merit)) {
        rel_change = std::abs(merit - trial_merit) / std::abs(merit);
        merit = trial_merit;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!any_projectable)
        throw Error(ErrorCode::NotProjectable, "positivity clamping drove the quartic form to zero: the state collapsed");
      rep.termination = r.norm <= cfg.tol_residual ? Termination::Converged : Termination::Stalled;
      rep.history.push_back({iter, forms.E, std::abs(forms.G), r.norm});
      break;
    }
    const double t0 = trial_forms.A / trial_forms.B;
    s = trial.scaled(std::sqrt(t0));
    forms = energy(s, mdl);
  }

  rep.state = std::move(s);
  rep.forms = forms;
  rep.c = forms.E;
  rep.iterations = iter;
  rep.residual_norm = r.norm;
  rep.converged = rep.termination == Termination::Converged;
  return rep;
}

std::optional<State> embed_state(const State& s, const GridPtr& target) {
  const Grid& src = *s.grid();
  const Grid& dst = *target;
  if (src.dim() != dst.dim()) return std::nullopt;
  std::array<std::int64_t, 3> offset{0, 0, 0};
  const Point src_origin = src.box_point(0);
  const Point dst_origin = dst.box_point(0);
  for (int k = 0; k < src.dim(); ++k) {
    const double h = src.spacing()[k];
    if (std::abs(h - dst.spacing()[k]) > 1e-12 * h) return std::nullopt;
    const double shift = (src_origin[k] - dst_origin[k]) / h;
    const double rounded = std::round(shift);
    if (std::abs(shift - rounded) > 1e-9 || rounded < 0) return std::nullopt;
    offset[k] = static_cast<std::int64_t>(rounded);
  }

  State out = State::zeros(target, s.m());
  for (std::size_t i = 0; i < src.interior_count(); ++i) {
    auto idx = src.box_multi_index(src.box_of_interior(i));
    for (int k = 0; k < src.dim(); ++k) {
      idx[k] = static_cast<std::uint32_t>(idx[k] + offset[k]);
      if (idx[k] >= dst.nodes()[k]) return std::nullopt;
    }
    const auto j = dst.interior_of_box(dst.box_linear_index(idx));
    if (j < 0) {
      if (s.u[i] != 0.0) return std::nullopt;
      continue;
    }
    out.u[static_cast<std::size_t>(j)] = s.u[i];
    for (int c = 0; c < s.m(); ++c) out.v[c][static_cast<std::size_t>(j)] = s.v[c][i];
  }
  return out;
}

WholeSpaceReport solve_whole_space(const ModelSpec& model, int nodes_per_axis, const SolverConfig& cfg) {
  if (!cfg.box_doubling) throw Error(ErrorCode::InvalidArgument, "whole-space solve requires box doubling to be enabled");
  WholeSpaceReport out;
  ModelSpec stage_model = model;
  int nodes = nodes_per_axis;
  std::optional<State> warm;

  for (int stage = 0; stage <= cfg.max_doublings; ++stage) {
    const DiscreteModel mdl = discretize(stage_model, nodes);
    std::optional<State> init;
    if (warm) init = embed_state(*warm, mdl.grid());
    GroundStateReport rep = solve_ground_state(mdl, cfg, init);
    out.stages.push_back({stage_model.domain.extents[0], rep.c, rep.iterations, rep.converged});
    warm = rep.state;
    out.report = std::move(rep);

    if (stage > 0) {
      const double prev = out.stages[stage - 1].c;
      if (std::abs(prev - out.stages[stage].c) <= cfg.box_tol * std::abs(prev)) {
        out.settled = true;
        return out;
      }
    }
    stage_model.domain = stage_model.domain.scaled(2.0);
    nodes = 2 * nodes - 1;
  }
  throw Error(ErrorCode::NoBoxConvergence, "ground energy did not settle under repeated domain doubling");
}

CMapResult c_map(const ModelSpec& model_template, int nodes_per_axis, const std::vector<Point>& samples,
                 const SolverConfig& cfg, std::size_t threads) {
  SolverConfig local = cfg;
  local.box_doubling = true;
  CMapResult out;
  out.entries.resize(samples.size());
  parallel_for(samples.size(), threads ? threads : default_threads(), [&](std::size_t i) {
    CMapEntry& e = out.entries[i];
    e.point = samples[i];
    try {
      e.lambda1 = model_template.v1.value_at(samples[i]);
      e.lambda2 = model_template.v2.value_at(samples[i]);
      ModelSpec m = model_template;
      m.epsilon = 1.0;
      m.v1 = PotentialSpec::constant(e.lambda1);
      m.v2 = PotentialSpec::constant(e.lambda2);
      const auto ws = solve_whole_space(m, nodes_per_axis, local);
      e.c = ws.report.c;
      e.ok = ws.report.converged;
      if (!e.ok) e.error = "solver did not converge";
    } catch (const std::exception& ex) {
      e.ok = false;
      e.error = ex.what();
    }
  });

  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    const auto& e = out.entries[i];
    if (!e.ok) continue;
    if (out.argmin < 0) {
      out.argmin = static_cast<long>(i);
      continue;
    }
    const auto& best = out.entries[static_cast<std::size_t>(out.argmin)];
    if (e.c < best.c || (e.c == best.c && e.point < best.point)) out.argmin = static_cast<long>(i);
  }
  return out;
}

}  // namespace sbs
