#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <random>

#include "sbs/error.hpp"
#include "sbs/harness.hpp"

namespace sbs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Checks {
  std::vector<Check> list;

  void add(const std::string& name, double measured, const std::string& relation, double threshold) {
    bool pass = false;
    if (relation == "<=") pass = measured <= threshold;
    else if (relation == ">=") pass = measured >= threshold;
    else if (relation == "<") pass = measured < threshold;
    else if (relation == ">") pass = measured > threshold;
    else if (relation == "==") pass = measured == threshold;
    list.push_back({name, measured, threshold, relation, pass});
  }
  void flag(const std::string& name, bool ok) { add(name, ok ? 1.0 : 0.0, "==", 1.0); }
};

SolverConfig suite_solver(const SuiteOptions& opts) {
  SolverConfig s;
  if (opts.overrides) apply_solver_overrides(s, *opts.overrides);
  return s;
}

RunConfig constant_run(const DomainSpec& domain, int nodes, double eps, double beta, double mu1, double mu2,
                       double lambda, const SuiteOptions& opts) {
  RunConfig cfg;
  cfg.domain = domain;
  cfg.nodes_per_axis = nodes;
  cfg.epsilon = eps;
  cfg.beta = beta;
  cfg.mu1 = mu1;
  cfg.mu2 = mu2;
  cfg.v1.lambda = lambda;
  cfg.v2.lambda = lambda;
  cfg.solver = suite_solver(opts);
  return cfg;
}

// Solves shared between suites (decay reuses the domain-concentration run).
RunOutcome cached_solve(const RunConfig& cfg) {
  static std::mutex mu;
  static std::map<std::string, RunOutcome> cache;
  const std::string key = serialize_config(cfg);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  RunOutcome out = run_solve(cfg);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, out);
  return out;
}

std::string tag(const std::string& base, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%g", base.c_str(), value);
  return buf;
}

// Convergence, co-location and peak uniqueness of one acceptance run.
void run_checks(Checks& c, const std::string& label, const RunOutcome& out) {
  c.flag("converged_" + label, out.status == RunStatus::Converged);
  if (!out.peaks) {
    c.add("colocation_" + label, kNaN, "<=", 2.0 * out.spacing);
    return;
  }
  c.add("colocation_" + label, out.peaks->separation, "<=", 2.0 * out.spacing);
  c.add("local_max_u_" + label, out.peaks->u.local_max_count, "==", 1.0);
  for (std::size_t j = 0; j < out.peaks->v.size(); ++j)
    c.add("local_max_v" + std::to_string(j + 1) + "_" + label, out.peaks->v[j].local_max_count, "==", 1.0);
}

double sup_distance(const ScalarField& a, const ScalarField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// ---- oracle ----

void suite_oracle(Checks& c, const SuiteOptions& opts) {
  const double exact = 8.0 / 3.0;
  Timer t;
  const RunConfig cfg = constant_run(DomainSpec::box(1, 20.0), 801, 1.0, 1.0, 0.0, 0.0, 1.0, opts);
  const RunOutcome out = cached_solve(cfg);
  const double solve_seconds = t.seconds();
  run_checks(c, "oracle", out);
  if (out.report && out.peaks) {
    const auto& s = out.report->state;
    const double p = out.peaks->u.refined[0];
    const double q = out.peaks->v[0].refined[0];
    double eu = 0.0, ev = 0.0;
    const auto& g = *s.grid();
    for (std::size_t i = 0; i < g.interior_count(); ++i) {
      const double x = g.point(i)[0];
      eu = std::max(eu, std::abs(s.u[i] - std::sqrt(2.0) / std::cosh(x - p)));
      ev = std::max(ev, std::abs(s.v[0][i] - std::sqrt(2.0) / std::cosh(x - q)));
    }
    c.add("c_rel_error", std::abs(out.report->c - exact) / exact, "<=", 1e-3);
    c.add("profile_sup_u", eu, "<=", 1e-3);
    c.add("profile_sup_v", ev, "<=", 1e-3);
  } else {
    c.add("c_rel_error", kNaN, "<=", 1e-3);
  }
  c.add("runtime_oracle_s", solve_seconds, "<", 10.0);

  // Domain exhaustion from a small box, same spacing h = 0.05.
  RunConfig grow = constant_run(DomainSpec::box(1, 2.5), 101, 1.0, 1.0, 0.0, 0.0, 1.0, opts);
  grow.solver.box_doubling = true;
  const RunOutcome ws = run_solve(grow);
  run_checks(c, "box_doubling", ws);
  double worst_increase = kNaN, settle = kNaN;
  if (ws.stages.size() >= 2) {
    worst_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < ws.stages.size(); ++k)
      worst_increase = std::max(worst_increase, (ws.stages[k].c - ws.stages[k - 1].c) / ws.stages[k - 1].c);
    const double last = ws.stages.back().c, prev = ws.stages[ws.stages.size() - 2].c;
    settle = std::abs(last - prev) / last;
  }
  c.add("box_stages", static_cast<double>(ws.stages.size()), ">=", 2.0);
  c.add("box_c_increase_rel", worst_increase, "<=", 1e-12);
  c.add("box_settle_rel", settle, "<=", 1e-6);
  c.add("box_c_rel_error", ws.report ? std::abs(ws.report->c - exact) / exact : kNaN, "<=", 1e-3);
}

// ---- threshold ----

void suite_threshold(Checks& c, const SuiteOptions& opts) {
  Timer t;
  RunConfig cfg = constant_run(DomainSpec::box(1, 15.0), 301, 1.0, 1.0, -1.0, -1.0, 1.0, opts);
  cfg.solver.allow_subcritical = true;
  cfg.sweep.axes.push_back({"beta", {0.5, 0.9, 0.99, 1.01, 1.1, 2.0}});
  const auto cells = run_sweep(cfg, opts.threads);
  const double threshold = std::sqrt(cfg.mu1 * cfg.mu2);
  for (const auto& cell : cells) {
    const double beta = cell.values[0];
    const std::string label = tag("beta", beta);
    if (beta < threshold) {
      c.flag("collapsed_" + label, cell.outcome.status == RunStatus::Collapsed);
    } else {
      run_checks(c, label, cell.outcome);
      c.add("c_" + label, cell.outcome.report ? cell.outcome.report->c : kNaN, ">", 0.0);
    }
  }
  c.add("runtime_s", t.seconds(), "<", 60.0);
}

// ---- nehari-props ----

ModelSpec random_spec(std::mt19937_64& rng, bool supercritical) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ModelSpec spec;
  const int dim = unit(rng) < 0.5 ? 1 : 2;
  spec.domain = DomainSpec::box(dim, 2.0 + 4.0 * unit(rng));
  spec.epsilon = 0.5 + 1.5 * unit(rng);
  spec.mu1 = -unit(rng);
  spec.mu2 = -unit(rng);
  const double thr = std::sqrt(spec.mu1 * spec.mu2);
  if (supercritical) {
    spec.m = 1 + static_cast<int>(3.0 * unit(rng));
    spec.beta = thr + 0.1 + 3.0 * unit(rng);
  } else {
    // The quartic sign bound below the threshold is for a single v component.
    spec.m = 1;
    const double r = unit(rng);
    spec.beta = r < 0.2 ? thr : thr - (1.0 + thr) * r;
  }
  if (unit(rng) < 0.5) {
    spec.v1 = PotentialSpec::constant(0.5 + 1.5 * unit(rng));
    spec.v2 = PotentialSpec::constant(0.5 + 1.5 * unit(rng));
  } else {
    spec.v1 = PotentialSpec::harmonic({unit(rng), unit(rng), 0.0}, {0.3, -0.2, 0.0}, 0.5 + unit(rng));
    spec.v2 = PotentialSpec::harmonic({unit(rng), unit(rng), 0.0}, {-0.3, 0.1, 0.0}, 0.5 + unit(rng));
  }
  return spec;
}

State random_state(const DiscreteModel& mdl, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  State s = State::zeros(mdl.grid(), mdl.spec().m);
  for (auto& x : s.u.values()) x = unit(rng);
  for (auto& v : s.v)
    for (auto& x : v.values()) x = unit(rng);
  return s;
}

void suite_nehari(Checks& c, const SuiteOptions& opts) {
  std::mt19937_64 rng(suite_solver(opts).seed + 0x5eed);
  Timer t;
  double gap = 0.0, energy_dev = 0.0, hom_a = 0.0, hom_b = 0.0, t0_dev = 0.0;
  int scan_failures = 0, accepted = 0, attempts = 0;
  const std::vector<double> scan{0.25, 0.5, 0.75, 0.9, 0.99, 1.01, 1.1, 1.25, 1.5, 2.0};
  while (accepted < 100 && attempts < 1000) {
    ++attempts;
    const ModelSpec spec = random_spec(rng, true);
    const DiscreteModel mdl = discretize(spec, spec.domain.dim == 1 ? 64 : 24);
    const State s = random_state(mdl, rng);
    const FormsReport f = energy(s, mdl);
    if (!(f.B > 0.0)) continue;
    ++accepted;

    const auto [p, t0] = nehari_project(s, mdl);
    const FormsReport fp = energy(p, mdl);
    gap = std::max(gap, std::abs(fp.G) / fp.A);
    energy_dev = std::max(energy_dev, std::abs(fp.E - fp.A / 4.0) / (fp.A / 4.0));
    t0_dev = std::max(t0_dev, std::abs(nehari_project(p, mdl).second - 1.0));
    for (double tt : scan)
      if (!(energy(p.scaled(tt), mdl).E < fp.E)) ++scan_failures;

    const FormsReport f3 = energy(s.scaled(3.0), mdl);
    hom_a = std::max(hom_a, std::abs(f3.A - 9.0 * f.A) / (9.0 * f.A));
    hom_b = std::max(hom_b, std::abs(f3.B - 81.0 * f.B) / (81.0 * f.B));
  }
  c.add("states_with_positive_B", accepted, "==", 100.0);
  c.add("nehari_gap_over_A", gap, "<=", 1e-10);
  c.add("energy_minus_A_over_4_rel", energy_dev, "<=", 1e-10);
  c.add("reprojection_t0_dev", t0_dev, "<=", 1e-10);
  c.add("tscan_failures", scan_failures, "==", 0.0);
  c.add("homogeneity_A_rel", hom_a, "<=", 1e-12);
  c.add("homogeneity_B_rel", hom_b, "<=", 1e-12);

  int positive = 0;
  for (int k = 0; k < 100; ++k) {
    const ModelSpec spec = random_spec(rng, false);
    const DiscreteModel mdl = discretize(spec, spec.domain.dim == 1 ? 64 : 24);
    if (quartic_form(random_state(mdl, rng), mdl) > 0.0) ++positive;
  }
  c.add("subcritical_positive_B", positive, "==", 0.0);
  c.add("runtime_props_s", t.seconds(), "<", 30.0);

  // Variational derivative against centered differences of E.
  Timer tg;
  ModelSpec spec;
  spec.domain = DomainSpec::box(1, 5.0);
  spec.epsilon = 0.8;
  spec.beta = 2.0;
  spec.mu1 = -0.5;
  spec.mu2 = -0.3;
  spec.m = 2;
  spec.v1 = PotentialSpec::harmonic({0.5, 0.0, 0.0}, {0.4, 0.0, 0.0}, 1.0);
  spec.v2 = PotentialSpec::constant(1.3);
  const DiscreteModel mdl = discretize(spec, 64);
  const auto& g = *mdl.grid();
  State s = State::zeros(mdl.grid(), spec.m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < g.interior_count(); ++i) {
    const double x = g.point(i)[0];
    s.u[i] = std::exp(-x * x / 4.0) * (0.8 + 0.4 * unit(rng));
    for (auto& v : s.v) v[i] = std::exp(-(x - 0.5) * (x - 0.5) / 3.0) * (0.8 + 0.4 * unit(rng));
  }
  const Residual r = euler_lagrange_residual(s, mdl);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double step = 1e-5;
  double worst = 0.0;
  for (int d = 0; d < 20; ++d) {
    State dir = State::zeros(mdl.grid(), spec.m);
    for (auto& x : dir.u.values()) x = normal(rng);
    for (auto& v : dir.v)
      for (auto& x : v.values()) x = normal(rng);
    double analytic = -integrate_product(g, r.ru, dir.u);
    for (int j = 0; j < spec.m; ++j) analytic -= integrate_product(g, r.rv[j], dir.v[j]);
    State plus = s, minus = s;
    for (std::size_t i = 0; i < g.interior_count(); ++i) {
      plus.u[i] += step * dir.u[i];
      minus.u[i] -= step * dir.u[i];
      for (int j = 0; j < spec.m; ++j) {
        plus.v[j][i] += step * dir.v[j][i];
        minus.v[j][i] -= step * dir.v[j][i];
      }
    }
    const double fd = (energy(plus, mdl).E - energy(minus, mdl).E) / (2.0 * step);
    worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
  }
  c.add("gradient_fd_rel_error", worst, "<=", 1e-6);
  c.add("runtime_gradient_s", tg.seconds(), "<", 10.0);
}

// ---- symmetry ----

void suite_symmetry(Checks& c, const SuiteOptions& opts) {
  Timer t;
  const RunConfig cfg = constant_run(DomainSpec::ball(2, 12.0), 161, 1.0, 2.0, -0.5, -0.5, 1.0, opts);
  const RunOutcome out = cached_solve(cfg);
  run_checks(c, "ball", out);
  if (out.report && out.peaks) {
    const auto& s = out.report->state;
    const RadialReport ru = radial_diagnostics(s.u, out.peaks->u.refined);
    const RadialReport rv = radial_diagnostics(s.v[0], out.peaks->v[0].refined);
    c.add("anisotropy_u", ru.anisotropy, "<=", 0.01);
    c.add("anisotropy_v", rv.anisotropy, "<=", 0.01);
    c.add("monotone_violations_u", ru.violation_count, "<=", 1.0);
    c.add("monotone_violations_v", rv.violation_count, "<=", 1.0);
  } else {
    c.add("anisotropy_u", kNaN, "<=", 0.01);
  }
  c.add("runtime_ball_s", t.seconds(), "<", 120.0);

  // m = 2 with identical v initializers, against the single-component system
  // for w = sqrt(2) v with self-coupling mu2 / 2.
  Timer t2;
  RunConfig two = constant_run(DomainSpec::box(1, 20.0), 801, 1.0, 2.0, -0.5, -0.5, 1.0, opts);
  two.m = 2;
  const RunOutcome o2 = cached_solve(two);
  run_checks(c, "m2", o2);
  RunConfig one = two;
  one.m = 1;
  one.mu2 = two.mu2 / 2.0;
  const RunOutcome o1 = cached_solve(one);
  run_checks(c, "m1_effective", o1);
  if (o2.report && o1.report) {
    const auto& s2 = o2.report->state;
    c.add("v1_minus_v2_sup", sup_distance(s2.v[0], s2.v[1]), "<=", 1e-8);
    State mapped = State::zeros(s2.grid(), 1);
    mapped.u = s2.u;
    mapped.v[0] = s2.v[0];
    mapped.v[0] *= std::sqrt(2.0);
    const DiscreteModel mdl1 = discretize(model_spec(one), one.nodes_per_axis);
    const double e_mapped = energy(mapped, mdl1).E;
    c.add("mapped_energy_rel", std::abs(e_mapped - o2.report->c) / o2.report->c, "<=", 1e-12);
    c.add("c_m2_vs_m1_rel", std::abs(o1.report->c - o2.report->c) / o2.report->c, "<=", 1e-6);
  } else {
    c.add("v1_minus_v2_sup", kNaN, "<=", 1e-8);
  }
  c.add("runtime_m2_s", t2.seconds(), "<", 120.0);
}

// ---- scaling ----

void suite_scaling(Checks& c, const SuiteOptions& opts) {
  Timer t;
  const SolverConfig sc = suite_solver(opts);
  for (int dim : {1, 2}) {
    ModelSpec spec;
    spec.beta = 1.0;
    spec.mu1 = spec.mu2 = 0.0;
    spec.domain = dim == 1 ? DomainSpec::box(1, 20.0) : DomainSpec::box(2, 6.0);
    const double h_over_eps = dim == 1 ? 0.05 : 0.125;
    const ScalingTable table = scaling_table(spec, {1.0, 0.5, 0.25}, h_over_eps, sc, opts.threads);
    const std::string d = std::to_string(dim) + "d";
    for (const auto& row : table.rows) {
      const std::string label = d + "_" + tag("eps", row.epsilon);
      c.flag("converged_" + label, row.converged);
      c.add("colocation_" + label, row.separation, "<=", 2.0 * row.spacing);
    }
    c.add("spread_c_over_eps^N_" + d, table.spread, "<=", 0.02);
    if (dim == 1) {
      double worst = 0.0;
      for (const auto& row : table.rows) worst = std::max(worst, std::abs(row.c_scaled - 8.0 / 3.0) / (8.0 / 3.0));
      c.add("c_over_eps_vs_8/3_1d", worst, "<=", 1e-3);
    }
  }
  c.add("runtime_s", t.seconds(), "<", 300.0);
}

// ---- concentration-trap ----

RunConfig trap_run(double eps, const SuiteOptions& opts) {
  const int nodes = static_cast<int>(std::lround(6.0 / (eps / 20.0))) + 1;
  RunConfig cfg = constant_run(DomainSpec::box(1, 3.0), nodes, eps, 2.0, -0.2, -0.2, 1.0, opts);
  cfg.v1 = {PotentialSpec::Kind::Harmonic, 1.0, {1.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, ""};
  cfg.v2 = {PotentialSpec::Kind::Harmonic, 1.0, {1.0, 0.0, 0.0}, {-0.5, 0.0, 0.0}, ""};
  return cfg;
}

void suite_trap(Checks& c, const SuiteOptions& opts) {
  Timer t;
  std::vector<Point> samples;
  for (int k = 0; k <= 20; ++k) samples.push_back({-1.0 + 0.1 * k, 0.0, 0.0});
  const double spacing = 0.1;

  ModelSpec tmpl = model_spec(trap_run(1.0, opts));
  tmpl.domain = DomainSpec::box(1, 8.0);
  const SolverConfig sc = suite_solver(opts);
  const CMapResult map = c_map(tmpl, 321, samples, sc, opts.threads);
  int map_ok = 0;
  for (const auto& e : map.entries) map_ok += e.ok ? 1 : 0;
  c.add("c_map_points_ok", map_ok, "==", static_cast<double>(samples.size()));
  const double x_star = map.argmin >= 0 ? map.entries[static_cast<std::size_t>(map.argmin)].point[0] : kNaN;

  ModelSpec flat = tmpl;
  flat.v1 = PotentialSpec::constant(1.25);
  flat.v2 = PotentialSpec::constant(1.25);
  const CMapResult fmap = c_map(flat, 321, samples, sc, opts.threads);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& e : fmap.entries) {
    lo = std::min(lo, e.ok ? e.c : kNaN);
    hi = std::max(hi, e.ok ? e.c : kNaN);
  }
  c.add("c_map_constant_flatness", lo > 0.0 ? (hi - lo) / lo : kNaN, "<=", 1e-8);

  std::vector<double> peaks;
  for (double eps : {0.2, 0.1}) {
    const RunOutcome out = cached_solve(trap_run(eps, opts));
    const std::string label = tag("eps", eps);
    run_checks(c, label, out);
    const double p = out.peaks ? out.peaks->u.refined[0] : kNaN;
    peaks.push_back(p);
    c.add("peak_vs_c_map_argmin_" + label, std::abs(p - x_star), "<=", 2.0 * spacing);
    c.add("boundary_distance_over_eps_" + label, out.peaks ? out.peaks->boundary_distance_u / eps : kNaN, ">=", 5.0);
  }
  c.add("peak_stabilization", std::abs(peaks[1] - peaks[0]), "<=", 2.0 * spacing);
  c.add("runtime_s", t.seconds(), "<", 600.0);
}

// ---- concentration-domain and decay ----

RunConfig square_run(double eps, const SuiteOptions& opts) {
  const int nodes = static_cast<int>(std::lround(1.0 / (eps / 6.0))) + 1;
  return constant_run(DomainSpec::box(2, 0.5, {0.5, 0.5, 0.0}), nodes, eps, 2.0, -0.5, -0.5, 1.0, opts);
}

void suite_domain(Checks& c, const SuiteOptions& opts) {
  Timer t;
  const Point center{0.5, 0.5, 0.0};
  for (double eps : {0.1, 0.05}) {
    const RunOutcome out = cached_solve(square_run(eps, opts));
    const std::string label = tag("eps", eps);
    run_checks(c, label, out);
    c.add("peak_to_center_" + label, out.peaks ? distance(out.peaks->u.refined, center) : kNaN, "<=", 4.0 * eps);
    c.add("incenter_distance_rel_" + label, out.peaks ? std::abs(out.peaks->boundary_distance_u - 0.5) / 0.5 : kNaN,
          "<=", 0.1);
  }
  c.add("runtime_s", t.seconds(), "<", 600.0);
}

void suite_decay(Checks& c, const SuiteOptions& opts) {
  const double eps = 0.05;
  const RunOutcome out = cached_solve(square_run(eps, opts));
  run_checks(c, tag("eps", eps), out);
  if (out.report && out.peaks) {
    const auto& r = *out.report;
    const DecayFit fu = decay_fit(r.state.u, out.peaks->u.refined, r.model, 1.0);
    const DecayFit fv = decay_fit(r.state.v[0], out.peaks->v[0].refined, r.model, 1.0);
    c.add("kappa_eps_over_sqrt_lambda_u", fu.kappa * eps, ">=", 0.95);
    c.add("kappa_eps_over_sqrt_lambda_v", fv.kappa * eps, ">=", 0.95);
  } else {
    c.add("kappa_eps_over_sqrt_lambda_u", kNaN, ">=", 0.95);
  }

  // Synthetic self-test: exact exponentials in one and two dimensions.
  for (int dim : {1, 2}) {
    ModelSpec m;
    m.domain = DomainSpec::box(dim, dim == 1 ? 20.0 : 10.0);
    const DiscreteModel mdl = discretize(m, dim == 1 ? 801 : 201);
    const Point origin{0.0, 0.0, 0.0};
    const auto f = ScalarField::from_function(mdl.grid(), [&](const Point& x) { return std::exp(-2.0 * distance(x, origin)); });
    const DecayFit fit = decay_fit(f, origin, m, 4.0);
    c.add("synthetic_rate_error_" + std::to_string(dim) + "d", std::abs(fit.kappa - 2.0), "<=", 1e-3);
    const auto slow = ScalarField::from_function(mdl.grid(), [&](const Point& x) { return std::exp(-0.5 * distance(x, origin)); });
    c.flag("synthetic_slow_decay_rejected_" + std::to_string(dim) + "d", !decay_fit(slow, origin, m, 1.0).passes);
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"oracle",  "threshold",          "symmetry",             "scaling",
                                              "concentration-trap", "concentration-domain", "decay", "nehari-props"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
  Timer t;
  Checks c;
  if (name == "oracle") suite_oracle(c, opts);
  else if (name == "threshold") suite_threshold(c, opts);
  else if (name == "symmetry") suite_symmetry(c, opts);
  else if (name == "scaling") suite_scaling(c, opts);
  else if (name == "concentration-trap") suite_trap(c, opts);
  else if (name == "concentration-domain") suite_domain(c, opts);
  else if (name == "decay") suite_decay(c, opts);
  else if (name == "nehari-props") suite_nehari(c, opts);
  else throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");

  SuiteResult r;
  r.name = name;
  r.checks = std::move(c.list);
  r.pass = !r.checks.empty() && std::all_of(r.checks.begin(), r.checks.end(), [](const Check& k) { return k.pass; });
  r.seconds = t.seconds();
  return r;
}

std::string suite_csv(const SuiteResult& r) {
  std::string out = csv_line({"suite", "check", "measured", "relation", "threshold", "pass"});
  for (const auto& k : r.checks)
    out += csv_line({r.name, k.name, format_double(k.measured), k.relation, format_double(k.threshold), k.pass ? "1" : "0"});
  return out;
}

std::string suite_table(const SuiteResult& r) {
  std::size_t width = 5;
  for (const auto& k : r.checks) width = std::max(width, k.name.size());
  std::string out;
  char buf[512];
  for (const auto& k : r.checks) {
    std::snprintf(buf, sizeof buf, "%-4s  %-*s  %14.6g %-2s %-10.4g\n", k.pass ? "ok" : "FAIL", static_cast<int>(width),
                  k.name.c_str(), k.measured, k.relation.c_str(), k.threshold);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "suite %s: %s (%.2f s)\n", r.name.c_str(), r.pass ? "pass" : "FAIL", r.seconds);
  out += buf;
  return out;
}

}  // namespace sbs
