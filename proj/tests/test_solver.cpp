#include <cmath>
#include <random>

#include "doctest.h"
#include "sbs/error.hpp"
#include "sbs/solver.hpp"

using namespace sbs;

namespace {

constexpr double kSoliton = 8.0 / 3.0;

ModelSpec soliton_spec(double half_width = 20.0) {
  ModelSpec m;
  m.domain = DomainSpec::box(1, half_width);
  m.beta = 1.0;
  return m;
}

ModelSpec coupled_spec() {
  ModelSpec m;
  m.domain = DomainSpec::box(1, 12.0);
  m.beta = 2.0;
  m.mu1 = -0.5;
  m.mu2 = -0.5;
  return m;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol_energy = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.backtrack = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.max_iters = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("default initializer") {
  const SolverConfig cfg;
  const auto free = discretize(soliton_spec(), 201);
  CHECK(quartic_form(default_init(free, cfg), free) > 0.0);

  ModelSpec none = soliton_spec();
  none.beta = 0.0;
  CHECK(code_of([&] { default_init(discretize(none, 201), cfg); }) == ErrorCode::InitFailed);

  ModelSpec attractive = soliton_spec();
  attractive.mu1 = attractive.mu2 = -1.0;
  attractive.beta = 2.0;
  const auto mdl = discretize(attractive, 201);
  const State s = default_init(mdl, cfg);
  CHECK(quartic_form(s, mdl) > 0.0);
  CHECK(s.nonnegative());
}

TEST_CASE("initializer centers on the potential minimum") {
  ModelSpec m = soliton_spec(5.0);
  m.v1 = PotentialSpec::harmonic({1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, 1.0);
  m.v2 = PotentialSpec::harmonic({1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, 1.0);
  const auto mdl = discretize(m, 101);
  const State s = default_init(mdl, SolverConfig{});
  std::size_t best = 0;
  for (std::size_t i = 0; i < s.u.size(); ++i)
    if (s.u[i] > s.u[best]) best = i;
  CHECK(mdl.grid()->point(best)[0] == doctest::Approx(1.0));
}

TEST_CASE("soliton oracle") {
  const auto mdl = discretize(soliton_spec(), 801);
  const auto rep = solve_ground_state(mdl, SolverConfig{});
  REQUIRE(rep.converged);
  CHECK(rep.termination == Termination::Converged);
  CHECK(std::abs(rep.c - kSoliton) / kSoliton <= 1e-3);
  CHECK(std::abs(rep.c - rep.forms.A / 4.0) <= 1e-10 * rep.c);
  CHECK(std::abs(rep.forms.G) <= 1e-10 * rep.forms.A);
  CHECK(rep.residual_norm <= 1e-6);
  CHECK(rep.state.nonnegative());
  double sup = 0.0, uv = 0.0;
  for (std::size_t i = 0; i < rep.state.u.size(); ++i) {
    const double x = mdl.grid()->point(i)[0];
    sup = std::max(sup, std::abs(rep.state.u[i] - std::sqrt(2.0) / std::cosh(x)));
    uv = std::max(uv, std::abs(rep.state.u[i] - rep.state.v[0][i]));
  }
  CHECK(sup <= 1e-3);
  CHECK(uv <= 1e-6);
}

TEST_CASE("no coupling means no nontrivial state") {
  ModelSpec m = soliton_spec();
  m.beta = 0.0;
  const auto mdl = discretize(m, 201);
  CHECK(code_of([&] { solve_ground_state(mdl, SolverConfig{}); }) == ErrorCode::InitFailed);
  SolverConfig forced;
  forced.allow_subcritical = true;
  const auto c = code_of([&] { solve_ground_state(mdl, forced); });
  CHECK((c == ErrorCode::InitFailed || c == ErrorCode::NotProjectable));
}

TEST_CASE("subcritical solve is refused without override") {
  ModelSpec m = soliton_spec();
  m.mu1 = m.mu2 = -1.0;
  m.beta = 0.9;
  CHECK(code_of([&] { solve_ground_state(discretize(m, 201), SolverConfig{}); }) == ErrorCode::InitFailed);
}

TEST_CASE("merit is non-increasing along the history") {
  const auto mdl = discretize(coupled_spec(), 241);
  SolverConfig cfg;
  cfg.history_stride = 1;
  const auto rep = solve_ground_state(mdl, cfg);
  REQUIRE(rep.converged);
  REQUIRE(rep.history.size() > 2);
  for (std::size_t k = 1; k < rep.history.size(); ++k)
    CHECK(rep.history[k].energy <= rep.history[k - 1].energy + 1e-12 * std::abs(rep.history[k - 1].energy));
}

TEST_CASE("converged state is a local minimum of the quotient") {
  const auto mdl = discretize(coupled_spec(), 241);
  const auto rep = solve_ground_state(mdl, SolverConfig{});
  REQUIRE(rep.converged);
  const double j0 = quotient_objective(rep.state, mdl);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    State p = rep.state;
    for (auto& x : p.u.values()) x += 1e-3 * n(rng);
    for (auto& v : p.v)
      for (auto& x : v.values()) x += 1e-3 * n(rng);
    p.clamp_nonnegative();
    REQUIRE(quartic_form(p, mdl) > 0.0);
    const State q = nehari_project(p, mdl).first;
    CHECK(quotient_objective(q, mdl) >= j0 - 1e-8 * j0);
  }
}

TEST_CASE("larger potentials raise the ground energy") {
  ModelSpec m = coupled_spec();
  const double c1 = solve_ground_state(discretize(m, 241), SolverConfig{}).c;
  m.v1 = PotentialSpec::constant(2.0);
  m.v2 = PotentialSpec::constant(2.0);
  const double c2 = solve_ground_state(discretize(m, 241), SolverConfig{}).c;
  CHECK(c2 > c1);
}

TEST_CASE("solves are deterministic") {
  const auto mdl = discretize(coupled_spec(), 241);
  SolverConfig cfg;
  cfg.init = SolverConfig::Init::Random;
  cfg.seed = 42;
  const auto a = solve_ground_state(mdl, cfg);
  const auto b = solve_ground_state(mdl, cfg);
  CHECK(a.c == b.c);
  CHECK(a.iterations == b.iterations);
  for (std::size_t i = 0; i < a.state.u.size(); ++i) CHECK(a.state.u[i] == b.state.u[i]);
}

TEST_CASE("random initializer reaches the same energy") {
  const auto mdl = discretize(coupled_spec(), 241);
  SolverConfig cfg;
  const double c0 = solve_ground_state(mdl, cfg).c;
  cfg.init = SolverConfig::Init::Random;
  cfg.seed = 3;
  const auto r = solve_ground_state(mdl, cfg);
  CHECK(r.converged);
  CHECK(std::abs(r.c - c0) <= 1e-8 * c0);
}

TEST_CASE("iteration cap reports non-convergence") {
  SolverConfig cfg;
  cfg.max_iters = 5;
  const auto rep = solve_ground_state(discretize(soliton_spec(), 401), cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.termination == Termination::MaxIters);
  CHECK(rep.iterations == 5);
}

TEST_CASE("explicit initial state") {
  const auto mdl = discretize(soliton_spec(), 401);
  const auto wrong = discretize(soliton_spec(), 403);
  CHECK(code_of([&] { solve_ground_state(mdl, SolverConfig{}, State::zeros(wrong.grid(), 1)); }) ==
        ErrorCode::GridMismatch);
  const auto rep = solve_ground_state(mdl, SolverConfig{}, default_init(mdl, SolverConfig{}));
  CHECK(rep.converged);
}

TEST_CASE("embedding preserves the forms") {
  const auto small = discretize(coupled_spec(), 241);
  ModelSpec big_spec = coupled_spec();
  big_spec.domain = big_spec.domain.scaled(2.0);
  const auto big = discretize(big_spec, 481);
  const State s = default_init(small, SolverConfig{});
  const auto e = embed_state(s, big.grid());
  REQUIRE(e.has_value());
  CHECK(quotient_objective(*e, big) == quotient_objective(s, small));
  CHECK_FALSE(embed_state(s, discretize(big_spec, 480).grid()).has_value());
}

SolverConfig doubling() {
  SolverConfig cfg;
  cfg.box_doubling = true;
  return cfg;
}

TEST_CASE("whole-space solve needs doubling enabled") {
  CHECK(code_of([] { solve_whole_space(soliton_spec(1.5), 61, SolverConfig{}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("domain exhaustion on the soliton") {
  const SolverConfig cfg = doubling();
  const auto ws = solve_whole_space(soliton_spec(10.0), 401, cfg);
  CHECK(ws.settled);
  REQUIRE(ws.stages.size() >= 2);
  for (std::size_t k = 1; k < ws.stages.size(); ++k)
    CHECK(ws.stages[k].c <= ws.stages[k - 1].c * (1.0 + 1e-12));
  const double last = ws.stages.back().c, prev = ws.stages[ws.stages.size() - 2].c;
  CHECK(std::abs(last - prev) <= 1e-6 * last);
  CHECK(std::abs(last - kSoliton) / kSoliton <= 1e-3);
  CHECK(ws.report.model.domain.extents[0] == ws.stages.back().size);
}

TEST_CASE("harmonic trap settles after one doubling") {
  ModelSpec m = soliton_spec(5.0);
  m.v1 = PotentialSpec::harmonic({1.0, 0.0, 0.0}, {}, 1.0);
  m.v2 = PotentialSpec::harmonic({1.0, 0.0, 0.0}, {}, 1.0);
  const auto ws = solve_whole_space(m, 201, doubling());
  CHECK(ws.settled);
  CHECK(ws.stages.size() == 2);
}

TEST_CASE("box doubling gives up after the configured count") {
  SolverConfig cfg = doubling();
  cfg.max_doublings = 1;
  cfg.box_tol = 1e-15;
  CHECK(code_of([&] { solve_whole_space(soliton_spec(1.5), 61, cfg); }) == ErrorCode::NoBoxConvergence);
}

TEST_CASE("2D ball energy is stable under doubling the radius") {
  ModelSpec m;
  m.domain = DomainSpec::ball(2, 12.0);
  m.beta = 2.0;
  m.mu1 = m.mu2 = -0.5;
  const auto ws = solve_whole_space(m, 161, doubling());
  REQUIRE(ws.stages.size() >= 2);
  CHECK(ws.stages[0].converged);
  CHECK(std::abs(ws.stages[1].c - ws.stages[0].c) <= 1e-6 * ws.stages[0].c);
}

TEST_CASE("c_map over a harmonic trap and over constants") {
  ModelSpec m = soliton_spec(8.0);
  m.mu1 = m.mu2 = -0.2;
  m.beta = 2.0;
  m.v1 = PotentialSpec::harmonic({1.0, 0.0, 0.0}, {}, 1.0);
  m.v2 = PotentialSpec::harmonic({1.0, 0.0, 0.0}, {}, 1.0);
  std::vector<Point> samples;
  for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) samples.push_back({x, 0.0, 0.0});
  const auto map = c_map(m, 161, samples, SolverConfig{}, 2);
  REQUIRE(map.argmin == 2);
  for (const auto& e : map.entries) CHECK(e.ok);
  CHECK(map.entries[0].lambda1 == doctest::Approx(2.0));
  CHECK(map.entries[3].c > map.entries[2].c);

  m.v1 = PotentialSpec::constant(1.0);
  m.v2 = PotentialSpec::constant(1.0);
  const auto flat = c_map(m, 161, samples, SolverConfig{}, 2);
  for (const auto& e : flat.entries) CHECK(std::abs(e.c - flat.entries[0].c) <= 1e-8 * e.c);
  // Exact ties resolve to the lexicographically smallest sample.
  CHECK(flat.argmin == 0);
}
