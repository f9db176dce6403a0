#include <cmath>

#include "doctest.h"
#include "sbs/analysis.hpp"
#include "sbs/error.hpp"

using namespace sbs;

namespace {

ModelSpec line_spec(double half_width = 20.0) {
  ModelSpec m;
  m.domain = DomainSpec::box(1, half_width);
  m.beta = 1.0;
  return m;
}

State profile_pair(const DiscreteModel& mdl, double shift_v) {
  State s = State::zeros(mdl.grid(), 1);
  s.u = ScalarField::from_function(mdl.grid(), [](const Point& x) { return std::sqrt(2.0) / std::cosh(x[0]); });
  s.v[0] = ScalarField::from_function(mdl.grid(), [&](const Point& x) { return std::sqrt(2.0) / std::cosh(x[0] - shift_v); });
  return s;
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

TEST_CASE("peaks of the sech pair") {
  const auto mdl = discretize(line_spec(), 801);
  const auto p = find_peaks(profile_pair(mdl, 0.0), mdl.spec());
  const double h = mdl.grid()->spacing()[0];
  CHECK(std::abs(p.u.refined[0]) <= h);
  CHECK(std::abs(p.v[0].refined[0]) <= h);
  CHECK(p.colocation <= h);
  CHECK(p.u.local_max_count == 1);
  CHECK(p.u.value == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.boundary_distance_u == doctest::Approx(20.0).epsilon(1e-3));
}

TEST_CASE("shifted copies report their offset") {
  ModelSpec spec = line_spec();
  spec.epsilon = 0.5;
  const auto mdl = discretize(spec, 801);
  const auto p = find_peaks(profile_pair(mdl, 0.5), spec);
  const double h = mdl.grid()->spacing()[0];
  CHECK(std::abs(p.colocation - 0.5 / spec.epsilon) <= h / spec.epsilon);
  CHECK(p.separation == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("quadratic refinement locates an off-node maximum") {
  const auto mdl = discretize(line_spec(5.0), 101);
  const auto f = ScalarField::from_function(mdl.grid(), [](const Point& x) { return std::exp(-(x[0] - 0.037) * (x[0] - 0.037)); });
  const auto pk = find_component_peak(f);
  CHECK(pk.node[0] == doctest::Approx(0.0));
  CHECK(std::abs(pk.refined[0] - 0.037) < 2e-3);
}

TEST_CASE("two bumps count as two local maxima") {
  const auto mdl = discretize(line_spec(5.0), 201);
  const auto f = ScalarField::from_function(mdl.grid(), [](const Point& x) {
    return std::exp(-(x[0] - 2.0) * (x[0] - 2.0)) + 0.8 * std::exp(-(x[0] + 2.0) * (x[0] + 2.0));
  });
  CHECK(find_component_peak(f).local_max_count == 2);
}

TEST_CASE("ties break to the lexicographically first node") {
  const auto g = build_grid(DomainSpec::box(2, 1.0), 11);
  ScalarField f(g);
  for (auto& x : f.values()) x = 1.0;
  const auto pk = find_component_peak(f);
  CHECK(pk.node == g->point(0));
}

TEST_CASE("all-zero component is trivial") {
  const auto mdl = discretize(line_spec(5.0), 101);
  CHECK(code_of([&] { find_peaks(State::zeros(mdl.grid(), 1), mdl.spec()); }) == ErrorCode::TrivialState);
}

TEST_CASE("interpolation") {
  const auto g = build_grid(DomainSpec::box(2, 2.0), 41);
  const auto f = ScalarField::from_function(g, [](const Point& x) { return 1.0 + 2.0 * x[0] - x[1] + x[0] * x[1]; });
  // Bilinear functions are reproduced exactly.
  CHECK(interpolate(f, {0.33, -0.71, 0.0}) == doctest::Approx(1.0 + 0.66 + 0.71 - 0.33 * 0.71).epsilon(1e-12));
  CHECK(code_of([&] { interpolate(f, {3.0, 0.0, 0.0}); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("radial diagnostics on a radial field") {
  const auto g = build_grid(DomainSpec::ball(2, 4.0), 161);
  const auto f = ScalarField::from_function(g, [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); });
  const auto r = radial_diagnostics(f, {0.0, 0.0, 0.0});
  const double h = g->spacing()[0];
  // Bilinear error per point is at most h^2/8 * (|f_xx| + |f_yy|) <= h^2/2; a shell spread is twice that.
  CHECK(r.anisotropy <= h * h);
  CHECK(r.violation_count == 0);
  CHECK(r.monotone_violation == 0.0);
  CHECK(r.profile.front().mean == doctest::Approx(1.0));
}

TEST_CASE("radial diagnostics flag an outward-growing field") {
  const auto g = build_grid(DomainSpec::box(2, 2.0), 81);
  const auto f = ScalarField::from_function(g, [](const Point& x) { return 1.0 + (x[0] + 0.5) * (x[0] + 0.5) + x[1] * x[1]; });
  const auto r = radial_diagnostics(f, {0.0, 0.0, 0.0});
  CHECK(r.monotone_violation > 0.0);
  CHECK(r.violation_count > 0);
  CHECK(r.anisotropy > 0.1);
}

TEST_CASE("decay fit on exact exponentials") {
  const auto mdl = discretize(line_spec(), 801);
  const Point origin{};
  const auto fast = ScalarField::from_function(mdl.grid(), [](const Point& x) { return std::exp(-2.0 * std::abs(x[0])); });
  const auto fit = decay_fit(fast, origin, mdl.spec(), 1.0);
  CHECK(std::abs(fit.kappa - 2.0) <= 1e-3);
  CHECK(fit.passes);
  CHECK(fit.reference_rate == doctest::Approx(0.99));
  CHECK(fit.window_inner >= 3.0);
  CHECK(fit.window_outer <= 20.0 - 5.0 * 0.05 + 1e-12);

  const auto slow = ScalarField::from_function(mdl.grid(), [](const Point& x) { return std::exp(-0.5 * std::abs(x[0])); });
  CHECK_FALSE(decay_fit(slow, origin, mdl.spec(), 1.0).passes);
}

TEST_CASE("decay fit of the sech profile") {
  const auto mdl = discretize(line_spec(), 801);
  const auto s = profile_pair(mdl, 0.0);
  const auto fit = decay_fit(s.u, {}, mdl.spec(), 1.0);
  CHECK(fit.kappa >= 0.99);
  CHECK(fit.kappa <= 1.05);
}

TEST_CASE("decay window too small") {
  const auto mdl = discretize(line_spec(4.0), 41);
  const auto f = ScalarField::from_function(mdl.grid(), [](const Point& x) { return std::exp(-std::abs(x[0])); });
  CHECK(code_of([&] { decay_fit(f, {}, mdl.spec(), 1.0); }) == ErrorCode::WindowTooSmall);
}

TEST_CASE("rescaled profiles") {
  const auto mdl = discretize(line_spec(), 801);
  const auto s = profile_pair(mdl, 0.0);
  const ProfileGrid yg{1, 3.0, 61};
  const auto prof = rescale_profile(s.u, {}, 1.0, yg);
  REQUIRE(prof.values.size() == 61);
  for (std::size_t i = 0; i < prof.values.size(); ++i)
    CHECK(std::abs(prof.values[i] - std::sqrt(2.0) / std::cosh(prof.y[i][0])) <= 1e-3);

  ScalarField one(mdl.grid());
  for (auto& x : one.values()) x = 1.0;
  for (double v : rescale_profile(one, {}, 0.5, yg).values) CHECK(v == doctest::Approx(1.0));

  CHECK(code_of([&] { rescale_profile(one, {19.0, 0.0, 0.0}, 1.0, yg); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("trap profiles approach a limit shape") {
  ModelSpec m = line_spec(3.0);
  m.mu1 = m.mu2 = -0.2;
  m.beta = 2.0;
  m.v1 = PotentialSpec::harmonic({1.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, 1.0);
  m.v2 = PotentialSpec::harmonic({1.0, 0.0, 0.0}, {-0.5, 0.0, 0.0}, 1.0);
  std::vector<RescaledProfile> profiles;
  for (double eps : {0.2, 0.1}) {
    m.epsilon = eps;
    const auto rep = solve_ground_state(discretize(m, static_cast<int>(std::lround(6.0 / (eps / 20.0))) + 1), SolverConfig{});
    REQUIRE(rep.converged);
    const auto pk = find_peaks(rep.state, m);
    profiles.push_back(rescale_profile(rep.state.u, pk.u.refined, eps, ProfileGrid{1, 3.0, 61}));
  }
  double sup = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < profiles[0].values.size(); ++i) {
    sup = std::max(sup, std::abs(profiles[0].values[i] - profiles[1].values[i]));
    peak = std::max(peak, profiles[1].values[i]);
  }
  CHECK(sup <= 0.03 * peak);
}

TEST_CASE("scaling table") {
  ModelSpec m = line_spec();
  const auto single = scaling_table(m, {1.0}, 0.05, SolverConfig{});
  CHECK(single.spread == 0.0);
  CHECK(single.rows[0].nodes_per_axis == 801);

  const auto t = scaling_table(m, {1.0, 0.5, 0.25}, 0.05, SolverConfig{}, 2);
  CHECK(t.all_converged);
  CHECK(t.spread <= 0.02);
  for (const auto& r : t.rows) {
    CHECK(std::abs(r.c_scaled - 8.0 / 3.0) / (8.0 / 3.0) <= 1e-3);
    CHECK(r.separation <= 2.0 * r.spacing);
  }
  CHECK_THROWS_AS(scaling_table(m, {0.5, 1.0}, 0.05, SolverConfig{}), Error);
}
