#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sbs/error.hpp"
#include "sbs/grid.hpp"

using namespace sbs;

namespace {

ScalarField random_field(const GridPtr& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(g);
  for (auto& x : f.values()) x = d(rng);
  return f;
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

TEST_CASE("1D box spacing and interior count") {
  const auto g = build_grid(DomainSpec::box(1, 20.0), 801);
  CHECK(g->spacing()[0] == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(g->interior_count() == 799);
  CHECK(g->box_count() == 801);
  CHECK(g->point(0)[0] == doctest::Approx(-19.95));
}

TEST_CASE("2D ball interior matches direct enumeration") {
  // Nodes (k - 32, l - 32) / 32 strictly inside the unit disc.
  const auto g = build_grid(DomainSpec::ball(2, 1.0), 65);
  CHECK(g->interior_count() == 3205);
  for (std::size_t i = 0; i < g->interior_count(); ++i) {
    const Point p = g->point(i);
    CHECK(p[0] * p[0] + p[1] * p[1] < 1.0);
  }
}

TEST_CASE("minimal 3D grid") {
  const auto g = build_grid(DomainSpec::box(3, 1.0), 8);
  CHECK(g->interior_count() == 216);
  CHECK_THROWS_AS(build_grid(DomainSpec::box(3, 1.0), 7), Error);
}

TEST_CASE("invalid domains are rejected") {
  CHECK_THROWS_AS(build_grid(DomainSpec::box(4, 1.0), 16), Error);
  CHECK_THROWS_AS(build_grid(DomainSpec::box(1, -1.0), 16), Error);
  CHECK_THROWS_AS(build_grid(DomainSpec::ball(2, 0.0), 16), Error);
}

TEST_CASE("neighbors of a ball node outside the mask are -1") {
  const auto g = build_grid(DomainSpec::ball(2, 1.0), 17);
  bool saw_missing = false;
  for (std::size_t i = 0; i < g->interior_count(); ++i)
    for (auto n : g->neighbors(i)) saw_missing = saw_missing || n < 0;
  CHECK(saw_missing);
}

TEST_CASE("laplacian of zero is zero") {
  const auto g = build_grid(DomainSpec::box(2, 1.0), 16);
  const auto lap = laplacian_apply(*g, ScalarField(g));
  for (double x : lap.values()) CHECK(x == 0.0);
}

TEST_CASE("discrete sine is an exact eigenfield") {
  const double L = 4.0;
  const auto g = build_grid(DomainSpec::box(1, L / 2.0), 81);
  const double h = g->spacing()[0];
  const auto f = ScalarField::from_function(g, [&](const Point& x) { return std::cos(std::numbers::pi * x[0] / L); });
  const auto lap = laplacian_apply(*g, f);
  const double lambda = -(2.0 / (h * h)) * (1.0 - std::cos(std::numbers::pi * h / L));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(lap[i] == doctest::Approx(lambda * f[i]).epsilon(1e-10));
}

TEST_CASE("laplacian of a constant only sees the boundary layer") {
  const auto g = build_grid(DomainSpec::box(2, 1.0), 11);
  const double h = g->spacing()[0];
  ScalarField one(g);
  for (auto& x : one.values()) x = 1.0;
  const auto lap = laplacian_apply(*g, one);
  for (std::size_t i = 0; i < g->interior_count(); ++i) {
    int missing = 0;
    for (auto n : g->neighbors(i)) missing += n < 0 ? 1 : 0;
    CHECK(lap[i] == doctest::Approx(-missing / (h * h)));
  }
}

TEST_CASE("rectangle-rule integrals") {
  const auto g = build_grid(DomainSpec::box(1, 20.0), 801);
  ScalarField one(g);
  for (auto& x : one.values()) x = 1.0;
  CHECK(integrate(*g, one) == doctest::Approx(39.95).epsilon(1e-12));
  CHECK(integrate(*g, ScalarField(g)) == 0.0);
  // 2 tanh(x) antiderivative: total 4 on the line.
  const auto s2 = ScalarField::from_function(g, [](const Point& x) { return 2.0 / (std::cosh(x[0]) * std::cosh(x[0])); });
  CHECK(std::abs(integrate(*g, s2) - 4.0) <= 1e-6);
}

TEST_CASE("dirichlet form of the sech profile") {
  const auto g = build_grid(DomainSpec::box(1, 20.0), 801);
  CHECK(grad_norm_sq(*g, ScalarField(g)) == 0.0);
  const auto w = ScalarField::from_function(g, [](const Point& x) { return std::sqrt(2.0) / std::cosh(x[0]); });
  // Forward differences are second-order accurate at the midpoints: error ~ h^2/12 * int w''^2.
  CHECK(std::abs(grad_norm_sq(*g, w) - 4.0 / 3.0) <= 1e-3);
}

TEST_CASE("summation by parts and symmetry on random fields") {
  for (auto dom : {DomainSpec::box(1, 3.0), DomainSpec::box(2, 2.0), DomainSpec::ball(2, 1.5), DomainSpec::ball(3, 1.0)}) {
    const auto g = build_grid(dom, 17);
    const auto f = random_field(g, 1);
    const auto k = random_field(g, 2);
    const double a = grad_norm_sq(*g, f);
    const double b = -integrate(*g, product(f, laplacian_apply(*g, f)));
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    const double fk = integrate(*g, product(f, laplacian_apply(*g, k)));
    const double kf = integrate(*g, product(k, laplacian_apply(*g, f)));
    CHECK(std::abs(fk - kf) <= 1e-12 * (std::abs(fk) + 1.0));
  }
}

TEST_CASE("refinement convergence of the dirichlet form") {
  // Smooth compactly supported bump; errors against a very fine grid.
  auto bump = [](const Point& x) {
    const double r2 = x[0] * x[0];
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
  };
  auto value = [&](int nodes) {
    const auto g = build_grid(DomainSpec::box(1, 2.0), nodes);
    return grad_norm_sq(*g, ScalarField::from_function(g, bump));
  };
  const double ref = value(12801);
  const double e1 = std::abs(value(201) - ref);
  const double e2 = std::abs(value(401) - ref);
  CHECK(e1 / e2 > 3.5);
}

TEST_CASE("fields reject wrong length and non-finite values") {
  const auto g = build_grid(DomainSpec::box(1, 1.0), 10);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(3, 0.0)), Error);
  std::vector<double> bad(g->interior_count(), 0.0);
  bad[2] = std::nan("");
  CHECK_THROWS_AS(ScalarField(g, bad), Error);
}

TEST_CASE("grid mismatch is detected") {
  const auto a = build_grid(DomainSpec::box(1, 1.0), 10);
  const auto b = build_grid(DomainSpec::box(1, 1.0), 12);
  try {
    integrate(*a, ScalarField(b));
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("SBSF round trip and layout") {
  const auto g = build_grid(DomainSpec::ball(2, 1.0), 9);
  const auto f = ScalarField::from_function(g, [](const Point& x) { return 1.0 + x[0] + 2.0 * x[1]; });
  const auto bytes = encode_sbsf(to_image(f));
  CHECK(std::string(bytes.begin(), bytes.begin() + 5) == "SBSF1");
  CHECK(bytes[5] == 2);
  CHECK(bytes.size() == 5 + 1 + 12 + 24 + 81 * 8);
  // Node counts, little endian.
  CHECK(bytes[6] == 9);
  CHECK(bytes[10] == 9);
  CHECK(bytes[14] == 1);

  const FieldImage img = decode_sbsf(bytes);
  CHECK(img.dim == 2);
  CHECK(img.values.size() == 81);
  CHECK(img.values[0] == 0.0);  // corner is outside the disc
  const ScalarField back = from_image(g, img);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);
}

TEST_CASE("SBSF decoding rejects corrupt input") {
  const auto g = build_grid(DomainSpec::box(1, 1.0), 10);
  auto bytes = encode_sbsf(to_image(ScalarField(g)));
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_sbsf(truncated), Error);
  bytes[0] = 'X';
  CHECK_THROWS_AS(decode_sbsf(bytes), Error);
}
