#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "sbs/sbs.h"

namespace {

struct Config {
  sbs_config* p = nullptr;
  ~Config() { sbs_config_free(p); }
};

struct Result {
  sbs_result* p = nullptr;
  ~Result() { sbs_result_free(p); }
};

std::string serialize(const sbs_config* c) {
  size_t needed = 0;
  REQUIRE(sbs_config_serialize(c, nullptr, 0, &needed) == SBS_OK);
  std::vector<char> buf(needed);
  REQUIRE(sbs_config_serialize(c, buf.data(), buf.size(), nullptr) == SBS_OK);
  return buf.data();
}

}  // namespace

TEST_CASE("config lifecycle through the C API") {
  Config c;
  REQUIRE(sbs_config_parse("model.beta = 1\n# note\ngrid.nodes = 401\n", &c.p) == SBS_OK);
  CHECK(sbs_config_set(c.p, "model.epsilon", "0.5") == SBS_OK);
  CHECK(sbs_config_set(c.p, "model.nope", "1") == SBS_ERR_CONFIG);
  CHECK(std::string(sbs_last_error()).find("nope") != std::string::npos);

  const std::string text = serialize(c.p);
  CHECK(text.find("model.epsilon = 0.5\n") != std::string::npos);
  Config back;
  REQUIRE(sbs_config_parse(text.c_str(), &back.p) == SBS_OK);
  CHECK(serialize(back.p) == text);

  char small[8];
  size_t needed = 0;
  CHECK(sbs_config_serialize(c.p, small, sizeof small, &needed) == SBS_OK);
  CHECK(needed == text.size() + 1);
  CHECK(std::string(small) == text.substr(0, 7));
}

TEST_CASE("config errors") {
  sbs_config* c = nullptr;
  CHECK(sbs_config_parse("model.beta = 1\nmodel.beta = 2\n", &c) == SBS_ERR_CONFIG);
  CHECK(c == nullptr);
  CHECK(std::string(sbs_last_error()).find("line 2") != std::string::npos);
  CHECK(sbs_config_load("/nonexistent/sbs.cfg", &c) != SBS_OK);
  CHECK(sbs_config_parse(nullptr, &c) == SBS_ERR_INVALID_ARGUMENT);
  CHECK(std::string(sbs_status_name(SBS_ERR_NOT_PROJECTABLE)) == "not projectable");
}

TEST_CASE("soliton solve through the C API") {
  Config c;
  REQUIRE(sbs_config_parse("model.beta = 1\n", &c.p) == SBS_OK);
  Result r;
  REQUIRE(sbs_solve(c.p, &r.p) == SBS_OK);
  CHECK(sbs_result_status(r.p) == SBS_RUN_CONVERGED);
  CHECK(sbs_result_exit_code(r.p) == 0);
  CHECK(sbs_result_has_state(r.p) == 1);
  CHECK(std::abs(sbs_result_energy(r.p) - 8.0 / 3.0) <= 1e-3 * 8.0 / 3.0);
  CHECK(sbs_result_residual(r.p) <= 1e-6);
  CHECK(sbs_result_iterations(r.p) > 0);
  CHECK(sbs_result_components(r.p) == 2);
  CHECK(sbs_result_spacing(r.p) == doctest::Approx(0.05));
  double p[3], value = 0.0;
  REQUIRE(sbs_result_peak(r.p, 0, p, &value) == SBS_OK);
  CHECK(std::abs(p[0]) <= 0.05);
  CHECK(value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK(sbs_result_peak(r.p, 2, p, nullptr) == SBS_ERR_INVALID_ARGUMENT);
  CHECK(sbs_result_separation(r.p) <= 0.1);
  CHECK(sbs_result_write(r.p, "capi_out") == SBS_OK);

  CHECK(sbs_render_pgm("capi_out/u.sbsf", "capi_out/u.pgm") == SBS_ERR_INVALID_ARGUMENT);
  CHECK(sbs_render_pgm("capi_out/missing.sbsf", "capi_out/u.pgm") == SBS_ERR_IO);
}

TEST_CASE("collapse is a result, not an error") {
  Config c;
  REQUIRE(sbs_config_parse("model.beta = 0\ngrid.nodes = 101\n", &c.p) == SBS_OK);
  Result r;
  REQUIRE(sbs_solve(c.p, &r.p) == SBS_OK);
  CHECK(sbs_result_status(r.p) == SBS_RUN_COLLAPSED);
  CHECK(sbs_result_exit_code(r.p) == 3);
  CHECK(sbs_result_has_state(r.p) == 0);
  CHECK(std::isnan(sbs_result_energy(r.p)));
  double p[3];
  CHECK(sbs_result_peak(r.p, 0, p, nullptr) == SBS_ERR_TRIVIAL_STATE);
}

TEST_CASE("unusable grids surface as errors") {
  Config c;
  REQUIRE(sbs_config_parse("grid.nodes = 3\n", &c.p) == SBS_OK);
  sbs_result* r = nullptr;
  CHECK(sbs_solve(c.p, &r) == SBS_ERR_INVALID_ARGUMENT);
  CHECK(r == nullptr);
}

TEST_CASE("sweep through the C API") {
  Config c;
  REQUIRE(sbs_config_parse("model.mu1 = -1\nmodel.mu2 = -1\ndomain.extent = 15\ngrid.nodes = 301\n"
                           "sweep.axis.beta = 0.5, 2\n",
                           &c.p) == SBS_OK);
  size_t cells = 0;
  REQUIRE(sbs_sweep(c.p, 1, "capi_sweep.csv", &cells) == SBS_OK);
  CHECK(cells == 2);
  FILE* f = std::fopen("capi_sweep.csv", "rb");
  REQUIRE(f);
  std::string text;
  char buf[4096];
  for (size_t n; (n = std::fread(buf, 1, sizeof buf, f)) > 0;) text.append(buf, n);
  std::fclose(f);
  CHECK(text.find("\n0,0.5,collapsed,") != std::string::npos);
  CHECK(text.find("\n1,2,converged,") != std::string::npos);

  CHECK(sbs_config_set(c.p, "sweep.cap", "1") == SBS_OK);
  CHECK(sbs_sweep(c.p, 1, "capi_sweep_capped.csv", &cells) == SBS_ERR_CONFIG);
}

TEST_CASE("suites through the C API") {
  CHECK(sbs_suite_name_count() == 8);
  CHECK(std::string(sbs_suite_name(0)) == "oracle");
  CHECK(sbs_suite_name(8) == nullptr);
  sbs_suite* s = nullptr;
  CHECK(sbs_suite_run("missing", nullptr, 1, &s) == SBS_ERR_INVALID_ARGUMENT);
  REQUIRE(sbs_suite_run("threshold", nullptr, 1, &s) == SBS_OK);
  CHECK(sbs_suite_pass(s) == 1);
  REQUIRE(sbs_suite_check_count(s) > 0);
  const char* name = nullptr;
  const char* rel = nullptr;
  double measured = 0.0, threshold = 0.0;
  int pass = 0;
  CHECK(sbs_suite_check(s, 0, &name, &measured, &rel, &threshold, &pass) == SBS_OK);
  CHECK(std::string(name) == "collapsed_beta=0.5");
  CHECK(pass == 1);
  CHECK(sbs_suite_check(s, 1000, &name, nullptr, nullptr, nullptr, nullptr) == SBS_ERR_INVALID_ARGUMENT);
  CHECK(std::string(sbs_suite_table(s)).find("suite threshold: pass") != std::string::npos);
  CHECK(sbs_suite_write_csv(s, "capi_suite.csv") == SBS_OK);
  sbs_suite_free(s);
}
