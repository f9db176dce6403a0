// Command-line front end; talks to the solver only through the C API.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "sbs/sbs.h"

namespace {

int fail(sbs_status st, const char* what) {
  std::fprintf(stderr, "sbs: %s: %s (%s)\n", what, sbs_last_error(), sbs_status_name(st));
  return 1;
}

int cmd_solve(const std::string& path) {
  sbs_config* cfg = nullptr;
  if (sbs_status st = sbs_config_load(path.c_str(), &cfg); st != SBS_OK) return fail(st, "config");
  sbs_result* r = nullptr;
  sbs_status st = sbs_solve(cfg, &r);
  if (st != SBS_OK) {
    sbs_config_free(cfg);
    return fail(st, "solve");
  }
  const std::string dir = sbs_config_output_dir(cfg);
  sbs_config_free(cfg);
  st = sbs_result_write(r, dir.c_str());
  if (st != SBS_OK) {
    sbs_result_free(r);
    return fail(st, "write");
  }

  const int code = sbs_result_exit_code(r);
  if (sbs_result_status(r) == SBS_RUN_CONVERGED) {
    double p[3], q[3];
    sbs_result_peak(r, 0, p, nullptr);
    sbs_result_peak(r, 1, q, nullptr);
    std::printf("converged: c = %.12g, iterations %ld, residual %.3g\n", sbs_result_energy(r), sbs_result_iterations(r),
                sbs_result_residual(r));
    std::printf("peak u at (%.6g, %.6g, %.6g), v1 at (%.6g, %.6g, %.6g), |P-Q| = %.3g (h = %.3g)\n", p[0], p[1], p[2],
                q[0], q[1], q[2], sbs_result_separation(r), sbs_result_spacing(r));
  } else {
    std::printf("%s\n", sbs_result_message(r));
  }
  std::printf("wrote %s\n", (std::filesystem::path(dir) / "report.csv").string().c_str());
  sbs_result_free(r);
  return code;
}

int cmd_sweep(const std::string& path, std::size_t threads) {
  sbs_config* cfg = nullptr;
  if (sbs_status st = sbs_config_load(path.c_str(), &cfg); st != SBS_OK) return fail(st, "config");
  const std::filesystem::path dir = sbs_config_output_dir(cfg);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string csv = (dir / "sweep.csv").string();
  std::size_t cells = 0;
  const sbs_status st = sbs_sweep(cfg, threads, csv.c_str(), &cells);
  sbs_config_free(cfg);
  if (st != SBS_OK) return fail(st, "sweep");
  std::printf("%zu cells -> %s\n", cells, csv.c_str());
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& overrides_path, std::size_t threads) {
  sbs_config* overrides = nullptr;
  std::filesystem::path dir = ".";
  if (!overrides_path.empty()) {
    if (sbs_status st = sbs_config_load(overrides_path.c_str(), &overrides); st != SBS_OK) return fail(st, "config");
    dir = sbs_config_output_dir(overrides);
  }
  sbs_suite* s = nullptr;
  const sbs_status st = sbs_suite_run(suite.c_str(), overrides, threads, &s);
  sbs_config_free(overrides);
  if (st != SBS_OK) return fail(st, "verify");

  std::fputs(sbs_suite_table(s), stdout);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string csv = (dir / ("suite_" + suite + ".csv")).string();
  if (sbs_status w = sbs_suite_write_csv(s, csv.c_str()); w != SBS_OK) {
    sbs_suite_free(s);
    return fail(w, "write");
  }
  const int code = sbs_suite_pass(s) ? 0 : 1;
  sbs_suite_free(s);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-energy bright solitons of coupled cubic Schroedinger systems"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("-j,--threads", threads, "worker threads (default: SBS_THREADS or all cores)");

  std::string config_path;
  auto* solve = app.add_subcommand("solve", "solve one configuration");
  solve->add_option("config", config_path, "config file")->required();

  auto* sweep = app.add_subcommand("sweep", "run every cell of the config's sweep axes");
  sweep->add_option("config", config_path, "config file")->required();

  std::string suite, overrides;
  std::string suite_help = "one of:";
  for (std::size_t i = 0; i < sbs_suite_name_count(); ++i) suite_help += std::string(" ") + sbs_suite_name(i);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, suite_help)->required();
  verify->add_option("--config", overrides, "config whose solver.* keys override the suite defaults");

  std::string field, pgm;
  auto* render = app.add_subcommand("render", "render a 2D field dump as PGM");
  render->add_option("field", field, "input .sbsf")->required();
  render->add_option("out", pgm, "output .pgm")->required();

  CLI11_PARSE(app, argc, argv);

  if (*solve) return cmd_solve(config_path);
  if (*sweep) return cmd_sweep(config_path, threads);
  if (*verify) return cmd_verify(suite, overrides, threads);
  if (*render) {
    if (sbs_status st = sbs_render_pgm(field.c_str(), pgm.c_str()); st != SBS_OK) return fail(st, "render");
    return 0;
  }
  return 1;
}
