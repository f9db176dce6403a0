#include "sbs/sbs.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "sbs/error.hpp"
#include "sbs/harness.hpp"

struct sbs_config {
  sbs::RunConfig cfg;
};

struct sbs_result {
  sbs::RunConfig cfg;
  sbs::RunOutcome out;
};

struct sbs_suite {
  sbs::SuiteResult result;
  std::string table;
};

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

thread_local std::string last_error;

sbs_status code_of(sbs::ErrorCode c) {
  switch (c) {
    case sbs::ErrorCode::InvalidArgument: return SBS_ERR_INVALID_ARGUMENT;
    case sbs::ErrorCode::GridMismatch: return SBS_ERR_GRID_MISMATCH;
    case sbs::ErrorCode::NotProjectable: return SBS_ERR_NOT_PROJECTABLE;
    case sbs::ErrorCode::InitFailed: return SBS_ERR_INIT_FAILED;
    case sbs::ErrorCode::NoBoxConvergence: return SBS_ERR_NO_BOX_CONVERGENCE;
    case sbs::ErrorCode::TrivialState: return SBS_ERR_TRIVIAL_STATE;
    case sbs::ErrorCode::WindowTooSmall: return SBS_ERR_WINDOW_TOO_SMALL;
    case sbs::ErrorCode::OutOfDomain: return SBS_ERR_OUT_OF_DOMAIN;
    case sbs::ErrorCode::Config: return SBS_ERR_CONFIG;
    case sbs::ErrorCode::Io: return SBS_ERR_IO;
  }
  return SBS_ERR_INTERNAL;
}

template <class F>
sbs_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return SBS_OK;
  } catch (const sbs::Error& e) {
    last_error = e.what();
    return code_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return SBS_ERR_INTERNAL;
}

sbs_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return SBS_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* sbs_last_error(void) { return last_error.c_str(); }

const char* sbs_status_name(sbs_status status) {
  switch (status) {
    case SBS_OK: return "ok";
    case SBS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SBS_ERR_GRID_MISMATCH: return "grid mismatch";
    case SBS_ERR_NOT_PROJECTABLE: return "not projectable";
    case SBS_ERR_INIT_FAILED: return "initialization failed";
    case SBS_ERR_NO_BOX_CONVERGENCE: return "no box convergence";
    case SBS_ERR_TRIVIAL_STATE: return "trivial state";
    case SBS_ERR_WINDOW_TOO_SMALL: return "window too small";
    case SBS_ERR_OUT_OF_DOMAIN: return "out of domain";
    case SBS_ERR_CONFIG: return "config error";
    case SBS_ERR_IO: return "i/o error";
    case SBS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

sbs_status sbs_config_load(const char* path, sbs_config** out) {
  if (!path || !out) return null_argument("path/out");
  *out = nullptr;
  return guarded([&] { *out = new sbs_config{sbs::load_config(path)}; });
}

sbs_status sbs_config_parse(const char* text, sbs_config** out) {
  if (!text || !out) return null_argument("text/out");
  *out = nullptr;
  return guarded([&] { *out = new sbs_config{sbs::parse_config(text)}; });
}

sbs_status sbs_config_set(sbs_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return null_argument("cfg/key/value");
  return guarded([&] { sbs::apply_setting(cfg->cfg, key, value); });
}

sbs_status sbs_config_serialize(const sbs_config* cfg, char* buf, size_t cap, size_t* needed) {
  if (!cfg) return null_argument("cfg");
  return guarded([&] {
    const std::string text = sbs::serialize_config(cfg->cfg);
    if (needed) *needed = text.size() + 1;
    if (buf && cap > 0) {
      const std::size_t n = std::min(cap - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

const char* sbs_config_output_dir(const sbs_config* cfg) { return cfg ? cfg->cfg.output_dir.c_str() : ""; }

void sbs_config_free(sbs_config* cfg) { delete cfg; }

sbs_status sbs_solve(const sbs_config* cfg, sbs_result** out) {
  if (!cfg || !out) return null_argument("cfg/out");
  *out = nullptr;
  return guarded([&] { *out = new sbs_result{cfg->cfg, sbs::run_solve(cfg->cfg)}; });
}

sbs_run_status sbs_result_status(const sbs_result* r) {
  if (!r) return SBS_RUN_FAILED;
  switch (r->out.status) {
    case sbs::RunStatus::Converged: return SBS_RUN_CONVERGED;
    case sbs::RunStatus::NotConverged: return SBS_RUN_NOT_CONVERGED;
    case sbs::RunStatus::Collapsed: return SBS_RUN_COLLAPSED;
    case sbs::RunStatus::Failed: return SBS_RUN_FAILED;
  }
  return SBS_RUN_FAILED;
}

int sbs_result_exit_code(const sbs_result* r) { return r ? sbs::exit_code(r->out.status) : 2; }

const char* sbs_result_message(const sbs_result* r) { return r ? r->out.message.c_str() : ""; }

int sbs_result_has_state(const sbs_result* r) { return r && r->out.report ? 1 : 0; }

double sbs_result_energy(const sbs_result* r) { return sbs_result_has_state(r) ? r->out.report->c : kNaN; }

double sbs_result_residual(const sbs_result* r) {
  return sbs_result_has_state(r) ? r->out.report->residual_norm : kNaN;
}

long sbs_result_iterations(const sbs_result* r) { return sbs_result_has_state(r) ? r->out.report->iterations : 0; }

double sbs_result_spacing(const sbs_result* r) { return sbs_result_has_state(r) ? r->out.spacing : kNaN; }

int sbs_result_components(const sbs_result* r) { return sbs_result_has_state(r) ? 1 + r->out.report->state.m() : 0; }

sbs_status sbs_result_peak(const sbs_result* r, int component, double xyz[3], double* value) {
  if (!r || !xyz) return null_argument("r/xyz");
  if (!r->out.peaks) {
    last_error = "no peaks: the run produced no nontrivial state";
    return SBS_ERR_TRIVIAL_STATE;
  }
  const auto& p = *r->out.peaks;
  if (component < 0 || component > static_cast<int>(p.v.size())) {
    last_error = "component index out of range";
    return SBS_ERR_INVALID_ARGUMENT;
  }
  const sbs::ComponentPeak& c = component == 0 ? p.u : p.v[static_cast<std::size_t>(component - 1)];
  for (int k = 0; k < 3; ++k) xyz[k] = c.refined[k];
  if (value) *value = c.value;
  last_error.clear();
  return SBS_OK;
}

double sbs_result_separation(const sbs_result* r) { return r && r->out.peaks ? r->out.peaks->separation : kNaN; }

sbs_status sbs_result_write(const sbs_result* r, const char* dir) {
  if (!r || !dir) return null_argument("r/dir");
  return guarded([&] {
    sbs::RunConfig cfg = r->cfg;
    cfg.output_dir = dir;
    sbs::write_solve_outputs(cfg, r->out);
  });
}

void sbs_result_free(sbs_result* r) { delete r; }

sbs_status sbs_sweep(const sbs_config* cfg, size_t threads, const char* csv_path, size_t* cells) {
  if (!cfg || !csv_path) return null_argument("cfg/csv_path");
  return guarded([&] {
    const auto rows = sbs::run_sweep(cfg->cfg, threads);
    const std::string text = sbs::sweep_csv(cfg->cfg, rows);
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw sbs::Error(sbs::ErrorCode::Io, std::string("cannot write ") + csv_path);
    f << text;
    if (!f) throw sbs::Error(sbs::ErrorCode::Io, std::string("failed writing ") + csv_path);
    if (cells) *cells = rows.size();
  });
}

size_t sbs_suite_name_count(void) { return sbs::suite_names().size(); }

const char* sbs_suite_name(size_t index) {
  const auto& names = sbs::suite_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

sbs_status sbs_suite_run(const char* name, const sbs_config* overrides, size_t threads, sbs_suite** out) {
  if (!name || !out) return null_argument("name/out");
  *out = nullptr;
  return guarded([&] {
    sbs::SuiteOptions opts;
    if (overrides) opts.overrides = overrides->cfg;
    opts.threads = threads;
    auto* s = new sbs_suite{sbs::run_suite(name, opts), {}};
    s->table = sbs::suite_table(s->result);
    *out = s;
  });
}

int sbs_suite_pass(const sbs_suite* s) { return s && s->result.pass ? 1 : 0; }

double sbs_suite_seconds(const sbs_suite* s) { return s ? s->result.seconds : kNaN; }

size_t sbs_suite_check_count(const sbs_suite* s) { return s ? s->result.checks.size() : 0; }

sbs_status sbs_suite_check(const sbs_suite* s, size_t index, const char** name, double* measured,
                           const char** relation, double* threshold, int* pass) {
  if (!s) return null_argument("s");
  if (index >= s->result.checks.size()) {
    last_error = "check index out of range";
    return SBS_ERR_INVALID_ARGUMENT;
  }
  const sbs::Check& c = s->result.checks[index];
  if (name) *name = c.name.c_str();
  if (measured) *measured = c.measured;
  if (relation) *relation = c.relation.c_str();
  if (threshold) *threshold = c.threshold;
  if (pass) *pass = c.pass ? 1 : 0;
  last_error.clear();
  return SBS_OK;
}

const char* sbs_suite_table(const sbs_suite* s) { return s ? s->table.c_str() : ""; }

sbs_status sbs_suite_write_csv(const sbs_suite* s, const char* path) {
  if (!s || !path) return null_argument("s/path");
  return guarded([&] {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw sbs::Error(sbs::ErrorCode::Io, std::string("cannot write ") + path);
    f << sbs::suite_csv(s->result);
    if (!f) throw sbs::Error(sbs::ErrorCode::Io, std::string("failed writing ") + path);
  });
}

void sbs_suite_free(sbs_suite* s) { delete s; }

sbs_status sbs_render_pgm(const char* field_path, const char* pgm_path) {
  if (!field_path || !pgm_path) return null_argument("field_path/pgm_path");
  return guarded([&] { sbs::render_pgm_file(field_path, pgm_path); });
}

}  // extern "C"
