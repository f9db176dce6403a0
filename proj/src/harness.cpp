#include "sbs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "sbs/error.hpp"
#include "sbs/parallel.hpp"

namespace sbs {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::NotConverged: return "failed";
    case RunStatus::Collapsed: return "collapsed";
    case RunStatus::Failed: return "failed";
  }
  return "failed";
}

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return 0;
    case RunStatus::Collapsed: return 3;
    case RunStatus::NotConverged:
    case RunStatus::Failed: return 2;
  }
  return 2;
}

RunOutcome run_solve(const RunConfig& cfg) {
  RunOutcome out;
  try {
    if (cfg.solver.box_doubling) {
      WholeSpaceReport ws = solve_whole_space(model_spec(cfg), cfg.nodes_per_axis, cfg.solver);
      out.stages = ws.stages;
      out.report = std::move(ws.report);
    } else {
      const DiscreteModel mdl = materialize(cfg);
      out.report = solve_ground_state(mdl, cfg.solver);
    }
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::InitFailed:
      case ErrorCode::NotProjectable:
        out.status = RunStatus::Collapsed;
        out.message = std::string("no nontrivial state - subcritical or collapsed: ") + e.what();
        return out;
      case ErrorCode::NoBoxConvergence:
        out.status = RunStatus::NotConverged;
        out.message = e.what();
        return out;
      default:
        throw;
    }
  }

  const GroundStateReport& rep = *out.report;
  out.nodes_per_axis = static_cast<int>(rep.state.grid()->nodes()[0]);
  out.spacing = rep.state.grid()->spacing()[0];
  try {
    out.peaks = find_peaks(rep.state, rep.model);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TrivialState) throw;
  }

  double smallest_peak = 0.0;
  if (out.peaks) {
    smallest_peak = out.peaks->u.value;
    for (const auto& p : out.peaks->v) smallest_peak = std::min(smallest_peak, p.value);
  }
  if (!out.peaks || smallest_peak < kCollapsePeak) {
    out.status = RunStatus::Collapsed;
    out.message = "no nontrivial state - subcritical or collapsed: peak value below threshold";
  } else if (!rep.converged) {
    out.status = RunStatus::NotConverged;
    out.message = std::string("solver stopped without convergence (") + to_string(rep.termination) + ")";
  } else if (!(rep.c > 0.0)) {
    out.status = RunStatus::Collapsed;
    out.message = "no nontrivial state - attained energy is not positive";
  } else {
    out.status = RunStatus::Converged;
  }
  return out;
}

std::vector<std::string> report_columns() {
  return {"status", "epsilon", "beta", "mu1", "mu2", "m", "dim", "domain", "nodes", "h", "c", "A", "B", "G", "E",
          "residual", "iterations", "converged", "P_x", "P_y", "P_z", "Q_x", "Q_y", "Q_z", "u_peak", "v_peak",
          "colocation", "d_P", "d_Q", "u_local_max", "v_local_max", "box_size"};
}

std::vector<std::string> report_fields(const RunConfig& cfg, const RunOutcome& out) {
  std::vector<std::string> f{to_string(out.status), format_double(cfg.epsilon), format_double(cfg.beta),
                             format_double(cfg.mu1), format_double(cfg.mu2), std::to_string(cfg.m),
                             std::to_string(cfg.domain.dim),
                             cfg.domain.kind == DomainSpec::Kind::Box ? "box" : "ball"};
  const std::size_t numeric = report_columns().size() - f.size();
  if (!out.report) {
    f.insert(f.end(), numeric, "");
    return f;
  }
  const auto& r = *out.report;
  f.push_back(std::to_string(out.nodes_per_axis));
  f.push_back(format_double(out.spacing));
  for (double x : {r.c, r.forms.A, r.forms.B, r.forms.G, r.forms.E, r.residual_norm}) f.push_back(format_double(x));
  f.push_back(std::to_string(r.iterations));
  f.push_back(r.converged ? "1" : "0");
  if (out.peaks) {
    const auto& p = *out.peaks;
    for (int k = 0; k < 3; ++k) f.push_back(format_double(p.u.refined[k]));
    for (int k = 0; k < 3; ++k) f.push_back(format_double(p.v.front().refined[k]));
    f.push_back(format_double(p.u.value));
    f.push_back(format_double(p.v.front().value));
    f.push_back(format_double(p.colocation));
    f.push_back(format_double(p.boundary_distance_u));
    f.push_back(format_double(p.boundary_distance_v));
    f.push_back(std::to_string(p.u.local_max_count));
    f.push_back(std::to_string(p.v.front().local_max_count));
  } else {
    f.insert(f.end(), 13, "");
  }
  f.push_back(format_double(r.model.domain.extents[0]));
  return f;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  out += '\n';
  return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace

void write_solve_outputs(const RunConfig& cfg, const RunOutcome& out) {
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  write_text(dir / "report.csv", csv_line(report_columns()) + csv_line(report_fields(cfg, out)));
  if (!out.report) return;
  write_sbsf((dir / "u.sbsf").string(), out.report->state.u);
  for (int j = 0; j < out.report->state.m(); ++j)
    write_sbsf((dir / ("v" + std::to_string(j + 1) + ".sbsf")).string(), out.report->state.v[j]);
}

std::vector<SweepCell> run_sweep(const RunConfig& cfg, std::size_t threads) {
  const std::size_t count = cfg.sweep.cell_count();
  if (count > cfg.sweep.cap)
    throw Error(ErrorCode::Config, "sweep has " + std::to_string(count) + " cells, cap is " + std::to_string(cfg.sweep.cap));

  std::vector<SweepCell> cells(count);
  for (std::size_t i = 0; i < count; ++i) {
    cells[i].index = i;
    cells[i].values = cfg.sweep.cell(i);
    cells[i].config = cfg;
    cells[i].config.sweep = {};
    cells[i].config.solver.seed = cfg.solver.seed + i;
  }
  parallel_for(count, threads ? threads : default_threads(), [&](std::size_t i) {
    SweepCell& cell = cells[i];
    try {
      for (std::size_t k = 0; k < cfg.sweep.axes.size(); ++k) apply_axis(cell.config, cfg.sweep.axes[k].name, cell.values[k]);
      cell.outcome = run_solve(cell.config);
    } catch (const std::exception& e) {
      cell.outcome = RunOutcome{};
      cell.outcome.status = RunStatus::Failed;
      cell.outcome.message = e.what();
    }
  });
  return cells;
}

std::string sweep_csv(const RunConfig& cfg, const std::vector<SweepCell>& cells) {
  std::vector<std::string> header{"cell"};
  for (const auto& a : cfg.sweep.axes) header.push_back(a.name);
  for (const auto& c : report_columns()) header.push_back(c);
  std::string out = csv_line(header);
  for (const auto& cell : cells) {
    std::vector<std::string> row{std::to_string(cell.index)};
    for (double v : cell.values) row.push_back(format_double(v));
    for (auto& f : report_fields(cell.config, cell.outcome)) row.push_back(std::move(f));
    out += csv_line(row);
  }
  return out;
}

std::vector<unsigned char> render_pgm(const FieldImage& image) {
  if (image.dim != 2) throw Error(ErrorCode::InvalidArgument, "PGM rendering needs a 2D field");
  const std::uint32_t height = image.nodes[0];
  const std::uint32_t width = image.nodes[1];
  double peak = 0.0;
  for (double v : image.values) peak = std::max(peak, v);
  const std::string header = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(out.size() + image.values.size());
  for (double v : image.values) {
    const double scaled = peak > 0.0 ? 255.0 * std::max(v, 0.0) / peak : 0.0;
    out.push_back(static_cast<unsigned char>(std::clamp(std::lround(scaled), 0L, 255L)));
  }
  return out;
}

void render_pgm_file(const std::string& in_path, const std::string& out_path) {
  const auto bytes = render_pgm(read_sbsf(in_path));
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + out_path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::Io, "failed writing " + out_path);
}

}  // namespace sbs
