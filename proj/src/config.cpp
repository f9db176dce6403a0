#include "sbs/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "sbs/error.hpp"

namespace sbs {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Thrown by value parsers; parse_config adds the line number.
struct BadValue {
  std::string message;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double to_double(const std::string& s) {
  if (s.empty()) throw BadValue{"expected a number"};
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) throw BadValue{"expected a finite number, got '" + s + "'"};
  return v;
}

long long to_integer(const std::string& s) {
  if (s.empty()) throw BadValue{"expected an integer"};
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw BadValue{"expected an integer, got '" + s + "'"};
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw BadValue{"expected true or false, got '" + s + "'"};
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
  if (out.empty()) throw BadValue{"expected a comma-separated list of numbers"};
  return out;
}

std::array<double, 3> to_triple(const std::string& s, bool broadcast) {
  const auto list = to_list(s);
  if (list.size() > 3) throw BadValue{"at most three components allowed"};
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < 3; ++k) {
    if (k < list.size()) out[k] = list[k];
    else if (broadcast && list.size() == 1) out[k] = list[0];
  }
  return out;
}

std::string triple_text(const std::array<double, 3>& t, int n) {
  std::string out;
  for (int k = 0; k < n; ++k) {
    if (k) out += ",";
    out += format_double(t[k]);
  }
  return out;
}

std::string list_text(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

const char* kind_text(PotentialSpec::Kind k) {
  switch (k) {
    case PotentialSpec::Kind::Constant: return "constant";
    case PotentialSpec::Kind::Harmonic: return "harmonic";
    case PotentialSpec::Kind::Tabulated: return "tabulated";
  }
  return "constant";
}

PotentialSpec::Kind to_kind(const std::string& s) {
  if (s == "constant") return PotentialSpec::Kind::Constant;
  if (s == "harmonic") return PotentialSpec::Kind::Harmonic;
  if (s == "tabulated") return PotentialSpec::Kind::Tabulated;
  throw BadValue{"potential kind must be constant, harmonic or tabulated"};
}

struct Entry {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
  // Omitted from the serialized form when it returns false.
  std::function<bool(const RunConfig&)> present = [](const RunConfig&) { return true; };
};

void add_potential_entries(std::vector<Entry>& e, const std::string& prefix, PotentialConfig RunConfig::*member) {
  e.push_back({prefix + ".kind", [member](RunConfig& c, const std::string& v) { (c.*member).kind = to_kind(v); },
               [member](const RunConfig& c) { return std::string(kind_text((c.*member).kind)); }});
  e.push_back({prefix + ".lambda", [member](RunConfig& c, const std::string& v) { (c.*member).lambda = to_double(v); },
               [member](const RunConfig& c) { return format_double((c.*member).lambda); }});
  e.push_back({prefix + ".a", [member](RunConfig& c, const std::string& v) { (c.*member).a = to_triple(v, false); },
               [member](const RunConfig& c) { return triple_text((c.*member).a, c.domain.dim); }});
  e.push_back({prefix + ".center", [member](RunConfig& c, const std::string& v) { (c.*member).center = to_triple(v, false); },
               [member](const RunConfig& c) { return triple_text((c.*member).center, c.domain.dim); }});
  e.push_back({prefix + ".file", [member](RunConfig& c, const std::string& v) { (c.*member).file = v; },
               [member](const RunConfig& c) { return (c.*member).file; },
               [member](const RunConfig& c) { return !(c.*member).file.empty(); }});
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> e;
    e.push_back({"model.epsilon", [](RunConfig& c, const std::string& v) { c.epsilon = to_double(v); },
                 [](const RunConfig& c) { return format_double(c.epsilon); }});
    e.push_back({"model.beta", [](RunConfig& c, const std::string& v) { c.beta = to_double(v); },
                 [](const RunConfig& c) { return format_double(c.beta); }});
    e.push_back({"model.mu1", [](RunConfig& c, const std::string& v) { c.mu1 = to_double(v); },
                 [](const RunConfig& c) { return format_double(c.mu1); }});
    e.push_back({"model.mu2", [](RunConfig& c, const std::string& v) { c.mu2 = to_double(v); },
                 [](const RunConfig& c) { return format_double(c.mu2); }});
    e.push_back({"model.m", [](RunConfig& c, const std::string& v) { c.m = static_cast<int>(to_integer(v)); },
                 [](const RunConfig& c) { return std::to_string(c.m); }});
    add_potential_entries(e, "model.v1", &RunConfig::v1);
    add_potential_entries(e, "model.v2", &RunConfig::v2);
    e.push_back({"domain.kind",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "box") c.domain.kind = DomainSpec::Kind::Box;
                   else if (v == "ball") c.domain.kind = DomainSpec::Kind::Ball;
                   else throw BadValue{"domain kind must be box or ball"};
                 },
                 [](const RunConfig& c) { return std::string(c.domain.kind == DomainSpec::Kind::Box ? "box" : "ball"); }});
    e.push_back({"domain.dim",
                 [](RunConfig& c, const std::string& v) {
                   const auto d = to_integer(v);
                   if (d < 1 || d > 3) throw BadValue{"dimension must be 1, 2 or 3"};
                   c.domain.dim = static_cast<int>(d);
                 },
                 [](const RunConfig& c) { return std::to_string(c.domain.dim); }});
    e.push_back({"domain.extent", [](RunConfig& c, const std::string& v) { c.domain.extents = to_triple(v, true); },
                 [](const RunConfig& c) {
                   return triple_text(c.domain.extents, c.domain.kind == DomainSpec::Kind::Ball ? 1 : c.domain.dim);
                 }});
    e.push_back({"domain.center", [](RunConfig& c, const std::string& v) { c.domain.center = to_triple(v, false); },
                 [](const RunConfig& c) { return triple_text(c.domain.center, c.domain.dim); }});
    e.push_back({"grid.nodes", [](RunConfig& c, const std::string& v) { c.nodes_per_axis = static_cast<int>(to_integer(v)); },
                 [](const RunConfig& c) { return std::to_string(c.nodes_per_axis); }});
    e.push_back({"solver.max_iters", [](RunConfig& c, const std::string& v) { c.solver.max_iters = to_integer(v); },
                 [](const RunConfig& c) { return std::to_string(c.solver.max_iters); }});
    e.push_back({"solver.tol_energy", [](RunConfig& c, const std::string& v) { c.solver.tol_energy = to_double(v); },
                 [](const RunConfig& c) { return format_double(c.solver.tol_energy); }});
    e.push_back({"solver.tol_residual", [](RunConfig& c, const std::string& v) { c.solver.tol_residual = to_double(v); },
                 [](const RunConfig& c) { return format_double(c.solver.tol_residual); }});
    e.push_back({"solver.step0", [](RunConfig& c, const std::string& v) { c.solver.step0 = to_double(v); },
                 [](const RunConfig& c) { return format_double(c.solver.step0); }});
    e.push_back({"solver.backtrack", [](RunConfig& c, const std::string& v) { c.solver.backtrack = to_double(v); },
                 [](const RunConfig& c) { return format_double(c.solver.backtrack); }});
    e.push_back({"solver.max_halvings", [](RunConfig& c, const std::string& v) { c.solver.max_halvings = static_cast<int>(to_integer(v)); },
                 [](const RunConfig& c) { return std::to_string(c.solver.max_halvings); }});
    e.push_back({"solver.seed",
                 [](RunConfig& c, const std::string& v) {
                   const auto s = to_integer(v);
                   if (s < 0) throw BadValue{"seed must be non-negative"};
                   c.solver.seed = static_cast<std::uint64_t>(s);
                 },
                 [](const RunConfig& c) { return std::to_string(c.solver.seed); }});
    e.push_back({"solver.init",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "gaussian") c.solver.init = SolverConfig::Init::Gaussian;
                   else if (v == "random") c.solver.init = SolverConfig::Init::Random;
                   else throw BadValue{"init must be gaussian or random"};
                 },
                 [](const RunConfig& c) { return std::string(c.solver.init == SolverConfig::Init::Gaussian ? "gaussian" : "random"); }});
    e.push_back({"solver.box_doubling", [](RunConfig& c, const std::string& v) { c.solver.box_doubling = to_bool(v); },
                 [](const RunConfig& c) { return std::string(c.solver.box_doubling ? "true" : "false"); }});
    e.push_back({"solver.box_tol", [](RunConfig& c, const std::string& v) { c.solver.box_tol = to_double(v); },
                 [](const RunConfig& c) { return format_double(c.solver.box_tol); }});
    e.push_back({"solver.max_doublings", [](RunConfig& c, const std::string& v) { c.solver.max_doublings = static_cast<int>(to_integer(v)); },
                 [](const RunConfig& c) { return std::to_string(c.solver.max_doublings); }});
    e.push_back({"solver.allow_subcritical", [](RunConfig& c, const std::string& v) { c.solver.allow_subcritical = to_bool(v); },
                 [](const RunConfig& c) { return std::string(c.solver.allow_subcritical ? "true" : "false"); }});
    e.push_back({"solver.history_stride", [](RunConfig& c, const std::string& v) { c.solver.history_stride = to_integer(v); },
                 [](const RunConfig& c) { return std::to_string(c.solver.history_stride); }});
    e.push_back({"output.dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; },
                 [](const RunConfig& c) { return c.output_dir; }});
    e.push_back({"run.suite", [](RunConfig& c, const std::string& v) { c.suite = v; },
                 [](const RunConfig& c) { return c.suite; }, [](const RunConfig& c) { return !c.suite.empty(); }});
    e.push_back({"sweep.cap",
                 [](RunConfig& c, const std::string& v) {
                   const auto n = to_integer(v);
                   if (n < 1) throw BadValue{"sweep cap must be >= 1"};
                   c.sweep.cap = static_cast<std::size_t>(n);
                 },
                 [](const RunConfig& c) { return std::to_string(c.sweep.cap); }});
    return e;
  }();
  return table;
}

const std::vector<std::string>& axis_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n{"epsilon", "beta", "mu1", "mu2", "m", "v1.lambda", "v2.lambda"};
    for (const char* p : {"v1", "v2"}) {
      for (int k = 0; k < 3; ++k) {
        n.push_back(std::string(p) + ".a" + std::to_string(k));
        n.push_back(std::string(p) + ".center" + std::to_string(k));
      }
    }
    return n;
  }();
  return names;
}

void normalize(RunConfig& c) {
  const int n = c.domain.dim;
  const int active = c.domain.kind == DomainSpec::Kind::Ball ? 1 : n;
  for (int k = active; k < 3; ++k) c.domain.extents[k] = 0.0;
  for (int k = n; k < 3; ++k) {
    c.domain.center[k] = 0.0;
    c.v1.a[k] = c.v2.a[k] = 0.0;
    c.v1.center[k] = c.v2.center[k] = 0.0;
  }
}

void set_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string prefix = "sweep.axis.";
  if (key.compare(0, prefix.size(), prefix) == 0) {
    const std::string name = key.substr(prefix.size());
    const auto& names = axis_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) throw BadValue{"unknown sweep axis '" + name + "'"};
    const auto values = to_list(value);
    for (auto& axis : cfg.sweep.axes) {
      if (axis.name == name) {
        axis.values = values;
        return;
      }
    }
    cfg.sweep.axes.push_back({name, values});
    return;
  }
  for (const auto& e : entries()) {
    if (e.key == key) {
      e.set(cfg, value);
      return;
    }
  }
  throw BadValue{"unknown key '" + key + "'"};
}

}  // namespace

std::size_t SweepSpec::cell_count() const {
  if (axes.empty()) return 1;
  std::size_t n = 1;
  for (const auto& a : axes) {
    n *= a.values.size();
    if (n > (std::size_t{1} << 40)) return n;
  }
  return n;
}

std::vector<double> SweepSpec::cell(std::size_t index) const {
  std::vector<double> out(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const std::size_t len = axes[k].values.size();
    out[k] = axes[k].values[index % len];
    index /= len;
  }
  return out;
}

bool operator==(const SolverConfig& a, const SolverConfig& b) {
  return a.max_iters == b.max_iters && a.tol_energy == b.tol_energy && a.tol_residual == b.tol_residual &&
         a.step0 == b.step0 && a.backtrack == b.backtrack && a.max_halvings == b.max_halvings && a.seed == b.seed &&
         a.init == b.init && a.box_doubling == b.box_doubling && a.box_tol == b.box_tol &&
         a.max_doublings == b.max_doublings && a.allow_subcritical == b.allow_subcritical &&
         a.history_stride == b.history_stride;
}

bool operator==(const SweepSpec& a, const SweepSpec& b) {
  if (a.cap != b.cap || a.axes.size() != b.axes.size()) return false;
  for (std::size_t i = 0; i < a.axes.size(); ++i) {
    if (a.axes[i].name != b.axes[i].name || a.axes[i].values != b.axes[i].values) return false;
  }
  return true;
}

bool same_settings(const RunConfig& a, const RunConfig& b) {
  return a.epsilon == b.epsilon && a.beta == b.beta && a.mu1 == b.mu1 && a.mu2 == b.mu2 && a.m == b.m &&
         a.v1 == b.v1 && a.v2 == b.v2 && a.domain == b.domain && a.nodes_per_axis == b.nodes_per_axis &&
         a.solver == b.solver && a.output_dir == b.output_dir && a.suite == b.suite && a.sweep == b.sweep;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  try {
    set_entry(cfg, key, value);
  } catch (const BadValue& bad) {
    throw Error(ErrorCode::Config, key + ": " + bad.message);
  }
  normalize(cfg);
}

void apply_axis(RunConfig& cfg, const std::string& axis, double value) {
  if (axis == "m") {
    apply_setting(cfg, "model.m", std::to_string(std::lround(value)));
    return;
  }
  const auto& names = axis_names();
  if (std::find(names.begin(), names.end(), axis) == names.end()) throw Error(ErrorCode::Config, "unknown sweep axis '" + axis + "'");
  PotentialConfig* pot = axis.rfind("v1.", 0) == 0 ? &cfg.v1 : axis.rfind("v2.", 0) == 0 ? &cfg.v2 : nullptr;
  if (!pot) {
    apply_setting(cfg, "model." + axis, format_double(value));
    return;
  }
  const std::string field = axis.substr(3);
  if (field == "lambda") pot->lambda = value;
  else if (field[0] == 'a') pot->a[field[1] - '0'] = value;
  else pot->center[field.back() - '0'] = value;
  normalize(cfg);
}

void apply_solver_overrides(SolverConfig& target, const RunConfig& overrides) {
  RunConfig tmp;
  tmp.solver = target;
  for (const auto& key : overrides.explicit_keys) {
    if (key.rfind("solver.", 0) != 0) continue;
    for (const auto& e : entries()) {
      if (e.key == key) e.set(tmp, e.get(overrides));
    }
  }
  target = tmp.solver;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Config, where + "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::Config, where + "missing key");
    if (cfg.explicit_keys.count(key)) throw Error(ErrorCode::Config, where + "duplicate key '" + key + "'");
    try {
      set_entry(cfg, key, value);
    } catch (const BadValue& bad) {
      throw Error(ErrorCode::Config, where + (bad.message.rfind("unknown", 0) == 0 ? bad.message : key + ": " + bad.message));
    }
    cfg.explicit_keys.insert(key);
  }
  normalize(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& e : entries()) {
    if (!e.present(cfg)) continue;
    out += e.key + " = " + e.get(cfg) + "\n";
  }
  for (const auto& axis : cfg.sweep.axes) out += "sweep.axis." + axis.name + " = " + list_text(axis.values) + "\n";
  return out;
}

namespace {

PotentialSpec potential_spec(const PotentialConfig& p, const GridPtr& grid) {
  switch (p.kind) {
    case PotentialSpec::Kind::Constant:
      return PotentialSpec::constant(p.lambda);
    case PotentialSpec::Kind::Harmonic:
      return PotentialSpec::harmonic(p.a, p.center, p.lambda);
    case PotentialSpec::Kind::Tabulated:
      if (!grid) throw Error(ErrorCode::Config, "tabulated potentials need a fixed grid (box doubling unsupported)");
      if (p.file.empty()) throw Error(ErrorCode::Config, "tabulated potential requires a file");
      return PotentialSpec::tabulated(from_image(grid, read_sbsf(p.file)));
  }
  return PotentialSpec::constant(p.lambda);
}

ModelSpec model_spec_on(const RunConfig& cfg, const GridPtr& grid) {
  ModelSpec m;
  m.epsilon = cfg.epsilon;
  m.beta = cfg.beta;
  m.mu1 = cfg.mu1;
  m.mu2 = cfg.mu2;
  m.m = cfg.m;
  m.domain = cfg.domain;
  m.v1 = potential_spec(cfg.v1, grid);
  m.v2 = potential_spec(cfg.v2, grid);
  return m;
}

}  // namespace

ModelSpec model_spec(const RunConfig& cfg) { return model_spec_on(cfg, nullptr); }

DiscreteModel materialize(const RunConfig& cfg) {
  const GridPtr grid = build_grid(cfg.domain, cfg.nodes_per_axis);
  return DiscreteModel(model_spec_on(cfg, grid), grid);
}

}  // namespace sbs
