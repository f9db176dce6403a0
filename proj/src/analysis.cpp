#include "sbs/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "sbs/error.hpp"
#include "sbs/parallel.hpp"

namespace sbs {

namespace {

double box_value(const ScalarField& f, std::size_t box) {
  const auto i = f.grid()->interior_of_box(box);
  return i >= 0 ? f[static_cast<std::size_t>(i)] : 0.0;
}

int count_local_maxima(const ScalarField& f, double threshold) {
  const Grid& g = *f.grid();
  const int n = g.dim();
  std::vector<std::array<int, 3>> offsets;
  for (int a = -1; a <= 1; ++a) {
    for (int b = (n > 1 ? -1 : 0); b <= (n > 1 ? 1 : 0); ++b) {
      for (int c = (n > 2 ? -1 : 0); c <= (n > 2 ? 1 : 0); ++c) {
        if (a != 0 || b != 0 || c != 0) offsets.push_back({a, b, c});
      }
    }
  }
  int count = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double fi = f[i];
    if (!(fi > threshold)) continue;
    const std::size_t b0 = g.box_of_interior(i);
    const auto idx = g.box_multi_index(b0);
    bool is_max = true;
    for (const auto& o : offsets) {
      std::array<std::uint32_t, 3> nb{};
      for (int k = 0; k < 3; ++k) nb[k] = static_cast<std::uint32_t>(static_cast<int>(idx[k]) + o[k]);
      const std::size_t b = g.box_linear_index(nb);
      const double fn = box_value(f, b);
      // Plateaus count once: ties lose only to lexicographically earlier nodes.
      if (b < b0 ? !(fi > fn) : !(fi >= fn)) {
        is_max = false;
        break;
      }
    }
    if (is_max) ++count;
  }
  return count;
}

}  // namespace

ComponentPeak find_component_peak(const ScalarField& f) {
  if (f.size() == 0 || !(f.max_value() > 0.0)) throw Error(ErrorCode::TrivialState, "component vanishes identically");
  const Grid& g = *f.grid();
  std::size_t best = 0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (f[i] > f[best]) best = i;
  }
  ComponentPeak p;
  p.value = f[best];
  p.node = g.point(best);
  p.refined = p.node;
  const auto nb = g.neighbors(best);
  for (int k = 0; k < g.dim(); ++k) {
    const double lo = nb[2 * k] >= 0 ? f[nb[2 * k]] : 0.0;
    const double hi = nb[2 * k + 1] >= 0 ? f[nb[2 * k + 1]] : 0.0;
    const double curv = lo - 2.0 * p.value + hi;
    if (curv < 0.0) {
      const double h = g.spacing()[k];
      const double shift = 0.5 * h * (lo - hi) / curv;
      p.refined[k] += std::clamp(shift, -0.5 * h, 0.5 * h);
    }
  }
  p.local_max_count = count_local_maxima(f, 0.5 * p.value);
  return p;
}

PeakReport find_peaks(const State& s, const ModelSpec& model) {
  PeakReport r;
  r.u = find_component_peak(s.u);
  for (const auto& vj : s.v) r.v.push_back(find_component_peak(vj));
  if (!r.v.empty()) {
    r.separation = distance(r.u.refined, r.v.front().refined);
    r.colocation = r.separation / model.epsilon;
    r.boundary_distance_v = model.domain.boundary_distance(r.v.front().refined);
  }
  r.boundary_distance_u = model.domain.boundary_distance(r.u.refined);
  return r;
}

double interpolate(const ScalarField& f, const Point& x) {
  const Grid& g = *f.grid();
  const Point origin = g.box_point(0);
  const int n = g.dim();
  std::array<std::uint32_t, 3> base{0, 0, 0};
  std::array<double, 3> t{0.0, 0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const double r = (x[k] - origin[k]) / g.spacing()[k];
    const double last = static_cast<double>(g.nodes()[k] - 1);
    if (r < -1e-9 || r > last + 1e-9) throw Error(ErrorCode::OutOfDomain, "sample outside the grid");
    const double i0 = std::clamp(std::floor(r), 0.0, last - 1.0);
    base[k] = static_cast<std::uint32_t>(i0);
    t[k] = std::clamp(r - i0, 0.0, 1.0);
  }
  double acc = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    auto idx = base;
    for (int k = 0; k < n; ++k) {
      const bool up = (corner >> k) & 1;
      idx[k] += up ? 1 : 0;
      w *= up ? t[k] : 1.0 - t[k];
    }
    if (w != 0.0) acc += w * box_value(f, g.box_linear_index(idx));
  }
  return acc;
}

RadialReport radial_diagnostics(const ScalarField& f, const Point& center, double noise_floor) {
  const Grid& g = *f.grid();
  const DomainSpec& dom = g.domain();
  if (!dom.contains(center)) throw Error(ErrorCode::OutOfDomain, "radial center outside the domain");
  const int n = g.dim();
  double h = 0.0;
  for (int k = 0; k < n; ++k) h = std::max(h, g.spacing()[k]);
  const double peak = f.max_value();
  if (!(peak > 0.0)) throw Error(ErrorCode::TrivialState, "field vanishes identically");

  const double r_max = dom.boundary_distance(center) - h;
  RadialReport rep;
  for (int k = 0; k * h <= r_max; ++k) {
    const double r = k * h;
    std::vector<Point> pts;
    if (k == 0) {
      pts.push_back(center);
    } else if (n == 1) {
      pts.push_back({center[0] - r, 0.0, 0.0});
      pts.push_back({center[0] + r, 0.0, 0.0});
    } else if (n == 2) {
      const int m = std::max(16, static_cast<int>(std::ceil(4.0 * std::numbers::pi * r / h)));
      for (int j = 0; j < m; ++j) {
        const double th = 2.0 * std::numbers::pi * j / m;
        pts.push_back({center[0] + r * std::cos(th), center[1] + r * std::sin(th), 0.0});
      }
    } else {
      // Fibonacci lattice on the sphere.
      const int m = std::clamp(static_cast<int>(std::ceil(16.0 * std::numbers::pi * r * r / (h * h))), 32, 20000);
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int j = 0; j < m; ++j) {
        const double z = 1.0 - 2.0 * (j + 0.5) / m;
        const double rho = std::sqrt(1.0 - z * z);
        const double th = golden * j;
        pts.push_back({center[0] + r * rho * std::cos(th), center[1] + r * rho * std::sin(th), center[2] + r * z});
      }
    }
    RadialShell shell;
    shell.radius = r;
    shell.min = std::numeric_limits<double>::infinity();
    shell.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& p : pts) {
      const double val = interpolate(f, p);
      sum += val;
      shell.min = std::min(shell.min, val);
      shell.max = std::max(shell.max, val);
    }
    shell.mean = sum / static_cast<double>(pts.size());
    rep.anisotropy = std::max(rep.anisotropy, (shell.max - shell.min) / peak);
    if (!rep.profile.empty()) {
      const double jump = (shell.mean - rep.profile.back().mean) / peak;
      rep.monotone_violation = std::max(rep.monotone_violation, jump);
      if (jump > noise_floor) ++rep.violation_count;
    }
    rep.profile.push_back(shell);
  }
  return rep;
}

DecayFit decay_fit(const ScalarField& f, const Point& peak, const ModelSpec& model, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "decay reference lambda must be positive");
  const Grid& g = *f.grid();
  double h = 0.0;
  for (int k = 0; k < g.dim(); ++k) h = std::max(h, g.spacing()[k]);
  const double inner = 3.0 * model.epsilon / std::sqrt(lambda);
  const double edge = 5.0 * h;

  DecayFit fit;
  fit.reference_rate = std::sqrt(lambda) * (1.0 - kDecaySigma) / model.epsilon;
  fit.window_inner = std::numeric_limits<double>::infinity();
  double sr = 0.0, sy = 0.0, srr = 0.0, sry = 0.0;
  std::vector<std::pair<double, double>> samples;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0.0)) continue;
    const Point x = g.point(i);
    const double r = distance(x, peak);
    if (r < inner || g.domain().boundary_distance(x) < edge) continue;
    const double y = std::log(f[i]);
    samples.emplace_back(r, y);
    sr += r;
    sy += y;
    srr += r * r;
    sry += r * y;
    fit.window_inner = std::min(fit.window_inner, r);
    fit.window_outer = std::max(fit.window_outer, r);
  }
  fit.window_nodes = samples.size();
  if (samples.size() < 10) throw Error(ErrorCode::WindowTooSmall, "decay window holds fewer than 10 nodes");
  const double n = static_cast<double>(samples.size());
  const double denom = n * srr - sr * sr;
  if (!(denom > 0.0)) throw Error(ErrorCode::WindowTooSmall, "decay window has no radial spread");
  const double slope = (n * sry - sr * sy) / denom;
  const double intercept = (sy - slope * sr) / n;
  double ss = 0.0;
  for (const auto& [r, y] : samples) {
    const double e = y - (intercept + slope * r);
    ss += e * e;
  }
  fit.kappa = -slope;
  fit.fit_residual = std::sqrt(ss / n);
  fit.passes = fit.kappa >= fit.reference_rate;
  return fit;
}

RescaledProfile rescale_profile(const ScalarField& f, const Point& center, double eps, const ProfileGrid& ygrid) {
  if (ygrid.dim != f.grid()->dim()) throw Error(ErrorCode::InvalidArgument, "profile grid dimension differs from the field");
  if (ygrid.samples_per_axis < 1) throw Error(ErrorCode::InvalidArgument, "profile grid needs at least one sample");
  const DomainSpec& dom = f.grid()->domain();
  RescaledProfile out;
  out.center = center;
  const int m = ygrid.samples_per_axis;
  const auto coord = [&](int j) {
    return m == 1 ? 0.0 : -ygrid.half_extent + 2.0 * ygrid.half_extent * j / (m - 1);
  };
  const int n = ygrid.dim;
  const int total = n == 1 ? m : (n == 2 ? m * m : m * m * m);
  for (int lin = 0; lin < total; ++lin) {
    Point y{0.0, 0.0, 0.0};
    int rest = lin;
    for (int k = n - 1; k >= 0; --k) {
      y[k] = coord(rest % m);
      rest /= m;
    }
    Point x{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) x[k] = center[k] + eps * y[k];
    if (!dom.contains(x)) throw Error(ErrorCode::OutOfDomain, "rescaled sample falls outside the domain");
    out.y.push_back(y);
    out.values.push_back(interpolate(f, x));
  }
  return out;
}

ScalingTable scaling_table(const ModelSpec& model_template, const std::vector<double>& eps_list, double h_over_eps,
                           const SolverConfig& cfg, std::size_t threads) {
  if (eps_list.empty()) throw Error(ErrorCode::InvalidArgument, "scaling table needs at least one epsilon");
  if (!(h_over_eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "h_over_eps must be positive");
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) throw Error(ErrorCode::InvalidArgument, "epsilon list must be descending");
  }
  const DomainSpec& dom = model_template.domain;
  const double width = 2.0 * (dom.kind == DomainSpec::Kind::Ball ? dom.extents[0] : *std::max_element(dom.extents.begin(), dom.extents.begin() + dom.dim));

  ScalingTable table;
  table.rows.resize(eps_list.size());
  parallel_for(eps_list.size(), threads ? threads : default_threads(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    ModelSpec m = model_template;
    m.epsilon = eps_list[i];
    const int nodes = static_cast<int>(std::lround(width / (h_over_eps * m.epsilon))) + 1;
    ScalingRow& row = table.rows[i];
    row.epsilon = m.epsilon;
    row.nodes_per_axis = nodes;
    row.separation = std::numeric_limits<double>::quiet_NaN();
    try {
      const auto rep = solve_ground_state(discretize(m, nodes), cfg);
      row.spacing = rep.state.grid()->spacing()[0];
      row.separation = find_peaks(rep.state, rep.model).separation;
      row.c = rep.c;
      row.c_scaled = rep.c / std::pow(m.epsilon, dom.dim);
      row.converged = rep.converged;
    } catch (const Error&) {
      row.converged = false;
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& row : table.rows) {
    table.all_converged = table.all_converged && row.converged;
    lo = std::min(lo, row.c_scaled);
    hi = std::max(hi, row.c_scaled);
  }
  table.spread = lo > 0.0 ? (hi - lo) / lo : std::numeric_limits<double>::infinity();
  return table;
}

}  // namespace sbs
