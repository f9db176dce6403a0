#pragma once

#include <cstddef>
#include <vector>

#include "sbs/solver.hpp"

namespace sbs {

struct ComponentPeak {
  Point node{};     // grid argmax, lexicographically first on ties
  Point refined{};  // after a per-axis quadratic fit
  double value = 0.0;
  // Strict local maxima above half the global peak.
  int local_max_count = 0;
};

struct PeakReport {
  ComponentPeak u;
  std::vector<ComponentPeak> v;
  double separation = 0.0;  // |P - Q1|
  double colocation = 0.0;  // |P - Q1| / eps
  double boundary_distance_u = 0.0;
  double boundary_distance_v = 0.0;
};

ComponentPeak find_component_peak(const ScalarField& f);
PeakReport find_peaks(const State& s, const ModelSpec& model);

// Multilinear interpolation on the bounding box; boundary and masked nodes
// read 0. Throws OutOfDomain outside the bounding box.
double interpolate(const ScalarField& f, const Point& x);

struct RadialShell {
  double radius = 0.0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct RadialReport {
  // max over shells of (max - min) / peak
  double anisotropy = 0.0;
  // largest outward increase of consecutive shell means, over the peak
  double monotone_violation = 0.0;
  // shells whose mean exceeds the previous one by more than noise_floor * peak
  int violation_count = 0;
  std::vector<RadialShell> profile;
};

// Samples f on spheres of radius k*h about center (h = largest grid spacing)
// by multilinear interpolation. Throws OutOfDomain if center is outside.
RadialReport radial_diagnostics(const ScalarField& f, const Point& center, double noise_floor = 1e-8);

struct DecayFit {
  double kappa = 0.0;
  double window_inner = 0.0;
  double window_outer = 0.0;
  std::size_t window_nodes = 0;
  double fit_residual = 0.0;  // rms of log f about the fitted line
  double reference_rate = 0.0;
  bool passes = false;
};

inline constexpr double kDecaySigma = 0.01;

// Least-squares slope of log f against |x - peak| over nodes at least
// 3 eps/sqrt(lambda) from the peak and 5h from the boundary. Passes when
// kappa >= sqrt(lambda) (1 - sigma) / eps. Throws WindowTooSmall below 10 nodes.
DecayFit decay_fit(const ScalarField& f, const Point& peak, const ModelSpec& model, double lambda);

struct ProfileGrid {
  int dim = 1;
  double half_extent = 3.0;
  int samples_per_axis = 61;
};

struct RescaledProfile {
  Point center{};
  std::vector<Point> y;
  std::vector<double> values;
};

// Samples f(center + eps * y) on a tensor grid of y in [-Y, Y]^dim.
RescaledProfile rescale_profile(const ScalarField& f, const Point& center, double eps, const ProfileGrid& ygrid);

struct ScalingRow {
  double epsilon = 0.0;
  double c = 0.0;
  double c_scaled = 0.0;  // c / eps^N
  bool converged = false;
  int nodes_per_axis = 0;
  double spacing = 0.0;
  double separation = 0.0;  // |P - Q1|, NaN when peaks are unavailable
  double seconds = 0.0;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  double spread = 0.0;  // (max - min) / min of c / eps^N
  bool all_converged = true;
};

// Solves the template on its fixed domain for each eps with spacing
// h = h_over_eps * eps.
ScalingTable scaling_table(const ModelSpec& model_template, const std::vector<double>& eps_list, double h_over_eps,
                           const SolverConfig& cfg, std::size_t threads = 0);

}  // namespace sbs
