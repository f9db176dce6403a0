#include "sbs/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "sbs/error.hpp"

namespace sbs {

namespace {

constexpr char kMagic[5] = {'S', 'B', 'S', 'F', '1'};
constexpr std::size_t kHeaderBytes = 5 + 1 + 3 * 4 + 3 * 8;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::vector<unsigned char>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return std::bit_cast<double>(v);
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NotProjectable: return "NotProjectable";
    case ErrorCode::InitFailed: return "InitFailed";
    case ErrorCode::NoBoxConvergence: return "NoBoxConvergence";
    case ErrorCode::TrivialState: return "TrivialState";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

double distance(const Point& a, const Point& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// --- DomainSpec -------------------------------------------------------------

DomainSpec DomainSpec::box(int dim, std::array<double, 3> half_widths, Point center) {
  DomainSpec d;
  d.kind = Kind::Box;
  d.dim = dim;
  d.extents = half_widths;
  d.center = center;
  for (int k = dim; k < 3; ++k) {
    d.extents[k] = 0.0;
    d.center[k] = 0.0;
  }
  return d;
}

DomainSpec DomainSpec::box(int dim, double half_width, Point center) {
  return box(dim, {half_width, half_width, half_width}, center);
}

DomainSpec DomainSpec::ball(int dim, double radius, Point center) {
  DomainSpec d;
  d.kind = Kind::Ball;
  d.dim = dim;
  d.extents = {radius, 0.0, 0.0};
  d.center = center;
  for (int k = dim; k < 3; ++k) d.center[k] = 0.0;
  return d;
}

void DomainSpec::validate() const {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::InvalidArgument, "domain dimension must be 1, 2 or 3");
  const int active = kind == Kind::Ball ? 1 : dim;
  for (int k = 0; k < active; ++k) {
    if (!(extents[k] > 0.0) || !std::isfinite(extents[k]))
      throw Error(ErrorCode::InvalidArgument, "domain extents must be strictly positive");
  }
  for (int k = 0; k < dim; ++k) {
    if (!std::isfinite(center[k])) throw Error(ErrorCode::InvalidArgument, "domain center must be finite");
  }
}

bool DomainSpec::contains(const Point& x) const {
  if (kind == Kind::Ball) return distance(x, center) <= extents[0];
  for (int k = 0; k < dim; ++k) {
    if (std::abs(x[k] - center[k]) > extents[k]) return false;
  }
  return true;
}

double DomainSpec::boundary_distance(const Point& x) const {
  if (kind == Kind::Ball) return std::max(0.0, extents[0] - distance(x, center));
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim; ++k) d = std::min(d, extents[k] - std::abs(x[k] - center[k]));
  return std::max(0.0, d);
}

double DomainSpec::inradius() const {
  if (kind == Kind::Ball) return extents[0];
  return *std::min_element(extents.begin(), extents.begin() + dim);
}

DomainSpec DomainSpec::scaled(double factor) const {
  DomainSpec d = *this;
  for (auto& e : d.extents) e *= factor;
  return d;
}

// --- Grid -------------------------------------------------------------------

Point Grid::box_point(std::size_t box) const {
  const auto idx = box_multi_index(box);
  Point p{0.0, 0.0, 0.0};
  for (int k = 0; k < dim(); ++k) p[k] = origin_[k] + idx[k] * spacing_[k];
  return p;
}

std::array<std::uint32_t, 3> Grid::box_multi_index(std::size_t box) const {
  std::array<std::uint32_t, 3> idx{0, 0, 0};
  idx[2] = static_cast<std::uint32_t>(box % nodes_[2]);
  box /= nodes_[2];
  idx[1] = static_cast<std::uint32_t>(box % nodes_[1]);
  idx[0] = static_cast<std::uint32_t>(box / nodes_[1]);
  return idx;
}

std::size_t Grid::box_linear_index(const std::array<std::uint32_t, 3>& idx) const {
  return (static_cast<std::size_t>(idx[0]) * nodes_[1] + idx[1]) * nodes_[2] + idx[2];
}

bool Grid::same_as(const Grid& other) const {
  return this == &other || (domain_ == other.domain_ && nodes_ == other.nodes_ && spacing_ == other.spacing_);
}

GridPtr build_grid(const DomainSpec& domain, int nodes_per_axis) {
  domain.validate();
  if (nodes_per_axis < 8) throw Error(ErrorCode::InvalidArgument, "nodes_per_axis must be at least 8");

  auto g = std::shared_ptr<Grid>(new Grid());
  g->domain_ = domain;
  const int n = domain.dim;
  g->cell_volume_ = 1.0;
  for (int k = 0; k < n; ++k) {
    const double half = domain.kind == DomainSpec::Kind::Ball ? domain.extents[0] : domain.extents[k];
    g->nodes_[k] = static_cast<std::uint32_t>(nodes_per_axis);
    g->spacing_[k] = 2.0 * half / (nodes_per_axis - 1);
    g->origin_[k] = domain.center[k] - half;
    g->cell_volume_ *= g->spacing_[k];
  }

  const std::size_t total = static_cast<std::size_t>(g->nodes_[0]) * g->nodes_[1] * g->nodes_[2];
  g->box_to_interior_.assign(total, -1);
  for (std::size_t b = 0; b < total; ++b) {
    const auto idx = g->box_multi_index(b);
    bool inside = true;
    for (int k = 0; k < n; ++k) {
      if (idx[k] == 0 || idx[k] + 1 == g->nodes_[k]) inside = false;
    }
    if (inside && domain.kind == DomainSpec::Kind::Ball) {
      inside = distance(g->box_point(b), domain.center) < domain.extents[0];
    }
    if (inside) {
      g->box_to_interior_[b] = static_cast<std::int64_t>(g->interior_to_box_.size());
      g->interior_to_box_.push_back(b);
    }
  }

  g->neighbors_.resize(g->interior_to_box_.size() * 2 * n);
  std::array<std::size_t, 3> stride{static_cast<std::size_t>(g->nodes_[1]) * g->nodes_[2], g->nodes_[2], 1};
  for (std::size_t i = 0; i < g->interior_to_box_.size(); ++i) {
    const std::size_t b = g->interior_to_box_[i];
    for (int k = 0; k < n; ++k) {
      // Interior nodes never sit on the box edge, so b +/- stride stays in range.
      g->neighbors_[i * 2 * n + 2 * k] = static_cast<std::int32_t>(g->box_to_interior_[b - stride[k]]);
      g->neighbors_[i * 2 * n + 2 * k + 1] = static_cast<std::int32_t>(g->box_to_interior_[b + stride[k]]);
    }
  }
  return g;
}

// --- ScalarField ------------------------------------------------------------

ScalarField::ScalarField(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw Error(ErrorCode::InvalidArgument, "field requires a grid");
  values_.assign(grid_->interior_count(), 0.0);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(ErrorCode::InvalidArgument, "field requires a grid");
  if (values_.size() != grid_->interior_count())
    throw Error(ErrorCode::GridMismatch, "field length does not match the grid interior");
  if (!all_finite()) throw Error(ErrorCode::InvalidArgument, "field values must be finite");
}

ScalarField ScalarField::from_function(GridPtr grid, const std::function<double(const Point&)>& fn) {
  ScalarField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f.values_[i] = fn(grid->point(i));
  if (!f.all_finite()) throw Error(ErrorCode::InvalidArgument, "field values must be finite");
  return f;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double ScalarField::min_value() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

ScalarField& ScalarField::operator*=(double c) {
  for (auto& v : values_) v *= c;
  return *this;
}

void require_same_grid(const Grid& g, const ScalarField& f) {
  if (!f.grid() || !f.grid()->same_as(g)) throw Error(ErrorCode::GridMismatch, "field does not live on this grid");
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!a.grid() || !b.grid() || !a.grid()->same_as(*b.grid()))
    throw Error(ErrorCode::GridMismatch, "fields live on different grids");
}

// --- discrete operators -----------------------------------------------------

ScalarField laplacian_apply(const Grid& g, const ScalarField& f) {
  require_same_grid(g, f);
  const int n = g.dim();
  std::array<double, 3> inv_h2{0.0, 0.0, 0.0};
  double diag = 0.0;
  for (int k = 0; k < n; ++k) {
    inv_h2[k] = 1.0 / (g.spacing()[k] * g.spacing()[k]);
    diag += 2.0 * inv_h2[k];
  }
  ScalarField out(f.grid());
  const auto in = f.values();
  auto res = out.values();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto nb = g.neighbors(i);
    double acc = -diag * in[i];
    for (int k = 0; k < n; ++k) {
      const double lo = nb[2 * k] >= 0 ? in[nb[2 * k]] : 0.0;
      const double hi = nb[2 * k + 1] >= 0 ? in[nb[2 * k + 1]] : 0.0;
      acc += (lo + hi) * inv_h2[k];
    }
    res[i] = acc;
  }
  return out;
}

double integrate(const Grid& g, const ScalarField& f) {
  require_same_grid(g, f);
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum * g.cell_volume();
}

double integrate_product(const Grid& g, const ScalarField& a, const ScalarField& b) {
  require_same_grid(g, a);
  require_same_grid(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum * g.cell_volume();
}

double grad_norm_sq(const Grid& g, const ScalarField& f) {
  require_same_grid(g, f);
  const int n = g.dim();
  const auto in = f.values();
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    double axis_sum = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      const auto nb = g.neighbors(i);
      // Each edge is visited once from its minus end; edges to the boundary
      // on the minus side are visited from the interior node.
      const double hi = nb[2 * k + 1] >= 0 ? in[nb[2 * k + 1]] : 0.0;
      const double d = hi - in[i];
      axis_sum += d * d;
      if (nb[2 * k] < 0) axis_sum += in[i] * in[i];
    }
    total += axis_sum / (g.spacing()[k] * g.spacing()[k]);
  }
  return total * g.cell_volume();
}

// --- SBSF1 ------------------------------------------------------------------

FieldImage to_image(const ScalarField& f) {
  const Grid& g = *f.grid();
  FieldImage img;
  img.dim = g.dim();
  img.nodes = g.nodes();
  img.spacing = g.spacing();
  img.values.assign(g.box_count(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) img.values[g.box_of_interior(i)] = f[i];
  return img;
}

ScalarField from_image(GridPtr g, const FieldImage& image) {
  if (image.dim != g->dim() || image.nodes != g->nodes() || image.values.size() != g->box_count())
    throw Error(ErrorCode::GridMismatch, "field image shape does not match the grid");
  for (int k = 0; k < g->dim(); ++k) {
    if (std::abs(image.spacing[k] - g->spacing()[k]) > 1e-12 * g->spacing()[k])
      throw Error(ErrorCode::GridMismatch, "field image spacing does not match the grid");
  }
  std::vector<double> values(g->interior_count());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = image.values[g->box_of_interior(i)];
  return ScalarField(std::move(g), std::move(values));
}

std::vector<unsigned char> encode_sbsf(const FieldImage& image) {
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + 8 * image.values.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(static_cast<unsigned char>(image.dim));
  for (auto n : image.nodes) put_u32(out, n);
  for (auto h : image.spacing) put_f64(out, h);
  for (double v : image.values) put_f64(out, v);
  return out;
}

FieldImage decode_sbsf(std::span<const unsigned char> bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 5) != 0)
    throw Error(ErrorCode::Io, "not an SBSF1 field dump");
  FieldImage img;
  img.dim = bytes[5];
  if (img.dim < 1 || img.dim > 3) throw Error(ErrorCode::Io, "SBSF1 dimension out of range");
  const unsigned char* p = bytes.data() + 6;
  std::size_t count = 1;
  for (int k = 0; k < 3; ++k, p += 4) {
    img.nodes[k] = get_u32(p);
    count *= img.nodes[k];
  }
  for (int k = 0; k < 3; ++k, p += 8) img.spacing[k] = get_f64(p);
  if (bytes.size() != kHeaderBytes + 8 * count) throw Error(ErrorCode::Io, "SBSF1 payload size mismatch");
  img.values.resize(count);
  for (std::size_t i = 0; i < count; ++i, p += 8) img.values[i] = get_f64(p);
  return img;
}

void write_sbsf(const std::string& path, const ScalarField& f) {
  const auto bytes = encode_sbsf(to_image(f));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path);
}

FieldImage read_sbsf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_sbsf(bytes);
}

}  // namespace sbs
