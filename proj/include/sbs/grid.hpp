#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace sbs {

// Points always carry three coordinates; axes beyond the grid dimension are 0.
using Point = std::array<double, 3>;

double distance(const Point& a, const Point& b);

struct DomainSpec {
  enum class Kind { Box, Ball };

  Kind kind = Kind::Box;
  int dim = 1;
  // Box: per-axis half-widths. Ball: extents[0] is the radius.
  std::array<double, 3> extents{1.0, 1.0, 1.0};
  Point center{0.0, 0.0, 0.0};

  static DomainSpec box(int dim, std::array<double, 3> half_widths, Point center = {});
  static DomainSpec box(int dim, double half_width, Point center = {});
  static DomainSpec ball(int dim, double radius, Point center = {});

  void validate() const;
  bool contains(const Point& x) const;
  // Distance from x to the boundary, computed from the exact geometry.
  double boundary_distance(const Point& x) const;
  // Largest distance to the boundary attained in the domain.
  double inradius() const;
  // Same shape scaled about its center.
  DomainSpec scaled(double factor) const;

  bool operator==(const DomainSpec&) const = default;
};

class Grid {
 public:
  int dim() const { return domain_.dim; }
  const DomainSpec& domain() const { return domain_; }
  // Node counts per axis including the boundary layer; unused axes are 1.
  const std::array<std::uint32_t, 3>& nodes() const { return nodes_; }
  const std::array<double, 3>& spacing() const { return spacing_; }
  // Product of the spacings over the active axes.
  double cell_volume() const { return cell_volume_; }

  std::size_t interior_count() const { return interior_to_box_.size(); }
  std::size_t box_count() const { return box_to_interior_.size(); }

  Point point(std::size_t interior) const { return box_point(interior_to_box_[interior]); }
  Point box_point(std::size_t box) const;
  std::array<std::uint32_t, 3> box_multi_index(std::size_t box) const;
  std::size_t box_linear_index(const std::array<std::uint32_t, 3>& idx) const;
  // Interior index of a bounding-box node, or -1 for boundary/masked nodes.
  std::int64_t interior_of_box(std::size_t box) const { return box_to_interior_[box]; }
  std::size_t box_of_interior(std::size_t interior) const { return interior_to_box_[interior]; }

  // Axis neighbors of an interior node: entries [2k] (minus) and [2k+1] (plus)
  // for axis k; -1 where the neighbor is outside the interior.
  std::span<const std::int32_t> neighbors(std::size_t interior) const {
    return {neighbors_.data() + interior * 2 * dim(), static_cast<std::size_t>(2 * dim())};
  }

  bool same_as(const Grid& other) const;

 private:
  friend std::shared_ptr<const Grid> build_grid(const DomainSpec&, int);

  DomainSpec domain_;
  std::array<std::uint32_t, 3> nodes_{1, 1, 1};
  std::array<double, 3> spacing_{0.0, 0.0, 0.0};
  std::array<double, 3> origin_{0.0, 0.0, 0.0};
  double cell_volume_ = 0.0;
  std::vector<std::int64_t> box_to_interior_;
  std::vector<std::size_t> interior_to_box_;
  std::vector<std::int32_t> neighbors_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Uniform grid with nodes_per_axis nodes along each active axis, the outer
// layer being the Dirichlet boundary. Ball domains keep nodes strictly inside.
GridPtr build_grid(const DomainSpec& domain, int nodes_per_axis);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid);
  ScalarField(GridPtr grid, std::vector<double> values);

  static ScalarField from_function(GridPtr grid, const std::function<double(const Point&)>& fn);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool all_finite() const;
  double max_value() const;
  double min_value() const;

  ScalarField& operator*=(double c);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

// Throws GridMismatch unless f lives on g.
void require_same_grid(const Grid& g, const ScalarField& f);
void require_same_grid(const ScalarField& a, const ScalarField& b);

ScalarField laplacian_apply(const Grid& g, const ScalarField& f);
// Rectangle rule over interior nodes.
double integrate(const Grid& g, const ScalarField& f);
// Integral of the pointwise product, same quadrature as integrate().
double integrate_product(const Grid& g, const ScalarField& a, const ScalarField& b);
// Discrete Dirichlet form; equals -integrate(f * laplacian_apply(f)).
double grad_norm_sq(const Grid& g, const ScalarField& f);

// SBSF1 field dumps: the full bounding box, boundary and masked nodes as 0.
struct FieldImage {
  int dim = 1;
  std::array<std::uint32_t, 3> nodes{1, 1, 1};
  std::array<double, 3> spacing{0.0, 0.0, 0.0};
  std::vector<double> values;
};

FieldImage to_image(const ScalarField& f);
// Maps a bounding-box image back onto g; shapes must agree.
ScalarField from_image(GridPtr g, const FieldImage& image);
void write_sbsf(const std::string& path, const ScalarField& f);
std::vector<unsigned char> encode_sbsf(const FieldImage& image);
FieldImage decode_sbsf(std::span<const unsigned char> bytes);
FieldImage read_sbsf(const std::string& path);

}  // namespace sbs
