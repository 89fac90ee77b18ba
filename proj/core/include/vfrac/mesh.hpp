#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

namespace vfrac {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag { dirichlet, neumann_loaded, neumann_free };

std::string_view to_string(BoundaryTag t) noexcept;
BoundaryTag boundary_tag_from_string(std::string_view s);

enum class Side { bottom, right, top, left };

/// Tag applied to each side of a rectangle.
struct TagRule {
  BoundaryTag bottom = BoundaryTag::neumann_free;
  BoundaryTag right = BoundaryTag::neumann_free;
  BoundaryTag top = BoundaryTag::neumann_free;
  BoundaryTag left = BoundaryTag::neumann_free;

  static TagRule all(BoundaryTag t) { return {t, t, t, t}; }
  BoundaryTag operator[](Side s) const noexcept;
};

struct BoundaryEdge {
  std::array<int, 2> nodes;
  BoundaryTag tag;
  Side side;
};

using Triangle = std::array<int, 3>;

/// Counter-clockwise P1 triangulation with tagged boundary edges.
struct TriMesh {
  std::vector<Point> nodes;
  std::vector<Triangle> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  // Structured-grid metadata (cells per side, lower-left corner, cell sizes).
  int nx = 0;
  int ny = 0;
  Point origin;
  double hx = 0.0;
  double hy = 0.0;

  std::size_t node_count() const noexcept { return nodes.size(); }
  std::size_t triangle_count() const noexcept { return triangles.size(); }
  double width() const noexcept { return nx * hx; }
  double height() const noexcept { return ny * hy; }
};

/// Structured rectangle (origin, origin + (width, height)) with cells of size ~h.
/// Each cell is split along one diagonal; the diagonal direction alternates by row.
TriMesh build_rect_mesh(double width, double height, double h, const TagRule& tag_rule,
                        Point origin = {});

/// Signed area of triangle e (positive for CCW).
double signed_area(const TriMesh& mesh, std::size_t e) noexcept;

/// Per-element P1 geometry: area and gradients of the three barycentric basis functions.
struct ElementGeometry {
  double area;
  std::array<double, 3> dx;  ///< d(phi_i)/dx
  std::array<double, 3> dy;  ///< d(phi_i)/dy
};

ElementGeometry element_geometry(const TriMesh& mesh, std::size_t e) noexcept;
std::vector<ElementGeometry> element_geometries(const TriMesh& mesh);

/// Row-sum lumped mass (area / 3 per incident triangle).
std::vector<double> lumped_mass(const TriMesh& mesh);

/// Geometric selector for node_subset.
struct Region {
  enum class Kind { horizontal_line, vertical_line, box };
  Kind kind;
  double a = 0.0;  ///< y for horizontal_line, x for vertical_line, xmin for box
  double b = 0.0;  ///< xmax for box
  double c = 0.0;  ///< ymin for box
  double d = 0.0;  ///< ymax for box
  double tol = 1e-9;

  static Region horizontal_line(double y, double tol = 1e-9) { return {Kind::horizontal_line, y, 0, 0, 0, tol}; }
  static Region vertical_line(double x, double tol = 1e-9) { return {Kind::vertical_line, x, 0, 0, 0, tol}; }
  static Region box(double xmin, double xmax, double ymin, double ymax, double tol = 1e-9) {
    return {Kind::box, xmin, xmax, ymin, ymax, tol};
  }

  bool contains(const Point& p) const noexcept;
};

/// Sorted indices of nodes inside `region`.
std::vector<int> node_subset(const TriMesh& mesh, const Region& region);
std::vector<int> node_subset(const TriMesh& mesh, const std::function<bool(const Point&)>& predicate);

/// Sorted, deduplicated nodes of boundary edges carrying `tag`.
std::vector<int> boundary_nodes(const TriMesh& mesh, BoundaryTag tag);

/// Throws std::logic_error when a TriMesh invariant is broken.
void validate_mesh(const TriMesh& mesh);

}  // namespace vfrac
