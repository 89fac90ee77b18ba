#include "vfrac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "vfrac/error.hpp"

namespace vfrac {

std::string_view to_string(BoundaryTag t) noexcept {
  switch (t) {
    case BoundaryTag::dirichlet: return "dirichlet";
    case BoundaryTag::neumann_loaded: return "neumann_loaded";
    case BoundaryTag::neumann_free: return "neumann_free";
  }
  return "neumann_free";
}

BoundaryTag boundary_tag_from_string(std::string_view s) {
  if (s == "dirichlet") return BoundaryTag::dirichlet;
  if (s == "neumann_loaded") return BoundaryTag::neumann_loaded;
  if (s == "neumann_free") return BoundaryTag::neumann_free;
  throw ConfigError("unknown boundary tag '" + std::string(s) + "'");
}

BoundaryTag TagRule::operator[](Side s) const noexcept {
  switch (s) {
    case Side::bottom: return bottom;
    case Side::right: return right;
    case Side::top: return top;
    case Side::left: return left;
  }
  return bottom;
}

namespace {

int cells_along(double length, double h, const char* what) {
  if (!(length > 0.0) || !(h > 0.0)) throw ConfigError("mesh: width, height and h must be > 0");
  if (h > length * (1.0 + 1e-12)) {
    throw ConfigError(std::string("mesh: h larger than the ") + what);
  }
  const double ratio = length / h;
  const long n = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-6 * ratio) {
    throw ConfigError(std::string("mesh: h does not divide the ") + what);
  }
  return static_cast<int>(n);
}

}  // namespace

TriMesh build_rect_mesh(double width, double height, double h, const TagRule& tag_rule, Point origin) {
  TriMesh m;
  m.nx = cells_along(width, h, "width");
  m.ny = cells_along(height, h, "height");
  m.origin = origin;
  m.hx = width / m.nx;
  m.hy = height / m.ny;

  const int nx = m.nx;
  const int ny = m.ny;
  m.nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    // Pin the last row/column to the exact extent.
    const double y = (j == ny) ? origin.y + height : origin.y + j * m.hy;
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? origin.x + width : origin.x + i * m.hx;
      m.nodes.push_back({x, y});
    }
  }

  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  m.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = id(i, j);
      const int n10 = id(i + 1, j);
      const int n01 = id(i, j + 1);
      const int n11 = id(i + 1, j + 1);
      if (j % 2 == 0) {
        m.triangles.push_back({n00, n10, n11});
        m.triangles.push_back({n00, n11, n01});
      } else {
        m.triangles.push_back({n00, n10, n01});
        m.triangles.push_back({n10, n11, n01});
      }
    }
  }

  // Boundary edges, counter-clockwise around the rectangle.
  for (int i = 0; i < nx; ++i) m.boundary_edges.push_back({{id(i, 0), id(i + 1, 0)}, tag_rule.bottom, Side::bottom});
  for (int j = 0; j < ny; ++j) m.boundary_edges.push_back({{id(nx, j), id(nx, j + 1)}, tag_rule.right, Side::right});
  for (int i = nx; i > 0; --i) m.boundary_edges.push_back({{id(i, ny), id(i - 1, ny)}, tag_rule.top, Side::top});
  for (int j = ny; j > 0; --j) m.boundary_edges.push_back({{id(0, j), id(0, j - 1)}, tag_rule.left, Side::left});
  return m;
}

double signed_area(const TriMesh& mesh, std::size_t e) noexcept {
  const auto& t = mesh.triangles[e];
  const Point& a = mesh.nodes[static_cast<std::size_t>(t[0])];
  const Point& b = mesh.nodes[static_cast<std::size_t>(t[1])];
  const Point& c = mesh.nodes[static_cast<std::size_t>(t[2])];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

ElementGeometry element_geometry(const TriMesh& mesh, std::size_t e) noexcept {
  const auto& t = mesh.triangles[e];
  const Point& p0 = mesh.nodes[static_cast<std::size_t>(t[0])];
  const Point& p1 = mesh.nodes[static_cast<std::size_t>(t[1])];
  const Point& p2 = mesh.nodes[static_cast<std::size_t>(t[2])];
  const double area = 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
  const double inv2a = 1.0 / (2.0 * area);
  ElementGeometry g;
  g.area = area;
  g.dx = {(p1.y - p2.y) * inv2a, (p2.y - p0.y) * inv2a, (p0.y - p1.y) * inv2a};
  g.dy = {(p2.x - p1.x) * inv2a, (p0.x - p2.x) * inv2a, (p1.x - p0.x) * inv2a};
  return g;
}

std::vector<ElementGeometry> element_geometries(const TriMesh& mesh) {
  std::vector<ElementGeometry> out;
  out.reserve(mesh.triangle_count());
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) out.push_back(element_geometry(mesh, e));
  return out;
}

std::vector<double> lumped_mass(const TriMesh& mesh) {
  std::vector<double> m(mesh.node_count(), 0.0);
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const double third = signed_area(mesh, e) / 3.0;
    for (int n : mesh.triangles[e]) m[static_cast<std::size_t>(n)] += third;
  }
  return m;
}

bool Region::contains(const Point& p) const noexcept {
  switch (kind) {
    case Kind::horizontal_line: return std::abs(p.y - a) <= tol;
    case Kind::vertical_line: return std::abs(p.x - a) <= tol;
    case Kind::box: return p.x >= a - tol && p.x <= b + tol && p.y >= c - tol && p.y <= d + tol;
  }
  return false;
}

std::vector<int> node_subset(const TriMesh& mesh, const Region& region) {
  return node_subset(mesh, [&region](const Point& p) { return region.contains(p); });
}

std::vector<int> node_subset(const TriMesh& mesh, const std::function<bool(const Point&)>& predicate) {
  std::vector<int> out;
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    if (predicate(mesh.nodes[i])) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> boundary_nodes(const TriMesh& mesh, BoundaryTag tag) {
  std::vector<int> out;
  for (const auto& be : mesh.boundary_edges) {
    if (be.tag == tag) {
      out.push_back(be.nodes[0]);
      out.push_back(be.nodes[1]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate_mesh(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.node_count());
  std::set<std::array<int, 3>> seen;
  std::map<std::pair<int, int>, int> edge_count;
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    auto t = mesh.triangles[e];
    for (int v : t) {
      if (v < 0 || v >= n) throw std::logic_error("mesh: node index out of range");
    }
    if (!(signed_area(mesh, e) > 0.0)) throw std::logic_error("mesh: non-positive triangle area");
    auto key = t;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) throw std::logic_error("mesh: duplicate triangle");
    for (int k = 0; k < 3; ++k) {
      int a = t[static_cast<std::size_t>(k)];
      int b = t[static_cast<std::size_t>((k + 1) % 3)];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  std::set<std::pair<int, int>> boundary;
  for (const auto& [edge, count] : edge_count) {
    if (count == 1) boundary.insert(edge);
    if (count > 2) throw std::logic_error("mesh: edge shared by more than two triangles");
  }
  std::set<std::pair<int, int>> tagged;
  for (const auto& be : mesh.boundary_edges) {
    auto key = std::make_pair(std::min(be.nodes[0], be.nodes[1]), std::max(be.nodes[0], be.nodes[1]));
    if (!tagged.insert(key).second) throw std::logic_error("mesh: boundary edge tagged twice");
  }
  if (tagged != boundary) throw std::logic_error("mesh: tagged edges do not match the topological boundary");
}

}  // namespace vfrac
