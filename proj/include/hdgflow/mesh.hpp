#ifndef HDGFLOW_MESH_HPP
#define HDGFLOW_MESH_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace hdgflow {

struct BBox {
  double xmin = 0, ymin = 0, xmax = 1, ymax = 1;
};

// Conforming triangulation of a rectangular domain. Immutable after construction;
// all triangles are stored counterclockwise with positive signed area.
struct Mesh {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;
  BBox bbox;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  double triangle_area(int k) const;
  double total_area() const;
};

// Edge set of a mesh. Each edge is directed (a -> b) so that it runs
// counterclockwise around its left element; the stored unit normal points out
// of the left element. Boundary edges have right == -1.
struct Skeleton {
  struct Edge {
    int a = -1, b = -1;          // vertex indices, directed ccw around `left`
    int left = -1, right = -1;   // adjacent elements; right == -1 on the boundary
    int left_local = -1;         // local edge index (0..2) within `left`
    int right_local = -1;        // local edge index within `right`, -1 on boundary
    std::array<double, 2> normal{0, 0}; // unit, out of `left`
    double length = 0;
    bool interior() const { return right >= 0; }
  };

  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> element_edges; // per element, edge index per local edge
  int num_interior = 0;
  int num_boundary = 0;

  int num_edges() const { return static_cast<int>(edges.size()); }
};

// nx-by-ny grid of cells on bbox, each split along the bottom-left -> top-right
// diagonal into two ccw triangles. Throws std::invalid_argument for nx,ny < 1.
Mesh generate_structured(int nx, int ny, const BBox& bbox);

// Splits every triangle into 4 similar children via edge midpoints. Conforming
// by construction; total area is preserved exactly up to roundoff.
Mesh refine_uniform(const Mesh& mesh);

// Local edge i of triangle (v0,v1,v2) joins vertex i and vertex (i+1)%3.
// Left/right assignment is deterministic: the lower element index is `left`.
// Throws topology_error when an edge is shared by more than two elements or
// a boundary edge appears with inconsistent orientation.
Skeleton build_skeleton(const Mesh& mesh);

// Plain-text format: header `nv nt`, nv lines `x y`, nt lines `i0 i1 i2` (0-based).
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh_file(const Mesh& mesh, const std::string& path);

} // namespace hdgflow

#endif
