#include "hdgflow/mesh.hpp"
#include "hdgflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace hdgflow {

double Mesh::triangle_area(int k) const {
  const auto& t = triangles[k];
  const auto& p0 = vertices[t[0]];
  const auto& p1 = vertices[t[1]];
  const auto& p2 = vertices[t[2]];
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]));
}

double Mesh::total_area() const {
  double a = 0;
  for (int k = 0; k < num_triangles(); ++k) a += triangle_area(k);
  return a;
}

Mesh generate_structured(int nx, int ny, const BBox& bbox) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("generate_structured: nx and ny must be >= 1");
  if (!(bbox.xmax > bbox.xmin) || !(bbox.ymax > bbox.ymin))
    throw std::invalid_argument("generate_structured: degenerate bounding box");

  Mesh m;
  m.bbox = bbox;
  m.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  const double hx = (bbox.xmax - bbox.xmin) / nx;
  const double hy = (bbox.ymax - bbox.ymin) / ny;
  for (int iy = 0; iy <= ny; ++iy)
    for (int ix = 0; ix <= nx; ++ix)
      m.vertices.push_back({bbox.xmin + ix * hx, bbox.ymin + iy * hy});

  auto vid = [nx](int ix, int iy) { return iy * (nx + 1) + ix; };
  m.triangles.reserve(static_cast<size_t>(2) * nx * ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const int a = vid(ix, iy), b = vid(ix + 1, iy);
      const int c = vid(ix + 1, iy + 1), d = vid(ix, iy + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  return m;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh fine;
  fine.bbox = mesh.bbox;
  fine.vertices = mesh.vertices;
  fine.triangles.reserve(static_cast<size_t>(4) * mesh.num_triangles());

  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int u, int v) {
    auto key = std::minmax(u, v);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const auto& pu = mesh.vertices[u];
    const auto& pv = mesh.vertices[v];
    fine.vertices.push_back({0.5 * (pu[0] + pv[0]), 0.5 * (pu[1] + pv[1])});
    const int id = fine.num_vertices() - 1;
    midpoint.emplace(key, id);
    return id;
  };

  for (const auto& t : mesh.triangles) {
    const int m01 = mid(t[0], t[1]);
    const int m12 = mid(t[1], t[2]);
    const int m20 = mid(t[2], t[0]);
    fine.triangles.push_back({t[0], m01, m20});
    fine.triangles.push_back({t[1], m12, m01});
    fine.triangles.push_back({t[2], m20, m12});
    fine.triangles.push_back({m01, m12, m20});
  }
  return fine;
}

Skeleton build_skeleton(const Mesh& mesh) {
  for (int k = 0; k < mesh.num_triangles(); ++k)
    if (!(mesh.triangle_area(k) > 0))
      throw topology_error("build_skeleton: triangle " + std::to_string(k) +
                           " has non-positive area");

  Skeleton skel;
  skel.element_edges.assign(mesh.num_triangles(), {-1, -1, -1});

  // Map undirected vertex pair -> edge index; every shared face must appear
  // exactly twice, boundary faces exactly once.
  std::map<std::pair<int, int>, int> seen;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const auto& t = mesh.triangles[k];
    for (int loc = 0; loc < 3; ++loc) {
      const int u = t[loc], v = t[(loc + 1) % 3];
      auto key = std::minmax(u, v);
      auto it = seen.find(key);
      if (it == seen.end()) {
        Skeleton::Edge e;
        e.a = u;
        e.b = v;
        e.left = k;
        e.left_local = loc;
        skel.edges.push_back(e);
        seen.emplace(key, skel.num_edges() - 1);
        skel.element_edges[k][loc] = skel.num_edges() - 1;
      } else {
        Skeleton::Edge& e = skel.edges[it->second];
        if (e.right >= 0)
          throw topology_error("build_skeleton: edge (" + std::to_string(key.first) + "," +
                               std::to_string(key.second) + ") shared by >2 elements");
        if (!(e.a == v && e.b == u))
          throw topology_error("build_skeleton: inconsistent orientation on edge (" +
                               std::to_string(key.first) + "," + std::to_string(key.second) + ")");
        // Elements are visited in increasing index order, so the first visitor
        // (the lower index) already owns the left slot.
        e.right = k;
        e.right_local = loc;
        skel.element_edges[k][loc] = it->second;
      }
    }
  }

  for (auto& e : skel.edges) {
    const auto& pa = mesh.vertices[e.a];
    const auto& pb = mesh.vertices[e.b];
    const double dx = pb[0] - pa[0], dy = pb[1] - pa[1];
    e.length = std::hypot(dx, dy);
    if (!(e.length > 0)) throw topology_error("build_skeleton: zero-length edge");
    // ccw element boundary: outward normal is the edge direction rotated by -90 deg
    e.normal = {dy / e.length, -dx / e.length};
    (e.interior() ? skel.num_interior : skel.num_boundary) += 1;
  }
  return skel;
}

Mesh read_mesh(std::istream& in) {
  int nv = -1, nt = -1;
  if (!(in >> nv >> nt) || nv < 3 || nt < 1)
    throw io_error("read_mesh: bad header (expected `nv nt`)");
  Mesh m;
  m.vertices.resize(nv);
  for (auto& v : m.vertices)
    if (!(in >> v[0] >> v[1])) throw io_error("read_mesh: truncated vertex list");
  m.triangles.resize(nt);
  for (auto& t : m.triangles) {
    if (!(in >> t[0] >> t[1] >> t[2])) throw io_error("read_mesh: truncated triangle list");
    for (int i : t)
      if (i < 0 || i >= nv) throw io_error("read_mesh: vertex index out of range");
  }
  m.bbox.xmin = m.bbox.xmax = m.vertices[0][0];
  m.bbox.ymin = m.bbox.ymax = m.vertices[0][1];
  for (const auto& v : m.vertices) {
    m.bbox.xmin = std::min(m.bbox.xmin, v[0]);
    m.bbox.xmax = std::max(m.bbox.xmax, v[0]);
    m.bbox.ymin = std::min(m.bbox.ymin, v[1]);
    m.bbox.ymax = std::max(m.bbox.ymax, v[1]);
  }
  return m;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("read_mesh_file: cannot open " + path);
  return read_mesh(in);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  out.precision(17);
  for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("write_mesh_file: cannot open " + path);
  write_mesh(mesh, out);
  if (!out) throw io_error("write_mesh_file: write failed for " + path);
}

} // namespace hdgflow
