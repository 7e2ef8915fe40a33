#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "plateau/geom/patch.hpp"
#include "plateau/numerics.hpp"

namespace plateau::geom {

using Face = std::array<int, 3>;

/// Oriented triangle mesh. `boundary_loops` are ordered so that each loop is
/// traversed in the direction its faces induce (positive w.r.t. the face
/// normals).
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::vector<std::vector<int>> boundary_loops;

  int edge_count() const;
  int euler_characteristic() const {
    return int(vertices.size()) - edge_count() + int(faces.size());
  }
  /// chi = 2 - 2g - b
  int genus() const { return (2 - euler_characteristic() - int(boundary_loops.size())) / 2; }
};

namespace detail {
inline std::pair<int, int> undirected(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }
}  // namespace detail

inline int TriMesh::edge_count() const {
  std::set<std::pair<int, int>> edges;
  for (const auto& f : faces)
    for (int k = 0; k < 3; ++k) edges.insert(detail::undirected(f[k], f[(k + 1) % 3]));
  return int(edges.size());
}

/// Validates orientable manifold-with-boundary connectivity and rebuilds the
/// boundary loops. Throws a topology error otherwise.
inline void build_topology(TriMesh& mesh) {
  const int nv = int(mesh.vertices.size());
  std::map<std::pair<int, int>, int> directed;
  std::map<std::pair<int, int>, int> undirected_count;
  for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const auto& f = mesh.faces[fi];
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3];
      if (a < 0 || a >= nv || b < 0 || b >= nv || a == b)
        throw Error(ErrorKind::topology, "face " + std::to_string(fi) + " has a bad index");
      if (++directed[{a, b}] > 1)
        throw Error(ErrorKind::topology, "inconsistent orientation or non-manifold edge (" +
                                             std::to_string(a) + "," + std::to_string(b) + ")");
      if (++undirected_count[detail::undirected(a, b)] > 2)
        throw Error(ErrorKind::topology, "edge shared by more than two faces");
    }
  }
  // Boundary half-edges: directed edges whose twin is absent.
  std::map<int, int> next;
  for (const auto& [e, c] : directed) {
    if (directed.count({e.second, e.first})) continue;
    if (next.count(e.first))
      throw Error(ErrorKind::topology,
                  "vertex " + std::to_string(e.first) + " has more than one boundary fan");
    next[e.first] = e.second;
  }
  mesh.boundary_loops.clear();
  std::set<int> seen;
  for (const auto& [start, unused] : next) {
    if (seen.count(start)) continue;
    std::vector<int> loop;
    int v = start;
    do {
      loop.push_back(v);
      seen.insert(v);
      auto it = next.find(v);
      if (it == next.end()) throw Error(ErrorKind::topology, "open boundary chain");
      v = it->second;
    } while (v != start);
    mesh.boundary_loops.push_back(std::move(loop));
  }
}

struct MeshOptions {
  bool periodic_v = false;  // identify v = v1 with v = v0 (seam)
};

/// Structured triangulation of the patch domain with nu x nv vertices (nv
/// distinct columns when periodic in v). Faces are oriented along Xu x Xv.
inline TriMesh mesh_from_patch(const ParamPatch& patch, int nu, int nv, MeshOptions opt = {}) {
  require(nu >= 2 && nv >= 2, "mesh_from_patch: grid counts must be >= 2");
  const Domain d = patch.domain();
  TriMesh m;
  const int cols = nv;
  const double hu = d.du() / (nu - 1);
  const double hv = opt.periodic_v ? d.dv() / nv : d.dv() / (nv - 1);
  m.vertices.reserve(std::size_t(nu) * cols);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < cols; ++j)
      m.vertices.push_back(patch.position(d.u0 + i * hu, d.v0 + j * hv));
  auto id = [&](int i, int j) { return i * cols + (j % cols); };
  const int vcells = opt.periodic_v ? nv : nv - 1;
  for (int i = 0; i + 1 < nu; ++i) {
    for (int j = 0; j < vcells; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), e = id(i, j + 1);
      const Vec3 &A = m.vertices[a], &B = m.vertices[b], &C = m.vertices[c], &E = m.vertices[e];
      const double scale = std::max((C - A).squaredNorm(), (E - B).squaredNorm());
      const double a1 = (B - A).cross(C - A).norm(), a2 = (C - A).cross(E - A).norm();
      if (!(std::min(a1, a2) > 1e-14 * scale))
        throw Error(ErrorKind::meshing, "degenerate cell " + std::to_string(i * vcells + j),
                    double(i * vcells + j));
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, e});
    }
  }
  build_topology(m);
  return m;
}

/// Flat disk of radius R: a center vertex plus `rings` concentric rings with
/// `segments * ring` vertices each; faces oriented with normal +z.
inline TriMesh disk_mesh(double radius, int rings, int segments = 6) {
  require(radius > 0 && rings >= 1 && segments >= 3, "disk_mesh: bad arguments");
  TriMesh m;
  m.vertices.push_back(Vec3::Zero());
  std::vector<int> first(rings + 1, 0), count(rings + 1, 1);
  for (int r = 1; r <= rings; ++r) {
    first[r] = int(m.vertices.size());
    count[r] = segments * r;
    const double rad = radius * r / rings;
    for (int k = 0; k < count[r]; ++k) {
      const double a = 2 * pi * k / count[r];
      m.vertices.push_back({rad * std::cos(a), rad * std::sin(a), 0});
    }
  }
  for (int r = 1; r <= rings; ++r) {
    // Walk the inner and outer rings by angle.
    const int ni = count[r - 1], no = count[r];
    int i = 0, o = 0;
    auto inner = [&](int k) { return r == 1 ? 0 : first[r - 1] + (k % ni); };
    auto outer = [&](int k) { return first[r] + (k % no); };
    while (o < no || (r > 1 && i < ni)) {
      const double ai = r == 1 ? 1e9 : double(i + 1) / ni;
      const double ao = double(o + 1) / no;
      if (o < no && (ao <= ai || (r > 1 && i >= ni))) {
        m.faces.push_back({inner(i), outer(o), outer(o + 1)});
        ++o;
      } else {
        m.faces.push_back({inner(i), outer(o), inner(i + 1)});
        ++i;
      }
    }
  }
  build_topology(m);
  return m;
}

/// Planar square [-1,1]^2 on an n x n cell grid with `holes` square holes
/// cut out along the diagonal band; holes + 1 boundary loops, chi = 1 - holes.
inline TriMesh holed_square_mesh(int n, int holes) {
  require(n >= 4 * holes + 3 && holes >= 0, "holed_square_mesh: grid too coarse for holes");
  std::set<std::pair<int, int>> removed;
  for (int h = 0; h < holes; ++h) {
    const int c = (h + 1) * n / (holes + 1);
    for (int i = c - 1; i <= c; ++i)
      for (int j = n / 2 - 1; j <= n / 2; ++j) removed.insert({i, j});
  }
  TriMesh m;
  const double hgrid = 2.0 / n;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) m.vertices.push_back({-1 + i * hgrid, -1 + j * hgrid, 0});
  auto id = [&](int i, int j) { return i * (n + 1) + j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (removed.count({i, j})) continue;
      m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  // Hole centers lose every face; drop them so V - E + F is the surface's chi.
  std::vector<int> remap(m.vertices.size(), -1);
  for (const auto& f : m.faces)
    for (int v : f) remap[v] = 0;
  std::vector<Vec3> kept;
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (remap[v] == 0) {
      remap[v] = int(kept.size());
      kept.push_back(m.vertices[v]);
    }
  for (auto& f : m.faces)
    for (int& v : f) v = remap[v];
  m.vertices = std::move(kept);
  build_topology(m);
  return m;
}

/// Octant of the unit sphere: the octahedron face (1,0,0),(0,1,0),(0,0,1)
/// split into n^2 triangles and projected radially; outward normals.
inline TriMesh sphere_octant_mesh(int n) {
  require(n >= 1, "sphere_octant_mesh: n must be >= 1");
  TriMesh m;
  std::map<std::pair<int, int>, int> idx;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n - i; ++j) {
      const double a = double(i) / n, b = double(j) / n, c = 1.0 - a - b;
      idx[{i, j}] = int(m.vertices.size());
      m.vertices.push_back(Vec3(a, b, c).normalized());
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n - i; ++j) {
      m.faces.push_back({idx[{i, j}], idx[{i + 1, j}], idx[{i, j + 1}]});
      if (j + 1 <= n - i - 1) m.faces.push_back({idx[{i + 1, j}], idx[{i + 1, j + 1}], idx[{i, j + 1}]});
    }
  build_topology(m);
  return m;
}

// ---------------------------------------------------------------------------
// Discrete curvature

struct VertexCurvature {
  double H = 0.0;
  double K = 0.0;
  double area = 0.0;          // mixed Voronoi area
  double angle_sum = 0.0;     // sum of incident face angles
  bool boundary = false;      // K not normalized on boundary vertices
};

inline double corner_angle(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 u = a - p, v = b - p;
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

/// Angle-defect Gaussian curvature over mixed Voronoi areas and cotangent
/// mean curvature (|Laplace-Beltrami x| / 2, signed by the area-weighted
/// vertex normal). Boundary vertices get H and K = 0 and are flagged.
inline std::vector<VertexCurvature> discrete_curvatures(const TriMesh& mesh_in) {
  TriMesh mesh = mesh_in;
  build_topology(mesh);
  const int nv = int(mesh.vertices.size());
  std::vector<VertexCurvature> out(nv);
  std::vector<Vec3> lap(nv, Vec3::Zero()), vnormal(nv, Vec3::Zero());
  for (const auto& loop : mesh.boundary_loops)
    for (int v : loop) out[v].boundary = true;

  for (const auto& f : mesh.faces) {
    const Vec3 P[3] = {mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]};
    const Vec3 fn = (P[1] - P[0]).cross(P[2] - P[0]);
    const double area = 0.5 * fn.norm();
    double ang[3];
    for (int k = 0; k < 3; ++k) ang[k] = corner_angle(P[k], P[(k + 1) % 3], P[(k + 2) % 3]);
    const bool obtuse = ang[0] > pi / 2 || ang[1] > pi / 2 || ang[2] > pi / 2;
    for (int k = 0; k < 3; ++k) {
      const int i = f[k], j = f[(k + 1) % 3], l = f[(k + 2) % 3];
      out[i].angle_sum += ang[k];
      vnormal[i] += fn;
      // cot of the angle opposite edge (j,l) sits at corner k.
      const double cot_k = std::cos(ang[k]) / std::sin(ang[k]);
      lap[j] += cot_k * (mesh.vertices[l] - mesh.vertices[j]);
      lap[l] += cot_k * (mesh.vertices[j] - mesh.vertices[l]);
      // Mixed area contribution.
      if (!obtuse) {
        const double cot_j = std::cos(ang[(k + 1) % 3]) / std::sin(ang[(k + 1) % 3]);
        const double cot_l = std::cos(ang[(k + 2) % 3]) / std::sin(ang[(k + 2) % 3]);
        out[i].area += ((P[k] - P[(k + 2) % 3]).squaredNorm() * cot_j +
                        (P[k] - P[(k + 1) % 3]).squaredNorm() * cot_l) / 8.0;
      } else {
        out[i].area += ang[k] > pi / 2 ? area / 2 : area / 4;
      }
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (out[v].boundary || out[v].area <= 0.0) continue;
    out[v].K = (2 * pi - out[v].angle_sum) / out[v].area;
    const Vec3 hn = lap[v] / (2.0 * out[v].area);  // = 2 H nu
    const double sgn = hn.dot(vnormal[v]) >= 0 ? 1.0 : -1.0;
    out[v].H = 0.5 * hn.norm() * sgn;
  }
  return out;
}

/// Discrete Gauss-Bonnet totals: interior angle defects and boundary
/// geodesic curvature (minus the exterior angles pi - sum of corner angles).
struct DiscreteGaussBonnet {
  double total_K = 0.0;
  double total_kappa_g = 0.0;
  std::vector<double> loop_kappa_g;
  int chi = 0;
  double residual() const { return total_K - total_kappa_g - 2 * pi * chi; }
};

inline DiscreteGaussBonnet discrete_gauss_bonnet(const TriMesh& mesh_in) {
  TriMesh mesh = mesh_in;
  build_topology(mesh);
  std::vector<double> angle_sum(mesh.vertices.size(), 0.0);
  for (const auto& f : mesh.faces)
    for (int k = 0; k < 3; ++k)
      angle_sum[f[k]] += corner_angle(mesh.vertices[f[k]], mesh.vertices[f[(k + 1) % 3]],
                                      mesh.vertices[f[(k + 2) % 3]]);
  std::vector<bool> on_boundary(mesh.vertices.size(), false);
  DiscreteGaussBonnet gb;
  for (const auto& loop : mesh.boundary_loops) {
    double t = 0.0;
    for (int v : loop) {
      on_boundary[v] = true;
      t += -kGeodesicCurvatureSign * (pi - angle_sum[v]);
    }
    gb.loop_kappa_g.push_back(t);
    gb.total_kappa_g += t;
  }
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (on_boundary[v]) continue;
    // Isolated vertices carry no angle and no defect.
    if (angle_sum[v] == 0.0) continue;
    gb.total_K += 2 * pi - angle_sum[v];
  }
  gb.chi = mesh.euler_characteristic();
  // Isolated vertices would count toward chi; subtract them.
  std::vector<bool> used(mesh.vertices.size(), false);
  for (const auto& f : mesh.faces)
    for (int v : f) used[v] = true;
  for (bool u : used)
    if (!u) --gb.chi;
  return gb;
}

inline double mesh_area(const TriMesh& m) {
  double a = 0.0;
  for (const auto& f : m.faces)
    a += 0.5 * (m.vertices[f[1]] - m.vertices[f[0]]).cross(m.vertices[f[2]] - m.vertices[f[0]]).norm();
  return a;
}

}  // namespace plateau::geom
