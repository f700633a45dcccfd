#include "fracfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace fracfem {

namespace {

struct FaceKey {
  std::array<int, 3> v;
  bool operator==(const FaceKey& o) const { return v == o.v; }
};

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : k.v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Sorted vertex ids of the face opposite local vertex l.
FaceKey face_opposite(const std::array<int, 4>& s, int dim, int l) {
  FaceKey key{{-1, -1, -1}};
  int m = 0;
  for (int j = 0; j <= dim; ++j)
    if (j != l) key.v[m++] = s[j];
  std::sort(key.v.begin(), key.v.begin() + dim);
  return key;
}

double det2(double a, double b, double c, double d) { return a * d - b * c; }

double edge_matrix_det(const Vec3& v0, const std::array<int, 4>& s,
                       const std::vector<Vec3>& verts, int dim) {
  if (dim == 2) {
    Vec3 e1 = sub(verts[s[1]], v0);
    Vec3 e2 = sub(verts[s[2]], v0);
    return det2(e1[0], e2[0], e1[1], e2[1]);
  }
  Vec3 e1 = sub(verts[s[1]], v0);
  Vec3 e2 = sub(verts[s[2]], v0);
  Vec3 e3 = sub(verts[s[3]], v0);
  return e1[0] * (e2[1] * e3[2] - e2[2] * e3[1]) -
         e2[0] * (e1[1] * e3[2] - e1[2] * e3[1]) +
         e3[0] * (e1[1] * e2[2] - e1[2] * e2[1]);
}

}  // namespace

SimplicialMesh::SimplicialMesh(int dim, std::vector<Vec3> vertices,
                               std::vector<std::array<int, 4>> simplices)
    : dim_(dim), vertices_(std::move(vertices)), simplices_(std::move(simplices)) {
  if (dim_ != 2 && dim_ != 3)
    fail(ErrorCode::InvalidArgument, "mesh dimension must be 2 or 3");
  if (vertices_.empty() || simplices_.empty())
    fail(ErrorCode::Mesh, "mesh has no vertices or no simplices");
  finalize();
}

void SimplicialMesh::finalize() {
  const int nv = num_vertices();
  const int ne = num_simplices();
  const int nloc = dim_ + 1;

  for (auto& s : simplices_) {
    for (int l = 0; l < nloc; ++l)
      if (s[l] < 0 || s[l] >= nv)
        fail(ErrorCode::Mesh, "simplex references vertex " + std::to_string(s[l]) +
                                  " out of range");
    if (dim_ == 2) s[3] = -1;
  }

  // Orientation and degeneracy. Vertices 1 and 2 are swapped when the
  // edge-matrix determinant is negative.
  volumes_.resize(ne);
  diameters_.resize(ne);
  inverse_edge_.resize(ne);
  min_volume_ = std::numeric_limits<double>::max();
  max_diameter_ = 0;
  total_volume_ = 0;
  for (int e = 0; e < ne; ++e) {
    auto& s = simplices_[e];
    const Vec3& v0 = vertices_[s[0]];
    double det = edge_matrix_det(v0, s, vertices_, dim_);
    if (det < 0) {
      std::swap(s[1], s[2]);
      det = -det;
    }

    double edge_sum = 0, diam = 0;
    int edge_count = 0;
    for (int a = 0; a < nloc; ++a)
      for (int b = a + 1; b < nloc; ++b) {
        double d = distance(vertices_[s[a]], vertices_[s[b]]);
        edge_sum += d;
        ++edge_count;
        diam = std::max(diam, d);
      }
    const double mean_edge = edge_sum / edge_count;
    if (det <= kVolumeEps * std::pow(mean_edge, dim_))
      fail(ErrorCode::Mesh, "degenerate simplex " + std::to_string(e) +
                                " (|det| = " + std::to_string(det) + ")");

    const double vol = det / (dim_ == 2 ? 2.0 : 6.0);
    volumes_[e] = vol;
    diameters_[e] = diam;
    total_volume_ += vol;
    min_volume_ = std::min(min_volume_, vol);
    max_diameter_ = std::max(max_diameter_, diam);

    auto& inv = inverse_edge_[e];
    inv.fill(0);
    if (dim_ == 2) {
      Vec3 e1 = sub(vertices_[s[1]], v0);
      Vec3 e2 = sub(vertices_[s[2]], v0);
      inv[0] = e2[1] / det;
      inv[1] = -e2[0] / det;
      inv[3] = -e1[1] / det;
      inv[4] = e1[0] / det;
    } else {
      Vec3 e1 = sub(vertices_[s[1]], v0);
      Vec3 e2 = sub(vertices_[s[2]], v0);
      Vec3 e3 = sub(vertices_[s[3]], v0);
      // Rows of A^{-1} = cofactor columns / det.
      inv[0] = (e2[1] * e3[2] - e2[2] * e3[1]) / det;
      inv[1] = (e2[2] * e3[0] - e2[0] * e3[2]) / det;
      inv[2] = (e2[0] * e3[1] - e2[1] * e3[0]) / det;
      inv[3] = (e1[2] * e3[1] - e1[1] * e3[2]) / det;
      inv[4] = (e1[0] * e3[2] - e1[2] * e3[0]) / det;
      inv[5] = (e1[1] * e3[0] - e1[0] * e3[1]) / det;
      inv[6] = (e1[1] * e2[2] - e1[2] * e2[1]) / det;
      inv[7] = (e1[2] * e2[0] - e1[0] * e2[2]) / det;
      inv[8] = (e1[0] * e2[1] - e1[1] * e2[0]) / det;
    }
  }

  // Face table and conformity.
  std::unordered_map<FaceKey, int, FaceKeyHash> face_index;
  face_index.reserve(static_cast<std::size_t>(ne) * nloc);
  neighbors_.assign(ne, {-1, -1, -1, -1});
  std::vector<std::array<int, 2>> face_local;  // local opposite vertex per side
  for (int e = 0; e < ne; ++e) {
    for (int l = 0; l < nloc; ++l) {
      FaceKey key = face_opposite(simplices_[e], dim_, l);
      auto [it, inserted] = face_index.try_emplace(key, num_faces());
      if (inserted) {
        faces_.push_back(Face{key.v, e, -1});
        face_local.push_back({l, -1});
      } else {
        Face& f = faces_[it->second];
        if (f.simplex1 >= 0)
          fail(ErrorCode::Mesh,
               "non-conforming mesh: a face has more than two incident simplices");
        f.simplex1 = e;
        face_local[it->second][1] = l;
      }
    }
  }
  num_boundary_faces_ = 0;
  for (int f = 0; f < num_faces(); ++f) {
    const Face& fc = faces_[f];
    if (fc.simplex1 < 0) {
      ++num_boundary_faces_;
    } else {
      neighbors_[fc.simplex0][face_local[f][0]] = fc.simplex1;
      neighbors_[fc.simplex1][face_local[f][1]] = fc.simplex0;
    }
  }

  // Boundary vertices: combinatorial, from single-sided faces.
  boundary_vertex_.assign(nv, 0);
  for (const Face& f : faces_)
    if (f.simplex1 < 0)
      for (int j = 0; j < dim_; ++j) boundary_vertex_[f.verts[j]] = 1;
  num_boundary_vertices_ = 0;
  for (auto b : boundary_vertex_) num_boundary_vertices_ += b;

  // Vertex -> simplex incidence, CSR layout.
  vertex_simplex_offsets_.assign(nv + 1, 0);
  for (int e = 0; e < ne; ++e)
    for (int l = 0; l < nloc; ++l) ++vertex_simplex_offsets_[simplices_[e][l] + 1];
  std::partial_sum(vertex_simplex_offsets_.begin(), vertex_simplex_offsets_.end(),
                   vertex_simplex_offsets_.begin());
  vertex_simplex_ids_.resize(vertex_simplex_offsets_.back());
  std::vector<int> cursor(vertex_simplex_offsets_.begin(),
                          vertex_simplex_offsets_.end() - 1);
  for (int e = 0; e < ne; ++e)
    for (int l = 0; l < nloc; ++l)
      vertex_simplex_ids_[cursor[simplices_[e][l]]++] = e;

  // Connectivity over face adjacency.
  std::vector<std::uint8_t> seen(ne, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int e = stack.back();
    stack.pop_back();
    for (int l = 0; l < nloc; ++l) {
      int nb = neighbors_[e][l];
      if (nb >= 0 && !seen[nb]) {
        seen[nb] = 1;
        ++reached;
        stack.push_back(nb);
      }
    }
  }
  if (reached != ne) fail(ErrorCode::Mesh, "mesh is not connected");
}

Vec3 SimplicialMesh::basis_gradient(int e, int l) const {
  const auto& inv = inverse_edge_[e];
  if (l == 0) {
    Vec3 g{0, 0, 0};
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) g[c] -= inv[3 * r + c];
    return g;
  }
  const int r = l - 1;
  return {inv[3 * r + 0], inv[3 * r + 1], inv[3 * r + 2]};
}

Vec3 SimplicialMesh::apply_inverse_edge_matrix(int e, const Vec3& y) const {
  const auto& inv = inverse_edge_[e];
  Vec3 out{0, 0, 0};
  for (int r = 0; r < dim_; ++r)
    out[r] = inv[3 * r + 0] * y[0] + inv[3 * r + 1] * y[1] + inv[3 * r + 2] * y[2];
  return out;
}

std::array<double, 4> SimplicialMesh::barycentric(int e, const Vec3& point) const {
  const auto& s = simplices_[e];
  Vec3 k = apply_inverse_edge_matrix(e, sub(point, vertices_[s[0]]));
  std::array<double, 4> out{0, 0, 0, 0};
  double sum = 0;
  for (int r = 0; r < dim_; ++r) {
    out[r + 1] = k[r];
    sum += k[r];
  }
  out[0] = 1.0 - sum;
  return out;
}

bool SimplicialMesh::contains(int e, const Vec3& point, double eps) const {
  auto k = barycentric(e, point);
  for (int l = 0; l <= dim_; ++l)
    if (k[l] < -eps) return false;
  return true;
}

int SimplicialMesh::locate(const Vec3& point, int hint) const {
  if (hint >= 0 && hint < num_simplices()) {
    int e = hint;
    for (int step = 0; step < 4 * num_simplices(); ++step) {
      auto k = barycentric(e, point);
      int worst = -1;
      double kmin = -kFaceEps;
      for (int l = 0; l <= dim_; ++l)
        if (k[l] < kmin) {
          kmin = k[l];
          worst = l;
        }
      if (worst < 0) return e;
      int nb = neighbors_[e][worst];
      if (nb < 0) break;  // walked out; fall back to the scan
      e = nb;
    }
  }
  for (int e = 0; e < num_simplices(); ++e)
    if (contains(e, point)) return e;
  return -1;
}

const int* SimplicialMesh::vertex_simplices(int v, int* count) const {
  *count = vertex_simplex_offsets_[v + 1] - vertex_simplex_offsets_[v];
  return vertex_simplex_ids_.data() + vertex_simplex_offsets_[v];
}

PatchBounds patch_bounds(const SimplicialMesh& mesh) {
  const int nv = mesh.num_vertices();
  PatchBounds pb;
  pb.z_min.assign(nv, {std::numeric_limits<double>::max(),
                       std::numeric_limits<double>::max(),
                       std::numeric_limits<double>::max()});
  pb.z_max.assign(nv, {std::numeric_limits<double>::lowest(),
                       std::numeric_limits<double>::lowest(),
                       std::numeric_limits<double>::lowest()});
  for (int e = 0; e < mesh.num_simplices(); ++e) {
    const auto& s = mesh.simplex(e);
    for (int a = 0; a <= mesh.dim(); ++a) {
      auto& zmin = pb.z_min[s[a]];
      auto& zmax = pb.z_max[s[a]];
      for (int b = 0; b <= mesh.dim(); ++b) {
        const Vec3& x = mesh.vertex(s[b]);
        for (int i = 0; i < mesh.dim(); ++i) {
          zmin[i] = std::min(zmin[i], x[i]);
          zmax[i] = std::max(zmax[i], x[i]);
        }
      }
    }
  }
  for (int i = mesh.dim(); i < 3; ++i)
    for (int v = 0; v < nv; ++v) {
      pb.z_min[v][i] = 0;
      pb.z_max[v][i] = 0;
    }
  return pb;
}

SimplicialMesh generate_cube_mesh(int subdivisions, int dim) {
  const int n = subdivisions;
  if (n < 1) fail(ErrorCode::InvalidArgument, "cube mesh needs N >= 1");
  if (dim != 2 && dim != 3)
    fail(ErrorCode::InvalidArgument, "mesh dimension must be 2 or 3");

  const int np = n + 1;
  std::vector<Vec3> verts;
  std::vector<std::array<int, 4>> simps;
  const double h = 1.0 / n;

  if (dim == 2) {
    verts.reserve(static_cast<std::size_t>(np) * np);
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) verts.push_back({i * h, j * h, 0.0});
    auto gid = [np](int i, int j) { return i + np * j; };
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        int v00 = gid(i, j), v10 = gid(i + 1, j);
        int v01 = gid(i, j + 1), v11 = gid(i + 1, j + 1);
        simps.push_back({v00, v10, v11, -1});
        simps.push_back({v00, v11, v01, -1});
      }
    return SimplicialMesh(2, std::move(verts), std::move(simps));
  }

  verts.reserve(static_cast<std::size_t>(np) * np * np);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) verts.push_back({i * h, j * h, k * h});
  auto gid = [np](int i, int j, int k) { return i + np * (j + np * k); };

  // Kuhn split: one tetrahedron per axis permutation, all sharing the
  // cell diagonal.
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          std::array<int, 4> tet;
          tet[0] = gid(c[0], c[1], c[2]);
          for (int step = 0; step < 3; ++step) {
            ++c[p[step]];
            tet[step + 1] = gid(c[0], c[1], c[2]);
          }
          simps.push_back(tet);
        }
  return SimplicialMesh(3, std::move(verts), std::move(simps));
}

namespace {

// Smooth cube-to-ball map on [-1,1]^n (spherified cube): the cube
// surface lands exactly on the unit sphere and the Jacobian stays
// positive inside, so mapped cells keep their orientation.
Vec3 ball_map(const Vec3& t, int dim) {
  const double x = t[0], y = t[1], z = dim == 3 ? t[2] : 0.0;
  if (dim == 2)
    return {x * std::sqrt(1.0 - 0.5 * y * y), y * std::sqrt(1.0 - 0.5 * x * x), 0.0};
  return {x * std::sqrt(1.0 - 0.5 * y * y - 0.5 * z * z + y * y * z * z / 3.0),
          y * std::sqrt(1.0 - 0.5 * z * z - 0.5 * x * x + z * z * x * x / 3.0),
          z * std::sqrt(1.0 - 0.5 * x * x - 0.5 * y * y + x * x * y * y / 3.0)};
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double orient3(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return dot(cross(sub(b, a), sub(c, a)), sub(d, a));
}

// True when splitting the (spherical) quad q00 q10 q11 q01 along the
// q00-q11 diagonal keeps the surface convex: q01 must lie on the same
// side of plane(q00, q11, q10) as the domain center (the origin).
bool kuhn_diagonal_convex(const Vec3& q00, const Vec3& q10, const Vec3& q11,
                          const Vec3& q01) {
  const Vec3 n = cross(sub(q11, q00), sub(q10, q00));
  const double side_q01 = dot(n, sub(q01, q00));
  const double side_center = -dot(n, q00);
  return side_q01 * side_center >= 0;
}

}  // namespace

SimplicialMesh generate_ball_mesh(int subdivisions, int dim, double radius) {
  const int n = subdivisions;
  if (n < 2) fail(ErrorCode::InvalidArgument, "ball mesh needs N >= 2");
  if (radius <= 0) fail(ErrorCode::InvalidArgument, "ball radius must be positive");

  auto wrap_degenerate = [](auto&& build) -> SimplicialMesh {
    try {
      return build();
    } catch (const Error& err) {
      fail(ErrorCode::Mesh,
           std::string("ball mapping produced a degenerate simplex (") + err.what() +
               "); increase the resolution N");
    }
  };

  if (dim == 2) {
    // The mapped boundary polygon has its vertices in angular order,
    // so the 2-D mesh is convex as is.
    SimplicialMesh cube = generate_cube_mesh(n, 2);
    std::vector<Vec3> verts(cube.vertices());
    for (auto& x : verts) {
      for (int i = 0; i < 2; ++i) x[i] = 2.0 * x[i] - 1.0;
      x = ball_map(x, 2);
      for (int i = 0; i < 2; ++i) x[i] *= radius;
    }
    // Mapped triangles must keep the generator orientation, otherwise
    // elements would overlap.
    for (const auto& s : cube.simplices()) {
      const Vec3 e1 = sub(verts[s[1]], verts[s[0]]);
      const Vec3 e2 = sub(verts[s[2]], verts[s[0]]);
      if (e1[0] * e2[1] - e1[1] * e2[0] <= 0)
        fail(ErrorCode::Mesh, "ball mapping inverted a triangle; increase N");
    }
    return wrap_degenerate([&]() {
      return SimplicialMesh(2, std::move(verts), cube.simplices());
    });
  }

  // 3-D. Two geometric obligations shape the construction:
  //  - boundary quads must be split along their convex-hull diagonal,
  //    or the surface keeps concave creases and axis chords can exit
  //    and re-enter the mesh;
  //  - every mapped cell must be tiled without inverted tetrahedra.
  // Cells whose faces all carry the Kuhn diagonal use the 6-tet Kuhn
  // split; any other cell is coned from an interior Steiner point, and
  // both variants are orientation-verified against the reference cell.
  const int np = n + 1;
  const double step = 2.0 / n;
  auto lattice = [&](int i, int j, int k) {
    return Vec3{-1.0 + i * step, -1.0 + j * step, -1.0 + k * step};
  };
  auto mapped = [&](const Vec3& t) {
    Vec3 x = ball_map(t, 3);
    for (int d = 0; d < 3; ++d) x[d] *= radius;
    return x;
  };
  auto gid = [np](int i, int j, int k) { return i + np * (j + np * k); };

  std::vector<Vec3> verts(static_cast<std::size_t>(np) * np * np);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) verts[gid(i, j, k)] = mapped(lattice(i, j, k));

  std::vector<std::array<int, 4>> simps;
  simps.reserve(static_cast<std::size_t>(6) * n * n * n);
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  static const int perm_sign[6] = {1, -1, -1, 1, 1, -1};

  // Face corner at local offset (u,v) of the face perpendicular to
  // `axis` at side `s` of the cell at c.
  auto face_vertex = [&](const std::array<int, 3>& c, int axis, int s, int u, int v) {
    std::array<int, 3> p = c;
    p[axis] += s;
    p[(axis + 1) % 3] += u;
    p[(axis + 2) % 3] += v;
    return gid(p[0], p[1], p[2]);
  };

  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::array<int, 3> c{i, j, k};
        bool all_kuhn = true;
        bool diag_kuhn[3][2];
        for (int axis = 0; axis < 3; ++axis)
          for (int s = 0; s < 2; ++s) {
            const int coord = c[axis] + s;
            const bool outer = coord == 0 || coord == n;
            bool keep = true;
            if (outer) {
              keep = kuhn_diagonal_convex(verts[face_vertex(c, axis, s, 0, 0)],
                                          verts[face_vertex(c, axis, s, 1, 0)],
                                          verts[face_vertex(c, axis, s, 1, 1)],
                                          verts[face_vertex(c, axis, s, 0, 1)]);
            }
            diag_kuhn[axis][s] = keep;
            all_kuhn = all_kuhn && keep;
          }

        bool emitted = false;
        if (all_kuhn) {
          // Kuhn tets must preserve their reference orientation under
          // the mapping.
          std::array<std::array<int, 4>, 6> tets;
          bool ok = true;
          for (int t = 0; t < 6 && ok; ++t) {
            std::array<int, 3> q = c;
            tets[t][0] = gid(q[0], q[1], q[2]);
            for (int m = 0; m < 3; ++m) {
              ++q[perms[t][m]];
              tets[t][m + 1] = gid(q[0], q[1], q[2]);
            }
            const double vol = orient3(verts[tets[t][0]], verts[tets[t][1]],
                                       verts[tets[t][2]], verts[tets[t][3]]);
            ok = vol * perm_sign[t] > 0;
          }
          if (ok) {
            for (const auto& tet : tets) simps.push_back(tet);
            emitted = true;
          }
        }

        if (!emitted) {
          // Steiner cone: try the mapped cell center, then the corner
          // centroid. Every face triangle, oriented outward, must see
          // the center on its inner side.
          Vec3 cc = lattice(i, j, k);
          for (int d = 0; d < 3; ++d) cc[d] += 0.5 * step;
          const Vec3 candidates[2] = {mapped(cc), [&] {
                                        Vec3 g{0, 0, 0};
                                        for (int a = 0; a < 2; ++a)
                                          for (int b = 0; b < 2; ++b)
                                            for (int d = 0; d < 2; ++d) {
                                              const Vec3& v =
                                                  verts[gid(i + a, j + b, k + d)];
                                              for (int m = 0; m < 3; ++m)
                                                g[m] += 0.125 * v[m];
                                            }
                                        return g;
                                      }()};
          int chosen = -1;
          for (int cand = 0; cand < 2 && chosen < 0; ++cand) {
            bool ok = true;
            for (int axis = 0; axis < 3 && ok; ++axis)
              for (int s = 0; s < 2 && ok; ++s) {
                const Vec3& q00 = verts[face_vertex(c, axis, s, 0, 0)];
                const Vec3& q10 = verts[face_vertex(c, axis, s, 1, 0)];
                const Vec3& q11 = verts[face_vertex(c, axis, s, 1, 1)];
                const Vec3& q01 = verts[face_vertex(c, axis, s, 0, 1)];
                // (q10-q00)x(q11-q00) points along +axis; outward for
                // s == 1.
                const double sign = s == 1 ? 1.0 : -1.0;
                const Vec3& ctr = candidates[cand];
                if (diag_kuhn[axis][s])
                  ok = sign * orient3(q00, q10, q11, ctr) < 0 &&
                       sign * orient3(q00, q11, q01, ctr) < 0;
                else
                  ok = sign * orient3(q10, q11, q01, ctr) < 0 &&
                       sign * orient3(q10, q01, q00, ctr) < 0;
              }
            if (ok) chosen = cand;
          }
          if (chosen < 0)
            fail(ErrorCode::Mesh,
                 "ball mapping produced a cell with no valid interior split point; "
                 "increase the resolution N");
          const int center = static_cast<int>(verts.size());
          verts.push_back(candidates[chosen]);
          for (int axis = 0; axis < 3; ++axis)
            for (int s = 0; s < 2; ++s) {
              const int v00 = face_vertex(c, axis, s, 0, 0);
              const int v10 = face_vertex(c, axis, s, 1, 0);
              const int v11 = face_vertex(c, axis, s, 1, 1);
              const int v01 = face_vertex(c, axis, s, 0, 1);
              if (diag_kuhn[axis][s]) {
                simps.push_back({v00, v10, v11, center});
                simps.push_back({v00, v11, v01, center});
              } else {
                simps.push_back({v10, v11, v01, center});
                simps.push_back({v10, v01, v00, center});
              }
            }
        }
      }

  return wrap_degenerate([&]() {
    return SimplicialMesh(3, std::move(verts), std::move(simps));
  });
}

}  // namespace fracfem
