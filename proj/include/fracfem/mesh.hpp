#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fracfem/common.hpp"

namespace fracfem {

/// Conforming simplicial mesh: triangles for dim == 2, tetrahedra for
/// dim == 3. Immutable after construction; safe to share read-only
/// across threads.
///
/// Per-simplex data cached at build time: volume, the inverse edge
/// matrix A^{-1} (A columns are v_l - v_0), P1 basis gradients, and
/// face neighbors. Faces ((n-1)-subsimplices) are indexed; a face with
/// a single incident simplex is a boundary face.
class SimplicialMesh {
 public:
  SimplicialMesh(int dim, std::vector<Vec3> vertices,
                 std::vector<std::array<int, 4>> simplices);

  int dim() const { return dim_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_simplices() const { return static_cast<int>(simplices_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  const Vec3& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 4>& simplex(int e) const { return simplices_[e]; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 4>>& simplices() const { return simplices_; }

  double volume(int e) const { return volumes_[e]; }
  double total_volume() const { return total_volume_; }
  double min_volume() const { return min_volume_; }
  double diameter(int e) const { return diameters_[e]; }
  /// Maximum element diameter h.
  double max_diameter() const { return max_diameter_; }

  /// Row l of A^{-1}; grad of the P1 basis attached to local vertex l
  /// (l = 0..dim). Third component zero in 2-D.
  Vec3 basis_gradient(int e, int l) const;

  /// A^{-1}y for the simplex, y a spatial vector (dim components used).
  Vec3 apply_inverse_edge_matrix(int e, const Vec3& y) const;

  /// Volume coordinates (k_0, ..., k_n) of a point in simplex e;
  /// components beyond dim+1 are zero. Sums to one by construction.
  std::array<double, 4> barycentric(int e, const Vec3& point) const;

  /// True if the point lies in simplex e up to the face tolerance.
  bool contains(int e, const Vec3& point, double eps = kFaceEps) const;

  /// Simplex containing the point, or -1. Walks from the hint when
  /// given, otherwise scans.
  int locate(const Vec3& point, int hint = -1) const;

  struct Face {
    std::array<int, 3> verts;  // sorted vertex ids, [2] == -1 in 2-D
    int simplex0 = -1;
    int simplex1 = -1;  // -1 for boundary faces
  };
  const Face& face(int f) const { return faces_[f]; }
  bool face_on_boundary(int f) const { return faces_[f].simplex1 < 0; }
  int num_boundary_faces() const { return num_boundary_faces_; }

  /// Neighbor across the face opposite local vertex l, or -1 on the
  /// boundary.
  int neighbor(int e, int l) const { return neighbors_[e][l]; }

  bool vertex_on_boundary(int v) const { return boundary_vertex_[v] != 0; }
  int num_boundary_vertices() const { return num_boundary_vertices_; }

  /// Ids of the simplices containing vertex v.
  const int* vertex_simplices(int v, int* count) const;

 private:
  void finalize();

  int dim_;
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 4>> simplices_;

  std::vector<double> volumes_;
  std::vector<double> diameters_;
  std::vector<std::array<double, 9>> inverse_edge_;  // row-major dim x dim
  std::vector<Face> faces_;
  std::vector<std::array<int, 4>> neighbors_;
  std::vector<std::uint8_t> boundary_vertex_;
  std::vector<int> vertex_simplex_offsets_;
  std::vector<int> vertex_simplex_ids_;
  double total_volume_ = 0;
  double min_volume_ = 0;
  double max_diameter_ = 0;
  int num_boundary_faces_ = 0;
  int num_boundary_vertices_ = 0;
};

/// Extremal patch coordinates: for vertex j and direction i,
/// [z_min[j][i], z_max[j][i]] spans the i-th coordinates of the patch
/// omega_j (union of simplices containing j).
struct PatchBounds {
  std::vector<Vec3> z_min;
  std::vector<Vec3> z_max;
};

PatchBounds patch_bounds(const SimplicialMesh& mesh);

/// Structured simplicial mesh of [0,1]^dim: N^dim cells, each split
/// into 2 triangles (2-D) or 6 tetrahedra (3-D Kuhn split).
SimplicialMesh generate_cube_mesh(int subdivisions, int dim);

/// Convex simplicial approximation of the ball |x| < radius: a Kuhn
/// cube mesh on [-radius, radius]^dim with vertices mapped radially so
/// a vertex at sup-norm distance d lands at Euclidean distance d.
SimplicialMesh generate_ball_mesh(int subdivisions, int dim, double radius);

/// Triangle/TetGen ASCII .node/.ele reader. Indexing base is detected
/// from the first index in each file; attributes and markers are
/// ignored. Parse failures report line and column.
SimplicialMesh load_mesh(const std::string& node_path, const std::string& ele_path);

/// Writer for the same formats; output re-reads bit-identically.
void save_mesh(const SimplicialMesh& mesh, const std::string& node_path,
               const std::string& ele_path);

}  // namespace fracfem
