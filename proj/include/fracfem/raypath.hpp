#pragma once

#include <optional>
#include <vector>

#include "fracfem/mesh.hpp"

namespace fracfem {

enum class Side { Left, Right };

struct RayQuery {
  Vec3 origin;     // start point u_0
  Vec3 direction;  // unit vector d
};

/// Intersection of a ray with one simplex: the parameter interval
/// [r_min, r_max] and the volume coordinates of its endpoints.
struct SegmentHit {
  int simplex = -1;
  double r_min = 0;
  double r_max = 0;
  std::array<double, 4> k_min{};  // entry point volume coordinates
  std::array<double, 4> k_max{};  // exit point volume coordinates
};

/// Ordered chord decomposition from a point to the boundary along
/// +/- e_i: the first segment contains the point (r_min = 0), the last
/// one exits the mesh.
struct IntegrationPath {
  Vec3 gauss_point{};
  int direction = 0;  // 0-based axis
  Side side = Side::Left;
  std::vector<SegmentHit> segments;
  double chord_bound = 0;     // i-th coordinate of the final exit point
  int elements_examined = 0;  // intersection tests performed by the walk
};

/// Solves k = A^{-1}b + r A^{-1}d and intersects the componentwise
/// constraints b~ + r d~ >= 0 with r >= 0. Empty when the feasible set
/// is empty or a single point.
std::optional<SegmentHit> ray_simplex_intersect(const SimplicialMesh& mesh,
                                                int simplex, const RayQuery& query);

/// Indices of the (near-)zero exit volume coordinates; the exit entity
/// is spanned by the complementary vertices. One zero means the
/// opposite facet, dim zeros a vertex.
std::vector<int> exit_face(const SegmentHit& hit, int dim);

/// Walks the mesh from the simplex containing `point` in direction
/// +/- e_axis (Side::Left is -e_axis) and returns the ordered segment
/// decomposition. `start_hint` names the simplex containing the point
/// when the caller knows it.
IntegrationPath trace_path(const SimplicialMesh& mesh, const Vec3& point, int axis,
                           Side side, int start_hint = -1);

}  // namespace fracfem
