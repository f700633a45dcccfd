#include "fracfem/raypath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fracfem {

namespace {

std::string describe_ray(const Vec3& point, int axis, Side side) {
  std::ostringstream os;
  os << "point (" << point[0] << ", " << point[1] << ", " << point[2] << "), axis "
     << axis + 1 << ", side " << (side == Side::Left ? "left" : "right");
  return os.str();
}

}  // namespace

std::optional<SegmentHit> ray_simplex_intersect(const SimplicialMesh& mesh,
                                                int simplex, const RayQuery& query) {
  const int n = mesh.dim();
  const auto& s = mesh.simplex(simplex);

  const Vec3 kb = mesh.apply_inverse_edge_matrix(simplex, sub(query.origin, mesh.vertex(s[0])));
  const Vec3 kd = mesh.apply_inverse_edge_matrix(simplex, query.direction);

  // b~ and d~: volume-coordinate forms of the origin and direction,
  // ordered (k_0, k_1, ..., k_n).
  std::array<double, 4> bt{}, dt{};
  double bsum = 0, dsum = 0, dmax = 0;
  for (int r = 0; r < n; ++r) {
    bt[r + 1] = kb[r];
    dt[r + 1] = kd[r];
    bsum += kb[r];
    dsum += kd[r];
    dmax = std::max(dmax, std::fabs(kd[r]));
  }
  bt[0] = 1.0 - bsum;
  dt[0] = -dsum;
  dmax = std::max(dmax, std::fabs(dt[0]));

  // Each component gives a half-line constraint on r.
  const double dir_tol = 1e-14 * dmax;
  double lo = 0;
  double hi = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= n; ++j) {
    if (std::fabs(dt[j]) <= dir_tol) {
      if (bt[j] < -kFaceEps) return std::nullopt;
      continue;
    }
    const double t = -bt[j] / dt[j];
    if (dt[j] > 0)
      lo = std::max(lo, t);
    else
      hi = std::min(hi, t);
  }
  if (!(hi - lo > 1e-14 * std::max(1.0, mesh.diameter(simplex))))
    return std::nullopt;

  SegmentHit hit;
  hit.simplex = simplex;
  hit.r_min = lo;
  hit.r_max = hi;
  for (int j = 0; j <= n; ++j) {
    hit.k_min[j] = bt[j] + lo * dt[j];
    hit.k_max[j] = bt[j] + hi * dt[j];
  }
  return hit;
}

std::vector<int> exit_face(const SegmentHit& hit, int dim) {
  std::vector<int> zeros;
  for (int j = 0; j <= dim; ++j)
    if (std::fabs(hit.k_max[j]) <= kFaceEps) zeros.push_back(j);
  if (static_cast<int>(zeros.size()) == dim + 1)
    fail(ErrorCode::Trace, "exit point has all volume coordinates zero");
  return zeros;
}

IntegrationPath trace_path(const SimplicialMesh& mesh, const Vec3& point, int axis,
                           Side side, int start_hint) {
  if (axis < 0 || axis >= mesh.dim())
    fail(ErrorCode::InvalidArgument, "direction axis out of range");

  RayQuery query;
  query.origin = point;
  query.direction = {0, 0, 0};
  query.direction[axis] = side == Side::Left ? -1.0 : 1.0;

  int start = -1;
  if (start_hint >= 0 && start_hint < mesh.num_simplices() &&
      mesh.contains(start_hint, point))
    start = start_hint;
  else
    start = mesh.locate(point, start_hint);
  if (start < 0)
    fail(ErrorCode::Trace, "point outside mesh: " + describe_ray(point, axis, side));

  IntegrationPath path;
  path.gauss_point = point;
  path.direction = axis;
  path.side = side;

  auto cur = ray_simplex_intersect(mesh, start, query);
  ++path.elements_examined;
  if (!cur) {
    // The point sits on a face of the located simplex and the ray
    // leaves it immediately; restart from another containing simplex
    // with a forward interval.
    for (int e = 0; e < mesh.num_simplices() && !cur; ++e) {
      if (e == start || !mesh.contains(e, point)) continue;
      ++path.elements_examined;
      cur = ray_simplex_intersect(mesh, e, query);
    }
    if (!cur)
      fail(ErrorCode::Trace, "ray does not intersect its start simplex: " +
                                 describe_ray(point, axis, side));
  }

  std::vector<int> visited;
  const int max_steps = mesh.num_simplices() + 1;
  for (int step = 0; step < max_steps; ++step) {
    path.segments.push_back(*cur);
    visited.push_back(cur->simplex);
    const double r_exit = cur->r_max;

    const std::vector<int> zeros = exit_face(*cur, mesh.dim());
    const auto& sv = mesh.simplex(cur->simplex);

    std::optional<SegmentHit> next;

    if (zeros.size() == 1) {
      const int nb = mesh.neighbor(cur->simplex, zeros[0]);
      if (nb < 0) {
        // Exit through a boundary facet.
        path.chord_bound = point[axis] + query.direction[axis] * r_exit;
        return path;
      }
      if (std::find(visited.begin(), visited.end(), nb) == visited.end()) {
        auto h = ray_simplex_intersect(mesh, nb, query);
        ++path.elements_examined;
        if (h && h->r_max > r_exit + 1e-14) next = h;
      }
    }

    // Entity vertices: complement of the zero components.
    std::vector<int> entity;
    for (int l = 0; l <= mesh.dim(); ++l)
      if (std::find(zeros.begin(), zeros.end(), l) == zeros.end())
        entity.push_back(sv[l]);

    if (!next) {
      // Candidates: unvisited simplices incident to every entity vertex.
      int count = 0;
      const int* list = mesh.vertex_simplices(entity[0], &count);
      for (int idx = 0; idx < count && !next; ++idx) {
        const int cand = list[idx];
        if (std::find(visited.begin(), visited.end(), cand) != visited.end()) continue;
        bool incident = true;
        const auto& cs = mesh.simplex(cand);
        for (std::size_t m = 1; m < entity.size() && incident; ++m)
          incident = std::find(cs.begin(), cs.begin() + mesh.dim() + 1, entity[m]) !=
                     cs.begin() + mesh.dim() + 1;
        if (!incident) continue;
        auto h = ray_simplex_intersect(mesh, cand, query);
        ++path.elements_examined;
        if (h && h->r_max > r_exit + 1e-14) next = h;
      }
    }

    if (!next) {
      // Robustness fallback: probe just past the exit point. Outside
      // the mesh means the chord is done (convex domain).
      Vec3 probe = point;
      probe[axis] += query.direction[axis] * (r_exit + 1e-9 * mesh.diameter(cur->simplex));
      const int located = mesh.locate(probe, cur->simplex);
      path.elements_examined += located >= 0 ? 1 : mesh.num_simplices();
      if (located >= 0 &&
          std::find(visited.begin(), visited.end(), located) == visited.end()) {
        auto h = ray_simplex_intersect(mesh, located, query);
        ++path.elements_examined;
        if (h && h->r_max > r_exit + 1e-14) next = h;
      }
    }

    if (!next) {
      bool all_boundary = true;
      for (int v : entity) all_boundary = all_boundary && mesh.vertex_on_boundary(v);
      if (all_boundary) {
        path.chord_bound = point[axis] + query.direction[axis] * r_exit;
        return path;
      }
      fail(ErrorCode::Trace, "traversal stall at r = " + std::to_string(r_exit) +
                                 " in simplex " + std::to_string(cur->simplex) + ": " +
                                 describe_ray(point, axis, side));
    }
    cur = next;
  }
  fail(ErrorCode::Trace,
       "traversal cycle detected: " + describe_ray(point, axis, side));
}

}  // namespace fracfem
