#include "fracfem/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>

namespace fracfem {

namespace {

void atomic_add(double* target, double value) {
  std::atomic_ref<double> ref(*target);
  ref.fetch_add(value, std::memory_order_relaxed);
}

void validate_terms(const std::vector<OperatorTerm>& terms, int dim) {
  for (const OperatorTerm& t : terms) {
    if (t.direction < 0 || t.direction >= dim)
      fail(ErrorCode::InvalidArgument, "term direction out of range");
    if (t.trial.direction != t.direction || t.test.direction != t.direction)
      fail(ErrorCode::InvalidArgument, "term orders must share the term direction");
    auto in_range = [](const FractionalOrder& o) {
      return (o.gamma > 0 && o.gamma < 1) || o.gamma == 1.0;
    };
    if (!in_range(t.trial) || !in_range(t.test))
      fail(ErrorCode::InvalidArgument, "operator orders must lie in (0,1]");
    if (!t.trial.classical() && !t.test.classical() && t.trial.side == t.test.side)
      fail(ErrorCode::InvalidArgument,
           "fractional trial and test operators must sit on opposite sides");
    const double total = t.trial.gamma + t.test.gamma;
    if (!(total > 1.0 && total <= 2.0))
      fail(ErrorCode::InvalidArgument, "trial + test order must lie in (1,2]");
    if (!t.coefficient)
      fail(ErrorCode::InvalidArgument, "term needs a coefficient field");
  }
}

}  // namespace

OperatorTerm make_term(int direction, double trial_gamma, Side trial_side,
                       double test_gamma, std::function<double(const Vec3&)> coefficient,
                       double sign) {
  OperatorTerm t;
  t.direction = direction;
  t.trial = FractionalOrder{trial_gamma, trial_side, direction};
  t.test = FractionalOrder{
      test_gamma, trial_side == Side::Left ? Side::Right : Side::Left, direction};
  t.coefficient = std::move(coefficient);
  t.sign = sign;
  return t;
}

SparsityPattern build_sparsity_pattern(const SimplicialMesh& mesh,
                                       const PatchBounds& bounds,
                                       const std::vector<OperatorTerm>& terms) {
  validate_terms(terms, mesh.dim());
  const int nv = mesh.num_vertices();
  const int dim = mesh.dim();

  std::vector<std::vector<int>> rows(nv);

  // Vertex adjacency (shared element) is always part of the pattern.
  for (int e = 0; e < mesh.num_simplices(); ++e) {
    const auto& s = mesh.simplex(e);
    for (int a = 0; a <= dim; ++a)
      for (int b = 0; b <= dim; ++b) rows[s[a]].push_back(s[b]);
  }

  // Chord coupling per fractional direction: boxes must overlap in all
  // directions perpendicular to the term axis.
  std::vector<bool> fractional_dir(dim, false);
  for (const OperatorTerm& t : terms)
    if (!t.trial.classical() || !t.test.classical()) fractional_dir[t.direction] = true;

  for (int axis = 0; axis < dim; ++axis) {
    if (!fractional_dir[axis]) continue;
    std::vector<std::vector<int>> upper(nv);
    const int hw = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<int> next{0};
    auto worker = [&]() {
      const int chunk = 256;
      while (true) {
        const int begin = next.fetch_add(chunk);
        if (begin >= nv) break;
        const int end = std::min(nv, begin + chunk);
        for (int j = begin; j < end; ++j) {
          for (int k = j + 1; k < nv; ++k) {
            bool overlap = true;
            for (int p = 0; p < dim && overlap; ++p) {
              if (p == axis) continue;
              overlap = bounds.z_min[j][p] <= bounds.z_max[k][p] &&
                        bounds.z_min[k][p] <= bounds.z_max[j][p];
            }
            if (overlap) upper[j].push_back(k);
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < hw; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (int j = 0; j < nv; ++j)
      for (int k : upper[j]) {
        rows[j].push_back(k);
        rows[k].push_back(j);
      }
  }

  SparsityPattern pat;
  pat.n = nv;
  pat.row_ptr.assign(nv + 1, 0);
  for (int j = 0; j < nv; ++j) {
    auto& r = rows[j];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    pat.row_ptr[j + 1] = pat.row_ptr[j] + static_cast<std::int64_t>(r.size());
  }
  pat.cols.resize(pat.row_ptr[nv]);
  for (int j = 0; j < nv; ++j)
    std::copy(rows[j].begin(), rows[j].end(), pat.cols.begin() + pat.row_ptr[j]);
  return pat;
}

std::int64_t CsrMatrix::find(int r, int c) const {
  const int* begin = col.data() + row_ptr[r];
  const int* end = col.data() + row_ptr[r + 1];
  const int* it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) return -1;
  return it - col.data();
}

double CsrMatrix::value_at(int r, int c) const {
  const std::int64_t idx = find(r, c);
  return idx < 0 ? 0.0 : val[idx];
}

namespace {

// Values of one operator side at a quadrature point: sorted
// (global vertex, value) pairs.
using SideValues = std::vector<std::pair<int, double>>;

struct PointWorkspace {
  std::optional<IntegrationPath> paths[3][2];
  struct CachedEval {
    int direction;
    Side side;
    double gamma;
    SideValues values;
  };
  std::vector<CachedEval> evals;

  void reset() {
    for (auto& row : paths)
      for (auto& p : row) p.reset();
    evals.clear();
  }
};

const IntegrationPath& path_for(PointWorkspace& ws, const SimplicialMesh& mesh,
                                const Vec3& point, int element, int direction,
                                Side side) {
  auto& slot = ws.paths[direction][side == Side::Left ? 0 : 1];
  if (!slot) slot = trace_path(mesh, point, direction, side, element);
  return *slot;
}

const SideValues& side_values(PointWorkspace& ws, const SimplicialMesh& mesh,
                              const Vec3& point, int element,
                              const FractionalOrder& order) {
  for (const auto& cached : ws.evals)
    if (cached.direction == order.direction && cached.side == order.side &&
        cached.gamma == order.gamma)
      return cached.values;

  PointWorkspace::CachedEval entry;
  entry.direction = order.direction;
  entry.side = order.side;
  entry.gamma = order.gamma;
  if (order.classical()) {
    const auto& s = mesh.simplex(element);
    for (int l = 0; l <= mesh.dim(); ++l)
      entry.values.emplace_back(s[l], derivative_classical(mesh, element, l,
                                                           order.direction));
    std::sort(entry.values.begin(), entry.values.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  } else {
    const IntegrationPath& path =
        path_for(ws, mesh, point, element, order.direction, order.side);
    entry.values = eval_all_local_basis(order, path, mesh);
  }
  ws.evals.push_back(std::move(entry));
  return ws.evals.back().values;
}

}  // namespace

DiscreteSystem assemble(const SimplicialMesh& mesh,
                        const std::vector<OperatorTerm>& terms,
                        const QuadratureRule& quadrature,
                        const std::function<double(const Vec3&)>& rhs_field,
                        DirichletPolicy dirichlet, const AssemblyOptions& options) {
  validate_terms(terms, mesh.dim());
  if (quadrature.dim != mesh.dim())
    fail(ErrorCode::InvalidArgument, "quadrature dimension does not match the mesh");

  const int nv = mesh.num_vertices();
  const int dim = mesh.dim();

  DiscreteSystem sys;
  sys.vertex_to_free.assign(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (dirichlet == DirichletPolicy::HomogeneousBoundary && mesh.vertex_on_boundary(v))
      continue;
    sys.vertex_to_free[v] = static_cast<int>(sys.free_to_vertex.size());
    sys.free_to_vertex.push_back(v);
  }
  const int nfree = sys.num_free();
  if (nfree == 0) fail(ErrorCode::Mesh, "no free vertices to assemble");

  const bool use_pattern = options.strategy == AccumulationStrategy::PatternCsr;
  CsrMatrix& mat = sys.matrix;
  mat.rows = mat.cols_n = nfree;
  if (use_pattern) {
    const PatchBounds bounds = patch_bounds(mesh);
    const SparsityPattern pattern = build_sparsity_pattern(mesh, bounds, terms);

    // Pattern restricted to free x free; the vertex->free map is
    // monotone, so restricted rows stay sorted.
    mat.row_ptr.assign(nfree + 1, 0);
    for (int f = 0; f < nfree; ++f) {
      const int v = sys.free_to_vertex[f];
      std::int64_t count = 0;
      for (std::int64_t idx = pattern.row_ptr[v]; idx < pattern.row_ptr[v + 1]; ++idx)
        if (sys.vertex_to_free[pattern.cols[idx]] >= 0) ++count;
      mat.row_ptr[f + 1] = mat.row_ptr[f] + count;
    }
    mat.col.resize(mat.row_ptr[nfree]);
    mat.val.assign(mat.row_ptr[nfree], 0.0);
    for (int f = 0; f < nfree; ++f) {
      const int v = sys.free_to_vertex[f];
      std::int64_t out = mat.row_ptr[f];
      for (std::int64_t idx = pattern.row_ptr[v]; idx < pattern.row_ptr[v + 1]; ++idx) {
        const int fc = sys.vertex_to_free[pattern.cols[idx]];
        if (fc >= 0) mat.col[out++] = fc;
      }
    }
  }
  sys.rhs.assign(nfree, 0.0);

  std::unordered_map<std::int64_t, double> hash_acc;
  std::mutex hash_mutex;

  const double ref_vol = dim == 2 ? 0.5 : 1.0 / 6.0;
  const int nq = quadrature.size();

  int threads = options.threads;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, mesh.num_simplices()));

  std::atomic<int> next_chunk{0};
  std::exception_ptr worker_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    PointWorkspace ws;
    SideValues trial_cols;  // mapped to free column ids
    std::unordered_map<std::int64_t, double> local_acc;
    try {
      const int chunk = 16;
      while (true) {
        const int begin = next_chunk.fetch_add(chunk);
        if (begin >= mesh.num_simplices()) break;
        const int end = std::min(mesh.num_simplices(), begin + chunk);
        for (int e = begin; e < end; ++e) {
          const auto& s = mesh.simplex(e);
          const double scale_vol = mesh.volume(e) / ref_vol;
          for (int q = 0; q < nq; ++q) {
            const auto& bary = quadrature.points[q];
            Vec3 xq{0, 0, 0};
            for (int l = 0; l <= dim; ++l) {
              const Vec3& vx = mesh.vertex(s[l]);
              for (int c = 0; c < 3; ++c) xq[c] += bary[l] * vx[c];
            }
            const double wq = quadrature.weights[q] * scale_vol;
            ws.reset();

            for (const OperatorTerm& term : terms) {
              const SideValues& trial = side_values(ws, mesh, xq, e, term.trial);
              const SideValues& test = side_values(ws, mesh, xq, e, term.test);
              const double factor = wq * term.sign * term.coefficient(xq);

              trial_cols.clear();
              for (const auto& [gid, value] : trial) {
                const int fc = sys.vertex_to_free[gid];
                if (fc >= 0 && value != 0.0) trial_cols.emplace_back(fc, value);
              }
              if (trial_cols.empty()) continue;

              for (const auto& [gid, tvalue] : test) {
                const int fr = sys.vertex_to_free[gid];
                if (fr < 0 || tvalue == 0.0) continue;
                const double row_factor = factor * tvalue;
                if (use_pattern) {
                  const int* cbegin = mat.col.data() + mat.row_ptr[fr];
                  const int* cend = mat.col.data() + mat.row_ptr[fr + 1];
                  const int* cit = cbegin;
                  for (const auto& [fc, uvalue] : trial_cols) {
                    cit = std::lower_bound(cit, cend, fc);
                    if (cit == cend || *cit != fc)
                      fail(ErrorCode::Internal,
                           "scatter target outside the predicted sparsity pattern "
                           "(row " + std::to_string(fr) + ", col " +
                           std::to_string(fc) + ")");
                    atomic_add(&mat.val[mat.row_ptr[fr] + (cit - cbegin)],
                               row_factor * uvalue);
                  }
                } else {
                  for (const auto& [fc, uvalue] : trial_cols)
                    local_acc[static_cast<std::int64_t>(fr) * nfree + fc] +=
                        row_factor * uvalue;
                }
              }
            }

            if (rhs_field) {
              const double fq = rhs_field(xq);
              if (fq != 0.0)
                for (int l = 0; l <= dim; ++l) {
                  const int fr = sys.vertex_to_free[s[l]];
                  if (fr >= 0) atomic_add(&sys.rhs[fr], wq * fq * bary[l]);
                }
            }
          }
        }
      }
      if (!use_pattern && !local_acc.empty()) {
        std::lock_guard<std::mutex> lock(hash_mutex);
        for (const auto& [key, value] : local_acc) hash_acc[key] += value;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!worker_error) worker_error = std::current_exception();
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  if (!use_pattern) {
    std::vector<std::int64_t> keys;
    keys.reserve(hash_acc.size());
    for (const auto& [key, value] : hash_acc) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    mat.row_ptr.assign(nfree + 1, 0);
    mat.col.resize(keys.size());
    mat.val.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const int r = static_cast<int>(keys[i] / nfree);
      mat.col[i] = static_cast<int>(keys[i] % nfree);
      mat.val[i] = hash_acc[keys[i]];
      ++mat.row_ptr[r + 1];
    }
    for (int r = 0; r < nfree; ++r) mat.row_ptr[r + 1] += mat.row_ptr[r];
  }
  return sys;
}

MatrixStats matrix_stats(const DiscreteSystem& system) {
  MatrixStats st;
  const CsrMatrix& m = system.matrix;
  st.nnz = m.nnz();
  st.density = m.rows == 0
                   ? 0.0
                   : static_cast<double>(st.nnz) /
                         (static_cast<double>(m.rows) * static_cast<double>(m.rows));
  for (int r = 0; r < m.rows; ++r)
    for (std::int64_t idx = m.row_ptr[r]; idx < m.row_ptr[r + 1]; ++idx) {
      const int c = m.col[idx];
      if (c < r) continue;
      st.symmetry_defect =
          std::max(st.symmetry_defect, std::fabs(m.val[idx] - m.value_at(c, r)));
    }
  return st;
}

void write_matrix_market(const CsrMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows << " " << matrix.cols_n << " " << matrix.nnz() << "\n";
  char buf[64];
  for (int r = 0; r < matrix.rows; ++r)
    for (std::int64_t idx = matrix.row_ptr[r]; idx < matrix.row_ptr[r + 1]; ++idx) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r + 1, matrix.col[idx] + 1,
                    matrix.val[idx]);
      out << buf;
    }
  if (!out.flush()) fail(ErrorCode::Io, "write failed for " + path);
}

void write_pattern_matrix_market(const SparsityPattern& pattern,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << pattern.n << " " << pattern.n << " " << pattern.nnz() << "\n";
  for (int r = 0; r < pattern.n; ++r)
    for (std::int64_t idx = pattern.row_ptr[r]; idx < pattern.row_ptr[r + 1]; ++idx)
      out << r + 1 << " " << pattern.cols[idx] + 1 << " 1\n";
  if (!out.flush()) fail(ErrorCode::Io, "write failed for " + path);
}

}  // namespace fracfem
