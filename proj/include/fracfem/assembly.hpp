#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fracfem/fracops.hpp"
#include "fracfem/mesh.hpp"
#include "fracfem/quadrature.hpp"

namespace fracfem {

/// One bilinear term (c(x) D^alpha_i u, D^beta_i v). Orders carry the
/// side; when both are fractional they must sit on opposite sides and
/// their orders must sum into (1, 2].
struct OperatorTerm {
  int direction = 0;  // 0-based axis shared by both operators
  FractionalOrder trial;
  FractionalOrder test;
  std::function<double(const Vec3&)> coefficient;
  double sign = 1.0;
};

OperatorTerm make_term(int direction, double trial_gamma, Side trial_side,
                       double test_gamma, std::function<double(const Vec3&)> coefficient,
                       double sign);

/// Predicted nonzero structure of the fractional stiffness matrix over
/// all mesh vertices (the template matrix). Symmetric; always contains
/// the vertex-adjacency pattern.
///
/// A fractional term in direction i couples two vertices exactly when
/// their patches can share a chord along e_i, i.e. when the patch
/// bounding boxes overlap in every direction other than i. Classical
/// terms couple element neighbors only.
struct SparsityPattern {
  int n = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<int> cols;  // sorted within each row

  std::int64_t nnz() const { return static_cast<std::int64_t>(cols.size()); }
  double density() const {
    return n == 0 ? 0.0 : static_cast<double>(nnz()) / (static_cast<double>(n) * n);
  }
};

SparsityPattern build_sparsity_pattern(const SimplicialMesh& mesh,
                                       const PatchBounds& bounds,
                                       const std::vector<OperatorTerm>& terms);

/// Compressed-row matrix with an immutable pattern. Writes outside the
/// pattern are a hard failure.
struct CsrMatrix {
  int rows = 0;
  int cols_n = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  std::int64_t nnz() const { return static_cast<std::int64_t>(col.size()); }
  std::int64_t find(int r, int c) const;
  double value_at(int r, int c) const;  // 0 outside the pattern
};

enum class DirichletPolicy {
  HomogeneousBoundary,  // boundary vertices removed via the dof map
  None,                 // all vertices kept (singular for pure Neumann-free forms)
};

struct DiscreteSystem {
  CsrMatrix matrix;  // free x free
  std::vector<double> rhs;
  std::vector<int> vertex_to_free;  // -1 for constrained vertices
  std::vector<int> free_to_vertex;

  int num_free() const { return static_cast<int>(free_to_vertex.size()); }
};

/// PatternCsr is the production path: the template pattern is built
/// first and every write lands on a preallocated entry. HashMap is the
/// naive baseline the benchmark compares against (no pattern, dynamic
/// hash accumulation, CSR conversion at the end).
enum class AccumulationStrategy { PatternCsr, HashMap };

struct AssemblyOptions {
  int threads = 0;  // <= 0: all cores; 1 is bit-reproducible
  AccumulationStrategy strategy = AccumulationStrategy::PatternCsr;
};

/// Assembles the stiffness matrix and load vector for the term sum by
/// simplex quadrature, path tracing and the closed-form kernels.
/// Quadrature points must be strictly interior (terminal-segment
/// contract).
DiscreteSystem assemble(const SimplicialMesh& mesh,
                        const std::vector<OperatorTerm>& terms,
                        const QuadratureRule& quadrature,
                        const std::function<double(const Vec3&)>& rhs_field,
                        DirichletPolicy dirichlet, const AssemblyOptions& options = {});

struct MatrixStats {
  std::int64_t nnz = 0;
  double density = 0;
  double symmetry_defect = 0;  // max |K_jk - K_kj|; informational
};

MatrixStats matrix_stats(const DiscreteSystem& system);

/// MatrixMarket coordinate format, 1-based, real general.
void write_matrix_market(const CsrMatrix& matrix, const std::string& path);
/// Same format with unit values.
void write_pattern_matrix_market(const SparsityPattern& pattern, const std::string& path);

}  // namespace fracfem
