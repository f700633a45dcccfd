#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <fstream>

#include "fracfem/assembly.hpp"
#include "oracles.hpp"

using namespace fracfem;

namespace {

std::function<double(const Vec3&)> one = [](const Vec3&) { return 1.0; };

std::vector<OperatorTerm> classical_laplacian(int dim) {
  std::vector<OperatorTerm> terms;
  for (int i = 0; i < dim; ++i)
    terms.push_back(make_term(i, 1.0, Side::Left, 1.0, one, +1.0));
  return terms;
}

std::vector<OperatorTerm> fractional_terms(int dim, double gamma) {
  std::vector<OperatorTerm> terms;
  for (int i = 0; i < dim; ++i) {
    terms.push_back(make_term(i, gamma, Side::Left, 1.0, one, -1.0));
    terms.push_back(make_term(i, gamma, Side::Right, 1.0, one, +1.0));
  }
  return terms;
}

double max_abs(const CsrMatrix& m) {
  double v = 0;
  for (double x : m.val) v = std::max(v, std::fabs(x));
  return v;
}

}  // namespace

TEST_CASE("term validation") {
  SimplicialMesh mesh = generate_cube_mesh(2, 2);
  auto low_sum = make_term(0, 0.4, Side::Left, 0.4, one, 1.0);  // sum <= 1
  CHECK_THROWS_AS(assemble(mesh, {low_sum}, quadrature_rule(2, 2), nullptr,
                           DirichletPolicy::HomogeneousBoundary),
                  Error);
  auto bad_side = make_term(0, 0.6, Side::Left, 0.6, one, 1.0);
  bad_side.test.side = Side::Left;
  CHECK_THROWS_AS(assemble(mesh, {bad_side}, quadrature_rule(2, 2), nullptr,
                           DirichletPolicy::HomogeneousBoundary),
                  Error);
}

TEST_CASE("sparsity pattern structure") {
  SimplicialMesh mesh = generate_cube_mesh(4, 3);
  PatchBounds pb = patch_bounds(mesh);

  SUBCASE("classical terms give the vertex adjacency pattern") {
    SparsityPattern pat = build_sparsity_pattern(mesh, pb, classical_laplacian(3));
    // Count adjacency pairs directly.
    std::vector<std::set<int>> adj(mesh.num_vertices());
    for (int e = 0; e < mesh.num_simplices(); ++e)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          adj[mesh.simplex(e)[a]].insert(mesh.simplex(e)[b]);
    std::int64_t adj_count = 0;
    for (auto& s : adj) adj_count += static_cast<std::int64_t>(s.size());
    CHECK(pat.nnz() == adj_count);
  }

  SUBCASE("fractional pattern: symmetric, contains adjacency, chord rule") {
    SparsityPattern pat =
        build_sparsity_pattern(mesh, pb, fractional_terms(3, 0.7));
    SparsityPattern cls = build_sparsity_pattern(mesh, pb, classical_laplacian(3));
    // Contains adjacency.
    for (int r = 0; r < cls.n; ++r)
      for (std::int64_t idx = cls.row_ptr[r]; idx < cls.row_ptr[r + 1]; ++idx) {
        const int c = cls.cols[idx];
        const auto* begin = pat.cols.data() + pat.row_ptr[r];
        const auto* end = pat.cols.data() + pat.row_ptr[r + 1];
        CHECK(std::binary_search(begin, end, c));
      }
    // Symmetric as a pattern.
    for (int r = 0; r < pat.n; ++r)
      for (std::int64_t idx = pat.row_ptr[r]; idx < pat.row_ptr[r + 1]; ++idx) {
        const int c = pat.cols[idx];
        const auto* begin = pat.cols.data() + pat.row_ptr[c];
        const auto* end = pat.cols.data() + pat.row_ptr[c + 1];
        CHECK(std::binary_search(begin, end, r));
      }
  }

  SUBCASE("patches separated perpendicular to the term axis decouple") {
    // Term along x only; vertices far apart in y cannot share an
    // x-chord.
    std::vector<OperatorTerm> tx{make_term(0, 0.7, Side::Left, 1.0, one, 1.0)};
    SparsityPattern pat = build_sparsity_pattern(mesh, pb, tx);
    const int lo = 0;       // vertex at (0,0,0)
    const int hi = 5 * 4;   // vertex at (0,1,0)
    CHECK(mesh.vertex(hi)[1] == doctest::Approx(1.0));
    const auto* begin = pat.cols.data() + pat.row_ptr[lo];
    const auto* end = pat.cols.data() + pat.row_ptr[lo + 1];
    CHECK(!std::binary_search(begin, end, hi));
    // Same x-tube couples across the whole axis.
    const int far_x = 4;  // vertex at (1,0,0)
    CHECK(std::binary_search(begin, end, far_x));
  }
}

TEST_CASE("density scaling trend") {
  // Fractional density ~ 1/N^2 in 3-D, classical ~ 1/N^3.
  double frac_density[2], cls_density[2];
  int idx = 0;
  for (int n : {4, 8}) {
    SimplicialMesh mesh = generate_cube_mesh(n, 3);
    PatchBounds pb = patch_bounds(mesh);
    frac_density[idx] =
        build_sparsity_pattern(mesh, pb, fractional_terms(3, 0.8)).density();
    cls_density[idx] =
        build_sparsity_pattern(mesh, pb, classical_laplacian(3)).density();
    ++idx;
  }
  CHECK(frac_density[1] / frac_density[0] == doctest::Approx(0.25).epsilon(0.35));
  CHECK(cls_density[1] / cls_density[0] == doctest::Approx(0.125).epsilon(0.35));
}

TEST_CASE("classical assembly equals the textbook stiffness matrix") {
  for (int dim : {2, 3}) {
    SimplicialMesh mesh = generate_cube_mesh(3, dim);
    const auto textbook = oracles::textbook_stiffness(mesh);
    DiscreteSystem sys = assemble(mesh, classical_laplacian(dim),
                                  quadrature_rule(dim, 2), nullptr,
                                  DirichletPolicy::HomogeneousBoundary);
    const double scale = max_abs(sys.matrix);
    for (int r = 0; r < sys.num_free(); ++r) {
      const int vr = sys.free_to_vertex[r];
      for (std::int64_t idx = sys.matrix.row_ptr[r]; idx < sys.matrix.row_ptr[r + 1];
           ++idx) {
        const int vc = sys.free_to_vertex[sys.matrix.col[idx]];
        CHECK(std::fabs(sys.matrix.val[idx] - textbook[vr][vc]) <= 1e-10 * scale);
      }
      // And nothing significant outside the pattern.
      for (int c = 0; c < sys.num_free(); ++c)
        if (sys.matrix.find(r, c) < 0)
          CHECK(std::fabs(textbook[vr][sys.free_to_vertex[c]]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("patch test: linear solutions reproduced through boundary lift") {
  SimplicialMesh mesh = generate_cube_mesh(3, 3);
  DiscreteSystem sys =
      assemble(mesh, classical_laplacian(3), quadrature_rule(3, 2), nullptr,
               DirichletPolicy::None);
  const int nv = mesh.num_vertices();
  REQUIRE(sys.num_free() == nv);
  auto linear = [](const Vec3& x) { return 0.75 * x[0] - 1.25 * x[1] + 2.0 * x[2] + 0.5; };

  std::vector<int> interior, boundary;
  for (int v = 0; v < nv; ++v)
    (mesh.vertex_on_boundary(v) ? boundary : interior).push_back(v);

  Eigen::MatrixXd kii(interior.size(), interior.size());
  Eigen::VectorXd lift = Eigen::VectorXd::Zero(interior.size());
  for (std::size_t a = 0; a < interior.size(); ++a) {
    for (std::size_t b = 0; b < interior.size(); ++b)
      kii(a, b) = sys.matrix.value_at(interior[a], interior[b]);
    for (int vb : boundary)
      lift(a) -= sys.matrix.value_at(interior[a], vb) * linear(mesh.vertex(vb));
  }
  Eigen::VectorXd ui = kii.partialPivLu().solve(lift);
  for (std::size_t a = 0; a < interior.size(); ++a)
    CHECK(std::fabs(ui(a) - linear(mesh.vertex(interior[a]))) <= 1e-9);
}

TEST_CASE("fractional assembly: linearity and determinism") {
  SimplicialMesh mesh = generate_cube_mesh(3, 3);
  const QuadratureRule rule = quadrature_rule(3, 2);
  auto terms = fractional_terms(3, 0.8);
  std::vector<OperatorTerm> first(terms.begin(), terms.begin() + 2);
  std::vector<OperatorTerm> second(terms.begin() + 2, terms.end());

  AssemblyOptions seq;
  seq.threads = 1;
  DiscreteSystem all =
      assemble(mesh, terms, rule, one, DirichletPolicy::HomogeneousBoundary, seq);

  SUBCASE("linearity") {
    DiscreteSystem a =
        assemble(mesh, first, rule, one, DirichletPolicy::HomogeneousBoundary, seq);
    DiscreteSystem b =
        assemble(mesh, second, rule, one, DirichletPolicy::HomogeneousBoundary, seq);
    const double scale = max_abs(all.matrix);
    for (int r = 0; r < all.num_free(); ++r)
      for (std::int64_t idx = all.matrix.row_ptr[r]; idx < all.matrix.row_ptr[r + 1];
           ++idx) {
        const int c = all.matrix.col[idx];
        const double sum = a.matrix.value_at(r, c) + b.matrix.value_at(r, c);
        CHECK(std::fabs(all.matrix.val[idx] - sum) <= 1e-13 * scale);
      }
  }

  SUBCASE("sequential runs are bit-identical") {
    DiscreteSystem again =
        assemble(mesh, terms, rule, one, DirichletPolicy::HomogeneousBoundary, seq);
    REQUIRE(again.matrix.val.size() == all.matrix.val.size());
    for (std::size_t i = 0; i < all.matrix.val.size(); ++i)
      CHECK(again.matrix.val[i] == all.matrix.val[i]);
    for (std::size_t i = 0; i < all.rhs.size(); ++i) CHECK(again.rhs[i] == all.rhs[i]);
  }

  SUBCASE("parallel matches sequential to 1e-12") {
    AssemblyOptions par;
    par.threads = 2;
    DiscreteSystem p =
        assemble(mesh, terms, rule, one, DirichletPolicy::HomogeneousBoundary, par);
    const double scale = max_abs(all.matrix);
    REQUIRE(p.matrix.val.size() == all.matrix.val.size());
    for (std::size_t i = 0; i < all.matrix.val.size(); ++i)
      CHECK(std::fabs(p.matrix.val[i] - all.matrix.val[i]) <= 1e-12 * scale);
  }

  SUBCASE("hash-map accumulation agrees with the pattern path") {
    AssemblyOptions naive;
    naive.threads = 1;
    naive.strategy = AccumulationStrategy::HashMap;
    DiscreteSystem h =
        assemble(mesh, terms, rule, one, DirichletPolicy::HomogeneousBoundary, naive);
    const double scale = max_abs(all.matrix);
    for (int r = 0; r < h.num_free(); ++r)
      for (std::int64_t idx = h.matrix.row_ptr[r]; idx < h.matrix.row_ptr[r + 1]; ++idx)
        CHECK(std::fabs(h.matrix.val[idx] -
                        all.matrix.value_at(r, h.matrix.col[idx])) <= 1e-12 * scale);
  }
}

TEST_CASE("pattern sharpness on an all-direction fractional assembly") {
  SimplicialMesh mesh = generate_cube_mesh(6, 3);
  AssemblyOptions opt;
  DiscreteSystem sys = assemble(mesh, fractional_terms(3, 0.8), quadrature_rule(3, 2),
                                nullptr, DirichletPolicy::HomogeneousBoundary, opt);
  const double scale = max_abs(sys.matrix);
  std::int64_t hit = 0;
  for (double v : sys.matrix.val)
    if (std::fabs(v) > 1e-14 * scale) ++hit;
  CHECK(static_cast<double>(hit) / sys.matrix.nnz() >= 0.5);
}

TEST_CASE("zero rhs gives a zero load vector") {
  SimplicialMesh mesh = generate_cube_mesh(2, 3);
  DiscreteSystem sys =
      assemble(mesh, fractional_terms(3, 0.6), quadrature_rule(3, 2),
               [](const Vec3&) { return 0.0; }, DirichletPolicy::HomogeneousBoundary);
  for (double v : sys.rhs) CHECK(v == 0.0);
}

TEST_CASE("matrix stats") {
  SimplicialMesh mesh = generate_cube_mesh(3, 3);
  DiscreteSystem cls = assemble(mesh, classical_laplacian(3), quadrature_rule(3, 2),
                                nullptr, DirichletPolicy::HomogeneousBoundary);
  MatrixStats st = matrix_stats(cls);
  CHECK(st.nnz == cls.matrix.nnz());
  CHECK(st.density ==
        doctest::Approx(static_cast<double>(st.nnz) /
                        (static_cast<double>(cls.num_free()) * cls.num_free())));
  CHECK(st.symmetry_defect <= 1e-12 * max_abs(cls.matrix));  // Laplacian is symmetric

  DiscreteSystem frac = assemble(mesh, fractional_terms(3, 0.7), quadrature_rule(3, 2),
                                 nullptr, DirichletPolicy::HomogeneousBoundary);
  MatrixStats fst = matrix_stats(frac);
  CHECK(fst.symmetry_defect > 0);  // fractional stiffness is nonsymmetric
}

TEST_CASE("matrix market export") {
  SimplicialMesh mesh = generate_cube_mesh(2, 2);
  DiscreteSystem sys = assemble(mesh, classical_laplacian(2), quadrature_rule(2, 2),
                                nullptr, DirichletPolicy::None);
  const std::string path = "/tmp/fracfem_test_matrix.mtx";
  write_matrix_market(sys.matrix, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real general");
  int rows, cols;
  std::int64_t nnz;
  in >> rows >> cols >> nnz;
  CHECK(rows == sys.num_free());
  CHECK(nnz == sys.matrix.nnz());
  double checksum = 0;
  for (std::int64_t i = 0; i < nnz; ++i) {
    int r, c;
    double v;
    in >> r >> c >> v;
    CHECK(r >= 1);
    CHECK(c >= 1);
    checksum += v;
  }
  double want = 0;
  for (double v : sys.matrix.val) want += v;
  CHECK(checksum == doctest::Approx(want).epsilon(1e-14));
  std::remove(path.c_str());
}
