#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracfem/mesh.hpp"

namespace fracfem {

namespace {

// Whitespace-token reader that remembers line/column for diagnostics
// and skips '#' comments.
class TokenReader {
 public:
  TokenReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) fail(ErrorCode::Io, "cannot open " + path);
  }

  bool next(std::string* tok) {
    while (true) {
      if (pos_ >= line_.size()) {
        if (!std::getline(in_, line_)) return false;
        ++lineno_;
        pos_ = 0;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(line_[pos_]))) {
        ++pos_;
        continue;
      }
      if (line_[pos_] == '#') {  // comment to end of line
        pos_ = line_.size();
        continue;
      }
      break;
    }
    col_ = pos_ + 1;
    std::size_t start = pos_;
    while (pos_ < line_.size() &&
           !std::isspace(static_cast<unsigned char>(line_[pos_])))
      ++pos_;
    *tok = line_.substr(start, pos_ - start);
    return true;
  }

  long long read_int(const char* what) {
    std::string tok;
    if (!next(&tok)) fail_parse(std::string("unexpected end of file, expected ") + what);
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size())
      fail_parse(std::string("expected integer ") + what + ", got '" + tok + "'");
    return value;
  }

  double read_double(const char* what) {
    std::string tok;
    if (!next(&tok)) fail_parse(std::string("unexpected end of file, expected ") + what);
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size())
      fail_parse(std::string("expected number ") + what + ", got '" + tok + "'");
    return value;
  }

  [[noreturn]] void fail_parse(const std::string& msg) {
    fail(ErrorCode::Parse, path_ + ":" + std::to_string(lineno_) + ":" +
                               std::to_string(col_) + ": " + msg);
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::string line_;
  std::size_t pos_ = 0;
  std::size_t lineno_ = 0;
  std::size_t col_ = 1;
};

}  // namespace

SimplicialMesh load_mesh(const std::string& node_path, const std::string& ele_path) {
  TokenReader nodes(node_path);
  const long long npoints = nodes.read_int("point count");
  const long long dim = nodes.read_int("dimension");
  const long long nattrs = nodes.read_int("attribute count");
  const long long nmarkers = nodes.read_int("boundary marker count");
  if (npoints <= 0) nodes.fail_parse("point count must be positive");
  if (dim != 2 && dim != 3) nodes.fail_parse("dimension must be 2 or 3");

  std::vector<Vec3> verts(static_cast<std::size_t>(npoints), Vec3{0, 0, 0});
  long long base = 0;
  for (long long p = 0; p < npoints; ++p) {
    const long long idx = nodes.read_int("point index");
    if (p == 0) {
      if (idx != 0 && idx != 1) nodes.fail_parse("first point index must be 0 or 1");
      base = idx;
    }
    const long long row = idx - base;
    if (row < 0 || row >= npoints) nodes.fail_parse("point index out of range");
    Vec3 x{0, 0, 0};
    for (int i = 0; i < dim; ++i) x[i] = nodes.read_double("coordinate");
    for (long long i = 0; i < nattrs + nmarkers; ++i) nodes.read_double("attribute");
    verts[static_cast<std::size_t>(row)] = x;
  }

  TokenReader eles(ele_path);
  const long long nsimp = eles.read_int("simplex count");
  const long long nodes_per = eles.read_int("nodes per simplex");
  const long long eattrs = eles.read_int("attribute count");
  if (nsimp <= 0) eles.fail_parse("simplex count must be positive");
  if (nodes_per != dim + 1)
    eles.fail_parse("expected " + std::to_string(dim + 1) + " nodes per simplex");

  std::vector<std::array<int, 4>> simps(static_cast<std::size_t>(nsimp),
                                        {-1, -1, -1, -1});
  long long ebase = 0;
  for (long long e = 0; e < nsimp; ++e) {
    const long long idx = eles.read_int("simplex index");
    if (e == 0) {
      if (idx != 0 && idx != 1) eles.fail_parse("first simplex index must be 0 or 1");
      ebase = idx;
    }
    const long long row = idx - ebase;
    if (row < 0 || row >= nsimp) eles.fail_parse("simplex index out of range");
    std::array<int, 4> s{-1, -1, -1, -1};
    for (int l = 0; l < nodes_per; ++l) {
      const long long v = eles.read_int("vertex id") - base;
      if (v < 0 || v >= npoints) eles.fail_parse("vertex id out of range");
      s[l] = static_cast<int>(v);
    }
    for (long long i = 0; i < eattrs; ++i) eles.read_double("attribute");
    simps[static_cast<std::size_t>(row)] = s;
  }

  return SimplicialMesh(static_cast<int>(dim), std::move(verts), std::move(simps));
}

void save_mesh(const SimplicialMesh& mesh, const std::string& node_path,
               const std::string& ele_path) {
  std::ofstream nodes(node_path);
  if (!nodes) fail(ErrorCode::Io, "cannot write " + node_path);
  nodes << mesh.num_vertices() << " " << mesh.dim() << " 0 0\n";
  char buf[64];
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    nodes << (v + 1);
    for (int i = 0; i < mesh.dim(); ++i) {
      std::snprintf(buf, sizeof buf, " %.17g", mesh.vertex(v)[i]);
      nodes << buf;
    }
    nodes << "\n";
  }
  if (!nodes.flush()) fail(ErrorCode::Io, "write failed for " + node_path);

  std::ofstream eles(ele_path);
  if (!eles) fail(ErrorCode::Io, "cannot write " + ele_path);
  eles << mesh.num_simplices() << " " << mesh.dim() + 1 << " 0\n";
  for (int e = 0; e < mesh.num_simplices(); ++e) {
    eles << (e + 1);
    for (int l = 0; l <= mesh.dim(); ++l) eles << " " << mesh.simplex(e)[l] + 1;
    eles << "\n";
  }
  if (!eles.flush()) fail(ErrorCode::Io, "write failed for " + ele_path);
}

}  // namespace fracfem
