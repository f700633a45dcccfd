#include "fracfem/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fracfem {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size())
    fail(ErrorCode::InvalidArgument, "config key '" + key + "': bad number '" + value + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size())
    fail(ErrorCode::InvalidArgument, "config key '" + key + "': bad integer '" + value + "'");
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "problem") {
    if (value != "cube" && value != "ball-paper" && value != "custom")
      fail(ErrorCode::InvalidArgument, "problem must be cube, ball-paper or custom");
    problem = value;
  } else if (key == "dim") {
    dim = static_cast<int>(parse_int(key, value));
  } else if (key == "beta") {
    std::istringstream is(value);
    std::array<double, 3> b{0, 0, 0};
    int count = 0;
    std::string tok;
    while (is >> tok) {
      if (count >= 3) fail(ErrorCode::InvalidArgument, "beta takes at most 3 values");
      b[count++] = parse_double(key, tok);
    }
    if (count == 0) fail(ErrorCode::InvalidArgument, "beta needs at least one value");
    for (int i = count; i < 3; ++i) b[i] = b[count - 1];
    beta = b;
  } else if (key == "coefficients") {
    if (value != "paper-trig" && value != "constant")
      fail(ErrorCode::InvalidArgument, "coefficients must be paper-trig or constant");
    coefficients = value;
  } else if (key == "p_value") {
    p_value = parse_double(key, value);
  } else if (key == "q_value") {
    q_value = parse_double(key, value);
  } else if (key == "radius") {
    radius = parse_double(key, value);
  } else if (key == "node_path") {
    node_path = value;
  } else if (key == "ele_path") {
    ele_path = value;
  } else if (key == "levels") {
    std::istringstream is(value);
    levels.clear();
    std::string tok;
    while (is >> tok) levels.push_back(static_cast<int>(parse_int(key, tok)));
  } else if (key == "quadrature_degree") {
    quadrature_degree = static_cast<int>(parse_int(key, value));
  } else if (key == "solver_tol") {
    solver_tol = parse_double(key, value);
  } else if (key == "solver_max_iter") {
    solver_max_iter = static_cast<int>(parse_int(key, value));
  } else if (key == "threads") {
    threads = static_cast<int>(parse_int(key, value));
  } else if (key == "seed") {
    seed = parse_int(key, value);
  } else if (key == "output_dir") {
    output_dir = value;
  } else {
    fail(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
  }
}

std::string RunConfig::get(const std::string& key) const {
  if (key == "problem") return problem;
  if (key == "dim") return std::to_string(dim);
  if (key == "beta") {
    std::string out = format_double(beta[0]);
    for (int i = 1; i < dim; ++i) out += " " + format_double(beta[i]);
    return out;
  }
  if (key == "coefficients") return coefficients;
  if (key == "p_value") return format_double(p_value);
  if (key == "q_value") return format_double(q_value);
  if (key == "radius") return format_double(radius);
  if (key == "node_path") return node_path;
  if (key == "ele_path") return ele_path;
  if (key == "levels") {
    std::string out;
    for (int n : resolved_levels()) out += (out.empty() ? "" : " ") + std::to_string(n);
    return out;
  }
  if (key == "quadrature_degree") return std::to_string(quadrature_degree);
  if (key == "solver_tol") return format_double(solver_tol);
  if (key == "solver_max_iter") return std::to_string(solver_max_iter);
  if (key == "threads") return std::to_string(threads);
  if (key == "seed") return std::to_string(seed);
  if (key == "output_dir") return output_dir;
  fail(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
}

std::vector<int> RunConfig::resolved_levels() const {
  if (!levels.empty()) return levels;
  if (problem == "ball-paper") return {6, 12, 20};
  return {4, 8, 16, 24};
}

FractionalDiffusionProblem RunConfig::to_problem() const {
  FractionalDiffusionProblem p;
  p.dim = dim;
  p.beta = beta;
  p.radius = radius;
  p.coefficients = coefficients == "constant" ? CoefficientKind::Constant
                                              : CoefficientKind::PaperTrig;
  p.p_value = p_value;
  p.q_value = q_value;
  if (problem == "ball-paper") {
    p.domain = DomainKind::Ball;
    p.exact = ExactSolutionKind::BallQuartic;
  } else if (problem == "cube") {
    p.domain = DomainKind::Cube;
    p.exact = ExactSolutionKind::CubePoly;
  } else {
    p.domain = DomainKind::Cube;
    p.exact = ExactSolutionKind::None;
  }
  validate_problem(p);
  return p;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::Parse,
           path + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& err) {
      fail(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ": " + err.what());
    }
  }
  return cfg;
}

void save_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  for (const char* key :
       {"problem", "dim", "beta", "coefficients", "p_value", "q_value", "radius",
        "node_path", "ele_path", "levels", "quadrature_degree", "solver_tol",
        "solver_max_iter", "threads", "seed", "output_dir"})
    out << key << " = " << config.get(key) << "\n";
  if (!out.flush()) fail(ErrorCode::Io, "write failed for " + path);
}

}  // namespace fracfem
