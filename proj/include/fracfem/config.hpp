#pragma once

#include <string>
#include <vector>

#include "fracfem/problem.hpp"

namespace fracfem {

/// Flat key-value run configuration: file values first, CLI flags
/// override, defaults resolved at use. Unknown keys are rejected.
struct RunConfig {
  std::string problem = "cube";  // cube | ball-paper | custom
  int dim = 3;
  std::array<double, 3> beta{0.8, 0.8, 0.8};
  std::string coefficients = "paper-trig";  // paper-trig | constant
  double p_value = 1.0;
  double q_value = 1.0;
  double radius = 0.5;
  std::string node_path;  // custom mesh input
  std::string ele_path;
  std::vector<int> levels;  // mesh subdivision ladder; empty = preset default
  int quadrature_degree = 2;
  double solver_tol = 1e-10;
  int solver_max_iter = 2000;
  int threads = 0;
  long long seed = 42;
  std::string output_dir = "out";

  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  /// Ladder with the preset default filled in when `levels` is empty.
  std::vector<int> resolved_levels() const;

  FractionalDiffusionProblem to_problem() const;
};

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

}  // namespace fracfem
