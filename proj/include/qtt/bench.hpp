#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtt/pde.hpp"
#include "qtt/reference.hpp"
#include "qtt/solver.hpp"

namespace qtt {

//! A named benchmark instance.
struct ProblemSpec {
  std::string id = "problem1";
  double k = 3.0;
  double eps1 = 1.0, eps2 = 1.0;
  double nu = 0.01, alpha = 1.25;
  int cores_per_dim = 6;
  int timesteps = 0;  // 0 selects the per-problem default
  int runs = 2;
  int data_points = 256;
  std::string encoder = "analytic";  // analytic | ttsvd | interp
  int nodes = 12;                    // interpolation node count minus one
  SolveMethod method = SolveMethod::mals;
  int sweeps = 0;  // 0 selects the per-problem default
  std::uint64_t seed = 0;
  std::optional<int> max_rank;
  std::optional<double> trunc;
  std::string step_guess;  // warm | random per step/run; empty = problem default
  std::string data_file;

  void validate() const;
};

//! One benchmark result row.
struct RunRecord {
  ProblemSpec spec;
  bool ok = true;
  std::string error;
  double time_s = 0.0;  // assembly + solve, excluding oracle evaluation and I/O
  double mse = 0.0;
  int max_rank = 0;
  double bc_build_time_s = 0.0;
  double solve_time_s = 0.0;
  std::vector<double> sweep_residuals;
  //! Problem-specific extras (e.g. Cole-Hopf slice errors), name -> value.
  std::vector<std::pair<std::string, double>> extras;
  //! Final solution (last state for time-stepping problems).
  TensorTrain solution;
};

std::vector<std::string> problem_ids();

//! Execute the mapped solver and measure MSE against the mapped oracle.
//! Solver failures are captured in the record, not thrown.
RunRecord run_problem(const ProblemSpec& spec);

//! Clone the template along one axis (cores|timesteps|runs|datapoints).
std::vector<RunRecord> run_sweep(const ProblemSpec& base, const std::string& axis,
                                 const std::vector<double>& values);

std::string records_to_csv(const std::vector<RunRecord>& records);
std::string records_to_json(const std::vector<RunRecord>& records);
void emit(const std::vector<RunRecord>& records, const std::string& format,
          const std::string& path);

//! Default solver options for a problem id (registry defaults).
PdeOptions default_options(const ProblemSpec& spec);

}  // namespace qtt
