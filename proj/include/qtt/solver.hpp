#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtt/mpo.hpp"
#include "qtt/tensor_train.hpp"

namespace qtt {

enum class SolveMethod { als, mals };

//! How the initial solution guess is constructed.
struct GuessStrategy {
  enum class Kind { rhs_ranks, random_ramp };
  enum class Progression { arithmetic, geometric };

  Kind kind = Kind::random_ramp;
  //! rhs_ranks: additive pad over the template ranks. random_ramp: step/base.
  int rank_pad = 2;
  Progression progression = Progression::arithmetic;
  int max_rank = 16;
};

//! Random initial guess; ranks from the strategy, unit norm, deterministic in seed.
TensorTrain make_guess(const GuessStrategy& strategy, const TensorTrain& rhs_template,
                       std::uint64_t seed);

struct SolverConfig {
  SolveMethod method = SolveMethod::mals;
  int sweeps = 2;
  //! MALS split truncation (ALS ignores it; ranks are fixed by the guess).
  Tolerance trunc{1e-10, 64};
  //! Local systems at or below this dimension are solved by dense factorization.
  int direct_dim_cap = 4096;
  double local_tol = 1e-10;
  int local_max_iters = 200;
  //! Enables the matrix-free CG path for large local systems.
  bool spd_hint = false;
  //! Record the quadratic energy 1/2<x,Ax> - <b,x> after every local update.
  bool track_energy = false;
  //! Compute the relative residual after every full sweep.
  bool record_residuals = true;
  std::uint64_t seed = 0;
};

struct Diagnostics {
  std::vector<double> sweep_residuals;
  double wall_time_s = 0.0;
  int max_rank = 1;
  bool regularized = false;
  double max_local_residual = 0.0;
  int direct_solves = 0;
  int iterative_solves = 0;
  std::vector<double> energies;
  std::string to_json() const;
};

struct SolveResult {
  TensorTrain x;
  Diagnostics diag;
};

//! One-site alternating scheme; the solution keeps the ranks of x0.
SolveResult als_solve(const Mpo& A, const TensorTrain& x0, const TensorTrain& b,
                      const SolverConfig& cfg);

//! Two-site scheme with rank adaptation controlled by cfg.trunc.
SolveResult mals_solve(const Mpo& A, const TensorTrain& x0, const TensorTrain& b,
                       const SolverConfig& cfg);

//! Dispatch on cfg.method.
SolveResult solve(const Mpo& A, const TensorTrain& x0, const TensorTrain& b,
                  const SolverConfig& cfg);

//! ||Ax - b|| / ||b|| in train arithmetic (exact difference, stable norm).
double residual(const Mpo& A, const TensorTrain& x, const TensorTrain& b);

}  // namespace qtt
