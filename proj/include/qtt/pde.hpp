#pragma once

#include <functional>
#include <vector>

#include "qtt/constructions.hpp"
#include "qtt/encoders.hpp"
#include "qtt/solver.hpp"

namespace qtt {

enum class GridStyle {
  //! h = (b-a)/(N+1), points a+(i+1)h: N interior points of a Dirichlet box.
  interior_dirichlet,
  //! h = (b-a)/N, points a+(i+1)h: one implicit step per point from the
  //! initial condition; the right-boundary value enters as the ghost at b+h.
  spacetime
};

struct Grid1D {
  double a = 0.0, b = 1.0;
  int c = 6;
  GridStyle style = GridStyle::interior_dirichlet;

  long long n() const { return 1LL << c; }
  double h() const {
    return style == GridStyle::interior_dirichlet ? (b - a) / static_cast<double>(n() + 1)
                                                  : (b - a) / static_cast<double>(n());
  }
  //! Grid point for 0-based tensor index i.
  double point(long long i) const { return a + static_cast<double>(i + 1) * h(); }
  void validate() const;
};

//! Constant coefficients of p u_xx + q u_yy + r u_xy + s u_x + t u_y + v u.
struct FdCoefficients2D {
  double p = 0, q = 0, r = 0, s = 0, t = 0, v = 0;
};

//! Dirichlet data on one edge: analytic values plus an optional low-rank
//! train factory over the edge's grid. A default EdgeSpec means zero data.
struct EdgeSpec {
  ScalarFn value;
  std::function<TensorTrain(const Grid1D&)> factory;

  bool is_zero() const { return !value && !factory; }
  //! Train of edge values on the given transverse grid.
  TensorTrain build(const Grid1D& grid) const;
};

struct BoundarySpec2D {
  EdgeSpec left, right, bottom, top;  // x=a, x=b, y=a, y=b edges
};

struct TimeSteppingConfig {
  double dt = 1e-2;
  int steps = 100;
};

struct SpaceTimeConfig {
  int runs = 2;
  double nu = 0.01;
};

enum class StepGuess { warm, random };

struct PdeOptions {
  SolverConfig solver;
  GuessStrategy guess;
  //! Time-stepping solvers: warm-start each step from the right-hand side or
  //! draw a fresh random guess per step (seed-dependent variation).
  StepGuess step_guess = StepGuess::warm;
};

struct PdeResult {
  TensorTrain u;
  Diagnostics diag;
  double assemble_time_s = 0.0;
  double solve_time_s = 0.0;
};

struct TimeSteppingResult {
  //! states[k] is the solution after k steps; states[0] is the initial train.
  std::vector<TensorTrain> states;
  Diagnostics last_diag;
  double solve_time_s = 0.0;
  double bc_build_time_s = 0.0;
};

struct SpaceTimeRunsResult {
  //! One space-time field per nonlinear update.
  std::vector<TensorTrain> run_solutions;
  Diagnostics last_diag;
  double solve_time_s = 0.0;
};

//! h^2-scaled 1D operator of p u_xx + s u_x + v u (Toeplitz tridiagonal).
Mpo fd_operator_1d(double p, double s, double v, const Grid1D& grid);

//! 2D operator assembled from Kronecker factors, rounded at 1e-13.
Mpo fd_operator_2d(const FdCoefficients2D& coeffs, const Grid1D& grid);

//! An assembled operator/right-hand-side pair A x = rhs.
struct TtSystem {
  Mpo a;
  TensorTrain rhs;
};

//! h^2-scaled interior Poisson system: A w = h^2 f - b (A is the plain
//! Laplacian stencil sum; the solvers negate it for positive definiteness).
TtSystem poisson2d_system(const TensorTrain& source, const BoundarySpec2D& bc, const Grid1D& grid);
TtSystem poisson3d_system(const TensorTrain& source, const Grid1D& grid, double eps1, double eps2);

//! Space-time heat system A w = b (2c cores, t then x).
TtSystem heat_st_system(const EdgeSpec& initial, const EdgeSpec& g1, const EdgeSpec& g2,
                        const Grid1D& grid_t, const Grid1D& grid_x);

//! Space-time Burgers pieces: lhs = a_linear + diag(u) * advection.
struct BurgersStParts {
  Mpo a_linear;
  Mpo advection;
  TensorTrain rhs;
};
BurgersStParts burgers_st_parts(const EdgeSpec& initial, const EdgeSpec& g1, const EdgeSpec& g2,
                                const Grid1D& grid_t, const Grid1D& grid_x, double nu);

//! Poisson/Laplace on (a,b)^2 with Dirichlet boundaries: solves the
//! h^2-scaled interior system for ∇²u = f. source holds f on the 2c-core
//! interior grid (pass a zero train for Laplace).
PdeResult poisson_solve_2d(const TensorTrain& source, const BoundarySpec2D& bc, const Grid1D& grid,
                           const PdeOptions& opts);

//! u_xx + eps1 u_yy + eps2 u_zz = f on (a,b)^3 with zero Dirichlet data.
PdeResult poisson_solve_3d(const TensorTrain& source, const Grid1D& grid, double eps1, double eps2,
                           const PdeOptions& opts);

//! Implicit 1D heat steps A w_{j+1} = w_j + b_{j+1}.
TimeSteppingResult heat_ts_1d(const TensorTrain& initial, const ScalarFn& g1, const ScalarFn& g2,
                              const Grid1D& grid, const TimeSteppingConfig& ts,
                              const PdeOptions& opts);

//! Single space-time solve of the 1D heat equation (2c cores, t then x).
PdeResult heat_st_1d(const EdgeSpec& initial, const EdgeSpec& g1, const EdgeSpec& g2,
                     const Grid1D& grid_t, const Grid1D& grid_x, const PdeOptions& opts);

//! 2D heat with time-dependent Dirichlet data on the x=a and y=b edges,
//! rebuilt each step by 1D interpolative encoding.
TimeSteppingResult heat2d_tdbc(const Grid1D& grid, const TimeSteppingConfig& ts,
                               double diffusivity, const ScalarFn2& left_edge,
                               const ScalarFn2& top_edge, const InterpolationConfig& encoder,
                               const PdeOptions& opts);

enum class BurgersBc { dirichlet, neumann_dirichlet };

//! Implicit linearized Burgers steps (A + D'_j B) w_{j+1} = w_j + b_{j+1}.
TimeSteppingResult burgers_ts(const TensorTrain& initial, BurgersBc bc_kind, const ScalarFn& g1,
                              const ScalarFn& g2, double nu, const Grid1D& grid,
                              const TimeSteppingConfig& ts, const PdeOptions& opts);

//! Space-time Burgers with `runs` updates of the nonlinear term.
SpaceTimeRunsResult burgers_st(const EdgeSpec& initial, const EdgeSpec& g1, const EdgeSpec& g2,
                               const Grid1D& grid_t, const Grid1D& grid_x,
                               const SpaceTimeConfig& st, const PdeOptions& opts);

}  // namespace qtt
