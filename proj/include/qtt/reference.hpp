#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qtt/pde.hpp"
#include "qtt/tensor_train.hpp"

namespace qtt {

//! Direct dense solve with one refinement step; relative residual <= 1e-12.
Vector dense_solve(const Matrix& a, const Vector& rhs);

Matrix dense_tridiag(double alpha, double beta, double gamma, long long n);
Matrix dense_eraser(double n1, double n2, double n3, double n4, long long n);
Matrix dense_kron(const Matrix& a, const Matrix& b);

//! Dense twins of the operator assemblies in the pde module.
Matrix dense_fd_operator_1d(double p, double s, double v, const Grid1D& grid);
Matrix dense_fd_operator_2d(const FdCoefficients2D& coeffs, const Grid1D& grid);

struct DenseSystem {
  Matrix a;
  Vector rhs;
};

//! Dense twin of poisson_solve_2d's h^2-scaled interior system (A w = h^2 f - b).
DenseSystem dense_poisson2d_system(const ScalarFn2& f,
                                   const std::function<double(double, double)>& boundary,
                                   const Grid1D& grid);

//! Named closed-form solutions used by the benchmarks.
struct AnalyticSolution {
  enum class Tag {
    laplace_sinh,
    poisson3d_sine,
    poisson_exp,
    heat_mix,
    burgers_wood,
    burgers_colehopf
  };
  Tag tag{};
  double k = 0, eps1 = 0, eps2 = 0, nu = 0, alpha = 0;
  std::function<double(const std::vector<double>&)> evaluator;

  double operator()(const std::vector<double>& point) const { return evaluator(point); }
};

AnalyticSolution laplace_sinh_solution(double k);
AnalyticSolution poisson3d_sine_solution(double eps1, double eps2);
AnalyticSolution poisson_exp_solution();
AnalyticSolution heat_mix_solution();
AnalyticSolution burgers_wood_solution(double nu, double alpha);

//! Gauss-Hermite rule for weight exp(-x^2) (Golub-Welsch nodes).
struct GaussHermite {
  std::vector<double> x, w;
  explicit GaussHermite(int n);
};

//! Cole-Hopf solution of u_t = nu u_xx - u u_x with u(x,0) = -sin(pi x),
//! evaluated by Gauss-Hermite quadrature of the two integral ratios.
class ColeHopfReference {
 public:
  explicit ColeHopfReference(double nu, int nodes = 100);
  double eval(double x, double t) const;
  int nodes() const { return nodes_; }

 private:
  double nu_;
  int nodes_;
  GaussHermite rule_;
};

//! Sample a scalar function on a grid and compress (1D helper).
TensorTrain grid_function_tt(const ScalarFn& f, const Grid1D& grid,
                             const Tolerance& tol = {1e-13, {}});

//! Mean squared error of a train against a pointwise function over the
//! product of grids (dense path; total bits must fit the dense cap).
double mse_dense(const TensorTrain& u, const std::vector<Grid1D>& grids,
                 const std::function<double(const std::vector<double>&)>& exact);

//! ||u - exact||^2 / N with both sides in train form (any size).
double mse_tt(const TensorTrain& u, const TensorTrain& exact);

//! Monte-Carlo MSE estimate from `samples` random grid indices.
double mse_sampled(const TensorTrain& u, const std::vector<Grid1D>& grids,
                   const std::function<double(const std::vector<double>&)>& exact,
                   long long samples, std::uint64_t seed);

}  // namespace qtt
