#pragma once

#include <functional>

#include "qtt/tensor_train.hpp"

namespace qtt {

using ScalarFn = std::function<double(double)>;
using ScalarFn2 = std::function<double(double, double)>;

enum class NodeScheme { chebyshev_lobatto, equispaced, legendre };

//! Multiscale interpolative construction settings; M+1 nodes give ranks <= M+1.
struct InterpolationConfig {
  int m = 12;  // node count minus one
  NodeScheme node_scheme = NodeScheme::chebyshev_lobatto;
  int c = 8;
};

//! Interpolation nodes on [0,1] for the chosen scheme (size m+1).
std::vector<double> interpolation_nodes(int m, NodeScheme scheme);

//! Encode f on the dyadic grid x_k = k/2^c; ranks <= m+1.
//! Reconstruction error is the (m+1)-node interpolation error of f on
//! dyadic subintervals.
TensorTrain interpolative_tt(const ScalarFn& f, const InterpolationConfig& cfg);

//! 2D node-slice decomposition f(x,y) ~ sum_j f(x, eta_j) L_j(y), each factor
//! encoded in 1D and combined in serial ordering (2c cores).
//! Ranks <= (m+1)^2 before rounding; rounded at round_tol.
TensorTrain interpolative_tt_2d(const ScalarFn2& f, const InterpolationConfig& cfg,
                                const Tolerance& round_tol = {1e-12, {}});

//! Encode f at arbitrary grid points x_k = origin + (k + offset) * step by
//! precomposition with the affine map from the dyadic grid.
TensorTrain interpolative_tt_on_grid(const ScalarFn& f, const InterpolationConfig& cfg,
                                     double origin, double step, double offset);

//! Dense sampling + TT-SVD on an arbitrary affine grid (c <= dense cap).
TensorTrain ttsvd_tt_on_grid(const ScalarFn& f, int c, double origin, double step, double offset,
                             const Tolerance& tol = {});

}  // namespace qtt
