#pragma once

#include "qtt/mpo.hpp"
#include "qtt/tensor_train.hpp"

namespace qtt {

//! Diagonal, superdiagonal and subdiagonal values of a Toeplitz tridiagonal.
struct TridiagCoefficients {
  double alpha = 0.0;  // diagonal
  double beta = 0.0;   // superdiagonal
  double gamma = 0.0;  // subdiagonal
};

//! Parameters of the rank-2 sine train sin(alpha*x + phi) on the
//! endpoint-inclusive grid x_k = k/(2^c - 1).
struct SineParams {
  double alpha = 0.0;
  double phi = 0.0;
  int c = 2;
};

//! 2^c x 2^c Toeplitz tridiagonal with every internal bond <= 3 (c >= 2).
Mpo tridiag_mpo(const TridiagCoefficients& coeffs, int c);

//! Rank-1 identity operator on c sites.
Mpo identity_mpo(int c);

enum class UnitVectorEnd { first, last };

//! Rank-1 basis vector e_0 or e_{2^c-1}.
TensorTrain unit_vector_tt(int c, UnitVectorEnd which);

//! (v_a, 0, ..., 0, v_b), ranks <= 2.
TensorTrain boundary_vector_tt(double v_a, double v_b, int c);

//! diag(dense(v)) as an operator with the same bond dimensions as v; exact.
Mpo diag_mpo_from_tt(const TensorTrain& v);

//! Zero except the four corner entries (0,0)=n1, (0,1)=n2,
//! (2^c-1,2^c-2)=n3, (2^c-1,2^c-1)=n4; ranks <= 2 (c >= 2).
Mpo eraser_mpo(double n1, double n2, double n3, double n4, int c);

//! Rank-2 train of sin(alpha*x + phi) on x_k = k/(2^c - 1) (c >= 2).
TensorTrain sine_tt(const SineParams& params);

//! Parameters so that sine_tt reproduces sin(K*y) on the shifted grid
//! y_i = i/(2^c + 1), i = 1..2^c.
SineParams shifted_sine_params(double K, int c);

//! Parameters so that sine_tt reproduces sin(K*y + phase) on the affine grid
//! y_k = origin + (k + offset)*step, k = 0..2^c-1.
SineParams sine_params_on_grid(double K, double phase, int c, double origin, double step,
                               double offset);

//! Rank-1 train of exp(alpha*x) on x_k = k/2^c.
TensorTrain exp_tt(double alpha, int c);

//! Train of a polynomial sum_j coeffs[j] x^j on x_k = k/2^c; ranks <= deg+1.
TensorTrain poly_tt(const std::vector<double>& coeffs, int c);

}  // namespace qtt
