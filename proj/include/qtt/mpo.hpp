#pragma once

#include "qtt/tensor_train.hpp"

namespace qtt {

//! Rank-4 operator core with shape (left bond, out mode, in mode, right bond).
//! Column-major with index a + r1*(o + no*(i + ni*b)).
class Core4 {
 public:
  Core4() = default;
  Core4(Index r1, Index no, Index ni, Index r2)
      : r1_(r1), no_(no), ni_(ni), r2_(r2), data_(Vector::Zero(r1 * no * ni * r2)) {}

  Index left() const { return r1_; }
  Index out_mode() const { return no_; }
  Index in_mode() const { return ni_; }
  Index right() const { return r2_; }

  double& operator()(Index a, Index o, Index i, Index b) {
    return data_[a + r1_ * (o + no_ * (i + ni_ * b))];
  }
  double operator()(Index a, Index o, Index i, Index b) const {
    return data_[a + r1_ * (o + no_ * (i + ni_ * b))];
  }

  //! r1 x r2 slice for fixed (out, in) mode pair.
  Eigen::Map<const Matrix, 0, Eigen::OuterStride<>> slice(Index o, Index i) const {
    return Eigen::Map<const Matrix, 0, Eigen::OuterStride<>>(
        data_.data() + r1_ * (o + no_ * i), r1_, r2_, Eigen::OuterStride<>(r1_ * no_ * ni_));
  }

  Vector& data() { return data_; }
  const Vector& data() const { return data_; }

 private:
  Index r1_ = 0, no_ = 0, ni_ = 0, r2_ = 0;
  Vector data_;
};

//! Matrix product operator; mode sizes are 2 everywhere in this project.
struct MatrixProductOperator {
  std::vector<Core4> cores;

  MatrixProductOperator() = default;
  explicit MatrixProductOperator(std::vector<Core4> cs) : cores(std::move(cs)) {}

  int order() const { return static_cast<int>(cores.size()); }
  std::vector<int> ranks() const;
  int max_rank() const;
  void validate() const;
};

using Mpo = MatrixProductOperator;

//! Inner core product: bond-space matrix product, mode-space Kronecker product.
//! For unit bond boundaries, folding a chain with it yields the dense operator.
Core4 inner_core_product(const Core4& a, const Core4& b);

//! Fold a whole chain with the inner core product (boundary bonds must be 1)
//! and return the dense matrix.
Matrix mpo_to_dense(const Mpo& m);

//! TT-SVD of a 2^c x 2^c matrix over paired (row bit, column bit) modes.
Mpo mpo_from_dense(const Matrix& m, const Tolerance& tol = {});

double mpo_entry(const Mpo& m, long long row, long long col);

Mpo mpo_add(const Mpo& a, const Mpo& b);
Mpo mpo_scale(const Mpo& a, double s);
//! dense(result) = dense(a) * dense(b) (matrix product), rounded per tol.
Mpo mpo_compose(const Mpo& a, const Mpo& b, const Tolerance& tol = {});
//! dense(result) = dense(a) (x) dense(b).
Mpo mpo_kron(const Mpo& a, const Mpo& b);
//! dense(result) = dense(m) * dense(v), applied corewise then rounded per tol.
TensorTrain mpo_apply(const Mpo& m, const TensorTrain& v, const Tolerance& tol = {});
//! SVD-based rounding of an operator (via its mode-paired train form).
Mpo mpo_round(const Mpo& a, const Tolerance& tol);

//! Reinterpret operator cores as train cores with the paired mode (no*ni).
TensorTrain mpo_as_train(const Mpo& m);
//! Inverse of mpo_as_train for mode sizes (2,2).
Mpo train_as_mpo(const TensorTrain& t);

}  // namespace qtt
