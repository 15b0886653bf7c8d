#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

//! Quantized tensor-train PDE toolkit.
namespace qtt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

//! Relative Frobenius truncation tolerance plus an optional bond cap.
struct Tolerance {
  double rel_eps = 1e-12;
  std::optional<int> max_rank{};

  //! Tolerance that keeps everything (used for exact arithmetic paths).
  static Tolerance exact() { return Tolerance{0.0, std::nullopt}; }
  bool is_exact() const { return rel_eps == 0.0 && !max_rank; }
};

//! Rank-3 core with shape (left bond, mode, right bond).
//!
//! Storage is column-major with index a + r1*(i + n*b), so both standard
//! unfoldings are zero-copy views of the same buffer.
class Core3 {
 public:
  Core3() = default;
  Core3(Index r1, Index n, Index r2)
      : r1_(r1), n_(n), r2_(r2), data_(Vector::Zero(r1 * n * r2)) {}

  Index left() const { return r1_; }
  Index mode() const { return n_; }
  Index right() const { return r2_; }

  double& operator()(Index a, Index i, Index b) { return data_[a + r1_ * (i + n_ * b)]; }
  double operator()(Index a, Index i, Index b) const { return data_[a + r1_ * (i + n_ * b)]; }

  //! (r1*n) x r2 unfolding.
  Eigen::Map<const Matrix> unfold_left() const {
    return Eigen::Map<const Matrix>(data_.data(), r1_ * n_, r2_);
  }
  //! r1 x (n*r2) unfolding.
  Eigen::Map<const Matrix> unfold_right() const {
    return Eigen::Map<const Matrix>(data_.data(), r1_, n_ * r2_);
  }
  //! r1 x r2 slice for a fixed mode value.
  Eigen::Map<const Matrix, 0, Eigen::OuterStride<>> slice(Index i) const {
    return Eigen::Map<const Matrix, 0, Eigen::OuterStride<>>(
        data_.data() + r1_ * i, r1_, r2_, Eigen::OuterStride<>(r1_ * n_));
  }

  //! Rebuild from a (r1*n) x r2 matrix.
  static Core3 fold_left(const Matrix& m, Index r1, Index n) {
    assert(m.rows() == r1 * n);
    Core3 c(r1, n, m.cols());
    Eigen::Map<Matrix>(c.data_.data(), r1 * n, m.cols()) = m;
    return c;
  }
  //! Rebuild from a r1 x (n*r2) matrix.
  static Core3 fold_right(const Matrix& m, Index n, Index r2) {
    assert(m.cols() == n * r2);
    Core3 c(m.rows(), n, r2);
    Eigen::Map<Matrix>(c.data_.data(), m.rows(), n * r2) = m;
    return c;
  }

  Vector& data() { return data_; }
  const Vector& data() const { return data_; }
  double frobenius_norm() const { return data_.norm(); }

 private:
  Index r1_ = 0, n_ = 0, r2_ = 0;
  Vector data_;
};

//! Tensor train of rank-3 cores; mode sizes are 2 everywhere in this project.
struct TensorTrain {
  std::vector<Core3> cores;

  TensorTrain() = default;
  explicit TensorTrain(std::vector<Core3> cs) : cores(std::move(cs)) {}

  int order() const { return static_cast<int>(cores.size()); }
  //! Internal bond dimensions (size order-1).
  std::vector<int> ranks() const;
  int max_rank() const;
  //! Number of grid points 2^c for all-mode-2 trains.
  long long dense_size() const;

  //! Throws std::invalid_argument when bond or shape invariants are broken.
  void validate() const;
};

//! Safety cap (in total mode bits) for dense materialization; the
//! QTT_DENSE_CAP environment variable overrides the default of 26.
int dense_cap_bits();

//! Contract the train into a dense vector, big-endian bit order.
Vector tt_to_dense(const TensorTrain& t);

//! TT-SVD of a length-2^c vector with relative tolerance tol.rel_eps.
TensorTrain tt_from_dense(const Vector& v, const Tolerance& tol = {});

//! Evaluate one entry by its linear (big-endian) index.
double tt_entry(const TensorTrain& t, long long index);

TensorTrain tt_add(const TensorTrain& a, const TensorTrain& b);
TensorTrain tt_scale(const TensorTrain& a, double s);
double tt_inner(const TensorTrain& a, const TensorTrain& b);
//! Norm via right-orthogonalization; stable for near-cancelling trains.
double tt_norm(const TensorTrain& a);

//! QR orthogonalization right-to-left, then a truncated SVD sweep.
TensorTrain tt_round(const TensorTrain& a, const Tolerance& tol);

//! dense(result) = dense(a) (x) dense(b); cores of a followed by cores of b.
TensorTrain kron_concat(const TensorTrain& a, const TensorTrain& b);

//! Rank-1 train of a constant value over 2^c points.
TensorTrain tt_constant(int c, double value);
//! All-zero train (rank 1).
TensorTrain tt_zero(int c);

//! Fix the first lead_cores mode indices to the bits of `index` (big-endian)
//! and return the train over the remaining cores.
TensorTrain tt_partial_leading(const TensorTrain& t, int lead_cores, long long index);

namespace detail {
//! Bond-consistency assertion for debug builds (no-op under NDEBUG).
template <typename T>
inline const T& debug_validate(const T& value) {
#ifndef NDEBUG
  value.validate();
#endif
  return value;
}

//! Truncated SVD: returns U, (S V^T) and the kept rank.
//! Keeps the smallest rank with trailing singular mass <= abs_tol, always >= 1.
struct SplitResult {
  Matrix u;
  Matrix sv;
  int rank;
};
SplitResult svd_split(const Matrix& m, double abs_tol, std::optional<int> max_rank);

//! Generic TT-SVD over a uniform mode size (2 for trains, 4 for operators).
std::vector<Core3> tt_svd(const Vector& v, Index mode, const Tolerance& tol);

//! Right-orthogonalize in place; returns the Frobenius norm of the train.
double right_orthogonalize(std::vector<Core3>& cores);
}  // namespace detail

}  // namespace qtt
