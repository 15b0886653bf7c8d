#include "qtt/tensor_train.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qtt {

std::vector<int> TensorTrain::ranks() const {
  std::vector<int> r;
  for (size_t k = 0; k + 1 < cores.size(); ++k) r.push_back(static_cast<int>(cores[k].right()));
  return r;
}

int TensorTrain::max_rank() const {
  int m = 1;
  for (int r : ranks()) m = std::max(m, r);
  return m;
}

long long TensorTrain::dense_size() const {
  long long n = 1;
  for (const auto& c : cores) n *= c.mode();
  return n;
}

void TensorTrain::validate() const {
  if (cores.empty()) throw std::invalid_argument("tensor train must have at least one core");
  if (cores.front().left() != 1 || cores.back().right() != 1)
    throw std::invalid_argument("boundary bonds must be 1");
  for (size_t k = 0; k < cores.size(); ++k) {
    if (cores[k].left() < 1 || cores[k].right() < 1 || cores[k].mode() < 1)
      throw std::invalid_argument("all core dimensions must be >= 1");
    if (k + 1 < cores.size() && cores[k].right() != cores[k + 1].left())
      throw std::invalid_argument("adjacent bond dimensions do not match at core " +
                                  std::to_string(k));
  }
}

int dense_cap_bits() {
  static const int cap = [] {
    if (const char* s = std::getenv("QTT_DENSE_CAP")) {
      int v = std::atoi(s);
      if (v > 0) return v;
    }
    return 26;
  }();
  return cap;
}

Vector tt_to_dense(const TensorTrain& t) {
  long long bits = 0;
  for (const auto& c : t.cores) bits += (c.mode() > 2) ? 2 : 1;
  if (bits > dense_cap_bits())
    throw std::runtime_error("dense materialization too large: " + std::to_string(bits) +
                             " bits exceeds cap " + std::to_string(dense_cap_bits()));
  // state S holds one row per already-expanded prefix
  Matrix s = Matrix::Ones(1, 1);
  for (const auto& core : t.cores) {
    const Index n = core.mode(), r2 = core.right();
    Matrix next(s.rows() * n, r2);
    for (Index i = 0; i < n; ++i) {
      Matrix block = s * core.slice(i);
      for (Index p = 0; p < s.rows(); ++p) next.row(p * n + i) = block.row(p);
    }
    s = std::move(next);
  }
  return Vector(s.col(0));
}

double tt_entry(const TensorTrain& t, long long index) {
  const int c = t.order();
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
  for (int k = 0; k < c; ++k) {
    const Index n = t.cores[k].mode();
    long long rest = 1;
    for (int j = k + 1; j < c; ++j) rest *= t.cores[j].mode();
    const Index bit = static_cast<Index>((index / rest) % n);
    v = v * t.cores[k].slice(bit);
  }
  return v(0);
}

namespace detail {

SplitResult svd_split(const Matrix& m, double abs_tol, std::optional<int> max_rank) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sing = svd.singularValues();
  const int full = static_cast<int>(sing.size());
  int rank = full;
  double tail = 0.0;
  const double budget = abs_tol * abs_tol;
  while (rank > 1) {
    const double s = sing[rank - 1];
    if (tail + s * s > budget) break;
    tail += s * s;
    --rank;
  }
  if (max_rank && rank > *max_rank) rank = std::max(1, *max_rank);
  SplitResult out;
  out.rank = rank;
  out.u = svd.matrixU().leftCols(rank);
  out.sv = sing.head(rank).asDiagonal() * svd.matrixV().leftCols(rank).transpose();
  return out;
}

std::vector<Core3> tt_svd(const Vector& v, Index mode, const Tolerance& tol) {
  const long long len = v.size();
  if (len < mode) throw std::invalid_argument("input must hold at least one full mode");
  int c = 0;
  long long p = 1;
  while (p < len) p *= mode, ++c;
  if (p != len) throw std::invalid_argument("input length is not a power of the mode size");
  const double delta = (c > 1) ? tol.rel_eps * v.norm() / std::sqrt(static_cast<double>(c - 1))
                               : 0.0;
  std::vector<Core3> cores;
  cores.reserve(c);
  // m holds the remainder: rank x (mode^(c-k)) with big-endian column index
  Matrix m(1, len);
  for (long long j = 0; j < len; ++j) m(0, j) = v[j];
  for (int k = 0; k < c - 1; ++k) {
    const Index r = m.rows();
    const long long tail = m.cols() / mode;
    Matrix unf(r * mode, tail);
    for (Index a = 0; a < r; ++a)
      for (Index i = 0; i < mode; ++i)
        for (long long q = 0; q < tail; ++q) unf(a + r * i, q) = m(a, i * tail + q);
    SplitResult sp = svd_split(unf, delta, tol.max_rank);
    cores.push_back(Core3::fold_left(sp.u, r, mode));
    m = std::move(sp.sv);
  }
  // remaining (r x mode) block is the last core; col-major data is already
  // in (a + r*i) order
  cores.push_back(
      Core3::fold_left(Eigen::Map<const Matrix>(m.data(), m.rows() * m.cols(), 1), m.rows(), mode));
  return cores;
}

double right_orthogonalize(std::vector<Core3>& cores) {
  for (size_t k = cores.size() - 1; k > 0; --k) {
    // factor horizontal unfolding as L * Q with orthonormal rows of Q
    Matrix mt = cores[k].unfold_right().transpose();  // (n*r2) x r1
    Eigen::HouseholderQR<Matrix> qr(mt);
    const Index rank = std::min(mt.rows(), mt.cols());
    Matrix q = qr.householderQ() * Matrix::Identity(mt.rows(), rank);
    Matrix l = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
    cores[k] = Core3::fold_right(q.transpose(), cores[k].mode(), cores[k].right());
    Matrix merged = cores[k - 1].unfold_left() * l.transpose();
    cores[k - 1] = Core3::fold_left(merged, cores[k - 1].left(), cores[k - 1].mode());
  }
  return cores[0].frobenius_norm();
}

}  // namespace detail

TensorTrain tt_from_dense(const Vector& v, const Tolerance& tol) {
  return detail::debug_validate(TensorTrain(detail::tt_svd(v, 2, tol)));
}

TensorTrain tt_add(const TensorTrain& a, const TensorTrain& b) {
  if (a.order() != b.order()) throw std::invalid_argument("tt_add: core counts differ");
  const int c = a.order();
  if (c == 1) {
    Core3 core = a.cores[0];
    core.data() += b.cores[0].data();
    return TensorTrain({core});
  }
  std::vector<Core3> cores;
  cores.reserve(c);
  for (int k = 0; k < c; ++k) {
    const Core3& ca = a.cores[k];
    const Core3& cb = b.cores[k];
    if (ca.mode() != cb.mode()) throw std::invalid_argument("tt_add: mode sizes differ");
    const Index la = (k == 0) ? 0 : ca.left(), ra = (k == c - 1) ? 0 : ca.right();
    const Index l = (k == 0) ? 1 : ca.left() + cb.left();
    const Index r = (k == c - 1) ? 1 : ca.right() + cb.right();
    Core3 core(l, ca.mode(), r);
    for (Index i = 0; i < ca.mode(); ++i) {
      for (Index x = 0; x < ca.left(); ++x)
        for (Index y = 0; y < ca.right(); ++y)
          core((k == 0) ? 0 : x, i, (k == c - 1) ? 0 : y) += ca(x, i, y);
      for (Index x = 0; x < cb.left(); ++x)
        for (Index y = 0; y < cb.right(); ++y)
          core((k == 0) ? 0 : x + ((k == 0) ? 0 : la), i, (k == c - 1) ? 0 : y + ra) +=
              cb(x, i, y);
    }
    cores.push_back(std::move(core));
  }
  return detail::debug_validate(TensorTrain(std::move(cores)));
}

TensorTrain tt_scale(const TensorTrain& a, double s) {
  TensorTrain out = a;
  out.cores[0].data() *= s;
  return out;
}

double tt_inner(const TensorTrain& a, const TensorTrain& b) {
  if (a.order() != b.order()) throw std::invalid_argument("tt_inner: core counts differ");
  Matrix e = Matrix::Ones(1, 1);
  for (int k = 0; k < a.order(); ++k) {
    const Core3& ca = a.cores[k];
    const Core3& cb = b.cores[k];
    Matrix next = Matrix::Zero(ca.right(), cb.right());
    for (Index i = 0; i < ca.mode(); ++i)
      next.noalias() += ca.slice(i).transpose() * e * cb.slice(i);
    e = std::move(next);
  }
  return e(0, 0);
}

double tt_norm(const TensorTrain& a) {
  std::vector<Core3> cores = a.cores;
  return detail::right_orthogonalize(cores);
}

TensorTrain tt_round(const TensorTrain& a, const Tolerance& tol) {
  const int c = a.order();
  std::vector<Core3> cores = a.cores;
  if (c == 1) return TensorTrain(std::move(cores));
  const double norm = detail::right_orthogonalize(cores);
  const double delta =
      tol.rel_eps * norm / std::sqrt(static_cast<double>(std::max(1, c - 1)));
  for (int k = 0; k < c - 1; ++k) {
    detail::SplitResult sp = detail::svd_split(cores[k].unfold_left(), delta, tol.max_rank);
    cores[k] = Core3::fold_left(sp.u, cores[k].left(), cores[k].mode());
    Matrix merged = sp.sv * cores[k + 1].unfold_right();
    cores[k + 1] = Core3::fold_right(merged, cores[k + 1].mode(), cores[k + 1].right());
  }
  return detail::debug_validate(TensorTrain(std::move(cores)));
}

TensorTrain kron_concat(const TensorTrain& a, const TensorTrain& b) {
  std::vector<Core3> cores = a.cores;
  cores.insert(cores.end(), b.cores.begin(), b.cores.end());
  return TensorTrain(std::move(cores));
}

TensorTrain tt_constant(int c, double value) {
  std::vector<Core3> cores;
  for (int k = 0; k < c; ++k) {
    Core3 core(1, 2, 1);
    core(0, 0, 0) = 1.0;
    core(0, 1, 0) = 1.0;
    cores.push_back(std::move(core));
  }
  cores[0].data() *= value;
  return TensorTrain(std::move(cores));
}

TensorTrain tt_zero(int c) { return tt_constant(c, 0.0); }

TensorTrain tt_partial_leading(const TensorTrain& t, int lead_cores, long long index) {
  if (lead_cores < 1 || lead_cores >= t.order())
    throw std::invalid_argument("tt_partial_leading: invalid core range");
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
  for (int k = 0; k < lead_cores; ++k) {
    const Index n = t.cores[k].mode();
    const Index bit = static_cast<Index>((index >> (lead_cores - 1 - k)) % n);
    v = v * t.cores[k].slice(bit);
  }
  std::vector<Core3> cores(t.cores.begin() + lead_cores, t.cores.end());
  Matrix merged = v * cores[0].unfold_right();
  cores[0] = Core3::fold_right(merged, cores[0].mode(), cores[0].right());
  return TensorTrain(std::move(cores));
}

}  // namespace qtt
