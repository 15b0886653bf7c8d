#include "qtt/mpo.hpp"

#include <stdexcept>
#include <string>

namespace qtt {

namespace {

// c += a (x) b (Kronecker), row index (ra, rb) with ra slow
void kron_add(Matrix& c, const Matrix& a, const Matrix& b) {
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0)
        c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) += a(i, j) * b;
}

}  // namespace

std::vector<int> MatrixProductOperator::ranks() const {
  std::vector<int> r;
  for (size_t k = 0; k + 1 < cores.size(); ++k) r.push_back(static_cast<int>(cores[k].right()));
  return r;
}

int MatrixProductOperator::max_rank() const {
  int m = 1;
  for (int r : ranks()) m = std::max(m, r);
  return m;
}

void MatrixProductOperator::validate() const {
  if (cores.empty()) throw std::invalid_argument("operator must have at least one core");
  if (cores.front().left() != 1 || cores.back().right() != 1)
    throw std::invalid_argument("boundary bonds must be 1");
  for (size_t k = 0; k < cores.size(); ++k) {
    if (cores[k].left() < 1 || cores[k].right() < 1)
      throw std::invalid_argument("bond dimensions must be >= 1");
    if (k + 1 < cores.size() && cores[k].right() != cores[k + 1].left())
      throw std::invalid_argument("adjacent bond dimensions do not match at core " +
                                  std::to_string(k));
  }
}

Core4 inner_core_product(const Core4& a, const Core4& b) {
  if (a.right() != b.left())
    throw std::invalid_argument("inner core product: nonconforming block shapes");
  Core4 out(a.left(), a.out_mode() * b.out_mode(), a.in_mode() * b.in_mode(), b.right());
  for (Index oa = 0; oa < a.out_mode(); ++oa)
    for (Index ob = 0; ob < b.out_mode(); ++ob)
      for (Index ia = 0; ia < a.in_mode(); ++ia)
        for (Index ib = 0; ib < b.in_mode(); ++ib) {
          Matrix prod = a.slice(oa, ia) * b.slice(ob, ib);
          const Index o = oa * b.out_mode() + ob;
          const Index i = ia * b.in_mode() + ib;
          for (Index x = 0; x < prod.rows(); ++x)
            for (Index y = 0; y < prod.cols(); ++y) out(x, o, i, y) += prod(x, y);
        }
  return out;
}

TensorTrain mpo_as_train(const Mpo& m) {
  std::vector<Core3> cores;
  cores.reserve(m.cores.size());
  for (const auto& c : m.cores) {
    Core3 t(c.left(), c.out_mode() * c.in_mode(), c.right());
    t.data() = c.data();  // identical linear layout
    cores.push_back(std::move(t));
  }
  return TensorTrain(std::move(cores));
}

Mpo train_as_mpo(const TensorTrain& t) {
  std::vector<Core4> cores;
  cores.reserve(t.cores.size());
  for (const auto& c : t.cores) {
    if (c.mode() != 4) throw std::invalid_argument("train_as_mpo: mode size must be 4");
    Core4 m(c.left(), 2, 2, c.right());
    m.data() = c.data();
    cores.push_back(std::move(m));
  }
  return Mpo(std::move(cores));
}

Matrix mpo_to_dense(const Mpo& m) {
  const int c = m.order();
  Vector v = tt_to_dense(mpo_as_train(m));
  const long long n = 1LL << c;
  Matrix out(n, n);
  for (long long idx = 0; idx < v.size(); ++idx) {
    long long row = 0, col = 0, rest = idx;
    for (int k = c - 1; k >= 0; --k) {
      const long long mu = rest % 4;
      rest /= 4;
      row |= (mu & 1) << (c - 1 - k);
      col |= (mu >> 1) << (c - 1 - k);
    }
    out(row, col) = v[idx];
  }
  return out;
}

Mpo mpo_from_dense(const Matrix& m, const Tolerance& tol) {
  const long long n = m.rows();
  if (n != m.cols() || n == 0) throw std::invalid_argument("mpo_from_dense: matrix must be square");
  int c = 0;
  long long p = 1;
  while (p < n) p <<= 1, ++c;
  if (p != n) throw std::invalid_argument("mpo_from_dense: size must be a power of two");
  Vector v(n * n);
  for (long long row = 0; row < n; ++row)
    for (long long col = 0; col < n; ++col) {
      long long idx = 0;
      for (int k = 0; k < c; ++k) {
        const long long o = (row >> (c - 1 - k)) & 1;
        const long long i = (col >> (c - 1 - k)) & 1;
        idx = idx * 4 + (o + 2 * i);
      }
      v[idx] = m(row, col);
    }
  return train_as_mpo(TensorTrain(detail::tt_svd(v, 4, tol)));
}

double mpo_entry(const Mpo& m, long long row, long long col) {
  const int c = m.order();
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
  for (int k = 0; k < c; ++k) {
    const Index o = static_cast<Index>((row >> (c - 1 - k)) & 1);
    const Index i = static_cast<Index>((col >> (c - 1 - k)) & 1);
    v = v * m.cores[k].slice(o, i);
  }
  return v(0);
}

Mpo mpo_add(const Mpo& a, const Mpo& b) {
  if (a.order() != b.order()) throw std::invalid_argument("mpo_add: core counts differ");
  return train_as_mpo(tt_add(mpo_as_train(a), mpo_as_train(b)));
}

Mpo mpo_scale(const Mpo& a, double s) {
  Mpo out = a;
  out.cores[0].data() *= s;
  return out;
}

Mpo mpo_compose(const Mpo& a, const Mpo& b, const Tolerance& tol) {
  if (a.order() != b.order()) throw std::invalid_argument("mpo_compose: core counts differ");
  std::vector<Core4> cores;
  cores.reserve(a.cores.size());
  for (int k = 0; k < a.order(); ++k) {
    const Core4& ca = a.cores[k];
    const Core4& cb = b.cores[k];
    if (ca.in_mode() != cb.out_mode())
      throw std::invalid_argument("mpo_compose: mode sizes do not match");
    Core4 core(ca.left() * cb.left(), ca.out_mode(), cb.in_mode(), ca.right() * cb.right());
    for (Index o = 0; o < ca.out_mode(); ++o)
      for (Index i = 0; i < cb.in_mode(); ++i) {
        Matrix block = Matrix::Zero(core.left(), core.right());
        for (Index mu = 0; mu < ca.in_mode(); ++mu) kron_add(block, ca.slice(o, mu), cb.slice(mu, i));
        for (Index x = 0; x < block.rows(); ++x)
          for (Index y = 0; y < block.cols(); ++y) core(x, o, i, y) = block(x, y);
      }
    cores.push_back(std::move(core));
  }
  Mpo out(std::move(cores));
  if (!tol.is_exact()) out = mpo_round(out, tol);
  detail::debug_validate(out);
  return out;
}

Mpo mpo_kron(const Mpo& a, const Mpo& b) {
  std::vector<Core4> cores = a.cores;
  cores.insert(cores.end(), b.cores.begin(), b.cores.end());
  return Mpo(std::move(cores));
}

TensorTrain mpo_apply(const Mpo& m, const TensorTrain& v, const Tolerance& tol) {
  if (m.order() != v.order()) throw std::invalid_argument("mpo_apply: core counts differ");
  std::vector<Core3> cores;
  cores.reserve(v.cores.size());
  for (int k = 0; k < m.order(); ++k) {
    const Core4& cm = m.cores[k];
    const Core3& cv = v.cores[k];
    if (cm.in_mode() != cv.mode()) throw std::invalid_argument("mpo_apply: mode sizes differ");
    Core3 core(cm.left() * cv.left(), cm.out_mode(), cm.right() * cv.right());
    for (Index o = 0; o < cm.out_mode(); ++o) {
      Matrix block = Matrix::Zero(core.left(), core.right());
      for (Index i = 0; i < cm.in_mode(); ++i) kron_add(block, cm.slice(o, i), cv.slice(i));
      for (Index x = 0; x < block.rows(); ++x)
        for (Index y = 0; y < block.cols(); ++y) core(x, o, y) = block(x, y);
    }
    cores.push_back(std::move(core));
  }
  TensorTrain out(std::move(cores));
  if (!tol.is_exact()) out = tt_round(out, tol);
  detail::debug_validate(out);
  return out;
}

Mpo mpo_round(const Mpo& a, const Tolerance& tol) {
  return train_as_mpo(tt_round(mpo_as_train(a), tol));
}

}  // namespace qtt
