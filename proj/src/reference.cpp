#include "qtt/reference.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "qtt/common.hpp"

namespace qtt {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Vector dense_solve(const Matrix& a, const Vector& rhs) {
  Eigen::PartialPivLU<Matrix> lu(a);
  Vector x = lu.solve(rhs);
  x += lu.solve(rhs - a * x);  // one refinement step
  const double rn = (a * x - rhs).norm();
  if (rhs.norm() > 0 && rn > 1e-10 * rhs.norm())
    throw std::runtime_error("dense_solve: direct factorization residual too large");
  return x;
}

Matrix dense_tridiag(double alpha, double beta, double gamma, long long n) {
  Matrix m = Matrix::Zero(n, n);
  for (long long i = 0; i < n; ++i) {
    m(i, i) = alpha;
    if (i + 1 < n) m(i, i + 1) = beta;
    if (i > 0) m(i, i - 1) = gamma;
  }
  return m;
}

Matrix dense_eraser(double n1, double n2, double n3, double n4, long long n) {
  Matrix m = Matrix::Zero(n, n);
  m(0, 0) = n1;
  m(0, 1) = n2;
  m(n - 1, n - 2) = n3;
  m(n - 1, n - 1) = n4;
  return m;
}

Matrix dense_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix dense_fd_operator_1d(double p, double s, double v, const Grid1D& grid) {
  const double h = grid.h();
  return dense_tridiag(h * h * v - 2.0 * p, p + h * s / 2.0, p - h * s / 2.0, grid.n());
}

Matrix dense_fd_operator_2d(const FdCoefficients2D& coeffs, const Grid1D& grid) {
  const long long n = grid.n();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix mx = dense_fd_operator_1d(coeffs.p, coeffs.s, coeffs.v, grid);
  const Matrix my = dense_fd_operator_1d(coeffs.q, coeffs.t, 0.0, grid);
  Matrix out = dense_kron(mx, id) + dense_kron(id, my);
  if (coeffs.r != 0.0) {
    const Matrix rx = dense_fd_operator_1d(0.0, coeffs.r, 0.0, grid);
    const Matrix ry = dense_fd_operator_1d(0.0, 1.0, 0.0, grid);
    out += dense_kron(rx, id) * dense_kron(id, ry);
  }
  return out;
}

DenseSystem dense_poisson2d_system(const ScalarFn2& f,
                                   const std::function<double(double, double)>& boundary,
                                   const Grid1D& grid) {
  const long long n = grid.n();
  const double h = grid.h();
  const Matrix lap1 = dense_tridiag(-2.0, 1.0, 1.0, n);
  const Matrix id = Matrix::Identity(n, n);
  DenseSystem sys;
  sys.a = dense_kron(lap1, id) + dense_kron(id, lap1);
  sys.rhs = Vector::Zero(n * n);
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) {
      const double x = grid.point(i), y = grid.point(j);
      double b = 0.0;
      if (i == 0) b += boundary(grid.a, y);
      if (i == n - 1) b += boundary(grid.b, y);
      if (j == 0) b += boundary(x, grid.a);
      if (j == n - 1) b += boundary(x, grid.b);
      sys.rhs[i * n + j] = h * h * f(x, y) - b;
    }
  return sys;
}

AnalyticSolution laplace_sinh_solution(double k) {
  AnalyticSolution s;
  s.tag = AnalyticSolution::Tag::laplace_sinh;
  s.k = k;
  s.evaluator = [k](const std::vector<double>& p) {
    return std::sin(k * kPi * p[0]) * std::sinh(k * kPi * (1.0 - p[1]));
  };
  return s;
}

AnalyticSolution poisson3d_sine_solution(double eps1, double eps2) {
  AnalyticSolution s;
  s.tag = AnalyticSolution::Tag::poisson3d_sine;
  s.eps1 = eps1;
  s.eps2 = eps2;
  s.evaluator = [eps1, eps2](const std::vector<double>& p) {
    return std::sin(kPi * p[0]) * std::sin(kPi * p[1]) * std::sin(kPi * p[2]) /
           (kPi * kPi * (1.0 + eps1 + eps2));
  };
  return s;
}

AnalyticSolution poisson_exp_solution() {
  AnalyticSolution s;
  s.tag = AnalyticSolution::Tag::poisson_exp;
  s.evaluator = [](const std::vector<double>& p) {
    return p[0] * (1.0 - p[0]) * p[1] * (1.0 - p[1]) * std::exp(p[0] - p[1]);
  };
  return s;
}

AnalyticSolution heat_mix_solution() {
  AnalyticSolution s;
  s.tag = AnalyticSolution::Tag::heat_mix;
  s.evaluator = [](const std::vector<double>& p) {
    const double x = p[0], t = p[1];
    return std::exp(-kPi * kPi * t / 4.0) * std::sin(kPi * x / 2.0) +
           0.5 * std::exp(-4.0 * kPi * kPi * t) * std::sin(2.0 * kPi * x);
  };
  return s;
}

AnalyticSolution burgers_wood_solution(double nu, double alpha) {
  AnalyticSolution s;
  s.tag = AnalyticSolution::Tag::burgers_wood;
  s.nu = nu;
  s.alpha = alpha;
  s.evaluator = [nu, alpha](const std::vector<double>& p) {
    const double x = p[0], t = p[1];
    const double e = std::exp(-nu * kPi * kPi * t);
    return 2.0 * nu * kPi * e * std::sin(kPi * x) / (alpha + e * std::cos(kPi * x));
  };
  return s;
}

GaussHermite::GaussHermite(int n) {
  if (n < 1) throw std::invalid_argument("GaussHermite: order must be >= 1");
  Matrix j = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = std::sqrt(k / 2.0);
    j(k, k - 1) = beta;
    j(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(j, Eigen::EigenvaluesOnly);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) x[i] = es.eigenvalues()[i];
  // Christoffel weights from Hermite *functions* psi_k = h_k exp(-x^2/2);
  // these stay bounded, unlike eigenvector components or raw polynomials.
  for (int i = 0; i < n; ++i) {
    const double t = x[i];
    double pkm = std::pow(kPi, -0.25) * std::exp(-0.5 * t * t);
    double pk = std::sqrt(2.0) * t * pkm;
    double s = pkm * pkm + pk * pk;
    for (int k = 1; k < n - 1; ++k) {
      const double pkp =
          t * std::sqrt(2.0 / (k + 1)) * pk - std::sqrt(static_cast<double>(k) / (k + 1)) * pkm;
      pkm = pk;
      pk = pkp;
      s += pk * pk;
    }
    w[i] = std::exp(-t * t) / s;
  }
}

ColeHopfReference::ColeHopfReference(double nu, int nodes)
    : nu_(nu), nodes_(nodes), rule_(nodes) {}

double ColeHopfReference::eval(double x, double t) const {
  if (t < 0) throw std::invalid_argument("ColeHopfReference: t must be >= 0");
  if (t == 0) return -std::sin(kPi * x);
  const double s = std::sqrt(4.0 * nu_ * t);
  const int n = nodes_;
  std::vector<double> ex(n);
  double m = -1e300;
  for (int i = 0; i < n; ++i) {
    const double y = x - s * rule_.x[i];
    ex[i] = -std::cos(kPi * y) / (2.0 * kPi * nu_);
    m = std::max(m, ex[i]);
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = x - s * rule_.x[i];
    const double f = std::exp(ex[i] - m);
    num += rule_.w[i] * std::sin(kPi * y) * f;
    den += rule_.w[i] * f;
  }
  return -num / den;
}

TensorTrain grid_function_tt(const ScalarFn& f, const Grid1D& grid, const Tolerance& tol) {
  return ttsvd_tt_on_grid(f, grid.c, grid.a, grid.h(), 1.0, tol);
}

namespace {

std::vector<double> decode_point(long long index, const std::vector<Grid1D>& grids) {
  std::vector<double> p(grids.size());
  for (int d = static_cast<int>(grids.size()) - 1; d >= 0; --d) {
    const long long n = grids[d].n();
    p[d] = grids[d].point(index % n);
    index /= n;
  }
  return p;
}

}  // namespace

double mse_dense(const TensorTrain& u, const std::vector<Grid1D>& grids,
                 const std::function<double(const std::vector<double>&)>& exact) {
  const Vector v = tt_to_dense(u);
  long long total = 1;
  for (const auto& g : grids) total *= g.n();
  if (total != v.size()) throw std::invalid_argument("mse_dense: grid/train size mismatch");
  double acc = 0.0;
  for (long long i = 0; i < total; ++i) {
    const double d = v[i] - exact(decode_point(i, grids));
    acc += d * d;
  }
  return acc / static_cast<double>(total);
}

double mse_tt(const TensorTrain& u, const TensorTrain& exact) {
  const TensorTrain d = tt_add(u, tt_scale(exact, -1.0));
  const double nrm = tt_norm(d);
  return nrm * nrm / static_cast<double>(u.dense_size());
}

double mse_sampled(const TensorTrain& u, const std::vector<Grid1D>& grids,
                   const std::function<double(const std::vector<double>&)>& exact,
                   long long samples, std::uint64_t seed) {
  long long total = 1;
  for (const auto& g : grids) total *= g.n();
  Rng rng(seed);
  double acc = 0.0;
  for (long long s = 0; s < samples; ++s) {
    const long long idx = static_cast<long long>(rng.next_u64() % static_cast<uint64_t>(total));
    const double d = tt_entry(u, idx) - exact(decode_point(idx, grids));
    acc += d * d;
  }
  return acc / static_cast<double>(samples);
}

}  // namespace qtt
