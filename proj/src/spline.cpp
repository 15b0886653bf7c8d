#include "qtt/spline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qtt {

namespace {

// sorted copy of 1D data by x
std::pair<std::vector<double>, std::vector<double>> sorted_data(const DataSet& data) {
  std::vector<size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return data.x[a] < data.x[b]; });
  std::vector<double> xs, ys;
  xs.reserve(idx.size());
  ys.reserve(idx.size());
  for (size_t i : idx) {
    xs.push_back(data.x[i]);
    ys.push_back(data.y[i]);
  }
  for (size_t i = 1; i < xs.size(); ++i)
    if (xs[i] == xs[i - 1]) throw std::invalid_argument("spline_fit: duplicate x values");
  return {std::move(xs), std::move(ys)};
}

std::vector<double> clamped_uniform_knots(int nb, int degree, double a, double b) {
  // nb basis functions of the given degree need nb + degree + 1 knots
  std::vector<double> t(nb + degree + 1);
  const int inner = nb - degree - 1;
  for (int i = 0; i <= degree; ++i) t[i] = a, t[nb + i] = b;
  for (int i = 1; i <= inner; ++i)
    t[degree + i] = a + (b - a) * static_cast<double>(i) / (inner + 1);
  return t;
}

}  // namespace

std::vector<double> bspline_basis(const std::vector<double>& knots, int nb, int degree, double t) {
  std::vector<double> b(nb, 0.0);
  const double lo = knots[degree], hi = knots[nb];
  if (t <= lo) t = lo;
  if (t >= hi) t = hi - 1e-14 * std::max(1.0, std::abs(hi));
  // degree 0
  std::vector<double> cur(nb + degree, 0.0);
  for (int i = 0; i < nb + degree; ++i)
    if (knots[i] <= t && t < knots[i + 1]) cur[i] = 1.0;
  for (int d = 1; d <= degree; ++d) {
    std::vector<double> next(nb + degree - d, 0.0);
    for (int i = 0; i < nb + degree - d; ++i) {
      double left = 0.0, right = 0.0;
      if (knots[i + d] > knots[i]) left = (t - knots[i]) / (knots[i + d] - knots[i]) * cur[i];
      if (knots[i + d + 1] > knots[i + 1])
        right = (knots[i + d + 1] - t) / (knots[i + d + 1] - knots[i + 1]) * cur[i + 1];
      next[i] = left + right;
    }
    cur = std::move(next);
  }
  for (int i = 0; i < nb; ++i) b[i] = cur[i];
  return b;
}

double SplineModel::eval(double x) const {
  if (kind == SplineKind::cubic) {
    const size_t n = xs.size();
    if (n == 1) return ys[0];
    size_t i = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
    if (i == 0) i = 1;
    if (i >= n) i = n - 1;
    const double h = xs[i] - xs[i - 1];
    const double a = (xs[i] - x) / h, b = (x - xs[i - 1]) / h;
    return a * ys[i - 1] + b * ys[i] +
           ((a * a * a - a) * second_derivs[i - 1] + (b * b * b - b) * second_derivs[i]) *
               (h * h) / 6.0;
  }
  const int nb = static_cast<int>(coeffs.size());
  const auto basis = bspline_basis(knots, nb, degree, x);
  double v = 0.0;
  for (int i = 0; i < nb; ++i) v += coeffs[i] * basis[i];
  return v;
}

double SplineModel2::eval(double x, double y) const {
  const auto bx = bspline_basis(knots, nbasis, 3, x);
  const auto by = bspline_basis(knots, nbasis, 3, y);
  double v = 0.0;
  for (int i = 0; i < nbasis; ++i) {
    if (bx[i] == 0.0) continue;
    for (int j = 0; j < nbasis; ++j) v += coeffs(i, j) * bx[i] * by[j];
  }
  return v;
}

SplineModel spline_fit(const DataSet& data, SplineKind kind, int degree) {
  if (data.is_2d()) throw std::invalid_argument("spline_fit: use spline_fit_2d for 2D data");
  if (data.size() < 2) throw std::invalid_argument("spline_fit: need at least two points");
  auto [xs, ys] = sorted_data(data);
  const int n = static_cast<int>(xs.size());
  SplineModel s;
  s.kind = kind;
  s.start = xs.front();
  s.stop = xs.back();
  if (kind == SplineKind::cubic) {
    s.degree = 3;
    s.xs = xs;
    s.ys = ys;
    s.second_derivs.assign(n, 0.0);
    if (n > 2) {
      // natural end conditions: tridiagonal system for interior second derivatives
      const int m = n - 2;
      Matrix a = Matrix::Zero(m, m);
      Vector rhs(m);
      for (int i = 0; i < m; ++i) {
        const double hl = xs[i + 1] - xs[i], hr = xs[i + 2] - xs[i + 1];
        a(i, i) = 2.0 * (hl + hr);
        if (i > 0) a(i, i - 1) = hl;
        if (i < m - 1) a(i, i + 1) = hr;
        rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / hr - (ys[i + 1] - ys[i]) / hl);
      }
      Vector sol = a.partialPivLu().solve(rhs);
      for (int i = 0; i < m; ++i) s.second_derivs[i + 1] = sol[i];
    }
    return s;
  }
  if (degree < 1) throw std::invalid_argument("spline_fit: degree must be >= 1");
  if (n < degree + 1) throw std::invalid_argument("spline_fit: fewer points than degree + 1");
  s.degree = degree;
  // interpolating B-spline with de Boor averaged knots
  const int nb = n;
  std::vector<double> t(nb + degree + 1);
  for (int i = 0; i <= degree; ++i) t[i] = xs.front(), t[nb + i] = xs.back();
  for (int j = 1; j < nb - degree; ++j) {
    double acc = 0.0;
    for (int i = j; i < j + degree; ++i) acc += xs[i];
    t[degree + j] = acc / degree;
  }
  s.knots = t;
  Matrix colloc(n, nb);
  for (int i = 0; i < n; ++i) {
    const auto basis = bspline_basis(t, nb, degree, xs[i]);
    for (int j = 0; j < nb; ++j) colloc(i, j) = basis[j];
  }
  Vector ysv = Eigen::Map<const Vector>(ys.data(), n);
  Vector coef = colloc.partialPivLu().solve(ysv);
  s.coeffs.assign(coef.data(), coef.data() + nb);
  return s;
}

SplineModel2 spline_fit_2d(const DataSet& data, int nbasis) {
  if (!data.is_2d()) throw std::invalid_argument("spline_fit_2d: data is not 2D");
  if (data.size() < 4) throw std::invalid_argument("spline_fit_2d: need at least four points");
  SplineModel2 s;
  s.nbasis = nbasis;
  s.knots = clamped_uniform_knots(nbasis, 3, 0.0, 1.0);
  const int nb2 = nbasis * nbasis;
  const int n = static_cast<int>(data.size());
  Matrix design(n, nb2);
  for (int p = 0; p < n; ++p) {
    const auto bx = bspline_basis(s.knots, nbasis, 3, data.x[p]);
    const auto by = bspline_basis(s.knots, nbasis, 3, data.y[p]);
    for (int i = 0; i < nbasis; ++i)
      for (int j = 0; j < nbasis; ++j) design(p, i * nbasis + j) = bx[i] * by[j];
  }
  Vector rhs = Eigen::Map<const Vector>(data.value.data(), n);
  Matrix gram = design.transpose() * design;
  gram.diagonal().array() += 1e-10;  // scattered data can under-determine edge coefficients
  Vector coef = gram.ldlt().solve(design.transpose() * rhs);
  s.coeffs = Eigen::Map<Matrix>(coef.data(), nbasis, nbasis).transpose().eval();
  return s;
}

std::pair<TensorTrain, SplineModel> data_driven_tt(const DataSet& data, int c,
                                                   const InterpolationConfig& cfg,
                                                   SplineKind kind, int degree) {
  SplineModel s = spline_fit(data, kind, degree);
  InterpolationConfig local = cfg;
  local.c = c;
  const double span = s.stop - s.start;
  TensorTrain t =
      interpolative_tt([&](double u) { return s.eval(s.start + u * span); }, local);
  t = tt_round(t, Tolerance{1e-12, {}});
  return {std::move(t), std::move(s)};
}

std::pair<TensorTrain, SplineModel2> data_driven_tt_2d(const DataSet& data, int c,
                                                       const InterpolationConfig& cfg,
                                                       int nbasis) {
  SplineModel2 s = spline_fit_2d(data, nbasis);
  InterpolationConfig local = cfg;
  local.c = c;
  TensorTrain t =
      interpolative_tt_2d([&](double x, double y) { return s.eval(x, y); }, local);
  return {std::move(t), std::move(s)};
}

}  // namespace qtt
