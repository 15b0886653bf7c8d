#include "qtt/constructions.hpp"

#include <cmath>
#include <stdexcept>

namespace qtt {

namespace {

// fill a (2x2) mode block of an operator core
void set_block(Core4& core, Index a, Index b, const Matrix& m) {
  for (Index o = 0; o < 2; ++o)
    for (Index i = 0; i < 2; ++i) core(a, o, i, b) = m(o, i);
}

Matrix mat_I() { return Matrix::Identity(2, 2); }
Matrix mat_J() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}
Matrix mat_Jp() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

}  // namespace

Mpo tridiag_mpo(const TridiagCoefficients& coeffs, int c) {
  if (c < 2) throw std::invalid_argument("tridiag_mpo: c must be >= 2");
  const Matrix I = mat_I(), J = mat_J(), Jp = mat_Jp();
  Core4 first(1, 2, 2, 3);
  set_block(first, 0, 0, I);
  set_block(first, 0, 1, Jp);
  set_block(first, 0, 2, J);
  Core4 mid(3, 2, 2, 3);
  set_block(mid, 0, 0, I);
  set_block(mid, 0, 1, Jp);
  set_block(mid, 0, 2, J);
  set_block(mid, 1, 1, J);
  set_block(mid, 2, 2, Jp);
  Core4 last(3, 2, 2, 1);
  set_block(last, 0, 0, coeffs.alpha * I + coeffs.beta * J + coeffs.gamma * Jp);
  set_block(last, 1, 0, coeffs.gamma * J);
  set_block(last, 2, 0, coeffs.beta * Jp);
  std::vector<Core4> cores;
  cores.push_back(std::move(first));
  for (int k = 0; k < c - 2; ++k) cores.push_back(mid);
  cores.push_back(std::move(last));
  return Mpo(std::move(cores));
}

Mpo identity_mpo(int c) {
  std::vector<Core4> cores;
  for (int k = 0; k < c; ++k) {
    Core4 core(1, 2, 2, 1);
    core(0, 0, 0, 0) = 1.0;
    core(0, 1, 1, 0) = 1.0;
    cores.push_back(std::move(core));
  }
  return Mpo(std::move(cores));
}

TensorTrain unit_vector_tt(int c, UnitVectorEnd which) {
  std::vector<Core3> cores;
  const Index bit = (which == UnitVectorEnd::first) ? 0 : 1;
  for (int k = 0; k < c; ++k) {
    Core3 core(1, 2, 1);
    core(0, bit, 0) = 1.0;
    cores.push_back(std::move(core));
  }
  return TensorTrain(std::move(cores));
}

TensorTrain boundary_vector_tt(double v_a, double v_b, int c) {
  if (c < 1) throw std::invalid_argument("boundary_vector_tt: c must be >= 1");
  if (c == 1) {
    Core3 core(1, 2, 1);
    core(0, 0, 0) = v_a;
    core(0, 1, 0) = v_b;
    return TensorTrain({core});
  }
  return tt_add(tt_scale(unit_vector_tt(c, UnitVectorEnd::first), v_a),
                tt_scale(unit_vector_tt(c, UnitVectorEnd::last), v_b));
}

Mpo diag_mpo_from_tt(const TensorTrain& v) {
  std::vector<Core4> cores;
  cores.reserve(v.cores.size());
  for (const auto& cv : v.cores) {
    Core4 core(cv.left(), cv.mode(), cv.mode(), cv.right());
    for (Index a = 0; a < cv.left(); ++a)
      for (Index i = 0; i < cv.mode(); ++i)
        for (Index b = 0; b < cv.right(); ++b) core(a, i, i, b) = cv(a, i, b);
    cores.push_back(std::move(core));
  }
  return Mpo(std::move(cores));
}

Mpo eraser_mpo(double n1, double n2, double n3, double n4, int c) {
  if (c < 2) throw std::invalid_argument("eraser_mpo: c must be >= 2");
  Core4 first(1, 2, 2, 2);
  first(0, 0, 0, 0) = 1.0;
  first(0, 1, 1, 1) = 1.0;
  Core4 mid(2, 2, 2, 2);
  mid(0, 0, 0, 0) = 1.0;
  mid(1, 1, 1, 1) = 1.0;
  Core4 last(2, 2, 2, 1);
  last(0, 0, 0, 0) = n1;
  last(0, 0, 1, 0) = n2;
  last(1, 1, 0, 0) = n3;
  last(1, 1, 1, 0) = n4;
  std::vector<Core4> cores;
  cores.push_back(std::move(first));
  for (int k = 0; k < c - 2; ++k) cores.push_back(mid);
  cores.push_back(std::move(last));
  return Mpo(std::move(cores));
}

TensorTrain sine_tt(const SineParams& params) {
  const int c = params.c;
  if (c < 2) throw std::invalid_argument("sine_tt: c must be >= 2");
  const double alpha = params.alpha, phi = params.phi;
  const double step = 1.0 / (std::pow(2.0, c) - 1.0);
  auto rot = [&](int pos) { return alpha * step * std::pow(2.0, c - pos); };  // pos is 1-based
  std::vector<Core3> cores;
  Core3 first(1, 2, 2);
  first(0, 0, 0) = std::sin(phi);
  first(0, 0, 1) = std::cos(phi);
  first(0, 1, 0) = std::sin(rot(1) + phi);
  first(0, 1, 1) = std::cos(rot(1) + phi);
  cores.push_back(std::move(first));
  for (int pos = 2; pos <= c - 1; ++pos) {
    const double w = rot(pos);
    Core3 core(2, 2, 2);
    core(0, 0, 0) = 1.0;
    core(1, 0, 1) = 1.0;
    core(0, 1, 0) = std::cos(w);
    core(0, 1, 1) = -std::sin(w);
    core(1, 1, 0) = std::sin(w);
    core(1, 1, 1) = std::cos(w);
    cores.push_back(std::move(core));
  }
  const double w = rot(c);
  Core3 last(2, 2, 1);
  last(0, 0, 0) = 1.0;
  last(1, 0, 0) = 0.0;
  last(0, 1, 0) = std::cos(w);
  last(1, 1, 0) = std::sin(w);
  cores.push_back(std::move(last));
  return TensorTrain(std::move(cores));
}

SineParams shifted_sine_params(double K, int c) {
  const double n = std::pow(2.0, c);
  return SineParams{K * (n - 1.0) / (n + 1.0), K / (n + 1.0), c};
}

SineParams sine_params_on_grid(double K, double phase, int c, double origin, double step,
                               double offset) {
  const double n = std::pow(2.0, c);
  return SineParams{K * step * (n - 1.0), phase + K * (origin + offset * step), c};
}

TensorTrain exp_tt(double alpha, int c) {
  if (c < 1) throw std::invalid_argument("exp_tt: c must be >= 1");
  std::vector<Core3> cores;
  for (int k = 1; k <= c; ++k) {
    Core3 core(1, 2, 1);
    core(0, 0, 0) = 1.0;
    core(0, 1, 0) = std::exp(alpha * std::pow(2.0, -k));
    cores.push_back(std::move(core));
  }
  return TensorTrain(std::move(cores));
}

TensorTrain poly_tt(const std::vector<double>& coeffs, int c) {
  if (coeffs.empty()) throw std::invalid_argument("poly_tt: empty coefficient list");
  if (c < 1) throw std::invalid_argument("poly_tt: c must be >= 1");
  const int d = static_cast<int>(coeffs.size()) - 1;
  const Index r = d + 1;
  // binomial table
  Matrix binom = Matrix::Zero(r, r);
  for (Index i = 0; i < r; ++i) {
    binom(i, 0) = 1.0;
    for (Index j = 1; j <= i; ++j)
      binom(i, j) = binom(i - 1, j - 1) + ((j <= i - 1) ? binom(i - 1, j) : 0.0);
  }
  // carries Taylor coefficients of the polynomial about the partial sum
  auto shift_matrix = [&](double delta) {
    Matrix m = Matrix::Zero(r, r);
    for (Index mp = 0; mp < r; ++mp)
      for (Index mm = 0; mm <= mp; ++mm) m(mp, mm) = binom(mp, mm) * std::pow(delta, mp - mm);
    return m;
  };
  auto taylor_at = [&](double x0) {
    // row vector of p^(m)(x0)/m!
    Eigen::RowVectorXd t = Eigen::RowVectorXd::Zero(r);
    for (Index m = 0; m < r; ++m)
      for (Index j = m; j < r; ++j) t(m) += coeffs[j] * binom(j, m) * std::pow(x0, j - m);
    return t;
  };
  if (c == 1) {
    Core3 core(1, 2, 1);
    core(0, 0, 0) = coeffs[0];
    double v1 = 0.0;
    for (Index j = 0; j < r; ++j) v1 += coeffs[j] * std::pow(0.5, static_cast<double>(j));
    core(0, 1, 0) = v1;
    return TensorTrain({core});
  }
  std::vector<Core3> cores;
  Core3 first(1, 2, r);
  {
    Eigen::RowVectorXd t0 = taylor_at(0.0), t1 = taylor_at(0.5);
    for (Index m = 0; m < r; ++m) first(0, 0, m) = t0(m), first(0, 1, m) = t1(m);
  }
  cores.push_back(std::move(first));
  for (int pos = 2; pos <= c - 1; ++pos) {
    const double delta = std::pow(2.0, -pos);
    Matrix s = shift_matrix(delta);
    Core3 core(r, 2, r);
    for (Index a = 0; a < r; ++a) core(a, 0, a) = 1.0;
    for (Index a = 0; a < r; ++a)
      for (Index b = 0; b < r; ++b) core(a, 1, b) = s(a, b);
    cores.push_back(std::move(core));
  }
  const double delta = std::pow(2.0, -c);
  Core3 last(r, 2, 1);
  last(0, 0, 0) = 1.0;
  for (Index m = 0; m < r; ++m) last(m, 1, 0) = std::pow(delta, static_cast<double>(m));
  cores.push_back(std::move(last));
  return TensorTrain(std::move(cores));
}

}  // namespace qtt
