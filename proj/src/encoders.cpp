#include "qtt/encoders.hpp"

#include <cmath>
#include <stdexcept>

namespace qtt {

namespace {

constexpr double kPi = 3.14159265358979323846;

//! Gauss-Legendre nodes on [-1,1] by Newton iteration, mapped later.
std::vector<double> legendre_nodes(int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = z;
  }
  return x;
}

//! Lagrange basis values L_i(t) over the given nodes.
std::vector<double> lagrange_all(const std::vector<double>& nodes, double t) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> out(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) out[i] *= (t - nodes[j]) / (nodes[i] - nodes[j]);
  return out;
}

}  // namespace

std::vector<double> interpolation_nodes(int m, NodeScheme scheme) {
  if (m < 1) throw std::invalid_argument("interpolation nodes: m must be >= 1");
  const int n = m + 1;
  std::vector<double> nodes(n);
  switch (scheme) {
    case NodeScheme::chebyshev_lobatto:
      for (int j = 0; j < n; ++j) nodes[j] = 0.5 * (1.0 - std::cos(kPi * j / m));
      break;
    case NodeScheme::equispaced:
      for (int j = 0; j < n; ++j) nodes[j] = static_cast<double>(j) / m;
      break;
    case NodeScheme::legendre: {
      auto z = legendre_nodes(n);
      for (int j = 0; j < n; ++j) nodes[j] = 0.5 * (1.0 - z[j]);
      break;
    }
  }
  return nodes;
}

TensorTrain interpolative_tt(const ScalarFn& f, const InterpolationConfig& cfg) {
  const int c = cfg.c;
  if (c < 1) throw std::invalid_argument("interpolative_tt: c must be >= 1");
  const auto nodes = interpolation_nodes(cfg.m, cfg.node_scheme);
  const int r = static_cast<int>(nodes.size());
  if (c == 1) {
    Core3 core(1, 2, 1);
    core(0, 0, 0) = f(0.0);
    core(0, 1, 0) = f(0.5);
    return TensorTrain({core});
  }
  std::vector<Core3> cores;
  Core3 first(1, 2, r);
  for (Index bit = 0; bit < 2; ++bit)
    for (int j = 0; j < r; ++j) first(0, bit, j) = f((bit + nodes[j]) / 2.0);
  cores.push_back(std::move(first));
  for (int pos = 2; pos <= c - 1; ++pos) {
    Core3 core(r, 2, r);
    for (Index bit = 0; bit < 2; ++bit)
      for (int j = 0; j < r; ++j) {
        const auto basis = lagrange_all(nodes, (bit + nodes[j]) / 2.0);
        for (int i = 0; i < r; ++i) core(i, bit, j) = basis[i];
      }
    cores.push_back(std::move(core));
  }
  Core3 last(r, 2, 1);
  for (Index bit = 0; bit < 2; ++bit) {
    const auto basis = lagrange_all(nodes, bit / 2.0);
    for (int i = 0; i < r; ++i) last(i, bit, 0) = basis[i];
  }
  cores.push_back(std::move(last));
  return TensorTrain(std::move(cores));
}

TensorTrain interpolative_tt_2d(const ScalarFn2& f, const InterpolationConfig& cfg,
                                const Tolerance& round_tol) {
  const auto nodes = interpolation_nodes(cfg.m, cfg.node_scheme);
  TensorTrain sum;
  bool have = false;
  for (size_t j = 0; j < nodes.size(); ++j) {
    const double eta = nodes[j];
    TensorTrain gx = interpolative_tt([&](double x) { return f(x, eta); }, cfg);
    TensorTrain ly = interpolative_tt(
        [&](double y) { return lagrange_all(nodes, y)[j]; }, cfg);
    TensorTrain term = kron_concat(gx, ly);
    sum = have ? tt_add(sum, term) : std::move(term);
    have = true;
    if (!round_tol.is_exact() && sum.max_rank() > 4 * (cfg.m + 1))
      sum = tt_round(sum, round_tol);
  }
  if (!round_tol.is_exact()) sum = tt_round(sum, round_tol);
  return sum;
}

TensorTrain interpolative_tt_on_grid(const ScalarFn& f, const InterpolationConfig& cfg,
                                     double origin, double step, double offset) {
  const double scale = step * std::pow(2.0, cfg.c);
  return interpolative_tt(
      [&, origin, step, offset, scale](double u) { return f(origin + offset * step + u * scale); },
      cfg);
}

TensorTrain ttsvd_tt_on_grid(const ScalarFn& f, int c, double origin, double step, double offset,
                             const Tolerance& tol) {
  if (c > dense_cap_bits())
    throw std::runtime_error("ttsvd_tt_on_grid: grid too large to sample densely");
  const long long n = 1LL << c;
  Vector v(n);
  for (long long k = 0; k < n; ++k) v[k] = f(origin + (k + offset) * step);
  return tt_from_dense(v, tol);
}

}  // namespace qtt
