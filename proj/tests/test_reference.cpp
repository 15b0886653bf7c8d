#include <doctest.h>

#include <cmath>

#include "qtt/reference.hpp"

using namespace qtt;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("dense_solve") {
  SUBCASE("identity system returns the right-hand side") {
    Vector rhs(4);
    rhs << 1, -2, 3, 0.5;
    Vector x = dense_solve(Matrix::Identity(4, 4), rhs);
    CHECK((x - rhs).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("1D Laplacian matches the closed-form tridiagonal inverse") {
    // (-D)^{-1}_{ij} = min(i,j)(n+1-max(i,j))/(n+1) for D = tridiag(-2,1,1), 1-based
    const long long n = 8;
    Matrix a = -dense_tridiag(-2, 1, 1, n);
    for (long long col = 0; col < n; ++col) {
      Vector e = Vector::Zero(n);
      e[col] = 1.0;
      Vector x = dense_solve(a, e);
      for (long long i = 0; i < n; ++i) {
        const double want = (std::min(i, col) + 1.0) * (n - std::max(i, col)) / (n + 1.0);
        CHECK(x[i] == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
  SUBCASE("2D Laplacian solve has a tiny residual") {
    const long long n = 8;
    Matrix lap = dense_tridiag(-2, 1, 1, n), id = Matrix::Identity(n, n);
    Matrix a = dense_kron(lap, id) + dense_kron(id, lap);
    Vector rhs = Vector::LinSpaced(n * n, -1.0, 1.0);
    Vector x = dense_solve(a, rhs);
    CHECK((a * x - rhs).norm() <= 1e-12 * rhs.norm());
  }
}

TEST_CASE("analytic solutions satisfy their trivial identities") {
  SUBCASE("wood solution at t = 0 is the initial profile") {
    AnalyticSolution s = burgers_wood_solution(0.01, 1.25);
    for (double x : {0.1, 0.5, 0.9}) {
      const double want = 2 * 0.01 * kPi * std::sin(kPi * x) / (1.25 + std::cos(kPi * x));
      CHECK(s({x, 0.0}) == doctest::Approx(want).epsilon(1e-14));
    }
  }
  SUBCASE("laplace solution vanishes on the top edge") {
    AnalyticSolution s = laplace_sinh_solution(3.0);
    for (double x : {0.2, 0.7}) CHECK(std::abs(s({x, 1.0})) <= 1e-11);
  }
  SUBCASE("3D solution at the center with eps = 1") {
    AnalyticSolution s = poisson3d_sine_solution(1.0, 1.0);
    CHECK(s({0.5, 0.5, 0.5}) == doctest::Approx(1.0 / (3 * kPi * kPi)).epsilon(1e-14));
  }
}

TEST_CASE("analytic solutions satisfy their PDEs under dense finite differences") {
  const double eps = 1e-4;
  SUBCASE("laplace_sinh is harmonic") {
    AnalyticSolution s = laplace_sinh_solution(2.0);
    const auto u = [&](double x, double y) { return s({x, y}); };
    const double x = 0.4, y = 0.6;
    const double lap = (u(x + eps, y) + u(x - eps, y) + u(x, y + eps) + u(x, y - eps) -
                        4 * u(x, y)) /
                       (eps * eps);
    CHECK(std::abs(lap) <= 1e-4 * std::abs(u(x, y)));
  }
  SUBCASE("heat_mix satisfies the heat equation") {
    AnalyticSolution s = heat_mix_solution();
    const auto u = [&](double x, double t) { return s({x, t}); };
    const double x = 0.35, t = 0.2;
    const double ut = (u(x, t + eps) - u(x, t - eps)) / (2 * eps);
    const double uxx = (u(x + eps, t) - 2 * u(x, t) + u(x - eps, t)) / (eps * eps);
    CHECK(std::abs(ut - uxx) <= 1e-5);
  }
  SUBCASE("wood satisfies the Burgers equation") {
    AnalyticSolution s = burgers_wood_solution(0.05, 1.3);
    const auto u = [&](double x, double t) { return s({x, t}); };
    const double x = 0.45, t = 0.3, nu = 0.05;
    const double ut = (u(x, t + eps) - u(x, t - eps)) / (2 * eps);
    const double ux = (u(x + eps, t) - u(x - eps, t)) / (2 * eps);
    const double uxx = (u(x + eps, t) - 2 * u(x, t) + u(x - eps, t)) / (eps * eps);
    CHECK(std::abs(ut - (nu * uxx - u(x, t) * ux)) <= 1e-6);
  }
}

TEST_CASE("gauss-hermite rule") {
  GaussHermite rule(60);
  double sw = 0, swx2 = 0;
  for (int i = 0; i < 60; ++i) {
    sw += rule.w[i];
    swx2 += rule.w[i] * rule.x[i] * rule.x[i];
  }
  CHECK(sw == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
  CHECK(swx2 == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-13));
}

TEST_CASE("cole-hopf reference") {
  const double nu = 0.01 / kPi;
  ColeHopfReference ref(nu, 100);
  SUBCASE("initial condition") {
    for (double x : {-0.7, 0.2, 0.9})
      CHECK(ref.eval(x, 0.0) == doctest::Approx(-std::sin(kPi * x)).epsilon(1e-14));
  }
  SUBCASE("odd symmetry keeps the ends and center at zero") {
    for (double t : {0.1, 0.5, 1.0}) {
      CHECK(std::abs(ref.eval(0.0, t)) <= 1e-12);
      CHECK(std::abs(ref.eval(1.0, t)) <= 1e-12);
      CHECK(std::abs(ref.eval(-1.0, t)) <= 1e-12);
    }
  }
  SUBCASE("doubling the quadrature order changes nothing measurable") {
    ColeHopfReference ref2(nu, 200);
    double maxdiff = 0;
    for (double x = -0.95; x <= 0.96; x += 0.1)
      for (double t : {0.1, 0.3, 0.5, 0.7, 0.9})
        maxdiff = std::max(maxdiff, std::abs(ref.eval(x, t) - ref2.eval(x, t)));
    CHECK(maxdiff <= 1e-10);
  }
  SUBCASE("values match an independently computed reference") {
    // frozen from a numpy hermgauss evaluation of the same integral ratios
    CHECK(ref.eval(-0.45, 0.2) == doctest::Approx(0.910520689641).epsilon(1e-10));
    CHECK(ref.eval(0.25, 0.25) == doctest::Approx(-0.992081561623).epsilon(1e-10));
    CHECK(ref.eval(0.25, 0.75) == doctest::Approx(-0.679466796818).epsilon(1e-10));
    CHECK(ref.eval(0.5, 0.75) == doctest::Approx(-0.461413296859).epsilon(1e-10));
  }
  SUBCASE("negative time is rejected") { CHECK_THROWS_AS(ref.eval(0.5, -1.0), std::invalid_argument); }
}

TEST_CASE("mse helpers agree with each other") {
  Grid1D g{0.0, 1.0, 5, GridStyle::interior_dirichlet};
  TensorTrain u = grid_function_tt([](double x) { return std::sin(2 * x); }, g);
  const auto exact = [](const std::vector<double>& p) { return std::sin(2 * p[0]) + 0.01; };
  const double dense = mse_dense(u, {g}, exact);
  CHECK(dense == doctest::Approx(1e-4).epsilon(1e-10));
  TensorTrain exact_tt = grid_function_tt([](double x) { return std::sin(2 * x) + 0.01; }, g);
  CHECK(mse_tt(u, exact_tt) == doctest::Approx(dense).epsilon(1e-10));
  const double sampled = mse_sampled(u, {g}, exact, 20000, 7);
  CHECK(sampled == doctest::Approx(dense).epsilon(1e-6));
}
