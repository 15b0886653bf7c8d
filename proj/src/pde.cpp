#include "qtt/pde.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace qtt {

namespace {

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const Tolerance kAssembleTol{1e-13, {}};

Mpo laplacian_sum_2d(int c) {
  const Mpo t = tridiag_mpo({-2.0, 1.0, 1.0}, c);
  const Mpo id = identity_mpo(c);
  return mpo_round(mpo_add(mpo_kron(t, id), mpo_kron(id, t)), kAssembleTol);
}

TensorTrain step_start(const TensorTrain& rhs, const PdeOptions& opts, int step) {
  if (opts.step_guess == StepGuess::random)
    return make_guess(opts.guess, rhs, opts.solver.seed * 1000003ULL + step);
  return tt_round(rhs, opts.solver.trunc);
}

}  // namespace

void Grid1D::validate() const {
  if (!(b > a)) throw std::invalid_argument("grid: interval must satisfy b > a");
  if (c < 2) throw std::invalid_argument("grid: c must be >= 2");
}

TensorTrain EdgeSpec::build(const Grid1D& grid) const {
  if (factory) return factory(grid);
  if (!value) return tt_zero(grid.c);
  return ttsvd_tt_on_grid(value, grid.c, grid.a, grid.h(), 1.0, Tolerance{1e-13, {}});
}

Mpo fd_operator_1d(double p, double s, double v, const Grid1D& grid) {
  const double h = grid.h();
  return tridiag_mpo({h * h * v - 2.0 * p, p + h * s / 2.0, p - h * s / 2.0}, grid.c);
}

Mpo fd_operator_2d(const FdCoefficients2D& coeffs, const Grid1D& grid) {
  const Mpo id = identity_mpo(grid.c);
  const Mpo mx = fd_operator_1d(coeffs.p, coeffs.s, coeffs.v, grid);
  const Mpo my = fd_operator_1d(coeffs.q, coeffs.t, 0.0, grid);
  Mpo out = mpo_add(mpo_kron(mx, id), mpo_kron(id, my));
  if (coeffs.r != 0.0) {
    const Mpo rx = fd_operator_1d(0.0, coeffs.r, 0.0, grid);
    const Mpo ry = fd_operator_1d(0.0, 1.0, 0.0, grid);
    out = mpo_add(out, mpo_compose(mpo_kron(rx, id), mpo_kron(id, ry), Tolerance::exact()));
  }
  return mpo_round(out, kAssembleTol);
}

TtSystem poisson2d_system(const TensorTrain& source, const BoundarySpec2D& bc,
                          const Grid1D& grid) {
  const int c = grid.c;
  const double h = grid.h();
  // corner consistency of analytic Dirichlet data
  auto corner = [&](const EdgeSpec& e1, double p1, const EdgeSpec& e2, double p2) {
    if (!e1.value || !e2.value) return;
    const double v1 = e1.value(p1), v2 = e2.value(p2);
    if (std::abs(v1 - v2) > 1e-8 * (1.0 + std::abs(v1) + std::abs(v2)))
      throw std::invalid_argument("poisson2d_system: inconsistent Dirichlet corner data");
  };
  corner(bc.left, grid.a, bc.bottom, grid.a);
  corner(bc.left, grid.b, bc.top, grid.a);
  corner(bc.right, grid.a, bc.bottom, grid.b);
  corner(bc.right, grid.b, bc.top, grid.b);

  TtSystem sys;
  sys.a = laplacian_sum_2d(c);
  TensorTrain rhs = tt_scale(source, h * h);
  auto add_edge = [&](const EdgeSpec& e, bool x_axis, UnitVectorEnd end) {
    if (e.is_zero()) return;
    const TensorTrain edge = e.build(grid);
    const TensorTrain unit = unit_vector_tt(c, end);
    const TensorTrain term = x_axis ? kron_concat(unit, edge) : kron_concat(edge, unit);
    rhs = tt_add(rhs, tt_scale(term, -1.0));
  };
  add_edge(bc.left, true, UnitVectorEnd::first);
  add_edge(bc.right, true, UnitVectorEnd::last);
  add_edge(bc.bottom, false, UnitVectorEnd::first);
  add_edge(bc.top, false, UnitVectorEnd::last);
  sys.rhs = tt_round(rhs, kAssembleTol);
  return sys;
}

TtSystem poisson3d_system(const TensorTrain& source, const Grid1D& grid, double eps1,
                          double eps2) {
  const int c = grid.c;
  const double h = grid.h();
  const Mpo t = tridiag_mpo({-2.0, 1.0, 1.0}, c);
  const Mpo id = identity_mpo(c);
  const Mpo id2 = mpo_kron(id, id);
  Mpo a = mpo_kron(t, id2);
  a = mpo_add(a, mpo_scale(mpo_kron(id, mpo_kron(t, id)), eps1));
  a = mpo_add(a, mpo_scale(mpo_kron(id2, t), eps2));
  TtSystem sys;
  sys.a = mpo_round(a, kAssembleTol);
  sys.rhs = tt_round(tt_scale(source, h * h), kAssembleTol);
  return sys;
}

namespace {

PdeResult solve_negated_spd(const TtSystem& sys, const PdeOptions& opts, double assemble_time) {
  const Mpo neg_a = mpo_scale(sys.a, -1.0);
  const TensorTrain neg_rhs = tt_scale(sys.rhs, -1.0);
  PdeResult out;
  out.assemble_time_s = assemble_time;
  SolverConfig scfg = opts.solver;
  scfg.spd_hint = true;
  const auto t1 = Clock::now();
  TensorTrain x0 = make_guess(opts.guess, neg_rhs, scfg.seed);
  SolveResult sol = solve(neg_a, x0, neg_rhs, scfg);
  out.solve_time_s = seconds_since(t1);
  out.u = std::move(sol.x);
  out.diag = std::move(sol.diag);
  return out;
}

}  // namespace

PdeResult poisson_solve_2d(const TensorTrain& source, const BoundarySpec2D& bc, const Grid1D& grid,
                           const PdeOptions& opts) {
  grid.validate();
  const auto t0 = Clock::now();
  TtSystem sys = poisson2d_system(source, bc, grid);
  return solve_negated_spd(sys, opts, seconds_since(t0));
}

PdeResult poisson_solve_3d(const TensorTrain& source, const Grid1D& grid, double eps1, double eps2,
                           const PdeOptions& opts) {
  grid.validate();
  const auto t0 = Clock::now();
  TtSystem sys = poisson3d_system(source, grid, eps1, eps2);
  return solve_negated_spd(sys, opts, seconds_since(t0));
}

TimeSteppingResult heat_ts_1d(const TensorTrain& initial, const ScalarFn& g1, const ScalarFn& g2,
                              const Grid1D& grid, const TimeSteppingConfig& ts,
                              const PdeOptions& opts) {
  grid.validate();
  if (ts.dt <= 0) throw std::invalid_argument("heat_ts_1d: dt must be positive");
  const double h = grid.h();
  const double r = -ts.dt / (h * h);
  const Mpo a = tridiag_mpo({1.0 - 2.0 * r, r, r}, grid.c);
  SolverConfig scfg = opts.solver;
  scfg.spd_hint = true;  // strictly diagonally dominant with positive diagonal

  TimeSteppingResult out;
  out.states.reserve(ts.steps + 1);
  out.states.push_back(initial);
  TensorTrain w = initial;
  const auto t0 = Clock::now();
  for (int j = 1; j <= ts.steps; ++j) {
    const double t = j * ts.dt;
    const double va = g1 ? -r * g1(t) : 0.0;
    const double vb = g2 ? -r * g2(t) : 0.0;
    TensorTrain rhs = w;
    if (va != 0.0 || vb != 0.0) rhs = tt_add(rhs, boundary_vector_tt(va, vb, grid.c));
    rhs = tt_round(rhs, scfg.trunc);
    SolveResult sol = solve(a, step_start(rhs, opts, j), rhs, scfg);
    w = tt_round(sol.x, scfg.trunc);
    out.states.push_back(w);
    if (j == ts.steps) out.last_diag = std::move(sol.diag);
  }
  out.solve_time_s = seconds_since(t0);
  return out;
}

TtSystem heat_st_system(const EdgeSpec& initial, const EdgeSpec& g1, const EdgeSpec& g2,
                        const Grid1D& grid_t, const Grid1D& grid_x) {
  const int ct = grid_t.c, cx = grid_x.c;
  const double ht = grid_t.h(), hx = grid_x.h();
  const Mpo a1 = mpo_kron(tridiag_mpo({-1.0, 0.0, 1.0}, ct), identity_mpo(cx));
  const Mpo a2 = mpo_kron(identity_mpo(ct), tridiag_mpo({2.0, -1.0, -1.0}, cx));
  TtSystem sys;
  sys.a =
      mpo_round(mpo_add(mpo_scale(a1, 1.0 / ht), mpo_scale(a2, -1.0 / (hx * hx))), kAssembleTol);
  TensorTrain b = kron_concat(unit_vector_tt(ct, UnitVectorEnd::first), initial.build(grid_x));
  b = tt_scale(b, 1.0 / ht);
  if (!g1.is_zero())
    b = tt_add(b, tt_scale(kron_concat(g1.build(grid_t), unit_vector_tt(cx, UnitVectorEnd::first)),
                           1.0 / (hx * hx)));
  if (!g2.is_zero())
    b = tt_add(b, tt_scale(kron_concat(g2.build(grid_t), unit_vector_tt(cx, UnitVectorEnd::last)),
                           1.0 / (hx * hx)));
  sys.rhs = tt_round(tt_scale(b, -1.0), kAssembleTol);
  return sys;
}

PdeResult heat_st_1d(const EdgeSpec& initial, const EdgeSpec& g1, const EdgeSpec& g2,
                     const Grid1D& grid_t, const Grid1D& grid_x, const PdeOptions& opts) {
  if (grid_t.style != GridStyle::spacetime || grid_x.style != GridStyle::spacetime)
    throw std::invalid_argument("heat_st_1d: grids must use the spacetime style");
  grid_t.validate();
  grid_x.validate();
  const auto t0 = Clock::now();
  TtSystem sys = heat_st_system(initial, g1, g2, grid_t, grid_x);
  PdeResult out;
  out.assemble_time_s = seconds_since(t0);
  const auto t1 = Clock::now();
  TensorTrain x0 = make_guess(opts.guess, sys.rhs, opts.solver.seed);
  SolveResult sol = solve(sys.a, x0, sys.rhs, opts.solver);
  out.solve_time_s = seconds_since(t1);
  out.u = std::move(sol.x);
  out.diag = std::move(sol.diag);
  return out;
}

TimeSteppingResult heat2d_tdbc(const Grid1D& grid, const TimeSteppingConfig& ts,
                               double diffusivity, const ScalarFn2& left_edge,
                               const ScalarFn2& top_edge, const InterpolationConfig& encoder,
                               const PdeOptions& opts) {
  grid.validate();
  const int c = grid.c;
  const double h = grid.h();
  const double r = -diffusivity * ts.dt / (h * h);
  const Mpo a =
      mpo_round(mpo_add(identity_mpo(2 * c), mpo_scale(laplacian_sum_2d(c), r)), kAssembleTol);
  SolverConfig scfg = opts.solver;
  scfg.spd_hint = true;

  InterpolationConfig ecfg = encoder;
  ecfg.c = c;
  const TensorTrain e_first = unit_vector_tt(c, UnitVectorEnd::first);
  const TensorTrain e_last = unit_vector_tt(c, UnitVectorEnd::last);

  TimeSteppingResult out;
  TensorTrain w = tt_zero(2 * c);  // zero initial condition
  out.states.push_back(w);
  const auto t0 = Clock::now();
  for (int j = 1; j <= ts.steps; ++j) {
    const double t = j * ts.dt;
    const auto tb = Clock::now();
    const TensorTrain left_tt = interpolative_tt_on_grid(
        [&](double y) { return left_edge(y, t); }, ecfg, grid.a, h, 1.0);
    const TensorTrain top_tt = interpolative_tt_on_grid(
        [&](double x) { return top_edge(x, t); }, ecfg, grid.a, h, 1.0);
    TensorTrain b = tt_add(kron_concat(e_first, left_tt), kron_concat(top_tt, e_last));
    b = tt_round(tt_scale(b, -r), Tolerance{1e-12, {}});
    out.bc_build_time_s += seconds_since(tb);
    TensorTrain rhs = tt_round(tt_add(w, b), scfg.trunc);
    SolveResult sol = solve(a, step_start(rhs, opts, j), rhs, scfg);
    w = tt_round(sol.x, scfg.trunc);
    out.states.push_back(w);
    if (j == ts.steps) out.last_diag = std::move(sol.diag);
  }
  out.solve_time_s = seconds_since(t0);
  return out;
}

TimeSteppingResult burgers_ts(const TensorTrain& initial, BurgersBc bc_kind, const ScalarFn& g1,
                              const ScalarFn& g2, double nu, const Grid1D& grid,
                              const TimeSteppingConfig& ts, const PdeOptions& opts) {
  grid.validate();
  const int c = grid.c;
  const double h = grid.h(), l = ts.dt;
  const double r = -nu * l / (h * h);
  const double adv = l / (2.0 * h);
  Mpo a = tridiag_mpo({1.0 - 2.0 * r, r, r}, c);
  Mpo bmat = tridiag_mpo({0.0, adv, -adv}, c);
  if (bc_kind == BurgersBc::neumann_dirichlet) {
    a = mpo_round(
        mpo_add(a, mpo_scale(eraser_mpo(1.0 - 2.0 * r - 1.0 / h, r + 1.0 / h, r, -2.0 * r, c), -1.0)),
        kAssembleTol);
    bmat = mpo_round(mpo_add(bmat, mpo_scale(eraser_mpo(0.0, adv, -adv, 0.0, c), -1.0)),
                     kAssembleTol);
  }
  SolverConfig scfg = opts.solver;
  scfg.spd_hint = false;

  TimeSteppingResult out;
  out.states.push_back(initial);
  TensorTrain w = initial, w_prev = initial;
  const long long last_idx = grid.n() - 1;
  const auto t0 = Clock::now();
  for (int j = 1; j <= ts.steps; ++j) {
    const double t = j * l;
    TensorTrain dvec = (j == 1) ? w : tt_round(tt_add(tt_scale(w, 2.0), tt_scale(w_prev, -1.0)),
                                               scfg.trunc);
    const Mpo dmpo = diag_mpo_from_tt(dvec);
    const Mpo lhs = mpo_round(mpo_add(a, mpo_compose(dmpo, bmat, Tolerance::exact())),
                              kAssembleTol);
    TensorTrain rhs = w;
    const double v1 = g1 ? g1(t) : 0.0;
    const double v2 = g2 ? g2(t) : 0.0;
    if (bc_kind == BurgersBc::dirichlet) {
      double ba = -r * v1, bb = -r * v2;
      if (v1 != 0.0) ba += adv * tt_entry(dvec, 0) * v1;
      if (v2 != 0.0) bb -= adv * tt_entry(dvec, last_idx) * v2;
      if (ba != 0.0 || bb != 0.0) rhs = tt_add(rhs, boundary_vector_tt(ba, bb, c));
    } else {
      // first row enforces a one-sided derivative, last row a Dirichlet value
      const double ba = -v1 - tt_entry(w, 0);
      const double bb = v2 - tt_entry(w, last_idx);
      rhs = tt_add(rhs, boundary_vector_tt(ba, bb, c));
    }
    rhs = tt_round(rhs, scfg.trunc);
    SolveResult sol = solve(lhs, step_start(rhs, opts, j), rhs, scfg);
    w_prev = w;
    w = tt_round(sol.x, scfg.trunc);
    out.states.push_back(w);
    if (j == ts.steps) out.last_diag = std::move(sol.diag);
  }
  out.solve_time_s = seconds_since(t0);
  return out;
}

BurgersStParts burgers_st_parts(const EdgeSpec& initial, const EdgeSpec& g1, const EdgeSpec& g2,
                                const Grid1D& grid_t, const Grid1D& grid_x, double nu) {
  const int ct = grid_t.c, cx = grid_x.c;
  const double ht = grid_t.h(), hx = grid_x.h();
  const Mpo id_t = identity_mpo(ct);
  const Mpo a1 = mpo_scale(mpo_kron(tridiag_mpo({-1.0, 0.0, 1.0}, ct), identity_mpo(cx)), 1.0 / ht);
  const Mpo a2 = mpo_scale(mpo_kron(id_t, tridiag_mpo({2.0, -1.0, -1.0}, cx)), nu / (hx * hx));
  BurgersStParts parts;
  parts.a_linear = mpo_round(mpo_add(a1, mpo_scale(a2, -1.0)), kAssembleTol);
  parts.advection =
      mpo_scale(mpo_kron(id_t, tridiag_mpo({0.0, -1.0, 1.0}, cx)), 1.0 / (2.0 * hx));

  TensorTrain b = tt_scale(kron_concat(unit_vector_tt(ct, UnitVectorEnd::first),
                                       initial.build(grid_x)),
                           1.0 / ht);
  if (!g1.is_zero())
    b = tt_add(b, tt_scale(kron_concat(g1.build(grid_t), unit_vector_tt(cx, UnitVectorEnd::first)),
                           nu / (hx * hx)));
  if (!g2.is_zero())
    b = tt_add(b, tt_scale(kron_concat(g2.build(grid_t), unit_vector_tt(cx, UnitVectorEnd::last)),
                           nu / (hx * hx)));
  parts.rhs = tt_round(tt_scale(b, -1.0), kAssembleTol);
  return parts;
}

SpaceTimeRunsResult burgers_st(const EdgeSpec& initial, const EdgeSpec& g1, const EdgeSpec& g2,
                               const Grid1D& grid_t, const Grid1D& grid_x,
                               const SpaceTimeConfig& st, const PdeOptions& opts) {
  if (grid_t.style != GridStyle::spacetime || grid_x.style != GridStyle::spacetime)
    throw std::invalid_argument("burgers_st: grids must use the spacetime style");
  grid_t.validate();
  grid_x.validate();
  if (st.runs < 1) throw std::invalid_argument("burgers_st: runs must be >= 1");
  BurgersStParts parts = burgers_st_parts(initial, g1, g2, grid_t, grid_x, st.nu);

  // first linearization point: the initial condition replicated over time
  TensorTrain u_approx = kron_concat(tt_constant(grid_t.c, 1.0), initial.build(grid_x));
  TensorTrain x_warm = opts.step_guess == StepGuess::random
                           ? make_guess(opts.guess, parts.rhs, opts.solver.seed)
                           : parts.rhs;

  SpaceTimeRunsResult out;
  const auto t0 = Clock::now();
  for (int run = 1; run <= st.runs; ++run) {
    const TensorTrain dvec = tt_round(u_approx, Tolerance{1e-11, opts.solver.trunc.max_rank});
    const Mpo lhs = mpo_round(
        mpo_add(parts.a_linear,
                mpo_compose(diag_mpo_from_tt(dvec), parts.advection, Tolerance::exact())),
        kAssembleTol);
    if (opts.step_guess == StepGuess::random)
      x_warm = make_guess(opts.guess, parts.rhs, opts.solver.seed * 1000003ULL + run);
    SolveResult sol = solve(lhs, x_warm, parts.rhs, opts.solver);
    x_warm = sol.x;
    u_approx = sol.x;
    out.run_solutions.push_back(sol.x);
    if (run == st.runs) out.last_diag = std::move(sol.diag);
  }
  out.solve_time_s = seconds_since(t0);
  return out;
}

}  // namespace qtt
