#include "qtt/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qtt/common.hpp"

namespace qtt {

namespace {

using Clock = std::chrono::steady_clock;

long long theoretical_bond_cap(int bond, int c) {
  // bond separates cores [0..bond] from [bond+1..c-1]
  const int l = bond + 1, r = c - bond - 1;
  const int e = std::min({l, r, 62});
  return 1LL << e;
}

using OpEnv = std::vector<Matrix>;  // indexed by operator bond; each (rx x rx)

OpEnv op_env_trivial() { return {Matrix::Ones(1, 1)}; }

OpEnv op_env_left_update(const OpEnv& e, const Core3& x, const Core4& a) {
  OpEnv out(a.right(), Matrix::Zero(x.right(), x.right()));
  for (Index alpha = 0; alpha < a.left(); ++alpha)
    for (Index j = 0; j < a.in_mode(); ++j) {
      const Matrix t = e[alpha] * x.slice(j);
      for (Index i = 0; i < a.out_mode(); ++i) {
        Matrix xit;
        bool have = false;
        for (Index beta = 0; beta < a.right(); ++beta) {
          const double coef = a(alpha, i, j, beta);
          if (coef == 0.0) continue;
          if (!have) {
            xit = x.slice(i).transpose() * t;
            have = true;
          }
          out[beta].noalias() += coef * xit;
        }
      }
    }
  return out;
}

OpEnv op_env_right_update(const OpEnv& e, const Core3& x, const Core4& a) {
  OpEnv out(a.left(), Matrix::Zero(x.left(), x.left()));
  for (Index beta = 0; beta < a.right(); ++beta)
    for (Index j = 0; j < a.in_mode(); ++j) {
      const Matrix t = e[beta] * x.slice(j).transpose();
      for (Index i = 0; i < a.out_mode(); ++i) {
        Matrix xit;
        bool have = false;
        for (Index alpha = 0; alpha < a.left(); ++alpha) {
          const double coef = a(alpha, i, j, beta);
          if (coef == 0.0) continue;
          if (!have) {
            xit = x.slice(i) * t;
            have = true;
          }
          out[alpha].noalias() += coef * xit;
        }
      }
    }
  return out;
}

// (rx x rb) environments of <x | b>
Matrix vec_env_left_update(const Matrix& e, const Core3& x, const Core3& b) {
  Matrix out = Matrix::Zero(x.right(), b.right());
  for (Index i = 0; i < x.mode(); ++i)
    out.noalias() += x.slice(i).transpose() * e * b.slice(i);
  return out;
}

Matrix vec_env_right_update(const Matrix& e, const Core3& x, const Core3& b) {
  Matrix out = Matrix::Zero(x.left(), b.left());
  for (Index i = 0; i < x.mode(); ++i) out.noalias() += x.slice(i) * e * b.slice(i).transpose();
  return out;
}

// local vectors live in grouped layout: entry (a, i, b) at (a + al*b) + al*ar*i
Vector core_to_grouped(const Core3& c) {
  const Index al = c.left(), ar = c.right(), n = c.mode(), blk = al * ar;
  Vector v(blk * n);
  for (Index i = 0; i < n; ++i)
    for (Index b = 0; b < ar; ++b)
      for (Index a = 0; a < al; ++a) v[a + al * b + blk * i] = c(a, i, b);
  return v;
}

Core3 grouped_to_core(const Vector& v, Index al, Index n, Index ar) {
  Core3 c(al, n, ar);
  const Index blk = al * ar;
  for (Index i = 0; i < n; ++i)
    for (Index b = 0; b < ar; ++b)
      for (Index a = 0; a < al; ++a) c(a, i, b) = v[a + al * b + blk * i];
  return c;
}

Matrix build_local_matrix(const OpEnv& l, const Core4& a, const OpEnv& r) {
  // two-stage contraction: first fold the operator coefficients into the
  // left environment, then Kronecker with the right one
  const Index al = l[0].rows(), ar = r[0].rows(), n = a.out_mode(), blk = al * ar;
  Matrix h = Matrix::Zero(blk * n, blk * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < a.in_mode(); ++j) {
      for (Index beta = 0; beta < a.right(); ++beta) {
        Matrix w;
        bool have = false;
        for (Index alpha = 0; alpha < a.left(); ++alpha) {
          const double coef = a(alpha, i, j, beta);
          if (coef == 0.0) continue;
          if (!have) {
            w = coef * l[alpha];
            have = true;
          } else {
            w.noalias() += coef * l[alpha];
          }
        }
        if (!have) continue;
        auto block = h.block(i * blk, j * blk, blk, blk);
        for (Index br = 0; br < ar; ++br)
          for (Index bc = 0; bc < ar; ++bc) {
            const double rv = r[beta](br, bc);
            if (rv != 0.0) block.block(br * al, bc * al, al, al) += rv * w;
          }
      }
    }
  return h;
}

Vector build_local_rhs(const Matrix& l, const Core3& b, const Matrix& r) {
  const Index al = l.rows(), ar = r.rows(), n = b.mode(), blk = al * ar;
  Vector g(blk * n);
  for (Index i = 0; i < n; ++i) {
    const Matrix gi = l * b.slice(i) * r.transpose();
    for (Index bb = 0; bb < ar; ++bb)
      for (Index aa = 0; aa < al; ++aa) g[aa + al * bb + blk * i] = gi(aa, bb);
  }
  return g;
}

Vector local_matvec(const OpEnv& l, const Core4& a, const OpEnv& r, const Vector& v) {
  const Index al = l[0].rows(), ar = r[0].rows(), n = a.out_mode(), blk = al * ar;
  Vector y = Vector::Zero(blk * n);
  for (Index alpha = 0; alpha < a.left(); ++alpha)
    for (Index j = 0; j < a.in_mode(); ++j) {
      const Eigen::Map<const Matrix> xj(v.data() + blk * j, al, ar);
      const Matrix lx = l[alpha] * xj;
      for (Index beta = 0; beta < a.right(); ++beta) {
        Matrix w;
        bool have = false;
        for (Index i = 0; i < n; ++i) {
          const double coef = a(alpha, i, j, beta);
          if (coef == 0.0) continue;
          if (!have) {
            w = lx * r[beta].transpose();
            have = true;
          }
          Eigen::Map<Matrix>(y.data() + blk * i, al, ar) += coef * w;
        }
      }
    }
  return y;
}

// merge adjacent train cores into one with the product mode (first core's bit slow)
Core3 merge_cores(const Core3& x, const Core3& y) {
  Core3 out(x.left(), x.mode() * y.mode(), y.right());
  for (Index i1 = 0; i1 < x.mode(); ++i1)
    for (Index i2 = 0; i2 < y.mode(); ++i2) {
      const Matrix prod = x.slice(i1) * y.slice(i2);
      for (Index a = 0; a < out.left(); ++a)
        for (Index b = 0; b < out.right(); ++b) out(a, i1 * y.mode() + i2, b) = prod(a, b);
    }
  return out;
}

struct LocalSolveStats {
  double rel_residual = 0.0;
  bool regularized = false;
  bool iterative = false;
  double energy = 0.0;
};

// conjugate gradient on the factorized local operator
Vector solve_cg(const OpEnv& l, const Core4& a, const OpEnv& r, const Vector& g, Vector x,
                double tol, int max_iters) {
  Vector res = g - local_matvec(l, a, r, x);
  Vector p = res;
  double rr = res.squaredNorm();
  const double target = tol * tol * g.squaredNorm();
  for (int it = 0; it < max_iters && rr > target; ++it) {
    Vector hp = local_matvec(l, a, r, p);
    const double ph = p.dot(hp);
    if (ph <= 0.0) break;  // not SPD around here, bail to what we have
    const double step = rr / ph;
    x += step * p;
    res -= step * hp;
    const double rr_new = res.squaredNorm();
    p = res + (rr_new / rr) * p;
    rr = rr_new;
  }
  return x;
}

Vector solve_local(const OpEnv& l, const Core4& a, const OpEnv& r, const Vector& g,
                   const Vector& warm, const SolverConfig& cfg, LocalSolveStats& stats) {
  const Index dim = g.size();
  const double gnorm = g.norm();
  if (cfg.spd_hint && dim > cfg.direct_dim_cap) {
    stats.iterative = true;
    Vector x = solve_cg(l, a, r, g, warm, cfg.local_tol, cfg.local_max_iters);
    const double rn = (g - local_matvec(l, a, r, x)).norm();
    stats.rel_residual = gnorm > 0 ? rn / gnorm : rn;
    if (cfg.track_energy)
      stats.energy = 0.5 * x.dot(local_matvec(l, a, r, x)) - g.dot(x);
    return x;
  }
  Matrix h = build_local_matrix(l, a, r);
  Vector x;
  if (cfg.spd_hint) {
    Eigen::LLT<Matrix> llt(h);
    if (llt.info() == Eigen::Success) x = llt.solve(g);
  }
  if (x.size() == 0) x = Eigen::PartialPivLU<Matrix>(h).solve(g);
  double rn = (h * x - g).norm();
  const double bar = std::max(cfg.local_tol, 1e-8) * std::max(gnorm, 1e-300);
  if (!x.allFinite() || rn > bar) {
    const double shift = 1e-14 * h.norm();
    Matrix hs = h + shift * Matrix::Identity(h.rows(), h.cols());
    x = Eigen::PartialPivLU<Matrix>(hs).solve(g);
    rn = (h * x - g).norm();
    stats.regularized = true;
  }
  stats.rel_residual = gnorm > 0 ? rn / gnorm : rn;
  if (cfg.track_energy) stats.energy = 0.5 * x.dot(h * x) - g.dot(x);
  return x;
}

// split a merged two-site core back into two; left_orth selects which side
// stays orthonormal (the sweep direction)
std::pair<Core3, Core3> split_pair(const Core3& merged, Index n1, Index n2,
                                   const Tolerance& trunc, bool left_orth) {
  const Index al = merged.left(), ar = merged.right();
  Matrix m(al * n1, n2 * ar);
  for (Index a = 0; a < al; ++a)
    for (Index i1 = 0; i1 < n1; ++i1)
      for (Index i2 = 0; i2 < n2; ++i2)
        for (Index b = 0; b < ar; ++b)
          m(a + al * i1, i2 + n2 * b) = merged(a, i1 * n2 + i2, b);
  const double delta = trunc.rel_eps * m.norm();
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sing = svd.singularValues();
  int rank = static_cast<int>(sing.size());
  double tail = 0.0;
  while (rank > 1) {
    const double s = sing[rank - 1];
    if (tail + s * s > delta * delta) break;
    tail += s * s;
    --rank;
  }
  if (trunc.max_rank && rank > *trunc.max_rank) rank = std::max(1, *trunc.max_rank);
  Matrix left, right;
  if (left_orth) {
    left = svd.matrixU().leftCols(rank);
    right = sing.head(rank).asDiagonal() * svd.matrixV().leftCols(rank).transpose();
  } else {
    left = svd.matrixU().leftCols(rank) * sing.head(rank).asDiagonal();
    right = svd.matrixV().leftCols(rank).transpose();
  }
  return {Core3::fold_left(left, al, n1), Core3::fold_right(right, n2, ar)};
}

// orthogonality-center moves for the one-site scheme
void push_center_right(std::vector<Core3>& x, int k) {
  Matrix m = x[k].unfold_left();
  Eigen::HouseholderQR<Matrix> qr(m);
  const Index rank = std::min(m.rows(), m.cols());
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), rank);
  Matrix rr = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  x[k] = Core3::fold_left(q, x[k].left(), x[k].mode());
  x[k + 1] = Core3::fold_right(rr * x[k + 1].unfold_right(), x[k + 1].mode(), x[k + 1].right());
}

void push_center_left(std::vector<Core3>& x, int k) {
  Matrix mt = x[k].unfold_right().transpose();
  Eigen::HouseholderQR<Matrix> qr(mt);
  const Index rank = std::min(mt.rows(), mt.cols());
  Matrix q = qr.householderQ() * Matrix::Identity(mt.rows(), rank);
  Matrix l = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  x[k] = Core3::fold_right(q.transpose(), x[k].mode(), x[k].right());
  x[k - 1] = Core3::fold_left(x[k - 1].unfold_left() * l.transpose(), x[k - 1].left(),
                              x[k - 1].mode());
}

struct Sweeper {
  const Mpo& A;
  const TensorTrain& b;
  const SolverConfig& cfg;
  std::vector<Core3> x;
  std::vector<OpEnv> lop, rop;    // lop[k]: sites < k ; rop[k]: sites > k
  std::vector<Matrix> lvec, rvec;
  Diagnostics diag;

  Sweeper(const Mpo& a_, const TensorTrain& x0, const TensorTrain& b_, const SolverConfig& c_)
      : A(a_), b(b_), cfg(c_), x(x0.cores) {
    const int c = static_cast<int>(x.size());
    detail::right_orthogonalize(x);
    lop.assign(c + 1, {});
    rop.assign(c + 1, {});
    lvec.assign(c + 1, Matrix());
    rvec.assign(c + 1, Matrix());
    lop[0] = op_env_trivial();
    lvec[0] = Matrix::Ones(1, 1);
    rop[c - 1] = op_env_trivial();
    rvec[c - 1] = Matrix::Ones(1, 1);
    for (int k = c - 1; k > 0; --k) {
      rop[k - 1] = op_env_right_update(rop[k], x[k], A.cores[k]);
      rvec[k - 1] = vec_env_right_update(rvec[k], x[k], b.cores[k]);
    }
  }

  void absorb_stats(const LocalSolveStats& s) {
    diag.max_local_residual = std::max(diag.max_local_residual, s.rel_residual);
    diag.regularized = diag.regularized || s.regularized;
    if (s.iterative) ++diag.iterative_solves;
    else ++diag.direct_solves;
    if (cfg.track_energy) diag.energies.push_back(s.energy);
  }

  void solve_site(int k) {
    LocalSolveStats stats;
    Vector g = build_local_rhs(lvec[k], b.cores[k], rvec[k]);
    Vector warm = core_to_grouped(x[k]);
    Vector u = solve_local(lop[k], A.cores[k], rop[k], g, warm, cfg, stats);
    x[k] = grouped_to_core(u, x[k].left(), x[k].mode(), x[k].right());
    absorb_stats(stats);
  }

  void solve_pair(int k, bool left_orth) {
    LocalSolveStats stats;
    const Core4 amerged = inner_core_product(A.cores[k], A.cores[k + 1]);
    const Core3 bmerged = merge_cores(b.cores[k], b.cores[k + 1]);
    const Core3 xmerged = merge_cores(x[k], x[k + 1]);
    Vector g = build_local_rhs(lvec[k], bmerged, rvec[k + 1]);
    Vector warm = core_to_grouped(xmerged);
    Vector u = solve_local(lop[k], amerged, rop[k + 1], g, warm, cfg, stats);
    Core3 unew = grouped_to_core(u, xmerged.left(), xmerged.mode(), xmerged.right());
    auto [cl, cr] = split_pair(unew, x[k].mode(), x[k + 1].mode(), cfg.trunc, left_orth);
    x[k] = std::move(cl);
    x[k + 1] = std::move(cr);
    absorb_stats(stats);
  }

  void update_left(int k) {  // after site k is final for this pass
    lop[k + 1] = op_env_left_update(lop[k], x[k], A.cores[k]);
    lvec[k + 1] = vec_env_left_update(lvec[k], x[k], b.cores[k]);
  }
  void update_right(int k) {
    rop[k - 1] = op_env_right_update(rop[k], x[k], A.cores[k]);
    rvec[k - 1] = vec_env_right_update(rvec[k], x[k], b.cores[k]);
  }

  void run(SolveMethod method) {
    const int c = static_cast<int>(x.size());
    const auto t0 = Clock::now();
    for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
      if (method == SolveMethod::als || c == 1) {
        for (int k = 0; k < c; ++k) {
          solve_site(k);
          if (k < c - 1) {
            push_center_right(x, k);
            update_left(k);
          }
        }
        for (int k = c - 1; k >= 0; --k) {
          solve_site(k);
          if (k > 0) {
            push_center_left(x, k);
            update_right(k);
          }
        }
      } else {
        for (int k = 0; k + 1 < c; ++k) {
          solve_pair(k, true);
          if (k + 2 < c) update_left(k);
        }
        for (int k = c - 2; k >= 0; --k) {
          solve_pair(k, false);
          if (k > 0) update_right(k + 1);
        }
      }
      if (cfg.record_residuals)
        diag.sweep_residuals.push_back(residual(A, TensorTrain(x), b));
    }
    diag.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    TensorTrain out(x);
    diag.max_rank = out.max_rank();
  }
};

}  // namespace

TensorTrain make_guess(const GuessStrategy& strategy, const TensorTrain& rhs_template,
                       std::uint64_t seed) {
  const int c = rhs_template.order();
  std::vector<int> ranks(std::max(0, c - 1), 1);
  const auto trank = rhs_template.ranks();
  for (int k = 0; k < c - 1; ++k) {
    long long want = 1;
    if (strategy.kind == GuessStrategy::Kind::rhs_ranks) {
      want = trank[k] + strategy.rank_pad;
    } else {
      const int depth = std::min(k, c - 2 - k);
      if (strategy.progression == GuessStrategy::Progression::arithmetic)
        want = static_cast<long long>(strategy.rank_pad) * (depth + 1);
      else
        want = static_cast<long long>(strategy.rank_pad) << std::min(depth, 60);
    }
    want = std::min<long long>(want, strategy.max_rank);
    want = std::min(want, theoretical_bond_cap(k, c));
    ranks[k] = static_cast<int>(std::max<long long>(1, want));
  }
  Rng rng(seed);
  std::vector<Core3> cores;
  for (int k = 0; k < c; ++k) {
    const Index l = (k == 0) ? 1 : ranks[k - 1];
    const Index r = (k == c - 1) ? 1 : ranks[k];
    Core3 core(l, rhs_template.cores[k].mode(), r);
    for (Index i = 0; i < core.data().size(); ++i) core.data()[i] = rng.normal();
    cores.push_back(std::move(core));
  }
  TensorTrain guess(std::move(cores));
  const double n = tt_norm(guess);
  if (n > 0) guess = tt_scale(guess, 1.0 / n);
  return guess;
}

double residual(const Mpo& A, const TensorTrain& x, const TensorTrain& b) {
  TensorTrain ax = mpo_apply(A, x, Tolerance::exact());
  TensorTrain d = tt_add(ax, tt_scale(b, -1.0));
  const double bn = tt_norm(b);
  const double dn = tt_norm(d);
  return bn > 0 ? dn / bn : dn;
}

SolveResult als_solve(const Mpo& A, const TensorTrain& x0, const TensorTrain& b,
                      const SolverConfig& cfg) {
  if (A.order() != x0.order() || A.order() != b.order())
    throw std::invalid_argument("als_solve: core counts differ");
  Sweeper s(A, x0, b, cfg);
  s.run(SolveMethod::als);
  return {TensorTrain(std::move(s.x)), std::move(s.diag)};
}

SolveResult mals_solve(const Mpo& A, const TensorTrain& x0, const TensorTrain& b,
                       const SolverConfig& cfg) {
  if (A.order() != x0.order() || A.order() != b.order())
    throw std::invalid_argument("mals_solve: core counts differ");
  Sweeper s(A, x0, b, cfg);
  s.run(SolveMethod::mals);
  return {TensorTrain(std::move(s.x)), std::move(s.diag)};
}

SolveResult solve(const Mpo& A, const TensorTrain& x0, const TensorTrain& b,
                  const SolverConfig& cfg) {
  return cfg.method == SolveMethod::als ? als_solve(A, x0, b, cfg) : mals_solve(A, x0, b, cfg);
}

std::string Diagnostics::to_json() const {
  nlohmann::json j;
  j["sweep_residuals"] = sweep_residuals;
  j["wall_time_s"] = wall_time_s;
  j["max_rank"] = max_rank;
  j["regularized"] = regularized;
  j["max_local_residual"] = max_local_residual;
  j["direct_solves"] = direct_solves;
  j["iterative_solves"] = iterative_solves;
  if (!energies.empty()) j["energies"] = energies;
  return j.dump();
}

}  // namespace qtt
