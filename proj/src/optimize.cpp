#include "mubforge/optimize.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/SVD>

namespace mubforge {

namespace {

using Eigen::VectorXd;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d649bb133111ebULL;
  return z ^ (z >> 31);
}

// Objective workspace: F' = (f-d)^2 + (g-d)^2 and its gradient, with the
// Gram matrix and its powers reused between value and gradient.
class Objective {
 public:
  explicit Objective(int d)
      : d_(d),
        table_(d),
        n_(num_states(d)),
        g_(Matrix::Zero(n_, n_)),
        diag_(1.0 / (d + 1)),
        mod_(1.0 / ((d + 1) * std::sqrt(static_cast<double>(d)))) {
    for (int a = 0; a < n_; ++a) g_(a, a) = diag_;
  }

  long size() const { return table_.size(); }

  double value(const VectorXd& x) {
    fill(x);
    g2_ = g_ * g_;
    const double f = g2_.cwiseProduct(g_.transpose()).sum().real();
    const double g = g2_.squaredNorm();
    f_ = f;
    gg_ = g;
    return (f - d_) * (f - d_) + (g - d_) * (g - d_);
  }

  double value_and_grad(const VectorXd& x, VectorXd& grad) {
    const double val = value(x);
    g3_ = g2_ * g_;
    grad.resize(size());
    for (long k = 0; k < size(); ++k) {
      const auto [a, b] = table_.pair(k);
      const double df = -6.0 * (g_(a, b) * g2_(b, a)).imag();
      const double dg = -8.0 * (g_(a, b) * g3_(b, a)).imag();
      grad[k] = 2.0 * (f_ - d_) * df + 2.0 * (gg_ - d_) * dg;
    }
    return val;
  }

  double last_f() const { return f_; }
  double last_g() const { return gg_; }

 private:
  void fill(const VectorXd& x) {
    for (long k = 0; k < size(); ++k) {
      const auto [a, b] = table_.pair(k);
      const cplx e = std::polar(mod_, x[k]);
      g_(a, b) = e;
      g_(b, a) = std::conj(e);
    }
  }

  int d_;
  PairTable table_;
  int n_;
  Matrix g_, g2_, g3_;
  double diag_, mod_;
  double f_ = 0.0, gg_ = 0.0;
};

struct LineSearchResult {
  double alpha = 0.0;
  double value = 0.0;
  bool ok = false;
};

// Strong Wolfe line search (bracket + zoom with bisection). phi(a) is the
// objective along x + a*p; dphi its directional derivative.
LineSearchResult wolfe_search(Objective& obj, const VectorXd& x,
                              const VectorXd& p, double f0, double d0,
                              double c1, double c2, double alpha_init) {
  LineSearchResult out;
  if (d0 >= 0.0) return out;  // not a descent direction

  VectorXd xt, gt;
  const auto eval = [&](double a, double& val, double& slope) {
    xt = x + a * p;
    val = obj.value_and_grad(xt, gt);
    slope = gt.dot(p);
  };

  const int max_iters = 30;
  double a_prev = 0.0, f_prev = f0, d_prev = d0;
  double a = alpha_init;
  double a_lo = 0.0, a_hi = 0.0, f_lo = f0, d_lo = d0;
  bool bracketed = false;

  for (int i = 0; i < max_iters && !bracketed; ++i) {
    double fa, da;
    eval(a, fa, da);
    if (fa > f0 + c1 * a * d0 || (i > 0 && fa >= f_prev)) {
      a_lo = a_prev; f_lo = f_prev; d_lo = d_prev;
      a_hi = a;
      bracketed = true;
      break;
    }
    if (std::abs(da) <= -c2 * d0) {
      out = {a, fa, true};
      return out;
    }
    if (da >= 0.0) {
      a_lo = a; f_lo = fa; d_lo = da;
      a_hi = a_prev;
      bracketed = true;
      break;
    }
    a_prev = a; f_prev = fa; d_prev = da;
    a *= 2.5;
    if (a > 1e6) break;
  }
  if (!bracketed) return out;

  for (int i = 0; i < max_iters; ++i) {
    const double am = 0.5 * (a_lo + a_hi);
    double fm, dm;
    eval(am, fm, dm);
    if (fm > f0 + c1 * am * d0 || fm >= f_lo) {
      a_hi = am;
    } else {
      if (std::abs(dm) <= -c2 * d0) {
        out = {am, fm, true};
        return out;
      }
      if (dm * (a_hi - a_lo) >= 0.0) a_hi = a_lo;
      a_lo = am; f_lo = fm; d_lo = dm;
    }
    if (std::abs(a_hi - a_lo) < 1e-16 * std::max(1.0, std::abs(a_lo))) break;
  }
  // Fall back to the best sufficient-decrease point found, if any.
  if (f_lo < f0 && a_lo > 0.0) out = {a_lo, f_lo, true};
  return out;
}

SearchResult run_single(const SearchConfig& config, int restart_index) {
  const auto t0 = std::chrono::steady_clock::now();
  SearchResult res;
  res.restart_index = restart_index;

  auto rng = make_rng(config.seed, static_cast<std::uint64_t>(restart_index));

  Objective obj(config.d);
  const long p_dim = obj.size();
  VectorXd x(p_dim), grad(p_dim);
  double val = 0.0;

  // A restart gets a second fresh start when the first descent lands in a
  // spurious basin (the landscape has a handful of high-lying local minima
  // that trap a sizable fraction of random initializations).
  for (int attempt = 0; attempt < 2; ++attempt) {
  PhaseVector start = random_init(config.d, rng);
  x = Eigen::Map<const VectorXd>(start.phases.data(), p_dim);
  val = obj.value_and_grad(x, grad);
  res.line_search_failed = false;

  // Stage 1: Polak-Ribiere+ conjugate gradient, c2 = 0.1.
  VectorXd dir = -grad;
  for (int it = 0; it < config.stage1_iters; ++it) {
    if (grad.norm() < 1e-8) break;
    double d0 = dir.dot(grad);
    if (d0 >= 0.0) {
      dir = -grad;
      d0 = dir.dot(grad);
    }
    const double a0 = it == 0 ? 1.0 / std::max(1.0, grad.norm()) : 1.0;
    auto ls = wolfe_search(obj, x, dir, val, d0, 1e-4, 0.1, a0);
    if (!ls.ok) {
      dir = -grad;
      ls = wolfe_search(obj, x, dir, val, dir.dot(grad), 1e-4, 0.1, a0);
      if (!ls.ok) {
        res.line_search_failed = true;
        break;
      }
    }
    x += ls.alpha * dir;
    VectorXd grad_new(p_dim);
    val = obj.value_and_grad(x, grad_new);
    const double beta =
        std::max(0.0, grad_new.dot(grad_new - grad) / grad.squaredNorm());
    dir = -grad_new + beta * dir;
    grad = grad_new;
    ++res.iters_stage1;
  }

  // Stage 2: BFGS on the inverse Hessian approximation, c2 = 0.9.
  const double thr_sq =
      config.accept_threshold * config.accept_threshold;
  RealMatrix hinv = RealMatrix::Identity(p_dim, p_dim);
  for (int it = 0; it < config.stage2_iters; ++it) {
    if (val < thr_sq || grad.norm() < 1e-14) break;
    VectorXd pdir = -(hinv * grad);
    double d0 = pdir.dot(grad);
    if (d0 >= 0.0) {
      hinv.setIdentity();
      pdir = -grad;
      d0 = pdir.dot(grad);
    }
    auto ls = wolfe_search(obj, x, pdir, val, d0, 1e-4, 0.9, 1.0);
    if (!ls.ok) {
      // Retry as steepest descent with a fresh curvature model.
      hinv.setIdentity();
      pdir = -grad;
      d0 = pdir.dot(grad);
      ls = wolfe_search(obj, x, pdir, val, d0, 1e-4, 0.9,
                        1.0 / std::max(1.0, grad.norm()));
      if (!ls.ok) {
        res.line_search_failed = true;
        break;
      }
    }
    const VectorXd s = ls.alpha * pdir;
    x += s;
    VectorXd grad_new(p_dim);
    val = obj.value_and_grad(x, grad_new);
    const VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const VectorXd hy = hinv * y;
      const double yhy = y.dot(hy);
      // BFGS inverse update (Sherman-Morrison form).
      hinv.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
      hinv.noalias() -= rho * (hy * s.transpose() + s * hy.transpose());
    }
    grad = grad_new;
    ++res.iters_stage2;
  }

  if (val < 1e-12) break;  // close enough for the polish basin
  }

  res.phi.d = config.d;
  res.phi.phases.assign(x.data(), x.data() + p_dim);
  res.F_final = std::sqrt(std::max(0.0, val));

  if (config.polish && res.F_final < 1e-6) {
    try {
      res.phi = polish(res.phi, config.accept_threshold * 0.1);
      res.F_final = objective(res.phi).F;
    } catch (const PolishDiverged&) {
      // keep the unpolished state
    }
  }
  res.phi.canonicalize();

  res.accepted = res.F_final < config.accept_threshold &&
                 eigenvalue_sufficiency_check(build_gram(res.phi));
  res.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

}  // namespace

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

PhaseVector random_init(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  PhaseVector phi{d, std::vector<double>(num_phases(d))};
  for (double& p : phi.phases) p = u(rng);
  return phi;
}

SearchResult minimize(const SearchConfig& config) {
  return run_single(config, 0);
}

SearchResult search_restart(const SearchConfig& config, int restart_index) {
  return run_single(config, restart_index);
}

PhaseVector polish(const PhaseVector& phi, double target) {
  const int d = phi.d;
  const long p_dim = num_phases(d);
  const int n = num_states(d);
  const double floor = std::max(target, 5e-15);

  PhaseVector cur = phi;
  std::vector<double> df, dg;
  double prev_f = std::numeric_limits<double>::infinity();
  int rising = 0;

  // Stage 1: Gauss-Newton on the two trace residuals, down to ~1e-12.
  for (int it = 0; it < 50; ++it) {
    const ConstraintValue v = objective(cur);
    if (v.F <= std::max(floor, 1e-12)) break;
    if (v.F > prev_f) {
      if (++rising == 3) {
        throw PolishDiverged("polish: F increased across 3 Newton steps");
      }
    } else {
      rising = 0;
    }
    prev_f = v.F;

    trace_gradients(cur, df, dg);
    Eigen::MatrixXd jac(2, p_dim);
    jac.row(0) = Eigen::Map<const Eigen::VectorXd>(df.data(), p_dim);
    jac.row(1) = Eigen::Map<const Eigen::VectorXd>(dg.data(), p_dim);
    Eigen::Vector2d resid(v.f - d, v.g - d);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    if (svd.rank() == 0) {
      throw PolishDiverged("polish: vanishing constraint Jacobian");
    }
    const Eigen::VectorXd step = -svd.solve(resid);
    for (long k = 0; k < p_dim; ++k) cur.phases[k] += step[k];
  }

  // Stage 2: alternating projection between the fixed-modulus phase manifold
  // and the rank-d projectors. The trace residuals only see the eigenvalue
  // deviations at cubic order, so Newton alone leaves them at ~sqrt(F);
  // projecting onto the nearest projector and re-reading the phases
  // converges linearly to the exact solution and removes that gap.
  PairTable table(d);
  PhaseVector best = cur;
  double best_score = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 80; ++it) {
    const GramMatrix g = build_gram(cur);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.m);
    const ConstraintValue v = objective(cur);
    double eig_dev = 0.0;
    for (int i = 0; i < n; ++i) {
      const double lam = es.eigenvalues()[i];
      eig_dev = std::max(eig_dev,
                         std::min(std::abs(lam), std::abs(lam - 1.0)));
    }
    const double score = std::max(v.F, eig_dev);
    if (score < best_score) {
      best_score = score;
      best = cur;
    }
    if (score <= std::max(floor, 1e-14)) break;

    Matrix proj = Matrix::Zero(n, n);
    for (int i = n - d; i < n; ++i) {
      proj.noalias() +=
          es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    for (long k = 0; k < p_dim; ++k) {
      const auto [a, b] = table.pair(k);
      cur.phases[k] = std::arg(proj(a, b));
    }
  }

  if (objective(best).F > 10.0 * floor) {
    throw PolishDiverged("polish: no convergence within iteration budget");
  }
  best.canonicalize();
  return best;
}

std::pair<std::vector<SearchResult>, BatchSummary> batch_search(
    const SearchConfig& config, int count, int threads) {
  std::vector<SearchResult> results(count);
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, std::max(1, count));

  std::atomic<int> next{0};
  const auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= count) return;
      results[r] = run_single(config, r);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BatchSummary summary;
  summary.count = count;
  summary.min_F = std::numeric_limits<double>::infinity();
  double total_time = 0.0;
  for (const auto& r : results) {
    summary.accepted += r.accepted ? 1 : 0;
    summary.min_F = std::min(summary.min_F, r.F_final);
    total_time += r.wall_time;
  }
  summary.success_rate = count > 0 ? double(summary.accepted) / count : 0.0;
  summary.mean_seconds = count > 0 ? total_time / count : 0.0;
  return {std::move(results), summary};
}

}  // namespace mubforge
