#pragma once

// Cutting-plane prox of the numerical radius, proximal-bundle minimization of
// r(A + B K C) over real K, and the seeded Monte-Carlo harness around it.
//
// Every support sample (theta, g) of a matrix yields Y = w g g^*, and
// <Y, Z> <= r(Z) holds for every Z (Y lies in the subdifferential of r at 0).
// Both solvers therefore work with global minorants, and the bundle gap is an
// honest bound on suboptimality.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "radius.hpp"
#include "rng.hpp"
#include "simplex_qp.hpp"

namespace diskfov {

namespace detail {

inline Matrix generator(const SupportSample& s) { return s.w * outer(s.g, s.g); }

// Support samples of x at `count` equispaced angles starting at `offset`.
inline std::vector<SupportSample> sample_circle(const Matrix& x, int count, double offset) {
  std::vector<SupportSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(support(x, offset + kTwoPi * k / count));
  return out;
}

// Radius evaluation that also returns planes: the refined maxima plus every
// `stride`-th grid sample.
struct RadiusPlanes {
  double value = 0.0;
  std::vector<Matrix> generators;
};

inline RadiusPlanes radius_with_planes(const Matrix& x, int grid, int stride) {
  auto res = numerical_radius(x, grid);
  RadiusPlanes out;
  out.value = res.value;
  const auto g = static_cast<std::size_t>(grid);
  for (std::size_t k = 0; k < res.samples.size(); ++k)
    if (k >= g || k % static_cast<std::size_t>(stride) == 0) out.generators.push_back(generator(res.samples[k]));
  return out;
}

}  // namespace detail

struct ProxResult {
  Matrix x;
  double objective = 0.0;  // r(X) + 1/2 ||X - U||^2
  double gap = 0.0;        // objective - model lower bound; ||X - prox(U)|| <= sqrt(2 gap)
  int iterations = 0;
  bool converged = false;
  double stationarity_residual = std::numeric_limits<double>::quiet_NaN();  // filled by the caller if wanted
  std::vector<double> best_objective;  // best objective after each iteration
};

struct ProxOptions {
  // Stop when sqrt(2 gap) <= tol * max(1, ||U||): by strong convexity this
  // bounds the distance from the returned X to prox(U).
  double tol = 1e-7;
  int max_iter = 5000;
  int grid = 64;        // radius grid used inside the iteration
  int bundle_cap = 0;   // 0: 8 n^2
};

/// prox_r(U) = argmin_X r(X) + 1/2 ||X - U||^2.
///
/// Dual of the cutting-plane model: X = U - sum mu_j Y_j over {mu >= 0,
/// sum mu <= 1}, i.e. U minus its projection onto conv({0} ∪ {Y_j}).
/// Strong convexity gives ||X - prox(U)|| <= sqrt(2 gap).
inline ProxResult prox_numerical_radius(const Matrix& u, const ProxOptions& opt = {}) {
  if (!u.is_square()) throw ValidationError("prox: matrix is not square");
  if (!(opt.tol > 0.0)) throw ValidationError("prox: tol must be positive");
  if (opt.max_iter < 1) throw ValidationError("prox: max_iter must be positive");
  const std::size_t n = u.n();
  const int grid = std::max(opt.grid, static_cast<int>(2 * n + 1));
  const std::size_t cap = opt.bundle_cap > 0 ? static_cast<std::size_t>(opt.bundle_cap) : 8 * n * n + 8;
  const double target = opt.tol * std::max(1.0, frobenius_norm(u));

  // Bundle element 0 is the zero generator (r >= 0).
  std::vector<Matrix> gens{Matrix(n, n)};
  std::vector<double> mu;

  auto add_planes = [&](const Matrix& x, int iter) {
    auto rp = detail::radius_with_planes(x, grid, 1);
    // Rotate the sampling offset so that planes accumulate over the whole circle.
    const double offset = kTwoPi * std::fmod(0.6180339887498949 * iter, 1.0) / grid;
    for (auto& s : detail::sample_circle(x, static_cast<int>(2 * n + 2), offset)) gens.push_back(detail::generator(s));
    for (auto& g : rp.generators) gens.push_back(std::move(g));
    return rp.value;
  };

  ProxResult res;
  res.x = u;
  const double r_u = add_planes(u, 0);
  res.objective = r_u;
  double best = r_u;
  Matrix best_x = u;
  // X = 0 is always a candidate.
  if (0.5 * inner(u, u) < best) {
    best = 0.5 * inner(u, u);
    best_x = Matrix(n, n);
  }
  res.gap = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= opt.max_iter; ++it) {
    res.iterations = it;
    const std::size_t m = gens.size();
    std::vector<double> q(m * m), l(m);
    for (std::size_t i = 0; i < m; ++i) {
      l[i] = -inner(gens[i], u);
      for (std::size_t j = i; j < m; ++j) q[i * m + j] = q[j * m + i] = inner(gens[i], gens[j]);
    }
    mu.resize(m, 0.0);
    const auto qp = simplex_qp(q, l, mu);
    mu = qp.mu;

    Matrix agg(n, n);
    for (std::size_t j = 0; j < m; ++j)
      if (mu[j] > 0.0) agg += gens[j] * mu[j];
    const Matrix x = u - agg;
    double model = 0.0;
    for (const auto& g : gens) model = std::max(model, inner(g, x));
    const double half_dist = 0.5 * inner(agg, agg);
    const double lower = model + half_dist;

    const double r_x = add_planes(x, it);
    const double f_x = r_x + half_dist;
    if (f_x < best) {
      best = f_x;
      best_x = x;
    }
    res.best_objective.push_back(best);
    res.gap = std::max(0.0, best - lower);
    if (std::sqrt(2.0 * res.gap) <= target) {
      res.converged = true;
      break;
    }

    // Compression: active planes, the aggregate, and the newest planes.
    if (gens.size() > cap) {
      std::vector<Matrix> kept{Matrix(n, n)};
      std::vector<double> kept_mu{mu[0]};
      for (std::size_t j = 1; j < m; ++j)
        if (mu[j] > 0.0) {
          kept.push_back(gens[j]);
          kept_mu.push_back(mu[j]);
        }
      if (kept.size() > cap / 2) {
        kept.resize(1);
        kept_mu.resize(1);
        Matrix a = agg / std::max(1e-300, 1.0 - mu[0]);
        kept.push_back(a);
        kept_mu.push_back(1.0 - mu[0]);
      }
      for (std::size_t j = m; j < gens.size(); ++j) {
        kept.push_back(gens[j]);
        kept_mu.push_back(0.0);
      }
      gens = std::move(kept);
      mu = std::move(kept_mu);
    }
  }
  res.x = best_x;
  res.objective = best;
  return res;
}

/// Distance from U - X to the convex hull of sampled generators of the
/// subdifferential of r at X: M equispaced angles when X is (numerically) a
/// disk matrix, otherwise the refined maximizing angles only.
inline double prox_certificate(const Matrix& x, const Matrix& u, int count = 64) {
  if (!x.is_square() || !u.is_square() || x.n() != u.n())
    throw ValidationError("prox_certificate: X and U must be square of equal size");
  if (count < 1) throw ValidationError("prox_certificate: need at least one angle");
  const auto rad = numerical_radius(x);
  if (!(rad.value > 0.0)) throw ValidationError("prox_certificate: r(X) must be positive");
  std::vector<Matrix> gens;
  const double flat = rad.value - inner_support(x).value;
  if (flat <= 1e-8 * rad.value) {
    for (const auto& s : detail::sample_circle(x, count, 0.0)) gens.push_back(detail::generator(s));
  } else {
    for (const auto& s : rad.samples)
      if (s.lambda >= rad.value - 1e-9 * rad.value) gens.push_back(detail::generator(s));
  }
  const Matrix v = u - x;
  const std::size_t m = gens.size();
  std::vector<double> q(m * m), l(m);
  for (std::size_t i = 0; i < m; ++i) {
    l[i] = -inner(gens[i], v);
    for (std::size_t j = i; j < m; ++j) q[i * m + j] = q[j * m + i] = inner(gens[i], gens[j]);
  }
  const auto qp = simplex_qp(q, l);
  Matrix p(x.n(), x.n());
  for (std::size_t j = 0; j < m; ++j) p += gens[j] * qp.mu[j];
  return frobenius_norm(v - p);
}

struct SofbProblem {
  Matrix a;  // n x n, real
  Matrix b;  // n x m, real
  Matrix c;  // p x n, real
};

struct SofbResult {
  Matrix k;  // m x p, real
  double r_opt = 0.0;
  double distortion = 0.0;
  bool disk = false;
  double bundle_gap = 0.0;  // predicted decrease at termination (best restart)
  int evaluations = 0;
  int restarts_run = 0;
};

struct SofbOptions {
  int restarts = 5;       // K = 0 plus restarts - 1 random starts
  double tol = 1e-7;      // disk threshold on the final distortion
  double bundle_tol = 1e-11;  // stop when the predicted decrease is below bundle_tol * max(1, f)
  int max_eval = 2000;
  int grid = 64;          // radius grid inside the iteration; the reported r uses 256
  std::uint64_t seed = 0;  // stream for random restarts
};

inline void check_sofb(const SofbProblem& p) {
  const std::size_t n = p.a.rows();
  if (!p.a.is_square() || n == 0) throw ValidationError("sofb: A must be square and nonempty");
  if (p.b.rows() != n || p.b.cols() == 0) throw ValidationError("sofb: B must have n rows");
  if (p.c.cols() != n || p.c.rows() == 0) throw ValidationError("sofb: C must have n columns");
  for (const Matrix* m : {&p.a, &p.b, &p.c})
    for (const auto& z : m->data())
      if (z.imag() != 0.0 || !std::isfinite(z.real())) throw ValidationError("sofb: A, B, C must be real and finite");
}

inline Matrix sofb_closed_loop(const SofbProblem& p, const Matrix& k) { return p.a + p.b * k * p.c; }

/// Gradient of K -> <Y, B K C> over real K: Re(B^T Y C^T) (B, C real).
inline Matrix sofb_slope(const SofbProblem& p, const Matrix& y) { return (p.b.transpose() * y * p.c.transpose()).real_part(); }

namespace detail {

struct BundleRun {
  Matrix k;
  double f = 0.0;
  double gap = 0.0;
  int evaluations = 0;
};

// Proximal bundle from k0: planes f(K) >= a_j + <S_j, K>, center update on
// sufficient decrease, prox weight tau adapted between 1e-8 and 1e8.
inline BundleRun sofb_bundle(const SofbProblem& p, Matrix k0, const SofbOptions& opt) {
  const std::size_t n = p.a.n();
  const std::size_t mp = p.b.cols() * p.c.rows();
  // Keep at least mp + 1 active planes: a kink in mp variables can need that many.
  const std::size_t keep_active = std::max<std::size_t>(4 * n, 2 * mp + 2);
  const std::size_t cap = keep_active + 2 * n + 8;
  std::vector<Matrix> slopes;
  std::vector<double> consts;

  auto evaluate = [&](const Matrix& k) {
    const Matrix x = sofb_closed_loop(p, k);
    auto rp = radius_with_planes(x, opt.grid, std::max(1, opt.grid / static_cast<int>(2 * n + 2)));
    for (const auto& y : rp.generators) {
      slopes.push_back(sofb_slope(p, y));
      consts.push_back(inner(y, p.a));
    }
    return rp.value;
  };

  BundleRun run;
  run.k = k0;
  run.f = evaluate(k0);
  run.evaluations = 1;
  double tau = 1.0;
  std::vector<double> mu;

  while (run.evaluations < opt.max_eval) {
    const std::size_t m = slopes.size();
    std::vector<double> q(m * m), l(m);
    for (std::size_t i = 0; i < m; ++i) {
      l[i] = -(consts[i] + inner(slopes[i], run.k));
      for (std::size_t j = i; j < m; ++j) q[i * m + j] = q[j * m + i] = inner(slopes[i], slopes[j]) / tau;
    }
    mu.resize(m, 0.0);
    mu = simplex_qp(q, l, mu).mu;

    Matrix s_agg(p.b.cols(), p.c.rows());
    double a_agg = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (mu[j] > 0.0) {
        s_agg += slopes[j] * mu[j];
        a_agg += consts[j] * mu[j];
      }
    const Matrix k_new = run.k - s_agg / tau;
    double model = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) model = std::max(model, consts[j] + inner(slopes[j], k_new));
    const double predicted = run.f - model;
    run.gap = predicted;
    if (predicted <= opt.bundle_tol * std::max(1.0, run.f)) break;

    const double f_new = evaluate(k_new);
    ++run.evaluations;
    const double actual = run.f - f_new;
    if (actual >= 0.1 * predicted) {
      run.k = k_new;
      run.f = f_new;
      if (actual >= 0.5 * predicted) tau = std::max(1e-8, tau * 0.5);
    } else {
      tau = std::min(1e8, tau * 2.0);
    }

    // Compression: active planes plus the aggregate, then the newest ones.
    if (slopes.size() > cap) {
      std::vector<Matrix> ks;
      std::vector<double> kc, kmu;
      for (std::size_t j = 0; j < m; ++j)
        if (mu[j] > 1e-14) {
          ks.push_back(slopes[j]);
          kc.push_back(consts[j]);
          kmu.push_back(mu[j]);
        }
      if (ks.size() > keep_active) {
        ks.assign(1, s_agg);
        kc.assign(1, a_agg);
        kmu.assign(1, 1.0);
      }
      for (std::size_t j = m; j < slopes.size(); ++j) {
        ks.push_back(slopes[j]);
        kc.push_back(consts[j]);
        kmu.push_back(0.0);
      }
      slopes = std::move(ks);
      consts = std::move(kc);
      mu = std::move(kmu);
    }
  }
  return run;
}

}  // namespace detail

/// Minimize r(A + B K C) over real m x p matrices K. The objective is convex,
/// so restarts only guard against early termination; the best run is kept.
inline SofbResult sofb_minimize(const SofbProblem& p, const SofbOptions& opt = {}) {
  check_sofb(p);
  if (opt.restarts < 1) throw ValidationError("sofb: restarts must be at least 1");
  if (!(opt.tol > 0.0) || !(opt.bundle_tol > 0.0)) throw ValidationError("sofb: tolerances must be positive");
  const std::size_t m = p.b.cols();
  const std::size_t pp = p.c.rows();
  Rng rng(opt.seed, 0x5EED);
  SofbResult out;
  detail::BundleRun best;
  best.f = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opt.restarts; ++r) {
    const Matrix k0 = r == 0 ? Matrix(m, pp) : rng.real_normal_matrix(m, pp);
    auto run = detail::sofb_bundle(p, k0, opt);
    out.evaluations += run.evaluations;
    if (run.f < best.f) best = std::move(run);
  }
  out.restarts_run = opt.restarts;
  out.k = best.k;
  out.bundle_gap = best.gap;
  const Matrix x = sofb_closed_loop(p, best.k);
  out.r_opt = numerical_radius(x).value;
  out.distortion = disk_distortion(x);
  out.disk = out.distortion < opt.tol;
  return out;
}

struct ExperimentRecord {
  std::uint64_t seed = 0;
  std::size_t n = 0, m = 0, p = 0;
  std::size_t trial = 0;
  double r_opt = 0.0;
  double distortion = 0.0;
  bool disk = false;
};

struct ExperimentSummary {
  std::vector<ExperimentRecord> records;
  double disk_percentage = 0.0;
};

/// Trial t draws A (n x n), B (n x m), C (p x n), in that order and row-major,
/// from Rng(seed, t) standard normals.
inline SofbProblem sofb_random_problem(std::size_t n, std::size_t m, std::size_t p, std::uint64_t seed,
                                       std::uint64_t trial) {
  Rng rng(seed, trial);
  SofbProblem prob;
  prob.a = rng.real_normal_matrix(n, n);
  prob.b = rng.real_normal_matrix(n, m);
  prob.c = rng.real_normal_matrix(p, n);
  return prob;
}

inline ExperimentSummary sofb_experiment(std::size_t n, std::size_t m, std::size_t p, std::size_t trials,
                                         std::uint64_t seed, double threshold = 1e-7, int restarts = 1,
                                         unsigned threads = 0) {
  if (n == 0 || m == 0 || p == 0) throw ValidationError("sofb_experiment: dimensions must be positive");
  if (trials == 0) throw ValidationError("sofb_experiment: trials must be at least 1");
  if (!(threshold > 0.0)) throw ValidationError("sofb_experiment: threshold must be positive");
  ExperimentSummary out;
  out.records.resize(trials);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        SofbOptions opt;
        opt.restarts = restarts;
        opt.tol = threshold;
        opt.seed = Rng::mix(seed ^ Rng::mix(t));
        const auto res = sofb_minimize(sofb_random_problem(n, m, p, seed, t), opt);
        out.records[t] = {seed, n, m, p, t, res.r_opt, res.distortion, res.disk};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::size_t disks = 0;
  for (const auto& r : out.records) disks += r.disk ? 1 : 0;
  out.disk_percentage = 100.0 * static_cast<double>(disks) / static_cast<double>(trials);
  return out;
}

}  // namespace diskfov
