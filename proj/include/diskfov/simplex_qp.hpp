#pragma once

// min 1/2 mu^T Q mu + l^T mu  subject to  mu >= 0, sum(mu) = 1,
// for a small dense positive semidefinite Q. Primal active-set method in
// the style of Wolfe's nearest-point algorithm: the working set grows by the
// most violated index, and the equality-constrained subproblem on the working
// set is solved directly; negative weights are removed by a ratio test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace diskfov {

struct SimplexQpResult {
  std::vector<double> mu;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

// Dense real solve with partial pivoting; returns false for an exactly
// singular pivot.
inline bool solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n, std::vector<double>& x) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    if (a[piv * n + k] == 0.0) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k * n + j] * x[j];
    x[k] = s / a[k * n + k];
  }
  return true;
}

}  // namespace detail

/// q is row-major m x m. warm (optional) is a feasible starting point whose
/// support seeds the working set.
inline SimplexQpResult simplex_qp(const std::vector<double>& q, const std::vector<double>& l,
                                  const std::vector<double>& warm = {}, int max_iter = 2000) {
  const std::size_t m = l.size();
  if (m == 0) throw ValidationError("simplex_qp: empty problem");
  if (q.size() != m * m) throw ValidationError("simplex_qp: Q has the wrong size");

  double qscale = 0.0;
  for (std::size_t i = 0; i < m; ++i) qscale = std::max(qscale, std::abs(q[i * m + i]));
  double lscale = 0.0;
  for (double v : l) lscale = std::max(lscale, std::abs(v));
  const double scale = std::max({qscale, lscale, 1e-300});
  const double ridge = 1e-13 * std::max(qscale, 1e-300);
  const double opt_tol = 1e-14 * scale;

  auto grad = [&](const std::vector<double>& mu) {
    std::vector<double> g(l);
    for (std::size_t i = 0; i < m; ++i) {
      if (mu[i] == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) g[j] += q[j * m + i] * mu[i];
    }
    return g;
  };

  std::vector<double> mu(m, 0.0);
  std::vector<std::size_t> work;
  if (warm.size() == m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (warm[i] > 0.0) s += warm[i];
    if (s > 0.0)
      for (std::size_t i = 0; i < m; ++i)
        if (warm[i] > 0.0) {
          mu[i] = warm[i] / s;
          work.push_back(i);
        }
  }
  if (work.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (0.5 * q[i * m + i] + l[i] < 0.5 * q[best * m + best] + l[best]) best = i;
    mu[best] = 1.0;
    work.push_back(best);
  }

  SimplexQpResult res;
  std::vector<double> x;
  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
    // Equality-constrained minimizer on the working set:
    //   [Q_W + ridge I, 1; 1^T, 0] [alpha; nu] = [-l_W; 1].
    const std::size_t k = work.size();
    const std::size_t dim = k + 1;
    std::vector<double> a(dim * dim, 0.0), b(dim, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) a[i * dim + j] = q[work[i] * m + work[j]];
      a[i * dim + i] += ridge;
      a[i * dim + k] = 1.0;
      a[k * dim + i] = 1.0;
      b[i] = -l[work[i]];
    }
    b[k] = 1.0;
    if (!detail::solve_dense(a, b, dim, x)) {
      // Drop the smallest weight and retry; a singular system means the
      // working set is affinely dependent.
      auto it_min = std::min_element(work.begin(), work.end(), [&](auto i, auto j) { return mu[i] < mu[j]; });
      mu[*it_min] = 0.0;
      work.erase(it_min);
      continue;
    }

    bool all_positive = true;
    for (std::size_t i = 0; i < k; ++i)
      if (!(x[i] > 0.0)) all_positive = false;

    if (all_positive) {
      for (std::size_t i = 0; i < k; ++i) mu[work[i]] = x[i];
      const auto g = grad(mu);
      double nu = 0.0;
      for (std::size_t i = 0; i < k; ++i) nu += mu[work[i]] * g[work[i]];
      std::size_t enter = m;
      double most = -opt_tol;
      for (std::size_t j = 0; j < m; ++j) {
        if (std::find(work.begin(), work.end(), j) != work.end()) continue;
        if (g[j] - nu < most) {
          most = g[j] - nu;
          enter = j;
        }
      }
      if (enter == m) {
        res.converged = true;
        break;
      }
      work.push_back(enter);
      continue;
    }

    // Move from mu towards x until the first weight reaches zero.
    double step = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double cur = mu[work[i]];
      if (x[i] < cur && x[i] <= 0.0) step = std::min(step, cur / (cur - x[i]));
    }
    for (std::size_t i = 0; i < k; ++i) mu[work[i]] += step * (x[i] - mu[work[i]]);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i) {
      if (mu[work[i]] > 1e-15)
        keep.push_back(work[i]);
      else
        mu[work[i]] = 0.0;
    }
    if (keep.empty()) {
      // Numerical corner: restart from the best vertex.
      std::size_t best = work.front();
      mu.assign(m, 0.0);
      mu[best] = 1.0;
      keep.push_back(best);
    }
    work = std::move(keep);
  }

  double s = 0.0;
  for (double v : mu) s += v;
  for (double& v : mu) v /= s;
  const auto g = grad(mu);
  res.value = 0.0;
  for (std::size_t i = 0; i < m; ++i) res.value += mu[i] * (0.5 * (g[i] - l[i]) + l[i]);
  res.mu = std::move(mu);
  return res;
}

}  // namespace diskfov
