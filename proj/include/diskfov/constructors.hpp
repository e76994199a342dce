#pragma once

// Named disk matrices, the superdiagonal family and its normalization, and
// the (sin B) U (cos B) parametrization of unit-disk matrices.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "diskgeom.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "radius.hpp"

namespace diskfov {

/// Matrix with the given first superdiagonal and zeros elsewhere.
inline Matrix superdiagonal(const Vector& a) {
  const std::size_t n = a.size() + 1;
  Matrix x(n, n);
  for (std::size_t j = 0; j < a.size(); ++j) x(j, j + 1) = a[j];
  return x;
}

/// Crabb matrix: superdiagonal (sqrt2, 1, ..., 1, sqrt2).
inline Matrix crabb(std::size_t n) {
  if (n < 3) throw ValidationError("crabb: n must be at least 3");
  Vector a(n - 1, 1.0);
  a.front() = std::sqrt(2.0);
  a.back() = std::sqrt(2.0);
  return superdiagonal(a);
}

inline Matrix jordan2() { return superdiagonal({2.0}); }

inline Matrix jordan3() { return superdiagonal({std::sqrt(2.0), std::sqrt(2.0)}); }

/// E0: single unit entry in position (1,3).
inline Matrix e0() {
  Matrix x(3, 3);
  x(0, 2) = 1.0;
  return x;
}

/// Subgradient of r at crabb(n): superdiagonal (1/(n-1)) (1/sqrt2, 1, ..., 1, 1/sqrt2).
inline Matrix h_subgradient(std::size_t n) {
  if (n < 3) throw ValidationError("h_subgradient: n must be at least 3");
  const double k = 1.0 / static_cast<double>(n - 1);
  Vector a(n - 1, k);
  a.front() = k / std::sqrt(2.0);
  a.back() = k / std::sqrt(2.0);
  return superdiagonal(a);
}

namespace detail {

inline void check_sc(const std::vector<double>& s, const std::vector<double>& c) {
  if (s.size() != c.size()) throw ValidationError("superdiagonal: s and c must have the same length");
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!(s[j] > 0.0 && s[j] < 1.0 && c[j] > 0.0 && c[j] < 1.0))
      throw ValidationError("superdiagonal: s and c must lie in (0, 1) (index " + std::to_string(j + 1) + ")");
    if (std::abs(s[j] * s[j] + c[j] * c[j] - 1.0) > 1e-12)
      throw ValidationError("superdiagonal: s^2 + c^2 != 1 at index " + std::to_string(j + 1));
  }
}

}  // namespace detail

/// Superdiagonal 2 (s0 c1, s1 c2, ..., s_{n-2} c_{n-1}) with s0 = 1 = c_{n-1};
/// s and c hold s_1..s_{n-2} and c_1..c_{n-2}.
inline Matrix superdiag_from_sc(const std::vector<double>& s, const std::vector<double>& c) {
  detail::check_sc(s, c);
  const std::size_t m = s.size();  // n - 2
  Vector a(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double sprev = j == 0 ? 1.0 : s[j - 1];
    const double cj = j == m ? 1.0 : c[j];
    a[j] = 2.0 * sprev * cj;
  }
  return superdiagonal(a);
}

/// Diagonal G with g1 = 1 and g_{j+1} = (s_{j-1} / c_j) g_j, the certificate
/// matrix for superdiag_from_sc(s, c).
inline Matrix superdiag_certificate_g(const std::vector<double>& s, const std::vector<double>& c) {
  detail::check_sc(s, c);
  const std::size_t m = s.size();
  Vector g(m + 2);
  g[0] = 1.0;
  for (std::size_t j = 0; j <= m; ++j) {
    const double sprev = j == 0 ? 1.0 : s[j - 1];
    const double cj = j == m ? 1.0 : c[j];
    g[j + 1] = g[j] * (sprev / cj);
  }
  return Matrix::diagonal(g);
}

struct SuperdiagNormalization {
  std::vector<double> s;  // s_1..s_{n-2}
  std::vector<double> c;  // c_1..c_{n-2}
  double scale = 0.0;
  Vector phases;  // D = diag(phases): D^* A D = scale * superdiag_from_sc(s, c)
  double t = 0.0;  // root of h_{n-1}(t) = 1
};

/// Values h_1(t), ..., h_k(t) of h_1 = b_1 t, h_{j+1} = b_{j+1} t / (1 - h_j).
/// Returns false when some h_j with j < k leaves (0, 1), i.e. t is beyond the
/// domain of h_k.
inline bool h_recursion(const std::vector<double>& b, double t, std::vector<double>& h) {
  h.assign(b.size(), 0.0);
  for (std::size_t j = 0; j < b.size(); ++j) {
    h[j] = j == 0 ? b[0] * t : b[j] * t / (1.0 - h[j - 1]);
    if (j + 1 < b.size() && !(h[j] < 1.0)) return false;
  }
  return true;
}

inline SuperdiagNormalization superdiag_normalize(const Vector& a) {
  if (a.empty()) throw ValidationError("superdiag_normalize: need at least one superdiagonal entry");
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] == cplx{}) throw ValidationError("superdiag_normalize: entry " + std::to_string(j + 1) + " is zero");

  SuperdiagNormalization out;
  out.phases.resize(a.size() + 1);
  out.phases[0] = 1.0;
  for (std::size_t j = 0; j < a.size(); ++j) out.phases[j + 1] = out.phases[j] * (std::abs(a[j]) / a[j]);

  if (a.size() == 1) {
    out.scale = std::abs(a[0]) / 2.0;
    out.t = 1.0 / std::norm(a[0]);
    return out;
  }

  std::vector<double> b(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) b[j] = std::norm(a[j]);

  // h_{n-1} increases from 0 to infinity on its domain, which ends before 1/b_1.
  std::vector<double> h;
  double lo = 0.0;
  double hi = 1.0 / b[0];
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (h_recursion(b, mid, h) && h.back() < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  // Of the two bracketing floats keep the one whose residual is smaller.
  std::vector<double> hh;
  const bool hi_ok = h_recursion(b, hi, hh);
  h_recursion(b, lo, h);
  const double t = hi_ok && std::abs(hh.back() - 1.0) < std::abs(h.back() - 1.0) ? hi : lo;
  if (!h_recursion(b, t, h) || std::abs(h.back() - 1.0) > 1e-8)
    throw NumericalError("superdiag_normalize: bisection failed to bracket the root");
  out.t = t;
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    out.c.push_back(std::sqrt(h[j]));
    out.s.push_back(std::sqrt(1.0 - h[j]));
  }
  out.scale = 1.0 / (2.0 * std::sqrt(t));
  return out;
}

struct CrouzeixParams {
  std::vector<double> theta;  // diagonal of B, each in [0, pi/2]
  Matrix u;                   // unitary
};

struct CrouzeixBuild {
  Matrix x;
  bool pencil_valid = false;
  double max_sigma_min = 0.0;  // max over the grid of sigma_min(U cos B - w sin B)
  bool disk_verified = false;  // only meaningful when pencil_valid
};

namespace detail {

inline void check_crouzeix(const CrouzeixParams& p) {
  const std::size_t n = p.theta.size();
  if (n == 0 || !p.u.is_square() || p.u.n() != n)
    throw ValidationError("crouzeix: U must be square with one row per entry of theta");
  for (double t : p.theta)
    if (!(t >= 0.0 && t <= kPi / 2.0)) throw ValidationError("crouzeix: theta entries must lie in [0, pi/2]");
  if (frobenius_norm(p.u.adjoint() * p.u - Matrix::identity(n)) > 1e-10)
    throw ValidationError("crouzeix: U is not unitary");
}

inline Matrix pencil(const CrouzeixParams& p, cplx w) {
  const std::size_t n = p.theta.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = p.u(i, j) * std::cos(p.theta[j]);
  for (std::size_t i = 0; i < n; ++i) m(i, i) -= w * std::sin(p.theta[i]);
  return m;
}

inline Matrix crouzeix_matrix(const CrouzeixParams& p) {
  const std::size_t n = p.theta.size();
  Matrix x(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = 2.0 * std::sin(p.theta[i]) * p.u(i, j) * std::cos(p.theta[j]);
  return x;
}

}  // namespace detail

/// X = 2 (sin B) U (cos B) for B = diag(theta); the pencil U cos B - w sin B is
/// checked for singularity on a grid of the unit circle.
inline CrouzeixBuild crouzeix_build(const CrouzeixParams& p, int grid = 64) {
  detail::check_crouzeix(p);
  if (grid < 1) throw ValidationError("crouzeix_build: grid must be positive");
  CrouzeixBuild out;
  out.x = detail::crouzeix_matrix(p);
  for (double t : equispaced_angles(static_cast<std::size_t>(grid)))
    out.max_sigma_min = std::max(out.max_sigma_min, sigma_min(detail::pencil(p, unit(t))));
  out.pencil_valid = out.max_sigma_min <= 1e-8;
  if (out.pencil_valid) {
    const double r = numerical_radius(out.x).value;
    out.disk_verified = r > 0.0 && is_disk_near(out.x / r).is_disk;
  }
  return out;
}

/// General Hermitian B: B = Q diag(theta) Q^* gives 2 sin(B) U cos(B) =
/// Q [2 diag(sin theta) (Q^* U Q) diag(cos theta)] Q^*. Returns the reduced
/// parameters and Q.
inline std::pair<CrouzeixParams, Matrix> crouzeix_reduce(const HermitianMatrix& b, const Matrix& u) {
  const auto e = eigh(b);
  CrouzeixParams p{e.values, e.vectors.adjoint() * u * e.vectors};
  detail::check_crouzeix(p);
  return {p, e.vectors};
}

inline CrouzeixBuild crouzeix_build(const HermitianMatrix& b, const Matrix& u, int grid = 64) {
  const auto [p, q] = crouzeix_reduce(b, u);
  auto out = crouzeix_build(p, grid);
  out.x = q * out.x * q.adjoint();
  return out;
}

/// U = [[0,1],[1,0]], B = diag(pi/2, 0): rebuilds jordan2().
inline CrouzeixParams crouzeix_params_2x2() {
  return {{kPi / 2.0, 0.0}, Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}})};
}

/// Block parameters B = diag(pi/2, theta_1, ..., theta_{n-2}, 0) and the cyclic
/// permutation U = [[0, e1^T, 0], [0, J, e_{n-2}], [1, 0, 0]]; rebuilds the
/// superdiagonal matrix with s_j = sin theta_j, c_j = cos theta_j.
inline CrouzeixParams crouzeix_params_superdiag(const std::vector<double>& interior) {
  const std::size_t n = interior.size() + 2;
  for (double t : interior)
    if (!(t > 0.0 && t < kPi / 2.0)) throw ValidationError("crouzeix_params_superdiag: angles must lie in (0, pi/2)");
  CrouzeixParams p;
  p.theta.push_back(kPi / 2.0);
  p.theta.insert(p.theta.end(), interior.begin(), interior.end());
  p.theta.push_back(0.0);
  p.u = Matrix(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) p.u(i, i + 1) = 1.0;
  p.u(n - 1, 0) = 1.0;
  return p;
}

/// For v in ker(U cos B - w sin B): ||Herm(w^* X) v - v|| / ||v|| with X scaled
/// to unit numerical radius.
inline double null_eigvec_crosscheck(const CrouzeixParams& p, cplx w) {
  detail::check_crouzeix(p);
  if (std::abs(std::abs(w) - 1.0) > 1e-12) throw ValidationError("null_eigvec_crosscheck: |w| must be 1");
  const auto kern = kernel_basis(detail::pencil(p, w), 1e-8);
  if (kern.empty()) throw NumericalError("null_eigvec_crosscheck: pencil is nonsingular at this w");
  Matrix x = detail::crouzeix_matrix(p);
  const double r = numerical_radius(x).value;
  if (!(r > 0.0)) throw NumericalError("null_eigvec_crosscheck: X is zero");
  x = x / r;
  const auto h = rotated_hermitian_part(x, std::arg(w));
  const auto& v = kern.front();
  auto hv = h.matrix() * v;
  for (std::size_t i = 0; i < hv.size(); ++i) hv[i] -= v[i];
  return norm(hv) / norm(v);
}

/// Y(xi) = [[0,0,2],[0,xi,0],[0,0,0]], |xi| <= 1.
inline Matrix y_family(cplx xi) {
  if (!(std::abs(xi) <= 1.0 + 1e-15)) throw ValidationError("y_family: |xi| must be at most 1");
  Matrix x(3, 3);
  x(0, 2) = 2.0;
  x(1, 1) = xi;
  return x;
}

/// Z(phi, psi) = e^{i psi} [[0, sqrt2 cos phi, 2 sin phi], [0, -sin phi, sqrt2 cos phi], [0,0,0]].
inline Matrix z_family(double phi, double psi) {
  if (!(phi >= 0.0 && phi <= kPi / 2.0)) throw ValidationError("z_family: phi must lie in [0, pi/2]");
  if (!std::isfinite(psi)) throw ValidationError("z_family: psi must be finite");
  const double r2 = std::sqrt(2.0);
  Matrix x(3, 3);
  x(0, 1) = r2 * std::cos(phi);
  x(0, 2) = 2.0 * std::sin(phi);
  x(1, 1) = -std::sin(phi);
  x(1, 2) = r2 * std::cos(phi);
  return unit(psi) * x;
}

/// r(X)^{k} / ||X^{k}||_2 with k = n - 1 (n defaults to the order of X).
inline double crouzeix_ratio(const Matrix& x, std::size_t n = 0) {
  if (!x.is_square()) throw ValidationError("crouzeix_ratio: matrix is not square");
  if (n == 0) n = x.n();
  const int k = static_cast<int>(n) - 1;
  const double p = spectral_norm(matrix_power(x, k));
  const double scale = std::pow(std::max(frobenius_norm(x), 1e-300), k);
  if (!(p > 1e-14 * scale)) throw NumericalError("crouzeix_ratio: X^(n-1) vanishes");
  return std::pow(numerical_radius(x).value, k) / p;
}

}  // namespace diskfov
