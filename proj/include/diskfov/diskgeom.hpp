#pragma once

// Disk matrices: detection, sampled subdifferentials of the numerical radius,
// and certificates that the disk-matrix set is locally a manifold of
// codimension 2n on which r is partly smooth.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "radius.hpp"

namespace diskfov {

/// Offset used for every equispaced angle set in this module; irrational so
/// that samples never line up with the symmetry axes of structured inputs.
inline const double kAngleOffset = 1.0 / std::sqrt(2.0);

inline std::vector<double> equispaced_angles(std::size_t count, double offset = kAngleOffset) {
  std::vector<double> a(count);
  for (std::size_t k = 0; k < count; ++k) a[k] = wrap_angle(offset + kTwoPi * static_cast<double>(k) / count);
  return a;
}

struct DiskCheck {
  bool is_disk = false;
  double max_deviation = 0.0;  // max - min of the sampled support values
  double mean = 0.0;
  double distortion = 0.0;  // dense-grid r - min support
};

/// Support values at 2n+1 equispaced angles must agree; the dense-grid
/// distortion is checked as well since the sparse test is only sufficient
/// near well-behaved disk matrices.
inline DiskCheck is_disk_near(const Matrix& x, double tol = 1e-8) {
  if (!x.is_square()) throw ValidationError("is_disk_near: matrix is not square");
  const std::size_t n = x.n();
  const auto angles = equispaced_angles(2 * n + 1);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (double t : angles) {
    const double l = support(x, t).lambda;
    lo = std::min(lo, l);
    hi = std::max(hi, l);
    sum += l;
  }
  DiskCheck d;
  d.mean = sum / static_cast<double>(angles.size());
  d.max_deviation = hi - lo;
  const double scale = std::max(1.0, std::abs(d.mean));
  d.distortion = disk_distortion(x);
  d.is_disk = d.max_deviation <= tol * scale && d.distortion <= tol * scale;
  return d;
}

struct SubdiffGenerator {
  double theta = 0.0;
  Matrix matrix;  // w g g^*
};

/// Generators w g g^* of the subdifferential of r at a disk matrix, at M
/// equispaced angles. Requires a simple top eigenvalue at every angle.
inline std::vector<SubdiffGenerator> subdiff_sample(const Matrix& x, std::size_t count, double gap_tol = 1e-10) {
  if (count == 0) throw ValidationError("subdiff_sample: need at least one angle");
  const auto check = is_disk_near(x);
  if (!check.is_disk)
    throw ValidationError("subdiff_sample: not a disk matrix (support deviation " +
                          std::to_string(check.max_deviation) + ", distortion " + std::to_string(check.distortion) +
                          ")");
  const double scale = std::max(1.0, check.mean);
  std::vector<SubdiffGenerator> gens;
  gens.reserve(count);
  for (double t : equispaced_angles(count)) {
    const auto s = support(x, t);
    if (s.gap <= gap_tol * scale)
      throw NumericalError("subdiff_sample: top eigenvalue is not simple at theta = " + std::to_string(t));
    gens.push_back({t, s.w * outer(s.g, s.g)});
  }
  return gens;
}

/// Affine dimension of a finite set of matrices (real vector space):
/// rank of the differences to the first element.
inline std::size_t affine_dimension(const std::vector<Matrix>& pts, double tol = 1e-8) {
  if (pts.size() < 2) return 0;
  const auto base = real_vectorize(pts.front());
  std::vector<std::vector<double>> rows;
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, frobenius_norm(p));
  for (std::size_t k = 1; k < pts.size(); ++k) {
    auto r = real_vectorize(pts[k]);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= base[i];
    rows.push_back(std::move(r));
  }
  // Rank relative to the size of the set, so a set collapsed to a point
  // (all differences at rounding level) reports dimension 0.
  const auto m = rows_matrix(rows);
  const auto s = m.cols() > m.rows() ? svd(m.adjoint()) : svd(m);
  return static_cast<std::size_t>(
      std::count_if(s.sigma.begin(), s.sigma.end(), [&](double v) { return v > tol * std::max(scale, 1e-300); }));
}

inline std::size_t subdiff_dimension(const Matrix& x, std::size_t count = 0, double tol = 1e-8) {
  if (count == 0) count = 4 * x.n() + 3;
  const auto gens = subdiff_sample(x, count);
  std::vector<Matrix> mats;
  mats.reserve(gens.size());
  for (const auto& g : gens) mats.push_back(g.matrix);
  return affine_dimension(mats, tol);
}

/// f(w) = (w, w^2, ..., w^n).
inline Vector moment_f(cplx w, std::size_t n) {
  Vector f(n);
  cplx p = w;
  for (std::size_t k = 0; k < n; ++k) {
    f[k] = p;
    p *= w;
  }
  return f;
}

/// F(w) = w f(w) f(w)^*.
inline Matrix moment_F(cplx w, std::size_t n) {
  const auto f = moment_f(w, n);
  return w * outer(f, f);
}

/// {(1, f(w_k))} is linearly independent for any at most 2n+1 distinct
/// points on the circle; this validates that numerically.
inline bool moment_independence_check(const std::vector<double>& angles, std::size_t n, double tol = 1e-10) {
  if (angles.size() > 2 * n + 1)
    throw ValidationError("moment_independence_check: at most 2n+1 = " + std::to_string(2 * n + 1) + " angles");
  std::vector<double> wrapped;
  for (double a : angles) wrapped.push_back(wrap_angle(a));
  for (std::size_t i = 0; i < wrapped.size(); ++i)
    for (std::size_t j = i + 1; j < wrapped.size(); ++j) {
      const double d = std::abs(wrapped[i] - wrapped[j]);
      if (std::min(d, kTwoPi - d) <= 1e-12)
        throw ValidationError("moment_independence_check: duplicate angle " + std::to_string(angles[i]));
    }
  if (angles.empty()) return true;
  std::vector<std::vector<double>> rows;
  for (double a : wrapped) {
    std::vector<double> r{1.0};
    for (const auto& z : moment_f(unit(a), n)) {
      r.push_back(z.real());
      r.push_back(z.imag());
    }
    rows.push_back(std::move(r));
  }
  return numerical_rank(rows_matrix(rows), tol) == angles.size();
}

struct SmoothnessCertificate {
  bool is_disk = false;
  bool simple_on_circle = false;
  bool eigvec_matches_Gf = false;
  std::optional<int> codimension;  // dim of X^perp ∩ span{G F(w) G^*}
  std::optional<int> subdiff_dim;  // affine dimension of sampled generators
  double min_gap = 0.0;            // over the dense grid and the sample angles
  double support_deviation = 0.0;
  double distortion = 0.0;
  double max_eigvec_sine = 0.0;  // worst angle between g(w) and G f(w)
  double g_condition = 0.0;
  int span_rank = 0;        // rank of {G F(w_k) G^*} over the 2n+1 base angles
  int validation_rank = 0;  // same, with the validation angles added
  bool valid = false;
};

namespace detail {

inline Matrix normal_generator(const Matrix& g, double theta, std::size_t n) {
  return g * moment_F(unit(theta), n) * g.adjoint();
}

// Smallest lambda_1 - lambda_2 over the circle: a grid, then golden-section
// refinement around the three lowest local minima (the gap is V-shaped at an
// eigenvalue crossing, so the grid alone can miss it by the grid spacing).
inline double min_support_gap(const Matrix& x, int grid = 256) {
  std::vector<double> gaps(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) gaps[static_cast<std::size_t>(k)] = support(x, kTwoPi * k / grid).gap;
  std::vector<std::pair<double, int>> minima;
  for (int k = 0; k < grid; ++k) {
    const double g = gaps[static_cast<std::size_t>(k)];
    if (g <= gaps[static_cast<std::size_t>((k + grid - 1) % grid)] && g <= gaps[static_cast<std::size_t>((k + 1) % grid)])
      minima.emplace_back(g, k);
  }
  std::sort(minima.begin(), minima.end());
  double best = *std::min_element(gaps.begin(), gaps.end());
  const double step = kTwoPi / grid;
  constexpr double inv_phi = 0.6180339887498949;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, minima.size()); ++i) {
    double a = kTwoPi * minima[i].second / grid - step;
    double b = a + 2.0 * step;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double gc = support(x, c).gap, gd = support(x, d).gap;
    while (b - a > 1e-13) {
      if (gc <= gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - inv_phi * (b - a);
        gc = support(x, c).gap;
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + inv_phi * (b - a);
        gd = support(x, d).gap;
      }
    }
    best = std::min({best, gc, gd});
  }
  return best;
}

inline std::vector<double> validation_angles(std::size_t n, std::size_t count) {
  const std::size_t base = 2 * n + 1;
  if (count <= base) return {};
  const std::size_t extra = count - base;
  return equispaced_angles(extra, kAngleOffset + kPi / static_cast<double>(extra));
}

// {sum_k c_k N_k : sum_k c_k <N_k, X> = 0}, spanned through a basis of the
// real null space of the row (<N_k, X>)_k.
inline std::vector<Matrix> orthogonal_combinations(const std::vector<Matrix>& gens, const Matrix& x) {
  Matrix row(1, gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k) row(0, k) = inner(gens[k], x);
  std::vector<Vector> coeffs;
  if (frobenius_norm(row) == 0.0) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Vector e(gens.size());
      e[k] = 1.0;
      coeffs.push_back(e);
    }
  } else {
    coeffs = kernel_basis(row, 1e-12);
  }
  std::vector<Matrix> out;
  for (const auto& c : coeffs) {
    Matrix m(x.n(), x.n());
    for (std::size_t k = 0; k < gens.size(); ++k) m += gens[k] * c[k].real();
    out.push_back(std::move(m));
  }
  return out;
}

inline std::size_t matrix_set_rank(const std::vector<Matrix>& mats, double tol) {
  std::vector<std::vector<double>> rows;
  for (const auto& m : mats) rows.push_back(real_vectorize(m));
  return numerical_rank(rows_matrix(rows), tol);
}

}  // namespace detail

/// Checks, at sampled angles, that lambda_max(Herm(w^* X)) is constant and
/// simple with eigenvector parallel to G f(w), and computes the codimension
/// dim(X^perp ∩ span{G F(w) G^*}). Valid iff all checks pass and the
/// codimension is 2n.
inline SmoothnessCertificate certify_partial_smoothness(const Matrix& x, const Matrix& g, std::size_t count = 0,
                                                        double tol = 1e-8) {
  if (!x.is_square() || !g.is_square() || g.n() != x.n())
    throw ValidationError("certify_partial_smoothness: X and G must be square of equal size");
  const std::size_t n = x.n();
  if (count == 0) count = 4 * n + 3;
  if (count < 2 * n + 1) throw ValidationError("certify_partial_smoothness: need at least 2n+1 angles");

  SmoothnessCertificate cert;
  {
    const auto s = svd(g);
    const double smax = s.sigma.front();
    const double smin = s.sigma.back();
    cert.g_condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cert.g_condition < 1e12))
      throw NumericalError("certify_partial_smoothness: G is singular (condition number " +
                           std::to_string(cert.g_condition) + ")");
  }

  const auto disk = is_disk_near(x, tol);
  cert.is_disk = disk.is_disk;
  cert.support_deviation = disk.max_deviation;
  cert.distortion = disk.distortion;
  const double scale = std::max(1.0, std::abs(disk.mean));

  const auto base = equispaced_angles(2 * n + 1);
  const auto extra = detail::validation_angles(n, count);
  std::vector<double> all = base;
  all.insert(all.end(), extra.begin(), extra.end());

  double min_gap = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<Matrix> generators;
  for (double t : all) {
    const auto s = support(x, t);
    lo = std::min(lo, s.lambda);
    hi = std::max(hi, s.lambda);
    min_gap = std::min(min_gap, s.gap);
    const auto v = g * moment_f(s.w, n);
    const cplx proj = dot(s.g, v);
    Vector resid(v);
    for (std::size_t i = 0; i < n; ++i) resid[i] -= proj * s.g[i];
    cert.max_eigvec_sine = std::max(cert.max_eigvec_sine, norm(resid) / norm(v));
    generators.push_back(s.w * outer(s.g, s.g));
  }
  min_gap = std::min(min_gap, detail::min_support_gap(x));
  cert.min_gap = min_gap;
  cert.support_deviation = std::max(cert.support_deviation, hi - lo);
  cert.is_disk = cert.is_disk && hi - lo <= tol * scale;
  cert.simple_on_circle = min_gap > tol * scale;
  cert.eigvec_matches_Gf = cert.simple_on_circle && cert.max_eigvec_sine <= tol;

  if (cert.is_disk && cert.simple_on_circle) cert.subdiff_dim = static_cast<int>(affine_dimension(generators, tol));

  if (cert.eigvec_matches_Gf) {
    std::vector<Matrix> base_gens;
    for (double t : base) base_gens.push_back(detail::normal_generator(g, t, n));
    std::vector<Matrix> all_gens = base_gens;
    for (double t : extra) all_gens.push_back(detail::normal_generator(g, t, n));
    cert.span_rank = static_cast<int>(detail::matrix_set_rank(base_gens, tol));
    cert.validation_rank = static_cast<int>(detail::matrix_set_rank(all_gens, tol));
    cert.codimension = static_cast<int>(detail::matrix_set_rank(detail::orthogonal_combinations(base_gens, x), tol));
  }
  cert.valid = cert.is_disk && cert.simple_on_circle && cert.eigvec_matches_Gf && cert.codimension &&
               *cert.codimension == static_cast<int>(2 * n) && cert.validation_rank == cert.span_rank;
  return cert;
}

/// Orthonormal basis (real inner product) of the normal space
/// X^perp ∩ G span{F(w)} G^* at a certified point.
inline std::vector<Matrix> normal_space_basis(const Matrix& x, const Matrix& g, std::size_t count = 0) {
  const std::size_t n = x.n();
  if (count == 0) count = 2 * n + 1;
  const auto cert = certify_partial_smoothness(x, g);
  if (!cert.valid) throw ValidationError("normal_space_basis: partial-smoothness certificate is not valid");
  std::vector<Matrix> gens;
  for (double t : equispaced_angles(count)) gens.push_back(detail::normal_generator(g, t, n));
  auto combos = detail::orthogonal_combinations(gens, x);

  double scale = 0.0;
  for (const auto& c : combos) scale = std::max(scale, frobenius_norm(c));
  std::vector<Matrix> basis;
  for (auto m : combos) {
    // Two Gram-Schmidt passes.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) m -= b * inner(b, m);
    const double nm = frobenius_norm(m);
    if (nm > 1e-10 * scale) basis.push_back(m / nm);
  }
  return basis;
}

}  // namespace diskfov
