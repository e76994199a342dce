#pragma once

// Support function of the field of values W(X) over the unit circle:
//   h(theta) = lambda_max( Herm(e^{-i theta} X) ) = max { Re(e^{-i theta} z) : z in W(X) }.
// The numerical radius is max_theta h, the inner radius (as used here) is
// min_theta h, and their difference measures how far W(X) is from a disk
// centered at the origin.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace diskfov {

struct SupportSample {
  double theta = 0.0;  // radians in [0, 2 pi)
  cplx w{1.0, 0.0};    // e^{i theta}
  double lambda = 0.0;
  Vector g;            // unit eigenvector of lambda
  double gap = 0.0;    // lambda_max - lambda_2
};

struct RadiusResult {
  double value = 0.0;
  double argmax_theta = 0.0;  // argmin for inner_support
  std::vector<SupportSample> samples;
  bool origin_outside = false;  // inner_support only: min support < 0
};

/// Wrap an angle into [0, 2 pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

/// Herm(e^{-i theta} X), built entrywise.
inline HermitianMatrix rotated_hermitian_part(const Matrix& x, double theta) {
  const cplx w = unit(theta);
  const cplx wc = std::conj(w);
  const std::size_t n = x.n();
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (wc * x(i, j) + w * std::conj(x(j, i)));
  return HermitianMatrix(h);
}

inline SupportSample support(const Matrix& x, double theta) {
  if (!x.is_square()) throw ValidationError("support: matrix is not square");
  theta = wrap_angle(theta);
  auto top = top_eigen(rotated_hermitian_part(x, theta));
  SupportSample s;
  s.theta = theta;
  s.w = unit(theta);
  s.lambda = top.value;
  s.g = std::move(top.vector);
  s.gap = std::max(0.0, top.gap);
  return s;
}

/// Support point g^* X g: the boundary point of W(X) touched by the
/// supporting line with outward normal e^{i theta}.
inline cplx support_point(const Matrix& x, const SupportSample& s) { return dot(s.g, x * s.g); }

/// d/dtheta of lambda_max(Herm(e^{-i theta} X)) at a simple eigenvalue:
/// Im(conj(w) g^* X g). Throws when the eigenvalue is (numerically) multiple.
inline double support_derivative(const Matrix& x, const SupportSample& s, double gap_tol = 1e-10) {
  const double scale = std::max(1.0, frobenius_norm(x));
  if (s.gap <= gap_tol * scale)
    throw NumericalError("support_derivative: eigenvalue is not simple at theta = " + std::to_string(s.theta));
  return (std::conj(s.w) * support_point(x, s)).imag();
}

namespace detail {

enum class Sense { kMax, kMin };

// Golden-section search on [lo, hi] to the given width; keeps the best
// evaluated sample, which is what the caller reports.
inline SupportSample golden_section(const Matrix& x, double lo, double hi, Sense sense, double width) {
  constexpr double inv_phi = 0.6180339887498949;
  auto better = [sense](const SupportSample& a, const SupportSample& b) {
    return sense == Sense::kMax ? a.lambda > b.lambda : a.lambda < b.lambda;
  };
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  SupportSample sc = support(x, c);
  SupportSample sd = support(x, d);
  SupportSample best = better(sd, sc) ? sd : sc;
  while (b - a > width) {
    if (!better(sd, sc)) {
      b = d;
      d = c;
      sd = sc;
      c = b - inv_phi * (b - a);
      sc = support(x, c);
      if (better(sc, best)) best = sc;
    } else {
      a = c;
      c = d;
      sc = sd;
      d = a + inv_phi * (b - a);
      sd = support(x, d);
      if (better(sd, best)) best = sd;
    }
  }
  return best;
}

inline RadiusResult extremize_support(const Matrix& x, int grid, Sense sense, double width = 1e-12) {
  if (!x.is_square() || x.n() == 0) throw ValidationError("numerical radius: matrix must be square and nonempty");
  const int n = static_cast<int>(x.n());
  if (grid < 2 * n + 1)
    throw ValidationError("numerical radius: grid must be at least 2n+1 = " + std::to_string(2 * n + 1));

  const double step = kTwoPi / grid;
  RadiusResult res;
  res.samples.reserve(static_cast<std::size_t>(grid) + 8);
  for (int k = 0; k < grid; ++k) res.samples.push_back(support(x, step * k));

  const double sign = sense == Sense::kMax ? 1.0 : -1.0;
  auto val = [&](int k) { return sign * res.samples[static_cast<std::size_t>((k + grid) % grid)].lambda; };

  // Grid-local extrema. Differences at rounding level do not make a point an
  // extremum; otherwise a flat (disk) support curve would yield one candidate
  // per grid point.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(frobenius_norm(x), 1e-300);
  int best_k = 0;
  for (int k = 1; k < grid; ++k)
    if (val(k) > val(best_k)) best_k = k;
  std::vector<int> cand{best_k};
  for (int k = 0; k < grid; ++k) {
    if (k == best_k) continue;
    const double v = val(k);
    const double l = val(k - 1);
    const double r = val(k + 1);
    if (v >= l && v >= r && v - std::min(l, r) > noise) cand.push_back(k);
  }
  std::sort(cand.begin() + 1, cand.end(), [&](int i, int j) { return val(i) > val(j); });

  const double cos_step = std::cos(step);
  double best = val(best_k);
  for (int k : cand) {
    // For a local maximum of h at theta' with h(theta') = v >= 0 the support
    // point is v e^{i theta'}, so h(theta_k) >= v cos(theta' - theta_k). A
    // candidate that cannot beat the incumbent is skipped.
    if (sense == Sense::kMax && val(k) > 0.0 && best > 0.0 && val(k) < best * cos_step) continue;
    const double center = step * k;
    auto refined = golden_section(x, center - step, center + step, sense, width);
    res.samples.push_back(refined);
    best = std::max(best, sign * refined.lambda);
  }

  std::size_t arg = 0;
  for (std::size_t i = 1; i < res.samples.size(); ++i) {
    const double vi = sign * res.samples[i].lambda;
    const double va = sign * res.samples[arg].lambda;
    if (vi > va || (vi == va && res.samples[i].theta < res.samples[arg].theta)) arg = i;
  }
  res.value = res.samples[arg].lambda;
  res.argmax_theta = res.samples[arg].theta;
  return res;
}

}  // namespace detail

/// r(X) = max over theta of the support function: uniform grid, then
/// golden-section refinement around each grid-local maximum.
inline RadiusResult numerical_radius(const Matrix& x, int grid = 256) {
  return detail::extremize_support(x, grid, detail::Sense::kMax);
}

/// Minimum of the support function over the circle. Equals the inner
/// numerical radius when 0 is in W(X); when the minimum is negative the origin
/// lies outside W(X) and the raw value is returned with origin_outside set.
inline RadiusResult inner_support(const Matrix& x, int grid = 256) {
  auto res = detail::extremize_support(x, grid, detail::Sense::kMin);
  res.origin_outside = res.value < 0.0;
  return res;
}

/// r(X) - min support; zero exactly for disk matrices.
inline double disk_distortion(const Matrix& x, int grid = 256) {
  const double r = numerical_radius(x, grid).value;
  const double m = inner_support(x, grid).value;
  return std::max(0.0, r - m);
}

struct BoundaryPoint {
  double theta = 0.0;
  cplx z;
  double lambda = 0.0;
  double gap = 0.0;
  bool face = false;  // multiple top eigenvalue: z is one point of a boundary segment
};

inline std::vector<BoundaryPoint> fov_boundary(const Matrix& x, int samples, double gap_tol = 1e-10) {
  if (samples < 3) throw ValidationError("fov_boundary: need at least 3 samples");
  const double scale = std::max(1.0, frobenius_norm(x));
  std::vector<BoundaryPoint> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const auto s = support(x, kTwoPi * k / samples);
    pts.push_back({s.theta, support_point(x, s), s.lambda, s.gap, s.gap <= gap_tol * scale});
  }
  return pts;
}

/// CSV with header theta,re,im,lambda,gap and 17 significant digits.
inline void write_boundary_csv(std::ostream& os, const std::vector<BoundaryPoint>& pts) {
  const auto old_prec = os.precision();
  os << "theta,re,im,lambda,gap\n" << std::setprecision(17);
  for (const auto& p : pts)
    os << p.theta << ',' << p.z.real() << ',' << p.z.imag() << ',' << p.lambda << ',' << p.gap << '\n';
  os.precision(old_prec);
}

}  // namespace diskfov
