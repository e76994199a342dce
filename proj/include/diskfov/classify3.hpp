#pragma once

// 3x3 disk matrices. A 3x3 disk matrix is unitarily similar to
//   E = [[0, 2a, 2b], [0, 2c, 2d], [0, 0, 0]]
// with c(|a|^2 + |d|^2) = -a d conj(b). The parameters split into classes by
// whether a and d vanish and by comparing 2|c| with |b|:
//   NeNe   a != 0, d != 0                   disk, partly smooth
//   EqLt   a = d = 0 (after folding), 2|c| < |b|   disk
//   EqEq   a = d = 0, 2|c| = |b|            disk
//   EqGt   a = d = 0, 2|c| > |b|            not a disk matrix
//   NotInE no reduction to the form above

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "errors.hpp"
#include "linalg.hpp"

namespace diskfov {

struct Schur3Form {
  Matrix u;  // unitary, U^* X U = E(a, b, c, d) up to residual
  cplx a, b, c, d;
  double residual = 0.0;  // Frobenius norm of the entries of U^* X U that should vanish
};

inline Matrix form3(cplx a, cplx b, cplx c, cplx d) {
  return Matrix::from_rows({{0.0, 2.0 * a, 2.0 * b}, {0.0, 2.0 * c, 2.0 * d}, {0.0, 0.0, 0.0}});
}

namespace detail {

// Unit vector of span(basis) * gamma with gamma minimizing ||m gamma||, i.e.
// the smallest right singular vector of m.
inline Vector smallest_right_vector(const Matrix& m) {
  const auto s = svd(m);
  Vector v = s.v.col(s.v.cols() - 1);
  fix_phase(v);
  return v;
}

inline Matrix basis_matrix(const std::vector<Vector>& basis, std::size_t n) {
  Matrix m(n, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) m.set_col(j, basis[j]);
  return m;
}

}  // namespace detail

/// Reduce a 3x3 matrix to the form E(a, b, c, d): v1 in ker X, v3 in ker X^*
/// with v1 orthogonal to v3, v2 completing the basis. Returns nullopt when
/// no such pair exists.
inline std::optional<Schur3Form> schur_disk_form(const Matrix& x, double tol = 1e-8) {
  if (!x.is_square() || x.n() != 3) throw ValidationError("schur_disk_form: matrix must be 3x3");
  const double nx = frobenius_norm(x);
  if (nx == 0.0) return Schur3Form{Matrix::identity(3), 0.0, 0.0, 0.0, 0.0, 0.0};

  const auto k1 = kernel_basis(x, tol);
  const auto k3 = kernel_basis(x.adjoint(), tol);
  if (k1.empty() || k3.empty()) return std::nullopt;
  const Matrix b1 = detail::basis_matrix(k1, 3);
  const Matrix b3 = detail::basis_matrix(k3, 3);

  // v1 = B1 alpha with B3^* v1 as small as possible, then v3 in ker X^* ∩ v1^perp.
  const Matrix m = b3.adjoint() * b1;
  const Vector alpha = detail::smallest_right_vector(m);
  const Vector v1 = b1 * alpha;
  const Vector mv = m * alpha;  // components of v1 along the basis of ker X^*
  Vector v3;
  if (k3.size() == 1) {
    if (norm(mv) > std::sqrt(tol)) return std::nullopt;
    v3 = k3.front();
  } else {
    // Directions in ker X^* orthogonal to v1; among them the one most
    // orthogonal to all of ker X.
    Matrix row(1, k3.size());
    for (std::size_t j = 0; j < k3.size(); ++j) row(0, j) = std::conj(mv[j]);
    std::vector<Vector> comp;
    if (norm(mv) <= std::numeric_limits<double>::epsilon()) {
      for (std::size_t j = 0; j < k3.size(); ++j) {
        Vector e(k3.size());
        e[j] = 1.0;
        comp.push_back(e);
      }
    } else {
      comp = kernel_basis(row, 1e-12);
    }
    const Matrix p = detail::basis_matrix(comp, k3.size());
    const Vector gamma = detail::smallest_right_vector(b1.adjoint() * b3 * p);
    v3 = b3 * (p * gamma);
    const double n3 = norm(v3);
    for (auto& z : v3) z /= n3;
  }
  // Re-orthogonalize v3 against v1 (removes rounding from the kernel solves).
  {
    const cplx pr = dot(v1, v3);
    for (std::size_t i = 0; i < 3; ++i) v3[i] -= pr * v1[i];
    const double n3 = norm(v3);
    if (n3 < 0.5) return std::nullopt;
    for (auto& z : v3) z /= n3;
  }

  // v2: the standard basis vector with the largest residual after projecting
  // out v1 and v3.
  Vector v2;
  double best = -1.0;
  for (std::size_t e = 0; e < 3; ++e) {
    Vector r(3);
    r[e] = 1.0;
    for (const Vector* q : {&v1, static_cast<const Vector*>(&v3)}) {
      const cplx pr = dot(*q, r);
      for (std::size_t i = 0; i < 3; ++i) r[i] -= pr * (*q)[i];
    }
    const double nr = norm(r);
    if (nr > best + 1e-12) {
      best = nr;
      v2 = r;
    }
  }
  for (auto& z : v2) z /= best;

  Schur3Form f;
  f.u = Matrix(3, 3);
  f.u.set_col(0, v1);
  f.u.set_col(1, v2);
  f.u.set_col(2, v3);
  const Matrix t = f.u.adjoint() * x * f.u;
  f.a = 0.5 * t(0, 1);
  f.b = 0.5 * t(0, 2);
  f.c = 0.5 * t(1, 1);
  f.d = 0.5 * t(1, 2);
  double r2 = 0.0;
  for (std::size_t i = 0; i < 3; ++i) r2 += std::norm(t(i, 0));
  for (std::size_t j = 1; j < 3; ++j) r2 += std::norm(t(2, j));
  f.residual = std::sqrt(r2);
  return f;
}

/// |c(|a|^2 + |d|^2) + a d conj(b)|.
inline double abcd_residual(cplx a, cplx b, cplx c, cplx d) {
  return std::abs(c * (std::norm(a) + std::norm(d)) + a * d * std::conj(b));
}

enum class XiLabel { NeNe, EqLt, EqEq, EqGt, NotInE };

inline std::string to_string(XiLabel l) {
  switch (l) {
    case XiLabel::NeNe: return "NeNe";
    case XiLabel::EqLt: return "EqLt";
    case XiLabel::EqEq: return "EqEq";
    case XiLabel::EqGt: return "EqGt";
    case XiLabel::NotInE: return "NotInE";
  }
  return "NotInE";
}

inline bool is_disk_label(XiLabel l) { return l == XiLabel::NeNe || l == XiLabel::EqLt || l == XiLabel::EqEq; }

struct XiClass {
  XiLabel label = XiLabel::NotInE;
  bool disk = false;
  // Parameters of the (possibly folded) form, in the units of the input.
  cplx a, b, c, d;
  std::optional<Schur3Form> form;
  // Decision quantities, computed on X / ||X||_F.
  double abs_a = std::numeric_limits<double>::quiet_NaN();
  double abs_d = std::numeric_limits<double>::quiet_NaN();
  double two_c_minus_b = std::numeric_limits<double>::quiet_NaN();
  double abcd = std::numeric_limits<double>::quiet_NaN();
  double schur_residual = std::numeric_limits<double>::quiet_NaN();
  bool folded = false;  // exactly one of a, d vanished and the nilpotent form was re-reduced
};

inline XiClass classify(const Matrix& x, double tol = 1e-6) {
  if (!x.is_square() || x.n() != 3) throw ValidationError("classify: matrix must be 3x3");
  XiClass out;
  const double nx = frobenius_norm(x);
  if (nx == 0.0) {
    out.label = XiLabel::EqEq;
    out.disk = true;
    out.abs_a = out.abs_d = out.two_c_minus_b = out.abcd = out.schur_residual = 0.0;
    out.form = Schur3Form{Matrix::identity(3), 0.0, 0.0, 0.0, 0.0, 0.0};
    return out;
  }
  const auto f = schur_disk_form(x / nx);
  if (!f) return out;
  out.form = *f;
  out.form->a *= nx;
  out.form->b *= nx;
  out.form->c *= nx;
  out.form->d *= nx;
  out.form->residual *= nx;
  out.schur_residual = f->residual;

  cplx a = f->a, b = f->b, c = f->c, d = f->d;
  out.abcd = abcd_residual(a, b, c, d);
  out.abs_a = std::abs(a);
  out.abs_d = std::abs(d);
  out.two_c_minus_b = 2.0 * std::abs(c) - std::abs(b);

  if (f->residual > tol || out.abcd > tol) {
    out.label = XiLabel::NotInE;
  } else {
    const bool za = out.abs_a <= tol;
    const bool zd = out.abs_d <= tol;
    if (!za && !zd) {
      out.label = XiLabel::NeNe;
    } else if (za != zd) {
      // With one of a, d zero the condition forces c = 0 and E is nilpotent of
      // rank one, unitarily similar to E(0, b', 0, 0) with |b'| the norm of
      // the surviving row or column.
      out.folded = true;
      const cplx other = za ? d : a;
      b = std::sqrt(std::norm(b) + std::norm(other));
      a = d = c = 0.0;
      out.two_c_minus_b = -std::abs(b);
      out.label = XiLabel::EqLt;
    } else {
      const double m = out.two_c_minus_b;
      out.label = std::abs(m) <= tol ? XiLabel::EqEq : (m < 0.0 ? XiLabel::EqLt : XiLabel::EqGt);
    }
  }
  out.disk = is_disk_label(out.label);
  out.a = a * nx;
  out.b = b * nx;
  out.c = c * nx;
  out.d = d * nx;
  return out;
}

/// sqrt(|a|^2 + |d|^2 + |b|^2), the numerical radius of E(a, b, c, d) for
/// parameters in the disk classes.
inline double disk_radius3(cplx a, cplx b, cplx c, cplx d, double tol = 1e-6) {
  const double s = std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  if (s == 0.0) return 0.0;
  if (abcd_residual(a, b, c, d) > tol * s * s * s)
    throw ValidationError("disk_radius3: parameters violate c(|a|^2+|d|^2) = -a d conj(b)");
  if (std::abs(a) <= tol * s && std::abs(d) <= tol * s && 2.0 * std::abs(c) > std::abs(b) + tol * s)
    throw ValidationError("disk_radius3: 2|c| > |b| with a = d = 0 is not a disk matrix");
  return std::sqrt(std::norm(a) + std::norm(d) + std::norm(b));
}

/// The unit eigenvector of Herm(w^* E) for eigenvalue 1, for normalized
/// parameters |a|^2 + |d|^2 + |b|^2 = 1 and c determined by the condition.
inline Vector eigvec3(cplx a, cplx b, cplx d, cplx w) {
  const double s = std::norm(a) + std::norm(d);
  if (std::abs(s + std::norm(b) - 1.0) > 1e-12)
    throw ValidationError("eigvec3: need |a|^2 + |d|^2 + |b|^2 = 1");
  if (s <= 1e-24) throw ValidationError("eigvec3: a and d are both zero");
  if (std::abs(std::abs(w) - 1.0) > 1e-12) throw ValidationError("eigvec3: |w| must be 1");
  const cplx c = -a * d * std::conj(b) / s;
  const double nb = 1.0 - std::norm(b);
  const double den = std::sqrt(2.0 * nb * (1.0 - 2.0 * (std::conj(w) * c).real()));
  return {(std::conj(w) * a + b * std::conj(d)) / den, nb / den, (std::conj(b) * a + w * std::conj(d)) / den};
}

/// Certificate matrix [[a, b conj(d), 0], [0, 1-|b|^2, 0], [0, a conj(b), conj(d)]]:
/// G f(w) is parallel to eigvec3(a, b, d, w).
inline Matrix three_final_g(cplx a, cplx b, cplx d) {
  return Matrix::from_rows(
      {{a, b * std::conj(d), 0.0}, {0.0, 1.0 - std::norm(b), 0.0}, {0.0, a * std::conj(b), std::conj(d)}});
}

struct Charpoly3 {
  double formula = 0.0;
  double direct = 0.0;
};

/// det(Herm(w^* E) - lambda I) from the closed form and from a cofactor
/// expansion of the assembled matrix.
inline Charpoly3 charpoly3_check(cplx a, cplx b, cplx c, cplx d, cplx w, double lambda) {
  if (std::abs(std::abs(w) - 1.0) > 1e-12) throw ValidationError("charpoly3_check: |w| must be 1");
  const cplx wc = std::conj(w);
  Charpoly3 out;
  out.formula = -lambda * lambda * lambda + 2.0 * lambda * lambda * (wc * c).real() +
                (std::norm(a) + std::norm(d) + std::norm(b)) * lambda +
                2.0 * (wc * (a * d * std::conj(b) - c * std::norm(b))).real();
  Matrix m = hermitian_part(wc * form3(a, b, c, d)).matrix();
  for (std::size_t i = 0; i < 3; ++i) m(i, i) -= lambda;
  const cplx det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  out.direct = det.real();
  return out;
}

}  // namespace diskfov
