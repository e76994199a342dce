#pragma once

// Dense complex matrices for small n, a cyclic Jacobi Hermitian eigensolver
// and a one-sided Jacobi SVD. Everything here is sized for n <= 16; no
// attempt is made at cache blocking or vectorization.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace diskfov {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Unit complex number e^{i theta}.
inline cplx unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Dense row-major complex matrix. Square matrices are the common case, but
/// feedback data (B, C, K) and stacked real rows need rectangular shapes.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix zeros(std::size_t n) { return Matrix(n, n); }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const cplx> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw ValidationError("from_rows: ragged row " + std::to_string(i));
      std::size_t j = 0;
      for (const auto& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  /// Column matrix from a vector.
  static Matrix column(std::span<const cplx> v) {
    Matrix m(v.size(), 1);
    std::copy(v.begin(), v.end(), m.data_.begin());
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  /// Order of a square matrix.
  std::size_t n() const { return rows_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  Vector col(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_col(std::size_t j, std::span<const cplx> v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  Matrix transpose() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  Matrix real_part() const {
    Matrix m(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = data_[k].real();
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) { return a *= -1.0; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator/(Matrix a, double s) { return a *= 1.0 / s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ValidationError("matrix product: inner dimensions differ");
    Matrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }

  friend Vector operator*(const Matrix& a, std::span<const cplx> v) {
    if (a.cols_ != v.size()) throw ValidationError("matrix-vector product: dimension mismatch");
    Vector out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      cplx s{};
      for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * v[j];
      out[i] = s;
    }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ValidationError("matrix sum: shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Real inner product <X, Y> = Re trace(X^* Y).
inline double inner(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw ValidationError("inner: shapes differ");
  double s = 0.0;
  auto a = x.data();
  auto b = y.data();
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
  return s;
}

inline double frobenius_norm(const Matrix& x) { return std::sqrt(inner(x, x)); }

inline cplx trace(const Matrix& x) {
  cplx t{};
  for (std::size_t i = 0; i < std::min(x.rows(), x.cols()); ++i) t += x(i, i);
  return t;
}

inline Matrix matrix_power(const Matrix& x, int k) {
  Matrix p = Matrix::identity(x.n());
  for (int i = 0; i < k; ++i) p = p * x;
  return p;
}

/// Outer product u v^*.
inline Matrix outer(std::span<const cplx> u, std::span<const cplx> v) {
  Matrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

/// Hermitian inner product u^* v.
inline cplx dot(std::span<const cplx> u, std::span<const cplx> v) {
  cplx s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

inline double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

/// Multiply by a unimodular scalar so the first component of magnitude above
/// `rel` * ||v|| becomes real and positive.
inline void fix_phase(std::span<cplx> v, double rel = 1e-10) {
  const double nv = norm(v);
  if (nv == 0.0) return;
  for (const auto& z : v) {
    if (std::abs(z) > rel * nv) {
      const cplx ph = std::conj(z) / std::abs(z);
      for (auto& y : v) y *= ph;
      return;
    }
  }
}

/// Hermitian matrix; the constructor symmetrizes so that
/// entries(i,j) == conj(entries(j,i)) holds exactly.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& a) : m_(a.rows(), a.cols()) {
    if (!a.is_square()) throw ValidationError("HermitianMatrix: matrix is not square");
    const std::size_t n = a.n();
    for (std::size_t i = 0; i < n; ++i) {
      m_(i, i) = a(i, i).real();
      for (std::size_t j = i + 1; j < n; ++j) {
        const cplx z = 0.5 * (a(i, j) + std::conj(a(j, i)));
        m_(i, j) = z;
        m_(j, i) = std::conj(z);
      }
    }
  }

  std::size_t n() const { return m_.n(); }
  const Matrix& matrix() const { return m_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Hermitian part (X + X^*)/2.
inline HermitianMatrix hermitian_part(const Matrix& x) { return HermitianMatrix(x); }

struct EigDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k pairs with values[k]
};

namespace detail {

// Unitary 2x2 block [[q00, q01], [q10, q11]] that diagonalizes the Hermitian
// block [[app, apq], [conj(apq), aqq]] via Q^* A Q.
struct Rotation {
  cplx q00, q01, q10, q11;
};

inline Rotation jacobi_rotation(double app, double aqq, cplx apq) {
  const double mag = std::abs(apq);
  const cplx ph = std::conj(apq) / mag;  // e^{-i phi}
  const double zeta = (aqq - app) / (2.0 * mag);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  return {c, s, -s * ph, c * ph};
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for Hermitian matrices. Eigenvalues descending,
/// eigenvectors phase-fixed; exactly equal eigenvalues are ordered by the
/// lexicographic order of their phase-fixed eigenvectors.
inline EigDecomposition eigh(const HermitianMatrix& h, int max_sweeps = 100) {
  const std::size_t n = h.n();
  Matrix a = h.matrix();
  Matrix v = Matrix::identity(n);

  double scale = 0.0;
  for (const auto& z : a.data()) scale += std::norm(z);
  scale = std::sqrt(scale);

  bool converged = n <= 1 || scale == 0.0;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Below rounding relative to both diagonal entries: annihilate.
        if (sweep > 3 && mag <= 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const auto r = detail::jacobi_rotation(app, aqq, apq);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * r.q00 + akq * r.q10;
          a(k, q) = akp * r.q01 + akq * r.q11;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(r.q00) * apk + std::conj(r.q10) * aqk;
          a(q, k) = std::conj(r.q01) * apk + std::conj(r.q11) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * r.q00 + vkq * r.q10;
          v(k, q) = vkp * r.q01 + vkq * r.q11;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) > 1e-14 * scale)
      throw NumericalError("eigh: Jacobi iteration did not converge in " + std::to_string(max_sweeps) +
                           " sweeps");
  }

  std::vector<Vector> cols(n);
  for (std::size_t k = 0; k < n; ++k) {
    cols[k] = v.col(k);
    fix_phase(cols[k]);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto lex_less = [](const Vector& x, const Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].real() != y[i].real()) return x[i].real() < y[i].real();
      if (x[i].imag() != y[i].imag()) return x[i].imag() < y[i].imag();
    }
    return false;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double li = a(i, i).real();
    const double lj = a(j, j).real();
    if (li != lj) return li > lj;
    return lex_less(cols[i], cols[j]);
  });

  EigDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    out.vectors.set_col(k, cols[order[k]]);
  }
  return out;
}

/// Largest eigenvalue, a unit eigenvector and the gap to the second eigenvalue.
struct TopEigen {
  double value = 0.0;
  Vector vector;
  double gap = std::numeric_limits<double>::infinity();
};

inline TopEigen top_eigen(const HermitianMatrix& h) {
  auto e = eigh(h);
  TopEigen t;
  t.value = e.values.front();
  t.vector = e.vectors.col(0);
  if (e.values.size() > 1) t.gap = e.values[0] - e.values[1];
  return t;
}

struct SvdResult {
  std::vector<double> sigma;  // descending, length = cols
  Matrix u;                   // rows x cols, columns with sigma == 0 are zero
  Matrix v;                   // cols x cols, unitary
};

/// One-sided (Hestenes) Jacobi SVD of a rows x cols matrix. Returns a full set
/// of right singular vectors, which is what kernel computations need; small
/// singular values come out with high relative accuracy.
inline SvdResult svd(const Matrix& a, int max_sweeps = 100) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix w = a;
  Matrix v = Matrix::identity(n);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  // Columns reduced to rounding level (squared norm below `tiny`) are left
  // alone; rotating them against a parallel partner never settles.
  double fro2 = 0.0;
  for (const auto& z : w.data()) fro2 += std::norm(z);
  const double tiny = (64.0 * eps) * (64.0 * eps) * fro2;

  bool converged = n <= 1 || fro2 == 0.0;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        cplx gamma{};
        for (std::size_t k = 0; k < m; ++k) {
          alpha += std::norm(w(k, p));
          beta += std::norm(w(k, q));
          gamma += std::conj(w(k, p)) * w(k, q);
        }
        const double mag = std::abs(gamma);
        if (mag == 0.0 || mag <= eps * std::sqrt(alpha * beta) || alpha <= tiny || beta <= tiny) continue;
        rotated = true;
        const auto r = detail::jacobi_rotation(alpha, beta, gamma);
        for (std::size_t k = 0; k < m; ++k) {
          const cplx wp = w(k, p);
          const cplx wq = w(k, q);
          w(k, p) = wp * r.q00 + wq * r.q10;
          w(k, q) = wp * r.q01 + wq * r.q11;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vp = v(k, p);
          const cplx vq = v(k, q);
          v(k, p) = vp * r.q00 + vq * r.q10;
          v(k, q) = vp * r.q01 + vq * r.q11;
        }
      }
    }
    if (!rotated) converged = true;
  }
  if (!converged) throw NumericalError("svd: one-sided Jacobi did not converge");

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += std::norm(w(k, j));
    norms[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

  SvdResult out;
  out.sigma.resize(n);
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = norms[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, j);
    if (norms[j] > 0.0)
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = w(i, j) / norms[j];
  }
  return out;
}

/// Largest singular value.
inline double spectral_norm(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0) return 0.0;
  // Jacobi works on columns; transposing a wide matrix keeps the pair count small.
  const auto s = x.cols() > x.rows() ? svd(x.adjoint()) : svd(x);
  return s.sigma.front();
}

/// Numerical rank: singular values above rel_tol * sigma_max.
inline std::size_t numerical_rank(const Matrix& x, double rel_tol = 1e-8) {
  if (x.rows() == 0 || x.cols() == 0) return 0;
  const auto s = x.cols() > x.rows() ? svd(x.adjoint()) : svd(x);
  const double smax = s.sigma.front();
  if (smax == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(s.sigma.begin(), s.sigma.end(), [&](double sv) { return sv > rel_tol * smax; }));
}

/// Orthonormal basis of {v : ||X v|| <= tol ||X|| ||v||}, from the right
/// singular vectors whose singular value is at most tol * sigma_max.
inline std::vector<Vector> kernel_basis(const Matrix& x, double tol = 1e-8) {
  if (!(tol > 0.0)) throw ValidationError("kernel_basis: tol must be positive");
  const auto s = svd(x);
  const double smax = s.sigma.empty() ? 0.0 : s.sigma.front();
  std::vector<Vector> basis;
  for (std::size_t k = 0; k < s.sigma.size(); ++k) {
    if (smax == 0.0 || s.sigma[k] <= tol * smax) {
      Vector col = s.v.col(k);
      fix_phase(col);
      basis.push_back(std::move(col));
    }
  }
  return basis;
}

/// Smallest singular value of a square or tall matrix.
inline double sigma_min(const Matrix& x) {
  const auto s = svd(x);
  return s.sigma.empty() ? 0.0 : s.sigma.back();
}

/// Stack the real and imaginary parts of all entries into one real row.
inline std::vector<double> real_vectorize(const Matrix& x) {
  std::vector<double> r;
  r.reserve(2 * x.data().size());
  for (const auto& z : x.data()) {
    r.push_back(z.real());
    r.push_back(z.imag());
  }
  return r;
}

/// Matrix whose rows are the given real vectors (stored with zero imaginary part).
inline Matrix rows_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw ValidationError("rows_matrix: ragged rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace diskfov
