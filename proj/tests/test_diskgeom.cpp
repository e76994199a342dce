#include <gtest/gtest.h>

#include <cmath>

#include <diskfov/classify3.hpp>
#include <diskfov/constructors.hpp>
#include <diskfov/diskgeom.hpp>
#include <diskfov/rng.hpp>

#include "test_support.hpp"

using namespace diskfov;

TEST(IsDiskNear, Examples) {
  const auto k = is_disk_near(crabb(5));
  EXPECT_TRUE(k.is_disk);
  EXPECT_LE(k.max_deviation, 1e-12);
  Matrix x = jordan2();
  x(0, 0) += 0.1;
  EXPECT_FALSE(is_disk_near(x).is_disk);
  EXPECT_TRUE(is_disk_near(Matrix::zeros(3)).is_disk);
  EXPECT_FALSE(is_disk_near(Matrix::identity(2)).is_disk);
}

TEST(SubdiffSample, JordanTwo) {
  const auto gens = subdiff_sample(jordan2(), 5);
  ASSERT_EQ(gens.size(), 5u);
  for (const auto& g : gens) {
    const cplx w = unit(g.theta);
    const Matrix expect = 0.5 * Matrix::from_rows({{w, 1.0}, {w * w, w}});
    EXPECT_LE(frobenius_norm(g.matrix - expect), 1e-12);
  }
}

TEST(SubdiffSample, JordanThree) {
  // (1/4) [[w, sqrt2, conj(w)], [sqrt2 w^2, 2w, sqrt2], [w^3, sqrt2 w^2, w]]
  const double r2 = std::sqrt(2.0);
  for (const auto& g : subdiff_sample(jordan3(), 7)) {
    const cplx w = unit(g.theta);
    const Matrix expect =
        0.25 * Matrix::from_rows({{w, r2, std::conj(w)}, {r2 * w * w, 2.0 * w, r2}, {w * w * w, r2 * w * w, w}});
    EXPECT_LE(frobenius_norm(g.matrix - expect), 1e-12);
  }
}

TEST(SubdiffSample, TwoEZero) {
  for (const auto& g : subdiff_sample(2.0 * e0(), 6)) {
    const cplx w = unit(g.theta);
    const Matrix expect = 0.5 * Matrix::from_rows({{w, 0.0, 1.0}, {0.0, 0.0, 0.0}, {w * w, 0.0, w}});
    EXPECT_LE(frobenius_norm(g.matrix - expect), 1e-12);
  }
}

TEST(SubdiffSample, RefusesNonDiskAndNonsimple) {
  EXPECT_THROW(subdiff_sample(Matrix::identity(2), 5), ValidationError);
  // EqEq: 2c lies on the boundary circle, so the top eigenvalue is double at arg(c).
  EXPECT_THROW(subdiff_sample(form3(0.0, 1.0, 0.5 * unit(kAngleOffset), 0.0), 7), NumericalError);
}

TEST(SubdiffSample, GeneratorProperties) {
  Rng rng(201);
  const Matrix x = crabb(4);
  const double r = numerical_radius(x).value;
  for (const auto& g : subdiff_sample(x, 19)) {
    EXPECT_NEAR(std::abs(trace(g.matrix)), 1.0, 1e-12);
    EXPECT_EQ(numerical_rank(g.matrix), 1u);
    EXPECT_NEAR(inner(g.matrix, x), r, 1e-9);
    for (int k = 0; k < 100; ++k) {
      const Matrix z = rng.complex_normal_matrix(4, 4);
      EXPECT_LE(inner(g.matrix, z), numerical_radius(z).value + 1e-9);
    }
  }
}

TEST(SubdiffDimension, Examples) {
  EXPECT_EQ(subdiff_dimension(jordan2()), 4u);
  EXPECT_EQ(subdiff_dimension(jordan3()), 6u);
  EXPECT_EQ(subdiff_dimension(crabb(4)), 8u);
  EXPECT_EQ(subdiff_dimension(form3(0.0, 1.0, 0.2, 0.0)), 4u);
  EXPECT_EQ(subdiff_dimension(2.0 * e0()), 4u);
}

TEST(SubdiffDimension, UnitarySimilarityInvariant) {
  Rng rng(203);
  for (int t = 0; t < 5; ++t) {
    const Matrix u = rng.unitary(4);
    EXPECT_EQ(subdiff_dimension(u * crabb(4) * u.adjoint()), 8u);
  }
}

TEST(Moments, Examples) {
  const auto f1 = moment_f(1.0, 2);
  EXPECT_EQ(f1, (Vector{1.0, 1.0}));
  EXPECT_EQ(moment_F(1.0, 2), Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}}));
  const cplx i{0.0, 1.0};
  const auto fi = moment_f(i, 2);
  EXPECT_NEAR(std::abs(fi[0] - i), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(fi[1] + 1.0), 0.0, 1e-15);
  EXPECT_LE(frobenius_norm(moment_F(i, 2) - i * outer(fi, fi)), 1e-15);
  Rng rng(207);
  for (int t = 0; t < 20; ++t) {
    const cplx w = unit(rng.uniform(0.0, kTwoPi));
    const auto big = moment_F(w, 5);
    EXPECT_NEAR(std::abs(big(0, 1) - 1.0), 0.0, 1e-14);
    const auto f = moment_f(w, 5);
    for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(std::abs(big(k, 0) - f[k]), 0.0, 1e-14);
  }
}

TEST(MomentIndependence, AlwaysIndependent) {
  for (std::size_t n = 2; n <= 5; ++n) EXPECT_TRUE(moment_independence_check(equispaced_angles(2 * n + 1), n));
  Rng rng(209);
  EXPECT_TRUE(moment_independence_check({rng.uniform(0, 6), rng.uniform(0, 6), rng.uniform(0, 6)}, 3));
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 6;
    const std::size_t k = 1 + rng.next_u64() % (2 * n + 1);
    std::vector<double> a;
    for (std::size_t j = 0; j < k; ++j) a.push_back(rng.uniform(0.0, kTwoPi));
    EXPECT_TRUE(moment_independence_check(a, n, 1e-14));
  }
  EXPECT_THROW(moment_independence_check({0.5, 0.5}, 2), ValidationError);
  EXPECT_THROW(moment_independence_check(equispaced_angles(6), 2), ValidationError);
}

TEST(Certificate, JordanTwo) {
  const auto c = certify_partial_smoothness(jordan2(), Matrix::identity(2));
  EXPECT_TRUE(c.valid);
  ASSERT_TRUE(c.codimension);
  EXPECT_EQ(*c.codimension, 4);
  EXPECT_EQ(c.subdiff_dim.value_or(-1), 4);
  EXPECT_GT(c.min_gap, 0.5);
}

TEST(Certificate, SuperdiagonalWithDiagonalG) {
  Rng rng(211);
  for (std::size_t n = 3; n <= 6; ++n) {
    std::vector<double> s, c;
    for (std::size_t j = 0; j + 2 < n; ++j) {
      const double t = rng.uniform(0.1, kPi / 2 - 0.1);
      s.push_back(std::sin(t));
      c.push_back(std::cos(t));
    }
    const auto cert = certify_partial_smoothness(superdiag_from_sc(s, c), superdiag_certificate_g(s, c));
    EXPECT_TRUE(cert.valid) << n;
    EXPECT_EQ(cert.codimension.value_or(-1), static_cast<int>(2 * n));
  }
}

TEST(Certificate, ThreeByThreeNeNe) {
  Rng rng(213);
  for (int t = 0; t < 10; ++t) {
    cplx a = rng.complex_normal(), b = rng.complex_normal(), d = rng.complex_normal();
    const double s = std::sqrt(std::norm(a) + std::norm(b) + std::norm(d));
    a /= s;
    b /= s;
    d /= s;
    const cplx c = -a * d * std::conj(b) / (std::norm(a) + std::norm(d));
    const auto cert = certify_partial_smoothness(form3(a, b, c, d), three_final_g(a, b, d));
    EXPECT_TRUE(cert.valid);
    EXPECT_EQ(cert.codimension.value_or(-1), 6);
    EXPECT_EQ(cert.subdiff_dim.value_or(-1), 6);
  }
}

TEST(Certificate, FailuresAndErrors) {
  auto c = certify_partial_smoothness(2.0 * e0(), Matrix::identity(3));
  EXPECT_FALSE(c.valid);
  EXPECT_FALSE(c.eigvec_matches_Gf);
  EXPECT_FALSE(c.codimension);

  c = certify_partial_smoothness(form3(0.0, 1.0, 0.5, 0.0), Matrix::identity(3));
  EXPECT_FALSE(c.valid);
  EXPECT_FALSE(c.simple_on_circle);

  EXPECT_THROW(certify_partial_smoothness(jordan2(), Matrix::zeros(2)), NumericalError);
  EXPECT_THROW(certify_partial_smoothness(jordan2(), Matrix::identity(3)), ValidationError);
}

TEST(NormalSpace, JordanTwo) {
  const auto basis = normal_space_basis(jordan2(), Matrix::identity(2));
  ASSERT_EQ(basis.size(), 4u);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    EXPECT_NEAR(inner(basis[i], jordan2()), 0.0, 1e-12);
    for (std::size_t j = 0; j < basis.size(); ++j) EXPECT_NEAR(inner(basis[i], basis[j]), i == j ? 1.0 : 0.0, 1e-12);
  }
  EXPECT_THROW(normal_space_basis(2.0 * e0(), Matrix::identity(3)), ValidationError);
}

TEST(NormalSpace, OrthogonalToDiskCurves) {
  // Curves through X inside the disk-matrix set: unitary similarity
  // exp(tH) X exp(-tH) (H skew-Hermitian), scaling, and moving (s, c).
  Rng rng(217);
  for (std::size_t n : {3u, 4u}) {
    std::vector<double> th;
    for (std::size_t j = 0; j + 2 < n; ++j) th.push_back(rng.uniform(0.2, 1.3));
    auto make = [&](const std::vector<double>& angles) {
      std::vector<double> s, c;
      for (double a : angles) {
        s.push_back(std::sin(a));
        c.push_back(std::cos(a));
      }
      return std::pair{superdiag_from_sc(s, c), superdiag_certificate_g(s, c)};
    };
    const auto [x, g] = make(th);
    const auto basis = normal_space_basis(x, g);
    ASSERT_EQ(basis.size(), 2 * n);

    std::vector<Matrix> tangents{x};
    for (int k = 0; k < 5; ++k) {
      const Matrix z = rng.complex_normal_matrix(n, n);
      const Matrix h = 0.5 * (z - z.adjoint());
      tangents.push_back(h * x - x * h);
    }
    const double step = 1e-6;
    for (std::size_t j = 0; j < th.size(); ++j) {
      auto up = th, dn = th;
      up[j] += step;
      dn[j] -= step;
      tangents.push_back((make(up).first - make(dn).first) / (2 * step));
    }
    for (const auto& b : basis)
      for (const auto& t : tangents) EXPECT_NEAR(inner(b, t), 0.0, 1e-8 * frobenius_norm(t));
  }
}

TEST(MinSupportGap, FindsCrossingsBetweenGridPoints) {
  Rng rng(215);
  for (int t = 0; t < 10; ++t) {
    // EqEq: the double eigenvalue sits at theta = arg(c), generically off the grid.
    const cplx b = rng.complex_normal();
    const cplx c = 0.5 * std::abs(b) * unit(rng.uniform(0.0, kTwoPi));
    EXPECT_LE(detail::min_support_gap(form3(0.0, b, c, 0.0)), 1e-10 * std::abs(b));
    EXPECT_GT(detail::min_support_gap(form3(0.0, b, 0.8 * c, 0.0)), 1e-3 * std::abs(b));
  }
  EXPECT_NEAR(detail::min_support_gap(crabb(5)), support(crabb(5), 0.0).gap, 1e-12);
}
