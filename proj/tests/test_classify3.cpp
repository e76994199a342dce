#include <gtest/gtest.h>

#include <cmath>

#include <diskfov/classify3.hpp>
#include <diskfov/constructors.hpp>
#include <diskfov/diskgeom.hpp>
#include <diskfov/rng.hpp>

#include "test_support.hpp"

using namespace diskfov;

namespace {

struct Abcd {
  cplx a, b, c, d;
};

// a, b, d random, c from the condition, scaled so |a|^2+|d|^2+|b|^2 = 1.
Abcd random_nene(Rng& rng) {
  cplx a = rng.complex_normal(), b = rng.complex_normal(), d = rng.complex_normal();
  const double s = std::sqrt(std::norm(a) + std::norm(b) + std::norm(d));
  a /= s;
  b /= s;
  d /= s;
  return {a, b, -a * d * std::conj(b) / (std::norm(a) + std::norm(d)), d};
}

Abcd random_eq(Rng& rng, double ratio) {
  const cplx b = rng.complex_normal();
  return {0.0, b, 0.5 * ratio * std::abs(b) * unit(rng.uniform(0.0, kTwoPi)), 0.0};
}

Matrix conjugated(Rng& rng, const Matrix& x) {
  const Matrix u = rng.unitary(3);
  return u * x * u.adjoint();
}

}  // namespace

TEST(SchurDiskForm, MatricesAlreadyInForm) {
  auto f = schur_disk_form(jordan3());
  ASSERT_TRUE(f);
  const double h = std::sqrt(2.0) / 2.0;
  EXPECT_NEAR(std::abs(f->a), h, 1e-14);
  EXPECT_NEAR(std::abs(f->d), h, 1e-14);
  EXPECT_NEAR(std::abs(f->b), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(f->c), 0.0, 1e-14);

  f = schur_disk_form(2.0 * e0());
  ASSERT_TRUE(f);
  EXPECT_NEAR(std::abs(f->b), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(f->a) + std::abs(f->c) + std::abs(f->d), 0.0, 1e-14);
}

TEST(SchurDiskForm, RoundTripUnderUnitarySimilarity) {
  Rng rng(101);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_nene(rng);
    const Matrix x = conjugated(rng, form3(p.a, p.b, p.c, p.d));
    const auto f = schur_disk_form(x);
    ASSERT_TRUE(f);
    EXPECT_LE(f->residual, 1e-10);
    EXPECT_LE(frobenius_norm(f->u.adjoint() * f->u - Matrix::identity(3)), 1e-12);
    EXPECT_LE(frobenius_norm(f->u.adjoint() * x * f->u - form3(f->a, f->b, f->c, f->d)), 1e-10);
    EXPECT_NEAR(std::abs(f->a), std::abs(p.a), 1e-9);
    EXPECT_NEAR(std::abs(f->b), std::abs(p.b), 1e-9);
    EXPECT_NEAR(std::abs(f->c), std::abs(p.c), 1e-9);
    EXPECT_NEAR(std::abs(f->d), std::abs(p.d), 1e-9);
    EXPECT_EQ(classify(x).label, XiLabel::NeNe);
  }
}

TEST(SchurDiskForm, GenericMatrixHasNoForm) {
  Rng rng(103);
  EXPECT_FALSE(schur_disk_form(rng.complex_normal_matrix(3, 3)));
  // Rank two, but the kernels of X and X^* are not orthogonal.
  Matrix x = rng.complex_normal_matrix(3, 3);
  for (std::size_t i = 0; i < 3; ++i) x(i, 2) = x(i, 0) + x(i, 1);
  EXPECT_FALSE(schur_disk_form(x));
  EXPECT_EQ(classify(x).label, XiLabel::NotInE);
}

TEST(AbcdResidual, Examples) {
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_EQ(abcd_residual(h, 0.0, 0.0, h), 0.0);
  EXPECT_NEAR(abcd_residual(1.0, 1.0, 1.0, 1.0), 3.0, 1e-15);
  Rng rng(107);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_nene(rng);
    EXPECT_LE(abcd_residual(p.a, p.b, p.c, p.d), 1e-15);
  }
}

TEST(Classify, Examples) {
  auto k = classify(jordan3());
  EXPECT_EQ(k.label, XiLabel::NeNe);
  EXPECT_TRUE(k.disk);

  k = classify(form3(0.0, 1.0, 0.2, 0.0));
  EXPECT_EQ(k.label, XiLabel::EqLt);
  EXPECT_TRUE(k.disk);

  k = classify(form3(0.0, 1.0, 1.0, 0.0));
  EXPECT_EQ(k.label, XiLabel::EqGt);
  EXPECT_FALSE(k.disk);

  k = classify(form3(0.0, 1.0, 0.5, 0.0));
  EXPECT_EQ(k.label, XiLabel::EqEq);
  EXPECT_TRUE(k.disk);

  EXPECT_EQ(classify(2.0 * e0()).label, XiLabel::EqLt);
  EXPECT_EQ(classify(Matrix::zeros(3)).label, XiLabel::EqEq);
  EXPECT_EQ(classify(Matrix::identity(3)).label, XiLabel::NotInE);
}

TEST(Classify, FoldsNilpotentRankOne) {
  // a = 0, d != 0 forces c = 0: rank-one nilpotent, equivalent to E(0, b', 0, 0).
  const auto k = classify(form3(0.0, 0.6, 0.0, 0.8));
  EXPECT_EQ(k.label, XiLabel::EqLt);
  EXPECT_NEAR(std::abs(k.b), 1.0, 1e-12);
  EXPECT_NEAR(disk_radius3(k.a, k.b, k.c, k.d), numerical_radius(form3(0.0, 0.6, 0.0, 0.8)).value, 1e-9);
}

TEST(Classify, InvariantUnderSimilarityAndScaling) {
  Rng rng(109);
  for (int t = 0; t < 100; ++t) {
    const auto p = t % 3 == 0 ? random_nene(rng) : random_eq(rng, t % 3 == 1 ? 0.5 : 1.5);
    const Matrix x = form3(p.a, p.b, p.c, p.d);
    const auto base = classify(x).label;
    EXPECT_EQ(classify(conjugated(rng, x)).label, base);
    EXPECT_EQ(classify(rng.uniform(0.01, 100.0) * x).label, base);
  }
}

TEST(Classify, NeNeSatisfiesTwoCBelowB) {
  Rng rng(113);
  for (int t = 0; t < 500; ++t) {
    const auto p = random_nene(rng);
    EXPECT_LE(2.0 * std::abs(p.c), std::abs(p.b) + 1e-9);
  }
}

TEST(Classify, AgreesWithDiskTest) {
  Rng rng(127);
  for (int t = 0; t < 60; ++t) {
    Abcd p;
    switch (t % 4) {
      case 0: p = random_nene(rng); break;
      case 1: p = random_eq(rng, rng.uniform(0.0, 0.99)); break;
      case 2: p = random_eq(rng, 1.0); break;
      default: p = random_eq(rng, rng.uniform(1.01, 3.0)); break;
    }
    const Matrix x = conjugated(rng, form3(p.a, p.b, p.c, p.d));
    EXPECT_EQ(classify(x).disk, is_disk_near(x).is_disk) << "sample " << t;
  }
}

TEST(Classify, ClosurePerturbationFromEqLt) {
  // [[eps c, b], [c, eps b t]] with t = (sqrt(1 - (2|c|/|b|)^2) - 1)/2 satisfies
  // the condition for every eps and tends to the EqLt point as eps -> 0.
  const cplx b{0.8, 0.3}, c{0.1, -0.2};
  const double t = 0.5 * (std::sqrt(1.0 - std::pow(2.0 * std::abs(c) / std::abs(b), 2)) - 1.0);
  for (double eps : {0.5, 1e-1, 1e-2, 1e-3}) {
    const cplx a = eps * c, d = eps * b * t;
    EXPECT_LE(abcd_residual(a, b, c, d), 1e-15);
    const Matrix x = form3(a, b, c, d);
    EXPECT_EQ(classify(x).label, XiLabel::NeNe) << eps;
    EXPECT_TRUE(is_disk_near(x).is_disk);
  }
  EXPECT_EQ(classify(form3(0.0, b, c, 0.0)).label, XiLabel::EqLt);
  // Inside the classification tolerance the perturbed matrix is read as the limit.
  EXPECT_EQ(classify(form3(1e-9 * c, b, c, 1e-9 * b * t)).label, XiLabel::EqLt);
}

TEST(Classify, SimplicityByClass) {
  Rng rng(131);
  auto min_gap = [](const Matrix& x) {
    double g = 1e300;
    for (int k = 0; k < 256; ++k) g = std::min(g, support(x, kTwoPi * k / 256.0).gap);
    return g;
  };
  for (int t = 0; t < 5; ++t) {
    const auto p = random_nene(rng);
    EXPECT_GT(min_gap(form3(p.a, p.b, p.c, p.d)), 1e-6);
    const auto q = random_eq(rng, 0.5);
    EXPECT_GT(min_gap(form3(q.a, q.b, q.c, q.d)), 1e-6);
  }
  // EqEq: |2c| = |b| puts the point 2c on the circle of radius |b|.
  const cplx b{0.6, 0.8};
  const cplx c = 0.5 * unit(0.3);
  const Matrix x = form3(0.0, b, c, 0.0);
  EXPECT_LE(support(x, 0.3).gap, 1e-12);
}

TEST(DiskRadius3, Examples) {
  const double h = std::sqrt(2.0) / 2.0;
  EXPECT_NEAR(disk_radius3(h, 0.0, 0.0, h), 1.0, 1e-15);
  EXPECT_NEAR(disk_radius3(0.0, 1.0, 0.0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(numerical_radius(2.0 * e0()).value, 1.0, 1e-12);
  EXPECT_NEAR(numerical_radius(e0()).value, 0.5, 1e-12);
  Rng rng(137);
  for (int t = 0; t < 30; ++t) {
    auto p = random_nene(rng);
    const double s = rng.uniform(0.2, 3.0);
    p = {s * p.a, s * p.b, s * p.c, s * p.d};
    EXPECT_NEAR(disk_radius3(p.a, p.b, p.c, p.d), numerical_radius(form3(p.a, p.b, p.c, p.d)).value, 1e-9 * s);
  }
  EXPECT_THROW(disk_radius3(0.0, 1.0, 1.0, 0.0), ValidationError);
  EXPECT_THROW(disk_radius3(1.0, 1.0, 1.0, 1.0), ValidationError);
}

TEST(Eigvec3, ResidualAndNorm) {
  const double h = std::sqrt(2.0) / 2.0;
  auto residual = [](cplx a, cplx b, cplx d, cplx w) {
    const cplx c = -a * d * std::conj(b) / (std::norm(a) + std::norm(d));
    const Vector v = eigvec3(a, b, d, w);
    auto hv = hermitian_part(std::conj(w) * form3(a, b, c, d)).matrix() * v;
    for (std::size_t i = 0; i < 3; ++i) hv[i] -= v[i];
    return norm(hv);
  };
  EXPECT_LE(residual(h, 0.0, h, 1.0), 1e-12);
  EXPECT_LE(residual(h, 0.0, h, unit(0.7)), 1e-12);
  Rng rng(139);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_nene(rng);
    const cplx w = unit(rng.uniform(0.0, kTwoPi));
    EXPECT_LE(residual(p.a, p.b, p.d, w), 1e-10);
    if (t < 16) {
      EXPECT_NEAR(norm(eigvec3(p.a, p.b, p.d, w)), 1.0, 1e-12);
    }
  }
  EXPECT_THROW(eigvec3(0.5, 0.0, 0.5, 1.0), ValidationError);
  EXPECT_THROW(eigvec3(0.0, 1.0, 0.0, 1.0), ValidationError);
}

TEST(Charpoly3, Examples) {
  const auto z = charpoly3_check(1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
  EXPECT_EQ(z.formula, 0.0);
  EXPECT_NEAR(z.direct, 0.0, 1e-15);
  Rng rng(149);
  for (int t = 0; t < 1000; ++t) {
    const cplx a = rng.complex_normal(), b = rng.complex_normal(), c = rng.complex_normal(),
               d = rng.complex_normal();
    const auto r = charpoly3_check(a, b, c, d, unit(rng.uniform(0.0, kTwoPi)), rng.normal());
    EXPECT_NEAR(r.formula, r.direct, 1e-10 * std::max(1.0, std::abs(r.direct)));
  }
  for (int t = 0; t < 50; ++t) {
    const auto p = random_nene(rng);
    const cplx w = unit(rng.uniform(0.0, kTwoPi));
    const double lam = 2.0 * (std::conj(w) * p.c).real();
    const auto r = charpoly3_check(p.a, p.b, p.c, p.d, w, lam);
    EXPECT_NEAR(r.formula, 0.0, 1e-12);
    EXPECT_NEAR(r.direct, 0.0, 1e-12);
  }
}

TEST(ThreeFinalG, ParallelToEigenvector) {
  Rng rng(151);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_nene(rng);
    const cplx w = unit(rng.uniform(0.0, kTwoPi));
    const Vector gf = three_final_g(p.a, p.b, p.d) * moment_f(w, 3);
    const Vector v = eigvec3(p.a, p.b, p.d, w);
    EXPECT_NEAR(std::abs(dot(v, gf)), norm(gf), 1e-12 * norm(gf));
  }
}
