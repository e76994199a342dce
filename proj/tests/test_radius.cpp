#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include <diskfov/constructors.hpp>
#include <diskfov/radius.hpp>
#include <diskfov/rng.hpp>

#include "test_support.hpp"

using namespace diskfov;
using diskfov::testing::brute_support;

TEST(Support, Examples) {
  for (double t : {0.0, 0.3, 1.7, 4.0}) {
    EXPECT_NEAR(support(jordan2(), t).lambda, 1.0, 1e-14);
    EXPECT_NEAR(support(Matrix::identity(3), t).lambda, std::cos(t), 1e-14);
  }
  const cplx d[] = {1.0, -1.0};
  EXPECT_NEAR(support(Matrix::diagonal(d), kPi / 2).lambda, 0.0, 1e-15);
}

TEST(Support, EigenpairInvariant) {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    const Matrix x = rng.complex_normal_matrix(4, 4);
    const auto s = support(x, rng.uniform(0.0, kTwoPi));
    EXPECT_NEAR(norm(s.g), 1.0, 1e-13);
    auto r = rotated_hermitian_part(x, s.theta).matrix() * s.g;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= s.lambda * s.g[i];
    EXPECT_LE(norm(r), 1e-10 * frobenius_norm(x));
    EXPECT_GE(s.gap, 0.0);
  }
}

TEST(Support, AgainstBruteForce) {
  Rng rng(23);
  Rng oracle(24);
  for (int t = 0; t < 20; ++t) {
    const Matrix x = rng.complex_normal_matrix(3, 3);
    const double theta = rng.uniform(0.0, kTwoPi);
    const double lam = support(x, theta).lambda;
    const double bf = brute_support(x, theta, oracle, 10000);
    EXPECT_GE(lam, bf - 1e-12);
    EXPECT_LE(lam - bf, 0.05 * frobenius_norm(x));
  }
}

TEST(SupportDerivative, Examples) {
  EXPECT_NEAR(support_derivative(jordan2(), support(jordan2(), 0.4)), 0.0, 1e-14);
  for (double t : {0.2, 1.0, 2.5}) {
    // The eigenvalue of a 1x1 block is trivially simple.
    const Matrix one = Matrix::identity(1);
    EXPECT_NEAR(support_derivative(one, support(one, t)), -std::sin(t), 1e-14);
  }
  EXPECT_THROW(support_derivative(Matrix::identity(2), support(Matrix::identity(2), 0.3)), NumericalError);
}

TEST(SupportDerivative, FiniteDifferences) {
  Rng rng(29);
  const double h = 1e-5;
  for (int t = 0; t < 100; ++t) {
    const Matrix x = rng.complex_normal_matrix(4, 4);
    const double theta = rng.uniform(0.0, kTwoPi);
    const auto s = support(x, theta);
    const double fd = (support(x, theta + h).lambda - support(x, theta - h).lambda) / (2 * h);
    EXPECT_NEAR(support_derivative(x, s), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(NumericalRadius, Examples) {
  EXPECT_NEAR(numerical_radius(crabb(5)).value, 1.0, 1e-10);
  EXPECT_NEAR(numerical_radius(e0()).value, 0.5, 1e-14);
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const Matrix x = rng.complex_normal_matrix(4, 4);
    const double a = rng.uniform(0.1, 5.0);
    EXPECT_NEAR(numerical_radius(a * x).value, a * numerical_radius(x).value, 1e-12 * a * frobenius_norm(x));
  }
  EXPECT_THROW(numerical_radius(crabb(5), 10), ValidationError);
}

TEST(NumericalRadius, EZeroAgainstBruteForce) {
  // max over w and unit u of Re(w^* u^* E0 u): sample both.
  Rng rng(37);
  double best = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const auto u = rng.unit_vector(3);
    best = std::max(best, std::abs(dot(u, e0() * u)));
  }
  EXPECT_LE(best, 0.5 + 1e-15);
  EXPECT_GE(best, 0.49);
}

TEST(InnerSupport, Examples) {
  EXPECT_NEAR(inner_support(crabb(5)).value, 1.0, 1e-10);
  const cplx d[] = {1.0, -1.0};
  EXPECT_NEAR(inner_support(Matrix::diagonal(d)).value, 0.0, 1e-14);
  const auto res = inner_support(Matrix::identity(2));
  EXPECT_NEAR(res.value, -1.0, 1e-14);
  EXPECT_TRUE(res.origin_outside);
  EXPECT_FALSE(inner_support(crabb(4)).origin_outside);
}

TEST(DiskDistortion, Examples) {
  EXPECT_LE(disk_distortion(crabb(5)), 1e-9);
  EXPECT_LE(disk_distortion(jordan2()), 1e-12);
  // Support of diag(1,-1) is |cos theta|: maximum 1, minimum 0.
  const cplx d[] = {1.0, -1.0};
  EXPECT_NEAR(disk_distortion(Matrix::diagonal(d)), 1.0, 1e-12);
}

TEST(RadiusProperties, PowerInequalityAndBound) {
  Rng rng(41);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + t % 4;
    const Matrix x = rng.complex_normal_matrix(n, n);
    const double r = numerical_radius(x).value;
    Matrix p = Matrix::identity(n);
    for (int k = 1; k <= 5; ++k) {
      p = p * x;
      const double rk = std::pow(r, k);
      EXPECT_LE(numerical_radius(p).value, rk * (1 + 1e-12) + 1e-8);
      EXPECT_LE(spectral_norm(p), 2 * rk * (1 + 1e-12) + 1e-8);
    }
  }
}

TEST(RadiusProperties, NormAxiomsAndUnitaryInvariance) {
  Rng rng(43);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + t % 4;
    const Matrix x = rng.complex_normal_matrix(n, n);
    const Matrix y = rng.complex_normal_matrix(n, n);
    const cplx alpha = rng.complex_normal();
    const double rx = numerical_radius(x).value;
    EXPECT_LE(numerical_radius(x + y).value, rx + numerical_radius(y).value + 1e-9);
    EXPECT_NEAR(numerical_radius(alpha * x).value, std::abs(alpha) * rx, 1e-9 * std::max(1.0, std::abs(alpha) * rx));
    const Matrix u = rng.unitary(n);
    EXPECT_NEAR(numerical_radius(u.adjoint() * x * u).value, rx, 1e-9 * std::max(1.0, rx));
  }
  EXPECT_EQ(numerical_radius(Matrix::zeros(3)).value, 0.0);
}

TEST(RadiusProperties, ArgmaxTieIsSmallestTheta) {
  // Support of diag(1,-1) peaks at 0 and pi with equal value.
  const cplx d[] = {1.0, -1.0};
  EXPECT_EQ(numerical_radius(Matrix::diagonal(d)).argmax_theta, 0.0);
}

TEST(FovBoundary, Examples) {
  auto pts = fov_boundary(jordan2(), 8);
  ASSERT_EQ(pts.size(), 8u);
  for (const auto& p : pts) {
    EXPECT_NEAR(std::abs(p.z), 1.0, 1e-9);
    EXPECT_NEAR((std::conj(unit(p.theta)) * p.z).real(), p.lambda, 1e-12);
  }
  for (const auto& p : fov_boundary(Matrix::identity(2), 5)) EXPECT_NEAR(std::abs(p.z - 1.0), 0.0, 1e-14);
  const cplx d[] = {0.0, 1.0};
  for (const auto& p : fov_boundary(Matrix::diagonal(d), 16)) {
    EXPECT_NEAR(p.z.imag(), 0.0, 1e-14);
    EXPECT_GE(p.z.real(), -1e-14);
    EXPECT_LE(p.z.real(), 1.0 + 1e-14);
  }
  EXPECT_THROW(fov_boundary(jordan2(), 2), ValidationError);
}

TEST(FovBoundary, CsvFormat) {
  std::ostringstream os;
  write_boundary_csv(os, fov_boundary(jordan2(), 4));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "theta,re,im,lambda,gap");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(NumericalRadius, TimingForOrderFive) {
  Rng rng(47);
  const Matrix x = rng.complex_normal_matrix(5, 5);
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < 20; ++k) (void)numerical_radius(x);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / 20;
  RecordProperty("ms_per_radius", std::to_string(ms));
  std::cout << "numerical_radius n=5: " << ms << " ms\n";
}
