#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dnglue/regdet.hpp"

using namespace dnglue;

namespace {

const double kLog2 = std::log(2.0);
const double kLog2Pi = std::log(2 * std::numbers::pi);

// −log 2 − 2 Σ log(1 − τ^{2n}) at 30 digits (mpmath nsum), frozen.
const double kNhatTau01 = -0.67284447864925540768;
const double kNhatTau05 = 0.053223703747774585872;
const double kNhatTau09 = 11.506629234976410092;

DiagonalFamily model_only(double c) {
  return {c, [](long) { return 0.0; }, [](long) { return 0.0; }};
}

}  // namespace

TEST(Zeta, Constants) {
  EXPECT_EQ(ZetaConstants::zeta_at_zero, -0.5);
  EXPECT_NEAR(ZetaConstants::zeta_prime_at_zero(), -0.91893853320467274178, 1e-15);
}

TEST(Diagonal, ModelFamily) {
  const RegDetResult r = regdet_diagonal(model_only(4 * std::numbers::pi));
  EXPECT_NEAR(r.log_det, -kLog2, 1e-15);
  EXPECT_EQ(r.zeta_at_zero, -1);
  EXPECT_EQ(r.tail_part, 0);
  for (double c : {0.3, 1.0, 7.0}) {
    const RegDetResult m = regdet_diagonal(model_only(c));
    EXPECT_EQ(m.zeta_at_zero, -1);
    EXPECT_NEAR(m.log_det, -std::log(c) + kLog2Pi, 1e-14);
  }
}

TEST(Diagonal, SingleModeBump) {
  DiagonalFamily f;
  f.symbol_constant = 1;
  f.log_one_plus = [](long n) { return n == 1 ? 2 * std::log(2.0) : 0.0; };
  f.tail_bound = [](long N) { return N >= 1 ? 0.0 : 1.0; };
  const RegDetResult r = regdet_diagonal(f);
  EXPECT_NEAR(r.log_det, regdet_diagonal(model_only(1)).log_det + 2 * kLog2, 1e-15);
  EXPECT_EQ(r.truncation, 1);
}

TEST(Diagonal, RejectsNonSummableTail) {
  DiagonalFamily f;
  f.symbol_constant = 1;
  f.log_one_plus = [](long n) { return 1.0 / static_cast<double>(n); };
  f.tail_bound = [](long) { return std::numeric_limits<double>::infinity(); };
  EXPECT_THROW(regdet_diagonal(f, {1e-12, 1000}), SolverError);
  f.tail_bound = [](long N) { return N >= 2 ? 0.0 : 1.0; };
  f.log_one_plus = [](long) { return std::log(-1.0); };
  EXPECT_THROW(regdet_diagonal(f), SolverError);
}

TEST(Scale, Rule) {
  const RegDetResult base = det_prime_Nhat(0.4);
  EXPECT_DOUBLE_EQ(scale_rule(base, 1.0).log_det, base.log_det);
  EXPECT_NEAR(scale_rule(base, 2.0).log_det, base.log_det - kLog2, 1e-15);
  EXPECT_NEAR(scale_rule(scale_rule(base, 1.7), 0.3).log_det, scale_rule(base, 1.7 * 0.3).log_det, 1e-14);
  EXPECT_THROW(scale_rule(base, 0.0), DomainError);
}

TEST(Scale, MatchesDirectReevaluation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.25, 4.0);
  const double tau = 0.6;
  for (int trial = 0; trial < 20; ++trial) {
    const double c = u(rng);
    DiagonalFamily f;
    f.symbol_constant = 4 * std::numbers::pi * c;
    f.log_one_plus = [tau](long n) { return 2.0 * std::log(coefficient_a(n, tau) / 2.0); };
    f.tail_bound = [tau](long N) { return log_one_minus_tail(tau, N, 2.0); };
    EXPECT_NEAR(regdet_diagonal(f).log_det, scale_rule(det_prime_Nhat(tau), c).log_det, 1e-12);
  }
}

TEST(Nhat, ClosedFormValues) {
  EXPECT_NEAR(det_prime_Nhat(0.0).log_det, -kLog2, 1e-15);
  EXPECT_NEAR(det_prime_Nhat(0.1).log_det, kNhatTau01, 1e-13);
  EXPECT_NEAR(det_prime_Nhat(0.5).log_det, kNhatTau05, 1e-12);
  EXPECT_NEAR(det_prime_Nhat(0.9).log_det, kNhatTau09, 1e-11);
  EXPECT_THROW(det_prime_Nhat(1.0), DomainError);
}

TEST(Nhat, TailBoundShrinksWithTolerance) {
  const RegDetResult loose = det_prime_Nhat(0.8, {1e-6, 100000});
  const RegDetResult tight = det_prime_Nhat(0.8, {1e-14, 100000});
  EXPECT_GT(tight.truncation, loose.truncation);
  EXPECT_LT(tight.tail_bound, loose.tail_bound);
  EXPECT_NEAR(loose.log_det, tight.log_det, 1e-6);
}

TEST(NA, ClosedFormValues) {
  EXPECT_NEAR(detQ_prime_NA(0.0).log_det, -2 * kLog2, 1e-14);
  EXPECT_EQ(detQ_prime_NA(0.0).zeta_at_zero, -2);
  EXPECT_NEAR(detQ_prime_NA(0.9, 1.0, {1e-14, 100000}).log_det, 2 * kNhatTau09, 1e-10);
  EXPECT_THROW(detQ_prime_NA(1.2), DomainError);
}

TEST(NA, IndependentOfRadius) {
  for (double r : {0.1, 1.0, 30.0}) EXPECT_NEAR(detQ_prime_NA(0.7, r).log_det, detQ_prime_NA(0.7, 1.0).log_det, 1e-12);
}

TEST(Gluing, AnnulusIdentityOnGrid) {
  const TruncationOptions tight{1e-15, 100000};
  for (int k = 0; k <= 9; ++k) {
    const double tau = 0.1 * k;
    EXPECT_LT(std::abs(det_prime_Nhat(tau, tight).log_det - 0.5 * detQ_prime_NA(tau, 1.0, tight).log_det), 1e-12) << tau;
  }
}

TEST(Gluing, FiniteDifferenceMatchesTraceDerivative) {
  const TruncationOptions tight{1e-15, 100000};
  const double h = 1e-5;
  for (double tau : {0.1, 0.3, 0.5, 0.7}) {
    const double fd = (det_prime_Nhat(tau + h, tight).log_det - det_prime_Nhat(tau - h, tight).log_det) / (2 * h);
    EXPECT_NEAR(fd, trace_derivative_Nhat(tau), 1e-6) << tau;
  }
}

TEST(Gluing, QuadratureReproducesClosedForm) {
  const double at_zero = det_prime_Nhat(0.0).log_det;
  for (double tau : {0.2, 0.5, 0.9}) EXPECT_NEAR(integrate_trace_derivative(tau, at_zero), det_prime_Nhat(tau).log_det, 1e-8);
}

TEST(ReferenceQ, ScaleInvariant) {
  for (double c : {0.01, 1.0, 50.0}) {
    const RegDetResult r = regdet_reference_Q(c);
    EXPECT_EQ(r.zeta_at_zero, 0);
    EXPECT_NEAR(r.log_det, kLog2Pi, 1e-14);
  }
}

TEST(Split, ZeroCouplingAddsDeterminants) {
  Eigen::MatrixXd a0(1, 1);
  a0 << 3.0;
  const Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 1);
  const Eigen::MatrixXd a1 = Eigen::Vector2d(2.0, 5.0).asDiagonal();
  const auto s = split_det<double>(a0, b, a1, 1.25);
  EXPECT_NEAR(s.log_abs_det, std::log(3.0) + 1.25, 1e-15);
  EXPECT_EQ(s.phase, 1.0);
}

TEST(Split, RandomFiniteMatricesMatchDirectDeterminant) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    const int d0 = 1 + trial % 3;
    const int d1 = 1 + (trial / 3) % 4;
    Eigen::MatrixXd full(d0 + d1, d0 + d1);
    for (int i = 0; i < full.rows(); ++i)
      for (int j = 0; j < full.cols(); ++j) full(i, j) = g(rng);
    full = full * full.transpose() + Eigen::MatrixXd::Identity(d0 + d1, d0 + d1);
    const Eigen::MatrixXd a0 = full.topLeftCorner(d0, d0);
    const Eigen::MatrixXd b = full.bottomLeftCorner(d1, d0);
    const Eigen::MatrixXd a1 = full.bottomRightCorner(d1, d1);
    const double log_a1 = std::log(std::abs(a1.determinant()));
    const auto s = split_det<double>(a0, b, a1, log_a1);
    EXPECT_NEAR(s.log_abs_det, std::log(std::abs(full.determinant())), 1e-10);
  }
}

TEST(Split, ComplexHermitianBlocks) {
  Eigen::MatrixXcd full(3, 3);
  using namespace std::complex_literals;
  full << 4.0, 1.0 + 1i, 0.5i, 1.0 - 1i, 3.0, 0.2, -0.5i, 0.2, -2.0;
  const auto s = split_det<std::complex<double>>(full.topLeftCorner(1, 1), full.bottomLeftCorner(2, 1),
                                                 full.bottomRightCorner(2, 2),
                                                 std::log(std::abs(full.bottomRightCorner(2, 2).determinant())));
  EXPECT_NEAR(s.log_abs_det, std::log(std::abs(full.determinant())), 1e-12);
}

TEST(Split, SingularA1IsReported) {
  Eigen::MatrixXd a0 = Eigen::MatrixXd::Identity(1, 1);
  Eigen::MatrixXd b = Eigen::MatrixXd::Ones(2, 1);
  Eigen::MatrixXd a1(2, 2);
  a1 << 1, 1, 1, 1;
  try {
    split_det<double>(a0, b, a1, 0.0);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_LT(e.diagnostic(), 1e-14);
  }
}

TEST(Disk, IdentityOnGrid) {
  for (double r : {0.3, 1.0, 2.0})
    for (double rho : {std::exp(1.0), 5.0, 20.0}) EXPECT_LT(std::abs(disk_identity(r, rho).residual), 1e-8);
  EXPECT_LT(std::abs(disk_identity(0.3, 10.0).residual), 1e-8);
}

TEST(Disk, ResidualIndependentOfRadius) {
  for (double rho : {std::exp(1.0), 5.0, 20.0}) {
    const double base = disk_identity(1.0, rho).residual;
    for (double r : {0.3, 2.0, 11.0}) EXPECT_NEAR(disk_identity(r, rho).residual, base, 1e-8);
  }
}

TEST(Disk, ResidualShrinksWithTruncation) {
  const double loose = std::abs(disk_identity(1.0, 1.2, {1e-4, 100000}).residual);
  const double tight = std::abs(disk_identity(1.0, 1.2, {1e-14, 100000}).residual);
  EXPECT_LE(tight, loose + 1e-15);
  EXPECT_LT(tight, 1e-10);
}
