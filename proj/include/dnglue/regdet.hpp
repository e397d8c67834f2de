#pragma once

// Zeta-regularized determinants of Fourier-diagonal families. Each family is
// split into a model whose zeta function is a multiple of Riemann's, plus an
// absolutely convergent tail; the finite part comes from the model alone.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dnglue/dn_fourier.hpp"
#include "dnglue/errors.hpp"

namespace dnglue {

struct ZetaConstants {
  static constexpr double zeta_at_zero = -0.5;
  static double zeta_prime_at_zero() { return -0.5 * std::log(2.0 * std::numbers::pi); }
};

struct RegDetResult {
  double log_det = 0;
  double zeta_at_zero = 0;
  double model_part = 0;
  double tail_part = 0;
  long truncation = 0;
  double tail_bound = 0;
};

struct TruncationOptions {
  double tolerance = 1e-12;
  long max_modes = 1'000'000;
};

/// Sum in a fixed tree order, independent of how terms were produced.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

/// Eigenvalues c|n|(1 + δ_n), n ∈ Z \ {0}. log_one_plus(n) = log(1 + δ_n)
/// for n ≥ 1 already summed over ±n; tail_bound(N) bounds
/// Σ_{n>N} |log_one_plus(n)|.
struct DiagonalFamily {
  double symbol_constant = 1;
  std::function<double(long)> log_one_plus;
  std::function<double(long)> tail_bound;
};

/// Stops at the first N whose tail bound is below tolerance.
inline long adaptive_truncation(const std::function<double(long)>& tail_bound, const TruncationOptions& opt) {
  for (long N = 0; N <= opt.max_modes; N = N < 16 ? N + 1 : N * 2) {
    const double b = tail_bound(N);
    if (!std::isfinite(b)) continue;
    if (b < opt.tolerance) {
      if (N <= 16) return N;
      long lo = N / 2, hi = N;  // refine between the last two doublings
      while (hi - lo > 1) {
        const long mid = (lo + hi) / 2;
        (tail_bound(mid) < opt.tolerance ? hi : lo) = mid;
      }
      return hi;
    }
  }
  throw SolverError("tail bound does not reach tolerance within " + std::to_string(opt.max_modes) + " modes",
                    tail_bound(opt.max_modes));
}

/// log Det′ of c|n|(1 + δ_n): the model contributes −ζ′(0) of 2c^{−s}ζ(s),
/// i.e. 2(log c · ζ(0) − ζ′(0)); the tail adds Σ log(1 + δ_n).
inline RegDetResult regdet_diagonal(const DiagonalFamily& f, const TruncationOptions& opt = {}) {
  if (!(f.symbol_constant > 0)) throw SolverError("model constant must be positive", f.symbol_constant);
  RegDetResult r;
  r.zeta_at_zero = 2 * ZetaConstants::zeta_at_zero;
  r.model_part = 2 * (std::log(f.symbol_constant) * ZetaConstants::zeta_at_zero - ZetaConstants::zeta_prime_at_zero());
  r.truncation = adaptive_truncation(f.tail_bound, opt);
  r.tail_bound = f.tail_bound(r.truncation);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(r.truncation));
  for (long n = 1; n <= r.truncation; ++n) {
    const double t = f.log_one_plus(n);
    if (!std::isfinite(t)) throw SolverError("nonpositive eigenvalue at mode " + std::to_string(n));
    terms.push_back(t);
  }
  r.tail_part = pairwise_sum(terms);
  r.log_det = r.model_part + r.tail_part;
  return r;
}

/// log Det(cA) = ζ_A(0) log c + log Det A.
inline RegDetResult scale_rule(RegDetResult r, double c) {
  if (!(c > 0)) throw DomainError("scale factor must be positive");
  const double shift = r.zeta_at_zero * std::log(c);
  r.model_part += shift;
  r.log_det += shift;
  return r;
}

/// Bound on Σ_{n>N} |log(1 − τ^{2n})| · weight.
inline double log_one_minus_tail(double tau, long N, double weight) {
  if (tau == 0) return 0.0;
  const double q = std::pow(tau, 2.0 * static_cast<double>(N + 1));
  return weight * q / ((1 - tau * tau) * (1 - q));
}

/// log Det′ N̂, N̂ = 2πr N: eigenvalues 2π|n|a_n = 4π|n| / (1 − τ^{2|n|}).
inline RegDetResult det_prime_Nhat(double tau, const TruncationOptions& opt = {}) {
  check_tau(tau);
  DiagonalFamily f;
  f.symbol_constant = 4 * std::numbers::pi;
  // 2π|n|a_n / (4π|n|) = a_n / 2, twice for ±n
  f.log_one_plus = [tau](long n) { return 2.0 * std::log(coefficient_a(n, tau) / 2.0); };
  f.tail_bound = [tau](long N) { return log_one_minus_tail(tau, N, 2.0); };
  return regdet_diagonal(f, opt);
}

/// Order-zero family on the reference Q: per n ≥ 1, trace(n) collects
/// Σ log λ² over both ±n blocks and tends to `limit`. The finite part of
/// Σ n^{−s} trace(n) at s = 0 is limit · ζ(0) + Σ (trace(n) − limit); the
/// determinant is half of it (the squared-operator convention).
struct OrderZeroFamily {
  double limit = 0;
  double block_dimension = 0;  ///< eigenvalues per n ≥ 1, over ±n
  std::function<double(long)> trace;
  std::function<double(long)> tail_bound;  ///< Σ_{n>N} |trace(n) − limit|
};

inline RegDetResult regdet_order_zero(const OrderZeroFamily& f, const TruncationOptions& opt = {}) {
  RegDetResult r;
  // scaling A by c multiplies A² by c², i.e. shifts half the log-trace by
  // log c per eigenvalue: ζ-weight of the eigenvalue count
  r.zeta_at_zero = f.block_dimension * ZetaConstants::zeta_at_zero;
  r.model_part = 0.5 * f.limit * ZetaConstants::zeta_at_zero;
  r.truncation = adaptive_truncation([&](long N) { return 0.5 * f.tail_bound(N); }, opt);
  r.tail_bound = 0.5 * f.tail_bound(r.truncation);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(r.truncation));
  for (long n = 1; n <= r.truncation; ++n) {
    const double t = f.trace(n);
    if (!std::isfinite(t)) throw SolverError("zero eigenvalue at mode " + std::to_string(n));
    terms.push_back(t - f.limit);
  }
  r.tail_part = 0.5 * pairwise_sum(terms);
  r.log_det = r.model_part + r.tail_part;
  return r;
}

/// log Det′_Q N_A, from the analytic eigenvalues of the ±n blocks.
inline RegDetResult detQ_prime_NA(double tau, double r = 1.0, const TruncationOptions& opt = {}) {
  check_tau(tau);
  if (!(r > 0)) throw DomainError("radius must be positive");
  const double rho = tau == 0 ? std::numeric_limits<double>::infinity() : 1.0 / tau;
  OrderZeroFamily f;
  f.limit = 8.0 * std::log(2.0);  // λ± → ±2 at large |n|, four eigenvalues
  f.block_dimension = 4;
  f.trace = [r, rho](long n) {
    double t = 0;
    for (long m : {n, -n}) {
      const NABlock b = jump_NA_mode(m, r, rho);
      t += 2 * std::log(b.lambda_plus) + 2 * std::log(-b.lambda_minus);
    }
    return t;
  };
  f.tail_bound = [tau](long N) { return log_one_minus_tail(tau, N, 8.0); };
  return regdet_order_zero(f, opt);
}

/// log Det((c Q)) = log 2π for every c > 0, since ζ_Q(0) = 0.
inline RegDetResult regdet_reference_Q(double c = 1.0) {
  if (!(c > 0)) throw DomainError("scale of Q must be positive");
  RegDetResult r;
  // ζ_Q(s) = c^{−s}(1 + 2ζ(s))
  r.zeta_at_zero = 1 + 2 * ZetaConstants::zeta_at_zero;
  r.model_part = r.zeta_at_zero * std::log(c) - 2 * ZetaConstants::zeta_prime_at_zero();
  r.log_det = r.model_part;
  return r;
}

/// Schur splitting: log Det A = log det(A0 − B† A1⁻¹ B) + log Det A1, with A1
/// given at a finite truncation for the solve and log Det A1 supplied.
template <class Scalar>
struct SplitResult {
  double log_abs_det = 0;
  Scalar phase = Scalar(1);  ///< det(Schur) / |det(Schur)|
  double schur_rcond = 0;
  double a1_rcond = 0;
};

template <class Scalar>
SplitResult<Scalar> split_det(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a0,
                              const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& b,
                              const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a1, double log_det_a1,
                              double min_rcond = 1e-14) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a0.rows() != a0.cols() || a1.rows() != a1.cols() || b.rows() != a1.rows() || b.cols() != a0.rows())
    throw DomainError("split_det: inconsistent block shapes");
  SplitResult<Scalar> out;
  Mat schur = a0;
  if (a1.rows() > 0) {
    Eigen::PartialPivLU<Mat> lu(a1);
    out.a1_rcond = lu.rcond();
    if (!(out.a1_rcond > min_rcond)) throw SolverError("split_det: A1 is singular at this truncation", out.a1_rcond);
    schur -= b.adjoint() * lu.solve(b);
  } else {
    out.a1_rcond = 1;
  }
  if (schur.rows() == 0) {
    out.schur_rcond = 1;
    out.log_abs_det = log_det_a1;
    return out;
  }
  Eigen::PartialPivLU<Mat> lu(schur);
  out.schur_rcond = lu.rcond();
  if (!(out.schur_rcond > min_rcond)) throw SolverError("split_det: Schur complement is singular", out.schur_rcond);
  double log_abs = 0;
  Scalar phase(1);
  const Mat& lu_m = lu.matrixLU();
  for (Eigen::Index i = 0; i < lu_m.rows(); ++i) {
    const double mag = std::abs(lu_m(i, i));
    log_abs += std::log(mag);
    phase *= lu_m(i, i) / mag;
  }
  phase *= static_cast<double>(lu.permutationP().determinant());
  out.log_abs_det = log_abs + log_det_a1;
  out.phase = phase;
  return out;
}

struct DiskIdentityReport {
  double r = 0;
  double rho = 0;
  double log_det_N = 0;       ///< with the zero mode
  double log_det_star_NA = 0; ///< with the zero-mode scalar
  double product = 0;         ///< (4π/log ρ)(2πr) Det*_Q N_A / (Det N)²
  double residual = 0;        ///< 1 − product
  long truncation = 0;
  double tail_bound = 0;
};

inline DiskIdentityReport disk_identity(double r, double rho, const TruncationOptions& opt = {}) {
  if (!(r > 0)) throw DomainError("radius must be positive");
  check_rho(rho);
  const double tau = 1.0 / rho;
  const double L = std::log(rho);
  const RegDetResult nhat = det_prime_Nhat(tau, opt);
  const RegDetResult n_prime = scale_rule(nhat, 1.0 / (2 * std::numbers::pi * r));
  const RegDetResult na = detQ_prime_NA(tau, r, opt);

  DiskIdentityReport d;
  d.r = r;
  d.rho = rho;
  d.log_det_N = std::log(jump_N_zero_mode(r, rho)) + n_prime.log_det;
  d.log_det_star_NA = std::log(jump_NA_zero_mode(r, rho)) + na.log_det;
  const double log_product =
      std::log(4 * std::numbers::pi / L) + std::log(2 * std::numbers::pi * r) + d.log_det_star_NA - 2 * d.log_det_N;
  d.product = std::exp(log_product);
  d.residual = -std::expm1(log_product);
  d.truncation = std::max(nhat.truncation, na.truncation);
  d.tail_bound = nhat.tail_bound + na.tail_bound;
  return d;
}

/// d/dτ log Det′ N̂ = Σ_{n≥1} 4nτ^{2n−1}/(1 − τ^{2n}), mode by mode.
inline double trace_derivative_Nhat(double tau, double tolerance = 1e-15) {
  check_tau(tau);
  if (tau == 0) return 0.0;
  double sum = 0;
  for (long n = 1; n < 100000; ++n) {
    const double dn = static_cast<double>(n);
    const double term = 4 * dn * std::pow(tau, 2 * dn - 1) / one_minus_tau_power(tau, n);
    sum += term;
    if (term < tolerance * (1 - tau) && n > 2) break;
  }
  return sum;
}

/// log Det′ N̂(τ) rebuilt as log Det′ N̂(0) plus the integral of the trace
/// derivative over [0, τ] (adaptive Gauss–Kronrod).
inline double integrate_trace_derivative(double tau, double value_at_zero) {
  check_tau(tau);
  if (tau == 0) return value_at_zero;
  double error = 0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [](double t) { return trace_derivative_Nhat(t); }, 0.0, tau, 15, 1e-13, &error);
  return value_at_zero + integral;
}

}  // namespace dnglue
