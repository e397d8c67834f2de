#pragma once

// Fourier-mode models on disks and annuli. Mode n of a circle of radius r is
// e^{inθ}; the operators below are diagonal (or 2×2 block diagonal) in n.
//
// τ = 1/ρ. ρ = ∞ (τ = 0) is accepted wherever the formulas have a limit.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "dnglue/errors.hpp"

namespace dnglue {

inline void check_rho(double rho) {
  if (!(rho > 1)) throw DomainError("modulus ρ must exceed 1, got " + std::to_string(rho));
}

inline void check_tau(double tau) {
  if (!(tau >= 0 && tau < 1)) throw DomainError("τ must lie in [0, 1), got " + std::to_string(tau));
}

/// 1 − τ^{2|n|} without cancellation for τ near 1.
inline double one_minus_tau_power(double tau, long n) {
  if (tau == 0) return 1.0;
  return -std::expm1(2.0 * static_cast<double>(std::labs(n)) * std::log(tau));
}

/// a_n = 2 / (1 − τ^{2|n|}).
inline double coefficient_a(long n, double tau) { return 2.0 / one_minus_tau_power(tau, n); }

/// Annulus ε < |z| < ε0.
struct AnnulusGeometry {
  double eps = 0;
  double eps0 = 0;

  AnnulusGeometry(double inner, double outer) : eps(inner), eps0(outer) {
    if (!(inner > 0) || !(outer > inner) || !std::isfinite(outer))
      throw DomainError("annulus needs 0 < ε < ε0 < ∞");
  }
  static AnnulusGeometry from_rho(double rho, double outer = 1.0) {
    check_rho(rho);
    return AnnulusGeometry(outer / rho, outer);
  }

  double rho() const { return eps0 / eps; }
  double tau() const { return eps / eps0; }
  double log_rho() const { return std::log(eps0) - std::log(eps); }
  double lambda() const { return 1.0 / log_rho(); }
};

/// DN map of the annulus on the outer circle, Dirichlet 0 on the inner one:
/// (|n|/ε0)(1 + 2ρ^{−2|n|}/(1 − ρ^{−2|n|})); on constants 1/(ε0 log ρ).
inline double dn_annulus_mode(long n, const AnnulusGeometry& a) {
  if (n == 0) return 1.0 / (a.eps0 * a.log_rho());
  const double tau = a.tau();
  const double q = std::pow(tau, 2.0 * static_cast<double>(std::labs(n)));
  return static_cast<double>(std::labs(n)) / a.eps0 * (1.0 + 2.0 * q / one_minus_tau_power(tau, n));
}

/// Neumann jump across the circle of radius r cutting the annulus of
/// modulus ρ symmetrically: |n| a_n / r.
inline double jump_N_mode(long n, double r, double rho) {
  if (n == 0) throw DomainError("mode 0 of N is served by jump_N_zero_mode");
  if (!(r > 0)) throw DomainError("radius must be positive");
  if (!std::isinf(rho)) check_rho(rho);
  return static_cast<double>(std::labs(n)) * coefficient_a(n, 1.0 / rho) / r;
}

/// Eigenvalue of N on constants, 1/(r log ρ).
inline double jump_N_zero_mode(double r, double rho) {
  if (!(r > 0)) throw DomainError("radius must be positive");
  check_rho(rho);
  return 1.0 / (r * std::log(rho));
}

struct NABlock {
  Eigen::Matrix2cd matrix;
  double a = 0;             ///< a_n
  double trace = 0;         ///< −2 r a_n / |n|
  double lambda_plus = 0;   ///< > 0
  double lambda_minus = 0;  ///< < 0, λ+ λ− = −a_n²
};

/// a_n [[0, −iσ], [iσ, −2r/|n|]] with σ = sign n. Eigenvalues from the
/// characteristic polynomial λ² − tλ − a_n², the smaller-magnitude root
/// obtained through the product to avoid cancellation.
inline NABlock jump_NA_mode(long n, double r, double rho) {
  if (n == 0) throw DomainError("mode 0 of N_A is served by jump_NA_zero_mode");
  if (!(r > 0)) throw DomainError("radius must be positive");
  if (!std::isinf(rho)) check_rho(rho);
  using namespace std::complex_literals;
  NABlock b;
  const double absn = static_cast<double>(std::labs(n));
  const double sigma = n > 0 ? 1.0 : -1.0;
  b.a = coefficient_a(n, 1.0 / rho);
  b.matrix << 0.0, -1i * sigma, 1i * sigma, -2.0 * r / absn;
  b.matrix *= b.a;
  b.trace = -2.0 * r * b.a / absn;
  const double half = b.trace / 2;
  const double root = std::hypot(half, b.a);
  b.lambda_minus = half - root;  // t < 0, no cancellation
  b.lambda_plus = -b.a * b.a / b.lambda_minus;
  return b;
}

/// Scalar of N_A on constants, 1/(2 r log ρ). Only this scalar is modeled.
inline double jump_NA_zero_mode(double r, double rho) {
  if (!(r > 0)) throw DomainError("radius must be positive");
  check_rho(rho);
  return 1.0 / (2.0 * r * std::log(rho));
}

/// Remainder of an annulus collar at mode n, acting on (inner, outer)
/// circle data; the off-diagonal entry couples n on one circle to −n on the
/// other. Same-circle |n|ρ^{−2|n|}/(1−ρ^{−2|n|}), cross −2|n|ρ^{−|n|}/(1−ρ^{−2|n|}).
inline Eigen::Matrix2d remainder_R_mode(long n, double rho) {
  if (n == 0) throw DomainError("remainder R is defined for n ≠ 0");
  if (!std::isinf(rho)) check_rho(rho);
  const double tau = 1.0 / rho;
  const double absn = static_cast<double>(std::labs(n));
  const double den = one_minus_tau_power(tau, n);
  const double same = absn * std::pow(tau, 2 * absn) / den;
  const double cross = -2.0 * absn * std::pow(tau, absn) / den;
  Eigen::Matrix2d m;
  m << same, cross, cross, same;
  return m;
}

/// Bound on Σ_{|n|>N} ‖R(n)‖₂, from same + |cross| ≤ 3|n|τ^{|n|}/(1 − τ²).
inline double remainder_R_tail_bound(long N, double rho) {
  check_rho(rho);
  const double x = 1.0 / rho;
  const double dn = static_cast<double>(N);
  const double series = std::pow(x, dn + 1) * ((dn + 1) - dn * x) / ((1 - x) * (1 - x));  // Σ_{n>N} n xⁿ
  return 2.0 * 3.0 / (1.0 - x * x) * series;
}

/// Reference operator Q: |n| on mode n ≠ 0 and 1 on constants.
inline double q_mode(long n) { return n == 0 ? 1.0 : static_cast<double>(std::labs(n)); }

struct CollarLengths {
  double lambda = 0;        ///< 1/log ρ
  double length_estimate = 0;  ///< 2π²/log ρ
};

inline CollarLengths collar_length_comparison(double rho) {
  check_rho(rho);
  const double l = std::log(rho);
  return {1.0 / l, 2.0 * std::numbers::pi * std::numbers::pi / l};
}

/// Mode-indexed operator family: block(n) for n ≠ 0, an optional zero-mode
/// scalar, and a model c|n|^order that the blocks approach. The family never
/// truncates; tail_bound(N) bounds Σ_{|n|>N} of the deviation from the model.
template <int Dim>
struct ModeBlockFamily {
  using Block = Eigen::Matrix<std::complex<double>, Dim, Dim>;
  std::string name;
  std::function<Block(long)> block;
  std::optional<double> zero_mode;
  double symbol_constant = 0;
  int order = 1;
  std::function<double(long)> tail_bound;
};

inline ModeBlockFamily<1> jump_N_family(double r, double rho) {
  const double tau = std::isinf(rho) ? 0.0 : 1.0 / rho;
  ModeBlockFamily<1> f;
  f.name = "N";
  f.block = [r, rho](long n) { return ModeBlockFamily<1>::Block::Constant(jump_N_mode(n, r, rho)); };
  if (!std::isinf(rho)) f.zero_mode = jump_N_zero_mode(r, rho);
  f.symbol_constant = 2.0 / r;
  f.order = 1;
  // relative deviation 1/(1−τ^{2n}) − 1 summed over ±n
  f.tail_bound = [tau](long N) {
    if (tau == 0) return 0.0;
    const double q = std::pow(tau, 2.0 * static_cast<double>(N + 1));
    return 2.0 * q / ((1 - tau * tau) * (1 - q));
  };
  return f;
}

inline ModeBlockFamily<2> jump_NA_family(double r, double rho) {
  const double tau = std::isinf(rho) ? 0.0 : 1.0 / rho;
  ModeBlockFamily<2> f;
  f.name = "N_A";
  f.block = [r, rho](long n) { return ModeBlockFamily<2>::Block(jump_NA_mode(n, r, rho).matrix); };
  if (!std::isinf(rho)) f.zero_mode = jump_NA_zero_mode(r, rho);
  f.symbol_constant = 2.0;
  f.order = 0;
  f.tail_bound = [tau](long N) {
    if (tau == 0) return 0.0;
    const double q = std::pow(tau, 2.0 * static_cast<double>(N + 1));
    return 8.0 * q / ((1 - tau * tau) * (1 - q));
  };
  return f;
}

inline ModeBlockFamily<2> remainder_R_family(double rho) {
  ModeBlockFamily<2> f;
  f.name = "R";
  f.block = [rho](long n) { return ModeBlockFamily<2>::Block(remainder_R_mode(n, rho).cast<std::complex<double>>()); };
  f.symbol_constant = 0;
  f.order = 1;
  f.tail_bound = [rho](long N) { return remainder_R_tail_bound(N, rho); };
  return f;
}

inline ModeBlockFamily<1> reference_Q_family(double c = 1.0) {
  if (!(c > 0)) throw DomainError("scale of Q must be positive");
  ModeBlockFamily<1> f;
  f.name = "Q";
  f.block = [c](long n) { return ModeBlockFamily<1>::Block::Constant(c * q_mode(n)); };
  f.zero_mode = c;
  f.symbol_constant = c;
  f.order = 1;
  f.tail_bound = [](long) { return 0.0; };
  return f;
}

}  // namespace dnglue
