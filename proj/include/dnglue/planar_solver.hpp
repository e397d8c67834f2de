#pragma once

// Harmonic functions on a disk of radius R with circular holes, expanded in
//   1, Re/Im (z/R)^m, and per hole log|z−a|, Re/Im (r/(z−a))^m   (m ≤ M),
// fitted to Dirichlet data by least-squares collocation. DN maps are
// assembled in the real orthonormal Fourier basis of each circle:
//   1/√(2πr), cos(nθ)/√(πr), sin(nθ)/√(πr),  n = 1..N.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dnglue/dn_fourier.hpp"
#include "dnglue/errors.hpp"
#include "dnglue/graph_core.hpp"
#include "dnglue/regdet.hpp"

namespace dnglue {

using Complex = std::complex<double>;

struct Circle {
  Complex center;
  double radius = 0;
};

/// Outer disk |z| < R, holes |z − a_i| < ε_i, interface circles |z − a_i| = ε0.
struct CircleDomain {
  double R = 1;
  std::vector<Circle> holes;
  double eps0 = 0;

  /// Holes disjoint and strictly inside the outer disk.
  void validate_holes() const {
    if (!(R > 0)) throw DomainError("outer radius must be positive");
    for (std::size_t i = 0; i < holes.size(); ++i) {
      const Circle& h = holes[i];
      if (!(h.radius > 0)) throw DomainError("hole radius must be positive");
      if (!(std::abs(h.center) + h.radius < R)) throw DomainError("hole " + std::to_string(i + 1) + " leaves the disk");
      for (std::size_t j = 0; j < i; ++j)
        if (!(std::abs(h.center - holes[j].center) > h.radius + holes[j].radius))
          throw DomainError("holes " + std::to_string(j + 1) + " and " + std::to_string(i + 1) + " overlap");
    }
  }

  /// Interface circles of radius ε0 around each hole, ε_i < ε0, inside the
  /// disk and ε0 < min gap / 2.
  void validate_interfaces() const {
    validate_holes();
    if (!(eps0 > 0)) throw DomainError("ε0 must be positive");
    for (std::size_t i = 0; i < holes.size(); ++i) {
      if (!(holes[i].radius < eps0)) throw DomainError("hole radius must be below ε0");
      if (!(std::abs(holes[i].center) + eps0 < R)) throw DomainError("interface circle leaves the disk");
      for (std::size_t j = 0; j < i; ++j)
        if (!(eps0 < 0.5 * std::abs(holes[i].center - holes[j].center)))
          throw DomainError("ε0 must be below half the distance between hole centers");
    }
  }

  std::vector<Circle> interfaces() const {
    std::vector<Circle> out;
    for (const Circle& h : holes) out.push_back({h.center, eps0});
    return out;
  }
};

inline int fourier_size(int N) { return 2 * N + 1; }

/// |n| of the k-th real Fourier basis function.
inline int fourier_mode(int k) { return (k + 1) / 2; }

inline void fourier_basis(int N, double theta, double r, double* out) {
  const double s0 = 1.0 / std::sqrt(2 * std::numbers::pi * r);
  const double s = 1.0 / std::sqrt(std::numbers::pi * r);
  out[0] = s0;
  for (int n = 1; n <= N; ++n) {
    out[2 * n - 1] = s * std::cos(n * theta);
    out[2 * n] = s * std::sin(n * theta);
  }
}

/// Least-squares multipole solver. Circle 0 is the outer boundary; circle
/// i ≥ 1 is the boundary of hole i.
class MultipoleSolver {
 public:
  MultipoleSolver(double R, std::vector<Circle> holes, int M, int points, double min_pivot_ratio = 1e-13)
      : R_(R), holes_(std::move(holes)), M_(M), P_(points) {
    if (M < 0 || points < 4 * M + 4) throw DomainError("need at least 4M + 4 collocation points per circle");
    circles_.push_back({Complex(0, 0), R_});
    for (const Circle& h : holes_) circles_.push_back(h);

    const int rows = static_cast<int>(circles_.size()) * P_;
    A_.resize(rows, basis_size());
    for (int c = 0; c < circle_count(); ++c)
      for (int k = 0; k < P_; ++k) A_.row(c * P_ + k) = basis_values(point(c, theta(k)));
    qr_.compute(A_);
    const auto& r = qr_.matrixQR();
    const double top = std::abs(r(0, 0));
    double smallest = top;
    for (Eigen::Index i = 0; i < std::min(r.rows(), r.cols()); ++i) smallest = std::min(smallest, std::abs(r(i, i)));
    pivot_ratio_ = top > 0 ? smallest / top : 0;
    if (!(pivot_ratio_ > min_pivot_ratio))
      throw SolverError("collocation matrix is rank deficient (holes too close for M = " + std::to_string(M) + ")",
                        pivot_ratio_);
  }

  int basis_size() const { return 1 + 2 * M_ + static_cast<int>(holes_.size()) * (2 * M_ + 1); }
  int circle_count() const { return static_cast<int>(circles_.size()); }
  int points() const { return P_; }
  const Circle& circle(int c) const { return circles_[static_cast<std::size_t>(c)]; }
  double pivot_ratio() const { return pivot_ratio_; }

  double theta(double k) const { return 2 * std::numbers::pi * k / P_; }
  Complex point(int c, double angle) const { return circle(c).center + circle(c).radius * std::polar(1.0, angle); }

  /// Unit normal pointing out of the region.
  Complex normal(int c, double angle) const { return (c == 0 ? 1.0 : -1.0) * std::polar(1.0, angle); }

  Eigen::RowVectorXd basis_values(Complex z) const {
    Eigen::RowVectorXd v(basis_size());
    int j = 0;
    v(j++) = 1;
    Complex p = 1;
    for (int m = 1; m <= M_; ++m) {
      p *= z / R_;
      v(j++) = p.real();
      v(j++) = p.imag();
    }
    for (const Circle& h : holes_) {
      const Complex w = z - h.center;
      v(j++) = std::log(std::abs(w));
      Complex q = 1;
      for (int m = 1; m <= M_; ++m) {
        q *= h.radius / w;
        v(j++) = q.real();
        v(j++) = q.imag();
      }
    }
    return v;
  }

  /// ∂_ν of each basis function: Re(f′ν) for Re f, Im(f′ν) for Im f.
  Eigen::RowVectorXd basis_normal_derivatives(Complex z, Complex nu) const {
    Eigen::RowVectorXd v(basis_size());
    int j = 0;
    v(j++) = 0;
    Complex p = 1;  // (z/R)^{m−1}
    for (int m = 1; m <= M_; ++m) {
      const Complex d = static_cast<double>(m) * p / R_ * nu;
      v(j++) = d.real();
      v(j++) = d.imag();
      p *= z / R_;
    }
    for (const Circle& h : holes_) {
      const Complex w = z - h.center;
      v(j++) = (nu / w).real();
      Complex q = 1;  // (r/w)^m
      for (int m = 1; m <= M_; ++m) {
        q *= h.radius / w;
        const Complex d = -static_cast<double>(m) * q / w * nu;
        v(j++) = d.real();
        v(j++) = d.imag();
      }
    }
    return v;
  }

  /// Coefficients for boundary values stacked circle by circle (c·P + k).
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return qr_.solve(rhs); }

  double evaluate(const Eigen::VectorXd& coefficients, Complex z) const { return basis_values(z).dot(coefficients); }

 private:
  double R_;
  std::vector<Circle> holes_;
  int M_;
  int P_;
  std::vector<Circle> circles_;
  Eigen::MatrixXd A_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  double pivot_ratio_ = 0;
};

inline int default_points(int N, int M) { return std::max(4 * fourier_size(N), 4 * M + 4); }

struct HarmonicSolution {
  Eigen::VectorXd coefficients;
  double max_residual = 0;  ///< off-grid, at half-step points
};

/// Dirichlet problem on the disk R minus the holes (radii ε_i). data[c]
/// holds real Fourier coefficients (length 2N+1) on circle c, 0 = outer.
inline HarmonicSolution harmonic_solve(const CircleDomain& domain, const std::vector<Eigen::VectorXd>& data, int M,
                                       double tolerance = 1e-8) {
  domain.validate_holes();
  if (data.size() != domain.holes.size() + 1) throw DomainError("need boundary data for every circle");
  const int len = static_cast<int>(data[0].size());
  if (len % 2 == 0) throw DomainError("Fourier data must have odd length 2N+1");
  const int N = (len - 1) / 2;
  for (const auto& d : data)
    if (d.size() != len) throw DomainError("all circles need the same mode cutoff");

  const MultipoleSolver solver(domain.R, domain.holes, M, default_points(N, M));
  const int P = solver.points();
  std::vector<double> phi(static_cast<std::size_t>(len));
  auto boundary_value = [&](int c, double angle) {
    fourier_basis(N, angle, solver.circle(c).radius, phi.data());
    double s = 0;
    for (int j = 0; j < len; ++j) s += phi[static_cast<std::size_t>(j)] * data[static_cast<std::size_t>(c)](j);
    return s;
  };
  Eigen::VectorXd rhs(solver.circle_count() * P);
  for (int c = 0; c < solver.circle_count(); ++c)
    for (int k = 0; k < P; ++k) rhs(c * P + k) = boundary_value(c, solver.theta(k));

  HarmonicSolution out;
  out.coefficients = solver.solve(rhs);
  for (int c = 0; c < solver.circle_count(); ++c)
    for (int k = 0; k < P; ++k) {
      const double angle = solver.theta(k + 0.5);
      out.max_residual = std::max(out.max_residual, std::abs(solver.evaluate(out.coefficients, solver.point(c, angle)) -
                                                             boundary_value(c, angle)));
    }
  if (!(out.max_residual <= tolerance))
    throw SolverError("boundary residual above tolerance; increase M", out.max_residual);
  return out;
}

/// Harmonic extension of concentric data as a callable, for checks.
inline double evaluate_solution(const CircleDomain& domain, const HarmonicSolution& s, int M, Complex z) {
  const MultipoleSolver solver(domain.R, domain.holes, M, 4 * M + 4);
  return solver.evaluate(s.coefficients, z);
}

namespace detail {

struct DnBlock {
  Eigen::MatrixXd matrix;  ///< rows/cols: active circle × Fourier index
  double max_residual = 0;
};

/// DN map on the active circles with Dirichlet 0 on the others.
inline DnBlock assemble_dn(const MultipoleSolver& solver, const std::vector<int>& active, int N) {
  const int P = solver.points();
  const int F = fourier_size(N);
  const int cols = static_cast<int>(active.size()) * F;
  std::vector<double> phi(static_cast<std::size_t>(F));

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(solver.circle_count() * P, cols);
  for (std::size_t a = 0; a < active.size(); ++a) {
    const int c = active[a];
    for (int k = 0; k < P; ++k) {
      fourier_basis(N, solver.theta(k), solver.circle(c).radius, phi.data());
      for (int j = 0; j < F; ++j) rhs(c * P + k, static_cast<int>(a) * F + j) = phi[static_cast<std::size_t>(j)];
    }
  }
  const Eigen::MatrixXd coeffs = solver.solve(rhs);

  DnBlock out;
  // off-grid residual relative to the data scale 1/√(π r)
  for (int c = 0; c < solver.circle_count(); ++c) {
    Eigen::MatrixXd values(P, solver.basis_size());
    for (int k = 0; k < P; ++k) values.row(k) = solver.basis_values(solver.point(c, solver.theta(k + 0.5)));
    Eigen::MatrixXd got = values * coeffs;
    const auto it = std::find(active.begin(), active.end(), c);
    if (it != active.end()) {
      const int a = static_cast<int>(it - active.begin());
      for (int k = 0; k < P; ++k) {
        fourier_basis(N, solver.theta(k + 0.5), solver.circle(c).radius, phi.data());
        for (int j = 0; j < F; ++j) got(k, a * F + j) -= phi[static_cast<std::size_t>(j)];
      }
    }
    const double scale = std::sqrt(std::numbers::pi * solver.circle(c).radius);
    out.max_residual = std::max(out.max_residual, got.cwiseAbs().maxCoeff() * scale);
  }

  out.matrix.resize(cols, cols);
  for (std::size_t a = 0; a < active.size(); ++a) {
    const int c = active[a];
    const double r = solver.circle(c).radius;
    Eigen::MatrixXd deriv(P, solver.basis_size());
    Eigen::MatrixXd test(F, P);
    for (int k = 0; k < P; ++k) {
      const double angle = solver.theta(k);
      deriv.row(k) = solver.basis_normal_derivatives(solver.point(c, angle), solver.normal(c, angle));
      fourier_basis(N, angle, r, phi.data());
      for (int j = 0; j < F; ++j) test(j, k) = phi[static_cast<std::size_t>(j)] * 2 * std::numbers::pi * r / P;
    }
    out.matrix.middleRows(static_cast<int>(a) * F, F) = test * (deriv * coeffs);
  }
  return out;
}

inline double asymmetry_defect(const Eigen::MatrixXd& scaled) {
  const double top = scaled.cwiseAbs().maxCoeff();
  return top > 0 ? (scaled - scaled.transpose()).cwiseAbs().maxCoeff() / top : 0.0;
}

}  // namespace detail

struct JumpMatrix {
  Eigen::MatrixXd matrix;  ///< symmetrized
  Eigen::MatrixXd raw;
  Eigen::VectorXd model;   ///< (2/ε0)·q(n) per row
  int modes = 0;           ///< N
  int circles = 0;
  double eps0 = 0;
  double asymmetry_defect = 0;
  double max_residual = 0;
};

struct JumpOptions {
  int N = 12;
  int M = 0;                      ///< 0: 4N + 16
  double defect_tolerance = 1e-8;
  double residual_tolerance = 1e-8;
  bool limit = false;             ///< replace each annulus by the disk of radius ε0
};

/// Neumann jump across the interface circles: DN of the outer region
/// (Dirichlet 0 on |z| = R) plus the closed-form annulus DN of each collar.
inline JumpMatrix assemble_jump_N(const CircleDomain& domain, const JumpOptions& opt = {}) {
  domain.validate_interfaces();
  if (domain.holes.empty()) throw DomainError("jump operator needs at least one interface circle");
  const int N = opt.N;
  const int M = opt.M > 0 ? opt.M : 4 * N + 16;
  const MultipoleSolver solver(domain.R, domain.interfaces(), M, default_points(N, M));
  std::vector<int> active;
  for (int c = 1; c < solver.circle_count(); ++c) active.push_back(c);
  const detail::DnBlock dn = detail::assemble_dn(solver, active, N);
  if (!(dn.max_residual <= opt.residual_tolerance))
    throw SolverError("harmonic extension residual above tolerance; increase M", dn.max_residual);

  JumpMatrix j;
  j.modes = N;
  j.circles = static_cast<int>(domain.holes.size());
  j.eps0 = domain.eps0;
  j.max_residual = dn.max_residual;
  j.raw = dn.matrix;
  const int F = fourier_size(N);
  j.model.resize(j.raw.rows());
  for (int i = 0; i < j.circles; ++i) {
    const AnnulusGeometry collar(domain.holes[static_cast<std::size_t>(i)].radius, domain.eps0);
    for (int k = 0; k < F; ++k) {
      const long n = fourier_mode(k);
      const double annulus = opt.limit ? static_cast<double>(n) / domain.eps0 : dn_annulus_mode(n, collar);
      j.raw(i * F + k, i * F + k) += annulus;
      j.model(i * F + k) = 2.0 / domain.eps0 * q_mode(n);
    }
  }
  const Eigen::VectorXd s = j.model.cwiseSqrt().cwiseInverse();
  j.asymmetry_defect = detail::asymmetry_defect(s.asDiagonal() * j.raw * s.asDiagonal());
  if (!(j.asymmetry_defect <= opt.defect_tolerance))
    throw SolverError("jump matrix asymmetry above tolerance", j.asymmetry_defect);
  j.matrix = 0.5 * (j.raw + j.raw.transpose());
  return j;
}

inline JumpMatrix assemble_limit_jump_N(const CircleDomain& domain, JumpOptions opt = {}) {
  opt.limit = true;
  return assemble_jump_N(domain, opt);
}

/// log Det K = log det(M^{−1/2} K M^{−1/2}) + log Det M for a diagonal model
/// M with known regularized determinant. top_deviation is the largest
/// |(M^{−1/2}KM^{−1/2})_ii − 1| over the highest retained modes.
inline RegDetResult regdet_relative(const Eigen::MatrixXd& k, const Eigen::VectorXd& model, double model_log_det,
                                    const std::vector<int>& top_rows, double mismatch_tolerance = 1e-6) {
  if (k.rows() != k.cols() || k.rows() != model.size()) throw DomainError("regdet_relative: shape mismatch");
  if ((model.array() <= 0).any()) throw DomainError("regdet_relative: model must be positive");
  const Eigen::VectorXd s = model.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = s.asDiagonal() * k * s.asDiagonal();
  double deviation = 0;
  for (int row : top_rows) deviation = std::max(deviation, std::abs(scaled(row, row) - 1));
  if (!(deviation <= mismatch_tolerance))
    throw SolverError("model does not match the top modes; raise N or check the model", deviation);
  const Eigen::LLT<Eigen::MatrixXd> llt(scaled);
  if (llt.info() != Eigen::Success) throw SolverError("relative matrix is not positive definite");
  RegDetResult r;
  r.model_part = model_log_det;
  r.tail_part = 2 * llt.matrixLLT().diagonal().array().log().sum();
  r.log_det = r.model_part + r.tail_part;
  r.zeta_at_zero = 0;
  r.truncation = static_cast<long>(k.rows());
  r.tail_bound = deviation;
  return r;
}

/// Relative determinant of a jump matrix against (2/ε0)·Q on each circle,
/// whose regularized log-determinant is log 2π per circle.
inline RegDetResult regdet_relative(const JumpMatrix& jump, double mismatch_tolerance = 1e-6) {
  const int F = fourier_size(jump.modes);
  std::vector<int> top;
  for (int i = 0; i < jump.circles; ++i) {
    top.push_back(i * F + F - 2);
    top.push_back(i * F + F - 1);
  }
  const double model_log_det = jump.circles * regdet_reference_Q(2.0 / jump.eps0).log_det;
  RegDetResult r = regdet_relative(jump.matrix, jump.model, model_log_det, top, mismatch_tolerance);
  r.truncation = jump.modes;
  return r;
}

/// Same relative determinant taken on the unsymmetrized matrix (LU, log |det|).
inline double regdet_relative_raw(const JumpMatrix& jump) {
  const Eigen::VectorXd s = jump.model.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = s.asDiagonal() * jump.raw * s.asDiagonal();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(scaled);
  return jump.circles * regdet_reference_Q(2.0 / jump.eps0).log_det +
         lu.matrixLU().diagonal().cwiseAbs().array().log().sum();
}

/// Closed-form log Det of the jump operator for a single hole centred at the
/// origin: per mode (|n|/ε0)[coth(|n| log(ε0/ε)) + coth(|n| log(R/ε0))].
inline RegDetResult concentric_jump_log_det(double R, double eps, double eps0, bool limit = false,
                                            const TruncationOptions& opt = {}) {
  const AnnulusGeometry inner(eps, eps0);
  const double log_outer = std::log(R / eps0);
  if (!(log_outer > 0)) throw DomainError("interface circle must lie inside the disk");
  // DN of ε0 < |z| < R on its inner circle, Dirichlet on |z| = R
  auto outer_dn = [&](long n) {
    return n == 0 ? 1.0 / (eps0 * log_outer) : static_cast<double>(n) / eps0 / std::tanh(static_cast<double>(n) * log_outer);
  };
  auto inner_dn = [&](long n) { return limit ? static_cast<double>(n) / eps0 : dn_annulus_mode(n, inner); };
  const double tau_inner = limit ? 0.0 : eps / eps0;
  const double tau_outer = eps0 / R;

  DiagonalFamily f;
  f.symbol_constant = 2.0 / eps0;
  f.log_one_plus = [&](long n) { return 2.0 * std::log((outer_dn(n) + inner_dn(n)) * eps0 / (2.0 * static_cast<double>(n))); };
  // coth(x) − 1 ≤ 2e^{−2x}/(1 − e^{−2x}); half of the sum of both deviations
  f.tail_bound = [&](long N) { return log_one_minus_tail(tau_inner, N, 2.0) + log_one_minus_tail(tau_outer, N, 2.0); };
  RegDetResult r = regdet_diagonal(f, opt);
  const double zero = outer_dn(0) + (limit ? 0.0 : inner_dn(0));
  r.log_det += std::log(zero);
  r.model_part += std::log(zero);
  return r;
}

struct DnInvariantResult {
  double log_invariant = 0;  ///< log I(M)
  double invariant = 0;
  double log_det_star = 0;
  double boundary_length = 0;
  double asymmetry_defect = 0;
  double max_residual = 0;
  int modes = 0;
};

/// I(M) = Det*(DN(M)) / ℓ(∂M) on the disk R minus the holes (radii ε_i).
/// Det* = Det(DN + c·P_u)/c with u the normalized constant; DN is measured
/// against (1/r_c)·Q on each boundary circle.
inline DnInvariantResult dn_invariant(const CircleDomain& domain, int N = 12, int M = 0, double defect_tolerance = 1e-8,
                                      double residual_tolerance = 1e-8) {
  domain.validate_holes();
  if (M <= 0) M = 4 * N + 16;
  const MultipoleSolver solver(domain.R, domain.holes, M, default_points(N, M));
  const int F = fourier_size(N);
  const int C = solver.circle_count();
  std::vector<int> active;
  for (int c = 0; c < C; ++c) active.push_back(c);
  const detail::DnBlock dn = detail::assemble_dn(solver, active, N);
  if (!(dn.max_residual <= residual_tolerance))
    throw SolverError("harmonic extension residual above tolerance; increase M", dn.max_residual);

  DnInvariantResult out;
  out.modes = N;
  out.max_residual = dn.max_residual;
  Eigen::VectorXd model(C * F);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(C * F);
  std::vector<int> top;
  for (int c = 0; c < C; ++c) {
    const double r = solver.circle(c).radius;
    out.boundary_length += 2 * std::numbers::pi * r;
    for (int k = 0; k < F; ++k) model(c * F + k) = q_mode(fourier_mode(k)) / r;
    u(c * F) = std::sqrt(2 * std::numbers::pi * r);
    top.push_back(c * F + F - 2);
    top.push_back(c * F + F - 1);
  }
  u /= std::sqrt(out.boundary_length);

  const Eigen::VectorXd s = model.cwiseSqrt().cwiseInverse();
  out.asymmetry_defect = detail::asymmetry_defect(s.asDiagonal() * dn.matrix * s.asDiagonal());
  if (!(out.asymmetry_defect <= defect_tolerance))
    throw SolverError("DN matrix asymmetry above tolerance", out.asymmetry_defect);
  const double c = 1.0 / domain.R;
  const Eigen::MatrixXd k = 0.5 * (dn.matrix + dn.matrix.transpose()) + c * u * u.transpose();
  const double model_log_det = C * regdet_reference_Q(1.0).log_det;
  const RegDetResult det = regdet_relative(k, model, model_log_det, top, 1e-4);
  out.log_det_star = det.log_det - std::log(c);
  out.log_invariant = out.log_det_star - std::log(out.boundary_length);
  out.invariant = std::exp(out.log_invariant);
  return out;
}

struct PlanarRow {
  double eps = 0;
  double log_det_N = 0;      ///< jump operator at this ε
  double log_det_N_raw = 0;  ///< before symmetrization
  double diff = std::numeric_limits<double>::quiet_NaN();  ///< from the previous row
  double invariant = 0;      ///< I(M(ε)), direct
  double estimate = 0;       ///< I · Π log(R/ε_i)
  double exact = std::numeric_limits<double>::quiet_NaN();  ///< closed form when available
  double asymmetry_defect = 0;
};

struct PlanarReport {
  std::vector<PlanarRow> rows;
  int holes = 0;
  bool concentric = false;
  double target = 0;            ///< (2π)^n
  double log_det_N_limit = std::numeric_limits<double>::quiet_NaN();
  double graph_factor = 0;      ///< det* of the star graph with weights 2πε0
  double concentric_oracle_error = std::numeric_limits<double>::quiet_NaN();
  double disk_identity_residual = std::numeric_limits<double>::quiet_NaN();
  bool cauchy = false;          ///< successive |diff| strictly decreasing
};

struct PlanarOptions {
  int N = 12;
  int M = 0;
};

/// Shrinks every hole to radius ε along the schedule and records the jump
/// determinant and the invariant. With no holes, reports the disk: I = 1
/// and the disk identity for the circle of radius ε0.
inline PlanarReport planar_asymptotics_experiment(double R, const std::vector<Complex>& centers,
                                                  const std::vector<double>& eps_schedule, double eps0,
                                                  const PlanarOptions& opt = {}) {
  PlanarReport report;
  report.holes = static_cast<int>(centers.size());
  report.target = std::pow(2 * std::numbers::pi, report.holes);

  WeightedGraph star(report.holes + 1);
  const Rational length(2 * std::numbers::pi * eps0);  // exact binary value of the double
  for (int i = 1; i <= report.holes; ++i) star.add_edge(0, i, length);
  report.graph_factor = to_double(det_star(star));

  if (centers.empty()) {
    CircleDomain disk{R, {}, eps0};
    const DnInvariantResult inv = dn_invariant(disk, opt.N, opt.M);
    PlanarRow row;
    row.eps = std::numeric_limits<double>::quiet_NaN();
    row.log_det_N = row.log_det_N_raw = std::numeric_limits<double>::quiet_NaN();
    row.invariant = inv.invariant;
    row.estimate = inv.invariant;
    row.exact = 1.0;
    row.asymmetry_defect = inv.asymmetry_defect;
    report.rows.push_back(row);
    report.concentric = true;
    if (eps0 > 0 && eps0 < R) report.disk_identity_residual = disk_identity(eps0, R / eps0).residual;
    report.cauchy = true;
    return report;
  }

  for (std::size_t i = 1; i < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] < eps_schedule[i - 1])) throw DomainError("ε schedule must be decreasing");
  report.concentric = centers.size() == 1 && centers[0] == Complex(0, 0);

  JumpOptions jopt;
  jopt.N = opt.N;
  jopt.M = opt.M;
  for (double eps : eps_schedule) {
    CircleDomain d{R, {}, eps0};
    for (Complex a : centers) d.holes.push_back({a, eps});
    const JumpMatrix jump = assemble_jump_N(d, jopt);
    PlanarRow row;
    row.eps = eps;
    row.log_det_N = regdet_relative(jump).log_det;
    row.log_det_N_raw = regdet_relative_raw(jump);
    row.asymmetry_defect = jump.asymmetry_defect;
    const DnInvariantResult inv = dn_invariant(d, opt.N, opt.M);
    row.invariant = inv.invariant;
    row.estimate = inv.invariant * std::pow(std::log(R / eps), report.holes);
    if (report.concentric) {
      row.exact = 2 * std::numbers::pi;
      const double oracle = concentric_jump_log_det(R, eps, eps0).log_det;
      const double err = std::abs(oracle - row.log_det_N);
      report.concentric_oracle_error = std::isnan(report.concentric_oracle_error) ? err : std::max(report.concentric_oracle_error, err);
    }
    if (!report.rows.empty()) row.diff = row.log_det_N - report.rows.back().log_det_N;
    report.rows.push_back(row);
  }
  CircleDomain limit{R, {}, eps0};
  for (Complex a : centers) limit.holes.push_back({a, eps0 / 2});
  report.log_det_N_limit = regdet_relative(assemble_limit_jump_N(limit, jopt)).log_det;

  report.cauchy = true;
  for (std::size_t i = 2; i < report.rows.size(); ++i)
    if (!(std::abs(report.rows[i].diff) < std::abs(report.rows[i - 1].diff))) report.cauchy = false;
  return report;
}

}  // namespace dnglue
