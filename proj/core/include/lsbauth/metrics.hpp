#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsbauth/ellipsoid.hpp"
#include "lsbauth/model.hpp"
#include "lsbauth/numfmt.hpp"

namespace lsbauth {

/// A - BK; throws ModelError unless it is Schur.
Eigen::MatrixXd closed_loop(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            const Eigen::MatrixXd& K);

/// ē = 2^-(m+1) + 2^-(m-L) - 2^-m: rounding plus L overwritten fraction bits.
double error_bound_fixed(int m, int L);
/// Relative floating-point counterpart, same expression.
double gamma_e(int m, int L);

/// Error-channel input matrix [BK, B_w] and the matching per-input bounds.
Eigen::MatrixXd disturbance_matrix(const ClosedLoopModel& model);
std::vector<double> disturbance_bounds(const ClosedLoopModel& model, double e_bound);

/// Invariant ellipsoid of x+ = A_cl x + BK e + B_w w, |e_i| <= ē, |w_i| <= ū_w.
Ellipsoid fixed_point_ellipsoid(const ClosedLoopModel& model, double e_bound,
                                const EllipsoidOptions& opts = {});

/// Volume of the unit n-ball, π^(n/2) / Γ(n/2 + 1).
double unit_ball_volume(int n);

/// V(n) / sqrt(det P · det Q).
double rho_fixed(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q);

/// Largest |x_i| over the ellipsoid: sqrt([P^-1]_ii). Component is 0-based.
double worst_component(const Eigen::MatrixXd& P, Eigen::Index i = 0);
inline double worst_x1(const Eigen::MatrixXd& P) { return worst_component(P, 0); }

struct L1Norm {
  double value = 0.0;       // truncated sum (a lower bound)
  double tail_bound = 0.0;  // value <= true norm <= value + tail_bound
  long horizon = 0;         // impulse-response terms summed
};

/// ℓ∞-induced gain of x+ = A x + B u, y = C x + D u: the maximum over output
/// rows of the summed absolute impulse response. Throws DivergenceError for
/// non-Schur A.
L1Norm l1_norm(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
               const Eigen::MatrixXd& D = {}, double rel_tol = 1e-9);

struct NormBundle {
  double gamma_E = 0.0;  // ‖E(z)‖₁, E = (zI - A_cl)^-1 BK
  double gamma_W = 0.0;  // ‖W(z)‖₁, W = (zI - A_cl)^-1 B_w
  double qnorm = 0.0;    // induced ∞-norm of Q
  double tail = 0.0;     // larger of the two truncation bounds
};

NormBundle norm_bundle(const ClosedLoopModel& model);

/// qnorm·γ_W / (1 - γ_e·γ_E). Throws DivergenceError when γ_e·γ_E >= 1.
double rho_float(int m, int L, double qnorm, double gamma_E_, double gamma_W_);

struct StationaryCovariance {
  Eigen::MatrixXd Sigma_x;
  double residual = 0.0;  // Frobenius norm of the Lyapunov residual
  double c = 0.0;         // state-proportional factor (floating point only)
  std::string model;      // human-readable description of the Σ_e model
};

/// Σ_x = A_cl Σ_x A_clᵀ + BK Σ_e (BK)ᵀ + B_w Σ_w B_wᵀ with Σ_e = ē²/12·I.
StationaryCovariance stationary_covariance_fixed(const ClosedLoopModel& model, int m, int L);
StationaryCovariance stationary_covariance_fixed(const ClosedLoopModel& model, double e_var);

/// Same with Σ_e = c·Σ_x, c = 0.180·2^-2m + 2^-2(m-L)/12. Throws
/// DivergenceError if the covariance recursion is not contractive.
StationaryCovariance stationary_covariance_float(const ClosedLoopModel& model, int m, int L);

/// Residual of the generalized Lyapunov equation for a given Σ_e.
Eigen::MatrixXd lyapunov_residual(const ClosedLoopModel& model, const Eigen::MatrixXd& Sigma_x,
                                  const Eigen::MatrixXd& Sigma_e);

double cost_J(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& Sigma_x);

struct SweepRow {
  std::string format;
  int m = 0;
  int L = 0;
  std::optional<double> rho;  // empty when the cell diverged
  std::optional<double> J;
  std::optional<double> worst_x1;
  bool violates_spec = false;  // worst_x1 above the safe bound, or diverged
};

/// One row per L. Cells whose computation diverges are left empty.
std::vector<SweepRow> sweep_table(const ClosedLoopModel& model, const NumberFormat& fmt,
                                  const std::vector<int>& Ls, const EllipsoidOptions& opts = {});

/// `format,m,L,rho,J,worst_x1,violates_spec`; empty cells print "diverged".
void write_table_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace lsbauth
