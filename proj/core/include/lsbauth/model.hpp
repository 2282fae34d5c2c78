#pragma once

#include <Eigen/Dense>

namespace lsbauth {

/// x(t+1) = A x + B u + B_w w,  u = -K ŷ,  performance weight Q.
struct ClosedLoopModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd Bw;
  Eigen::MatrixXd K;
  Eigen::MatrixXd Q;
  double w_bound = 0.0;     // ū_w, per-component bound on w
  Eigen::MatrixXd Sigma_w;  // covariance of w for stochastic runs
  double safe_bound_x1 = 0.5;
  Eigen::VectorXd x0;       // empty means zero

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index p() const { return B.cols(); }
  Eigen::Index d() const { return Bw.cols(); }

  Eigen::MatrixXd closed_loop() const { return A - B * K; }
  Eigen::VectorXd initial_state() const { return x0.size() ? x0 : Eigen::VectorXd::Zero(n()); }

  /// Checks shapes, Q ≻ 0, Σ_w ⪰ 0, bounds and Schur stability of A - BK.
  /// Throws ModelError with a description of the first violation.
  void validate() const;
};

/// The hydro turbine frequency-control loop used in the bundled scenario.
ClosedLoopModel hydro_turbine_model();

}  // namespace lsbauth
