#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace lsbauth {

struct EllipsoidOptions {
  int grid_points = 199;
  double alpha_min = 0.005;
  double alpha_max = 0.995;
  int refine_iterations = 40;
  double gap_tolerance = 1e-10;  // barrier duality gap on -log det P
};

/// {x : xᵀ P x <= 1}, invariant for x+ = A x + B̄ v under |v_i| <= bounds_i.
struct Ellipsoid {
  Eigen::MatrixXd P;
  double alpha = 0.0;
  double certificate = 0.0;  // minimum eigenvalue of the invariance matrix
  double scale = 1.0;        // largest absolute entry of that matrix
  double log_det = 0.0;      // log det P
};

/// Invariance matrix at (P, α) with inputs normalized to unit boxes:
///   [ αP - AᵀPA      -AᵀPG         ]
///   [ -GᵀPA      (1-α)/N·I - GᵀPG  ],   G = B̄·diag(bounds),
/// over the N inputs with a non-zero bound. PSD means xᵀPx <= 1 is
/// invariant: ‖v‖∞ <= 1 implies vᵀv/N <= 1, and the S-procedure applies.
Eigen::MatrixXd invariance_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Bbar,
                                  const std::vector<double>& bounds, const Eigen::MatrixXd& P,
                                  double alpha);

/// Maximizes log det P subject to the invariance matrix being PSD, at fixed α.
/// Returns nullopt when no strictly feasible P exists at this α.
std::optional<Ellipsoid> invariant_ellipsoid_at(const Eigen::MatrixXd& A,
                                                const Eigen::MatrixXd& Bbar,
                                                const std::vector<double>& bounds, double alpha,
                                                double gap_tolerance = 1e-10);

/// α grid search with golden-section refinement around the best grid point.
/// Throws DivergenceError("no invariant ellipsoid found") if every α fails.
Ellipsoid min_volume_invariant_ellipsoid(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Bbar,
                                         const std::vector<double>& bounds,
                                         const EllipsoidOptions& opts = {});

}  // namespace lsbauth
