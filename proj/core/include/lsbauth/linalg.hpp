#pragma once

#include <Eigen/Dense>

namespace lsbauth {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd kron(const MatrixXd& a, const MatrixXd& b);

/// Largest eigenvalue modulus.
double spectral_radius(const MatrixXd& a);

/// Induced ℓ∞ norm: maximum absolute row sum.
double induced_inf_norm(const MatrixXd& a);

bool is_symmetric(const MatrixXd& a, double tol = 1e-12);
bool is_positive_definite(const MatrixXd& a);
double min_eigenvalue(const MatrixXd& symmetric);

/// Solves A X Aᵀ - X + W = 0 through the n²×n² vectorized system.
/// Throws DivergenceError if A is not Schur.
MatrixXd dlyap(const MatrixXd& a, const MatrixXd& w);

/// Reshapes a column-major vector into an n×n matrix and back.
VectorXd vec(const MatrixXd& m);
MatrixXd unvec(const VectorXd& v, Eigen::Index n);

}  // namespace lsbauth
