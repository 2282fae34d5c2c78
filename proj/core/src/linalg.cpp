#include "lsbauth/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "lsbauth/errors.hpp"

namespace lsbauth {

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double spectral_radius(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<MatrixXd> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double induced_inf_norm(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

bool is_symmetric(const MatrixXd& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_positive_definite(const MatrixXd& a) {
  if (a.rows() != a.cols() || !is_symmetric(a, 1e-9)) return false;
  Eigen::LLT<MatrixXd> llt(a);
  return llt.info() == Eigen::Success;
}

double min_eigenvalue(const MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

VectorXd vec(const MatrixXd& m) { return Eigen::Map<const VectorXd>(m.data(), m.size()); }

MatrixXd unvec(const VectorXd& v, Eigen::Index n) { return Eigen::Map<const MatrixXd>(v.data(), n, n); }

MatrixXd dlyap(const MatrixXd& a, const MatrixXd& w) {
  if (spectral_radius(a) >= 1.0) throw DivergenceError("Lyapunov equation: matrix is not Schur");
  const auto n = a.rows();
  const MatrixXd op = MatrixXd::Identity(n * n, n * n) - kron(a, a);
  const VectorXd x = op.partialPivLu().solve(vec(w));
  const MatrixXd s = unvec(x, n);
  return 0.5 * (s + s.transpose());
}

}  // namespace lsbauth
