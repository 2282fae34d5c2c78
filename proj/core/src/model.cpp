#include "lsbauth/model.hpp"

#include <string>

#include "lsbauth/errors.hpp"
#include "lsbauth/linalg.hpp"

namespace lsbauth {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ModelError(what);
}

std::string shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void ClosedLoopModel::validate() const {
  const auto nn = A.rows();
  require(nn > 0 && A.cols() == nn, "A must be square, got " + shape(A));
  require(B.rows() == nn && B.cols() > 0, "B must have n rows, got " + shape(B));
  require(Bw.rows() == nn, "B_w must have n rows, got " + shape(Bw));
  require(K.rows() == B.cols() && K.cols() == nn, "K must be p x n, got " + shape(K));
  require(Q.rows() == nn && Q.cols() == nn, "Q must be n x n, got " + shape(Q));
  require(is_positive_definite(Q), "Q must be symmetric positive definite");
  require(w_bound >= 0.0, "w bound must be non-negative");
  require(safe_bound_x1 > 0.0, "safe bound must be positive");
  if (Sigma_w.size() != 0) {
    require(Sigma_w.rows() == Bw.cols() && Sigma_w.cols() == Bw.cols(),
            "Sigma_w must be d x d, got " + shape(Sigma_w));
    require(is_symmetric(Sigma_w, 1e-9) && min_eigenvalue(Sigma_w) >= -1e-12,
            "Sigma_w must be symmetric positive semidefinite");
  }
  if (x0.size() != 0) require(x0.size() == nn, "x0 must have n entries");
  require(A.allFinite() && B.allFinite() && Bw.allFinite() && K.allFinite(),
          "model matrices must be finite");
  const double rho = spectral_radius(closed_loop());
  require(rho < 1.0, "A - BK is not Schur stable (spectral radius " + std::to_string(rho) + ")");
}

ClosedLoopModel hydro_turbine_model() {
  ClosedLoopModel m;
  m.A.resize(3, 3);
  m.A << 0.917, 0.016, -0.012,
         0.450, 0.964, 0.090,
         7.560, 0.069, 0.550;
  m.B.resize(3, 1);
  m.B << 0, 0, 1;
  m.Bw.resize(3, 2);
  m.Bw << 1, 0,
          0, 1,
          0, 0;
  m.K.resize(1, 3);
  m.K << 20.498, 2.092, 1.529;
  m.Q.resize(3, 3);
  m.Q << 2, -2, 0,
        -2, 10, 0,
         0, 0, 1;
  m.w_bound = 0.05;
  m.Sigma_w = 2e-3 * Eigen::MatrixXd::Identity(2, 2);
  m.safe_bound_x1 = 0.5;
  return m;
}

}  // namespace lsbauth
