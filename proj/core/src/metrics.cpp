#include "lsbauth/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "lsbauth/errors.hpp"
#include "lsbauth/linalg.hpp"

namespace lsbauth {

MatrixXd closed_loop(const MatrixXd& A, const MatrixXd& B, const MatrixXd& K) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || K.rows() != B.cols() ||
      K.cols() != A.cols()) {
    throw ModelError("closed_loop: dimension mismatch");
  }
  MatrixXd Acl = A - B * K;
  if (spectral_radius(Acl) >= 1.0) throw ModelError("A - BK is not Schur stable");
  return Acl;
}

double error_bound_fixed(int m, int L) {
  if (m < 1 || L < 0 || L > m) throw std::invalid_argument("error bound needs 0 <= L <= m, m >= 1");
  return std::ldexp(1.0, -(m + 1)) + std::ldexp(1.0, -(m - L)) - std::ldexp(1.0, -m);
}

double gamma_e(int m, int L) { return error_bound_fixed(m, L); }

MatrixXd disturbance_matrix(const ClosedLoopModel& model) {
  MatrixXd Bbar(model.n(), model.n() + model.d());
  Bbar << model.B * model.K, model.Bw;
  return Bbar;
}

std::vector<double> disturbance_bounds(const ClosedLoopModel& model, double e_bound) {
  std::vector<double> b(static_cast<std::size_t>(model.n()), e_bound);
  b.insert(b.end(), static_cast<std::size_t>(model.d()), model.w_bound);
  return b;
}

Ellipsoid fixed_point_ellipsoid(const ClosedLoopModel& model, double e_bound,
                                const EllipsoidOptions& opts) {
  return min_volume_invariant_ellipsoid(model.closed_loop(), disturbance_matrix(model),
                                        disturbance_bounds(model, e_bound), opts);
}

double unit_ball_volume(int n) {
  if (n < 0) throw std::invalid_argument("negative dimension");
  const double h = 0.5 * n;
  return std::exp(h * std::log(M_PI) - std::lgamma(h + 1.0));
}

double rho_fixed(const MatrixXd& P, const MatrixXd& Q) {
  if (P.rows() != Q.rows() || !is_positive_definite(P) || !is_positive_definite(Q)) {
    throw std::invalid_argument("rho_fixed needs P, Q positive definite of equal size");
  }
  const double ld = std::log(P.determinant()) + std::log(Q.determinant());
  return unit_ball_volume(static_cast<int>(P.rows())) * std::exp(-0.5 * ld);
}

double worst_component(const MatrixXd& P, Eigen::Index i) {
  if (!is_positive_definite(P)) throw std::invalid_argument("P must be positive definite");
  const MatrixXd Pinv = P.llt().solve(MatrixXd::Identity(P.rows(), P.cols()));
  return std::sqrt(Pinv(i, i));
}

L1Norm l1_norm(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C, const MatrixXd& D,
               double rel_tol) {
  const auto n = A.rows();
  if (A.cols() != n || B.rows() != n || C.cols() != n) throw std::invalid_argument("l1_norm: dimension mismatch");
  if (D.size() != 0 && (D.rows() != C.rows() || D.cols() != B.cols())) {
    throw std::invalid_argument("l1_norm: feedthrough dimension mismatch");
  }
  if (spectral_radius(A) >= 1.0) throw DivergenceError("l1_norm: A is not Schur");

  // k0 with γ = ‖A^k0‖∞ < 1 makes every later block of k0 terms shrink by γ.
  MatrixXd Ak = A;
  long k0 = 1;
  while (induced_inf_norm(Ak) >= 0.5) {
    Ak = A * Ak;
    if (++k0 > 10'000'000) throw DivergenceError("l1_norm: no contracting power found");
  }
  const double gamma = induced_inf_norm(Ak);
  const double cnorm = induced_inf_norm(C);

  Eigen::VectorXd rows = Eigen::VectorXd::Zero(C.rows());
  if (D.size() != 0) rows += D.cwiseAbs().rowwise().sum();
  MatrixXd M = B;  // A^t B
  long t = 0;
  long checkpoint = std::max<long>(64, k0);
  L1Norm out;
  while (true) {
    for (; t < checkpoint; ++t) {
      rows += (C * M).cwiseAbs().rowwise().sum();
      M = A * M;
    }
    double ahead = 0.0;
    MatrixXd W = M;
    for (long i = 0; i < k0; ++i) {
      ahead += induced_inf_norm(W);
      W = A * W;
    }
    out.value = rows.size() ? rows.maxCoeff() : 0.0;
    out.tail_bound = cnorm * ahead / (1.0 - gamma);
    out.horizon = t;
    if (out.tail_bound <= rel_tol * out.value || out.tail_bound == 0.0) return out;
    if (checkpoint > 100'000'000) throw DivergenceError("l1_norm: tail did not converge");
    checkpoint *= 2;
  }
}

NormBundle norm_bundle(const ClosedLoopModel& model) {
  const MatrixXd Acl = model.closed_loop();
  const MatrixXd I = MatrixXd::Identity(model.n(), model.n());
  const L1Norm e = l1_norm(Acl, model.B * model.K, I);
  const L1Norm w = l1_norm(Acl, model.Bw, I);
  NormBundle nb;
  nb.gamma_E = e.value;
  nb.gamma_W = w.value;
  nb.qnorm = induced_inf_norm(model.Q);
  nb.tail = std::max(e.tail_bound, w.tail_bound);
  return nb;
}

double rho_float(int m, int L, double qnorm, double gamma_E_, double gamma_W_) {
  const double loop = gamma_e(m, L) * gamma_E_;
  if (loop >= 1.0) throw DivergenceError("gain condition fails; bound diverges");
  return qnorm * gamma_W_ / (1.0 - loop);
}

namespace {

MatrixXd process_term(const ClosedLoopModel& model) {
  if (model.Sigma_w.size() == 0) return MatrixXd::Zero(model.n(), model.n());
  return model.Bw * model.Sigma_w * model.Bw.transpose();
}

}  // namespace

MatrixXd lyapunov_residual(const ClosedLoopModel& model, const MatrixXd& Sx, const MatrixXd& Se) {
  const MatrixXd Acl = model.closed_loop();
  const MatrixXd BK = model.B * model.K;
  return Acl * Sx * Acl.transpose() + BK * Se * BK.transpose() + process_term(model) - Sx;
}

StationaryCovariance stationary_covariance_fixed(const ClosedLoopModel& model, double e_var) {
  const MatrixXd BK = model.B * model.K;
  const MatrixXd Se = e_var * MatrixXd::Identity(model.n(), model.n());
  StationaryCovariance out;
  out.Sigma_x = dlyap(model.closed_loop(), BK * Se * BK.transpose() + process_term(model));
  out.residual = lyapunov_residual(model, out.Sigma_x, Se).norm();
  out.model = "Sigma_e = " + std::to_string(e_var) + " I";
  return out;
}

StationaryCovariance stationary_covariance_fixed(const ClosedLoopModel& model, int m, int L) {
  const double e = error_bound_fixed(m, L);
  return stationary_covariance_fixed(model, e * e / 12.0);
}

StationaryCovariance stationary_covariance_float(const ClosedLoopModel& model, int m, int L) {
  if (m < 1 || L < 0 || L > m) throw std::invalid_argument("need 0 <= L <= m, m >= 1");
  const double c = 0.180 * std::ldexp(1.0, -2 * m) + std::ldexp(1.0, -2 * (m - L)) / 12.0;
  const MatrixXd Acl = model.closed_loop();
  const MatrixXd BK = model.B * model.K;
  const auto n = model.n();
  const MatrixXd T = kron(Acl, Acl) + c * kron(BK, BK);
  if (spectral_radius(T) >= 1.0) {
    throw DivergenceError("covariance recursion is not contractive; cost diverges");
  }
  const MatrixXd op = MatrixXd::Identity(n * n, n * n) - T;
  MatrixXd S = unvec(op.partialPivLu().solve(vec(process_term(model))), n);
  S = 0.5 * (S + S.transpose());
  StationaryCovariance out;
  out.Sigma_x = S;
  out.c = c;
  out.residual = lyapunov_residual(model, S, c * S).norm();
  out.model = "Sigma_e = " + std::to_string(c) + " Sigma_x";
  return out;
}

double cost_J(const MatrixXd& Q, const MatrixXd& Sx) {
  if (Q.rows() != Sx.rows() || Q.cols() != Sx.cols()) throw std::invalid_argument("cost_J: shape mismatch");
  return (Q * Sx).trace();
}

std::vector<SweepRow> sweep_table(const ClosedLoopModel& model, const NumberFormat& fmt,
                                  const std::vector<int>& Ls, const EllipsoidOptions& opts) {
  model.validate();
  const int m = fmt.m();
  for (int L : Ls) {
    if (L < 0 || L > m) throw ConfigError("L must lie in [0, m] for " + fmt.descriptor());
  }
  std::vector<SweepRow> rows;
  std::optional<NormBundle> norms;
  if (fmt.is_float()) norms = norm_bundle(model);

  for (int L : Ls) {
    SweepRow row;
    row.format = fmt.descriptor();
    row.m = m;
    row.L = L;
    if (fmt.is_fixed()) {
      try {
        const Ellipsoid e = fixed_point_ellipsoid(model, error_bound_fixed(m, L), opts);
        row.rho = rho_fixed(e.P, model.Q);
        row.worst_x1 = worst_x1(e.P);
      } catch (const DivergenceError&) {
      }
      try {
        row.J = cost_J(model.Q, stationary_covariance_fixed(model, m, L).Sigma_x);
      } catch (const DivergenceError&) {
      }
    } else {
      try {
        row.rho = rho_float(m, L, norms->qnorm, norms->gamma_E, norms->gamma_W);
        row.worst_x1 = *row.rho * model.w_bound;
      } catch (const DivergenceError&) {
      }
      try {
        row.J = cost_J(model.Q, stationary_covariance_float(model, m, L).Sigma_x);
      } catch (const DivergenceError&) {
      }
    }
    row.violates_spec = !row.worst_x1 || *row.worst_x1 > model.safe_bound_x1;
    rows.push_back(row);
  }
  return rows;
}

void write_table_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("diverged");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return std::string(buf);
  };
  out << "format,m,L,rho,J,worst_x1,violates_spec\n";
  for (const auto& r : rows) {
    out << r.format << ',' << r.m << ',' << r.L << ',' << cell(r.rho) << ',' << cell(r.J) << ','
        << cell(r.worst_x1) << ',' << (r.violates_spec ? 1 : 0) << '\n';
  }
}

}  // namespace lsbauth
