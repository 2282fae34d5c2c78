#include "lsbauth/ellipsoid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lsbauth/errors.hpp"
#include "lsbauth/linalg.hpp"

namespace lsbauth {

namespace {

using Eigen::Index;

// Inputs with a zero bound are dropped; the rest are scaled to unit boxes.
MatrixXd normalized_inputs(const MatrixXd& Bbar, const std::vector<double>& bounds) {
  if (static_cast<Index>(bounds.size()) != Bbar.cols()) {
    throw std::invalid_argument("one bound per input column required");
  }
  std::vector<Index> keep;
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    if (bounds[j] < 0.0) throw std::invalid_argument("input bounds must be non-negative");
    if (bounds[j] > 0.0) keep.push_back(static_cast<Index>(j));
  }
  if (keep.empty()) throw std::invalid_argument("at least one input bound must be positive");
  MatrixXd G(Bbar.rows(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    G.col(static_cast<Index>(k)) = Bbar.col(keep[k]) * bounds[static_cast<std::size_t>(keep[k])];
  }
  return G;
}

MatrixXd lmi(const MatrixXd& A, const MatrixXd& G, const MatrixXd& P, double alpha,
             double constant) {
  const Index n = A.rows();
  const Index N = G.cols();
  MatrixXd M(n + N, n + N);
  const MatrixXd PA = P * A;
  const MatrixXd PG = P * G;
  M.topLeftCorner(n, n) = alpha * P - A.transpose() * PA;
  M.topRightCorner(n, N) = -A.transpose() * PG;
  M.bottomLeftCorner(N, n) = M.topRightCorner(n, N).transpose();
  M.bottomRightCorner(N, N) = constant * MatrixXd::Identity(N, N) - G.transpose() * PG;
  return M;
}

struct Barrier {
  MatrixXd A, G;
  double alpha;
  Index n, N, dim;
  std::vector<MatrixXd> E;   // symmetric basis of P
  std::vector<MatrixXd> Mk;  // linear part of the invariance matrix per basis element
  MatrixXd M0;

  Barrier(const MatrixXd& a, const MatrixXd& g, double al) : A(a), G(g), alpha(al) {
    n = A.rows();
    N = G.cols();
    dim = n * (n + 1) / 2;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        MatrixXd e = MatrixXd::Zero(n, n);
        e(i, j) = 1.0;
        e(j, i) = 1.0;
        E.push_back(e);
        Mk.push_back(lmi(A, G, e, alpha, 0.0));
      }
    }
    M0 = MatrixXd::Zero(n + N, n + N);
    M0.bottomRightCorner(N, N) = (1.0 - alpha) / static_cast<double>(N) * MatrixXd::Identity(N, N);
  }

  MatrixXd P_of(const VectorXd& p) const {
    MatrixXd P = MatrixXd::Zero(n, n);
    for (Index k = 0; k < dim; ++k) P += p(k) * E[static_cast<std::size_t>(k)];
    // Off-diagonal basis elements put p_k at both (i,j) and (j,i).
    return P;
  }

  MatrixXd M_of(const VectorXd& p) const {
    MatrixXd M = M0;
    for (Index k = 0; k < dim; ++k) M += p(k) * Mk[static_cast<std::size_t>(k)];
    return M;
  }

  VectorXd p_of(const MatrixXd& P) const {
    VectorXd p(dim);
    Index k = 0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) p(k++) = (i == j) ? P(i, i) : P(i, j);
    }
    return p;
  }

  // Returns +inf outside the domain.
  double value(const VectorXd& p, double t) const {
    Eigen::LLT<MatrixXd> lp(P_of(p));
    if (lp.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    Eigen::LLT<MatrixXd> lm(M_of(p));
    if (lm.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const double ldp = 2.0 * lp.matrixLLT().diagonal().array().log().sum();
    const double ldm = 2.0 * lm.matrixLLT().diagonal().array().log().sum();
    if (!std::isfinite(ldp) || !std::isfinite(ldm)) return std::numeric_limits<double>::infinity();
    return -t * ldp - ldm;
  }

  void derivatives(const VectorXd& p, double t, VectorXd& grad, MatrixXd& hess) const {
    const MatrixXd Pi = P_of(p).inverse();
    const MatrixXd Mi = M_of(p).inverse();
    std::vector<MatrixXd> PE(static_cast<std::size_t>(dim)), MM(static_cast<std::size_t>(dim));
    grad.resize(dim);
    hess.resize(dim, dim);
    for (Index k = 0; k < dim; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      PE[ku] = Pi * E[ku];
      MM[ku] = Mi * Mk[ku];
      grad(k) = -t * PE[ku].trace() - MM[ku].trace();
    }
    for (Index k = 0; k < dim; ++k) {
      for (Index l = k; l < dim; ++l) {
        const auto ku = static_cast<std::size_t>(k);
        const auto lu = static_cast<std::size_t>(l);
        const double h = t * (PE[ku].cwiseProduct(PE[lu].transpose())).sum() +
                         (MM[ku].cwiseProduct(MM[lu].transpose())).sum();
        hess(k, l) = h;
        hess(l, k) = h;
      }
    }
  }

  // Damped Newton centering; returns false on numerical breakdown.
  bool center(VectorXd& p, double t) const {
    for (int it = 0; it < 100; ++it) {
      VectorXd g;
      MatrixXd H;
      derivatives(p, t, g, H);
      const VectorXd step = -H.ldlt().solve(g);
      if (!step.allFinite()) return false;
      const double decrement = -g.dot(step);
      if (decrement < 1e-14) return true;
      const double f0 = value(p, t);
      double s = 1.0;
      while (s > 1e-16) {
        const double f1 = value(p + s * step, t);
        if (f1 <= f0 - 0.25 * s * decrement) break;
        s *= 0.5;
      }
      if (s <= 1e-16) return decrement < 1e-8;
      p += s * step;
    }
    return true;
  }
};

}  // namespace

MatrixXd invariance_matrix(const MatrixXd& A, const MatrixXd& Bbar, const std::vector<double>& bounds,
                           const MatrixXd& P, double alpha) {
  const MatrixXd G = normalized_inputs(Bbar, bounds);
  return lmi(A, G, P, alpha, (1.0 - alpha) / static_cast<double>(G.cols()));
}

std::optional<Ellipsoid> invariant_ellipsoid_at(const MatrixXd& A, const MatrixXd& Bbar,
                                                const std::vector<double>& bounds, double alpha,
                                                double gap_tolerance) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (A.rows() != A.cols() || Bbar.rows() != A.rows()) {
    throw std::invalid_argument("dimension mismatch");
  }
  const MatrixXd G = normalized_inputs(Bbar, bounds);
  const Index n = A.rows();
  if (spectral_radius(A) * spectral_radius(A) >= alpha) return std::nullopt;

  // Aᵀ X A - α X = -I has X ≻ 0 exactly when ρ(A)² < α.
  const MatrixXd At = A.transpose();
  const MatrixXd op = kron(At, At) - alpha * MatrixXd::Identity(n * n, n * n);
  MatrixXd X = unvec(op.partialPivLu().solve(-vec(MatrixXd::Identity(n, n))), n);
  X = 0.5 * (X + X.transpose());

  Barrier bar(A, G, alpha);
  double s = 1.0 / std::max(1e-300, (G.transpose() * X * G).trace());
  VectorXd p;
  bool feasible = false;
  for (int i = 0; i < 200; ++i, s *= 0.5) {
    p = bar.p_of(s * X);
    if (std::isfinite(bar.value(p, 1.0))) {
      feasible = true;
      break;
    }
  }
  if (!feasible) return std::nullopt;

  const double m_dim = static_cast<double>(n + G.cols());
  double t = 1.0;
  while (true) {
    if (!bar.center(p, t)) break;
    if (m_dim / t < gap_tolerance) break;
    t *= 10.0;
  }

  Ellipsoid out;
  out.P = bar.P_of(p);
  out.alpha = alpha;
  const MatrixXd M = bar.M_of(p);
  out.certificate = min_eigenvalue(M);
  out.scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  Eigen::LLT<MatrixXd> lp(out.P);
  if (lp.info() != Eigen::Success) return std::nullopt;
  out.log_det = 2.0 * lp.matrixLLT().diagonal().array().log().sum();
  return out;
}

Ellipsoid min_volume_invariant_ellipsoid(const MatrixXd& A, const MatrixXd& Bbar,
                                         const std::vector<double>& bounds,
                                         const EllipsoidOptions& opts) {
  if (opts.grid_points < 2 || !(opts.alpha_min > 0.0) || !(opts.alpha_max < 1.0) ||
      opts.alpha_min >= opts.alpha_max) {
    throw std::invalid_argument("invalid alpha grid");
  }
  if (spectral_radius(A) >= 1.0) throw DivergenceError("no invariant ellipsoid found: A is not Schur");

  const double h = (opts.alpha_max - opts.alpha_min) / (opts.grid_points - 1);
  std::vector<std::optional<Ellipsoid>> grid(static_cast<std::size_t>(opts.grid_points));
  int best = -1;
  for (int i = 0; i < opts.grid_points; ++i) {
    const double a = opts.alpha_min + h * i;
    grid[static_cast<std::size_t>(i)] = invariant_ellipsoid_at(A, Bbar, bounds, a, opts.gap_tolerance);
    const auto& e = grid[static_cast<std::size_t>(i)];
    if (e && (best < 0 || e->log_det > grid[static_cast<std::size_t>(best)]->log_det)) best = i;
  }
  if (best < 0) throw DivergenceError("no invariant ellipsoid found");

  Ellipsoid result = *grid[static_cast<std::size_t>(best)];
  auto score = [&](double a) {
    auto e = invariant_ellipsoid_at(A, Bbar, bounds, a, opts.gap_tolerance);
    if (e && e->log_det > result.log_det) result = *e;
    return e ? e->log_det : -std::numeric_limits<double>::infinity();
  };

  // Golden-section search on the bracket around the best grid point.
  double lo = opts.alpha_min + h * std::max(0, best - 1);
  double hi = opts.alpha_min + h * std::min(opts.grid_points - 1, best + 1);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - phi * (hi - lo);
  double d = lo + phi * (hi - lo);
  double fc = score(c);
  double fd = score(d);
  for (int it = 0; it < opts.refine_iterations; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = score(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = score(d);
    }
  }
  return result;
}

}  // namespace lsbauth
