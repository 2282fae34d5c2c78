#include <doctest.h>

#include "lsbauth/errors.hpp"
#include "lsbauth/linalg.hpp"

using namespace lsbauth;

TEST_CASE("kronecker product") {
  MatrixXd a(2, 2), b(1, 2);
  a << 1, 2, 3, 4;
  b << 5, 6;
  MatrixXd expect(2, 4);
  expect << 5, 6, 10, 12, 15, 18, 20, 24;
  CHECK(kron(a, b).isApprox(expect));
}

TEST_CASE("spectral radius and norms") {
  MatrixXd a(2, 2);
  a << 0, 1, -0.25, 0;  // eigenvalues ±0.5i
  CHECK(spectral_radius(a) == doctest::Approx(0.5));
  CHECK(induced_inf_norm(a) == 1.0);
  MatrixXd q(2, 2);
  q << 2, -1, -1, 2;
  CHECK(is_positive_definite(q));
  CHECK(min_eigenvalue(q) == doctest::Approx(1.0));
  q(0, 1) = 3;
  CHECK_FALSE(is_positive_definite(q));
}

TEST_CASE("dlyap against the scalar closed form") {
  MatrixXd a(1, 1), w(1, 1);
  a << 0.8;
  w << 0.3;
  CHECK(dlyap(a, w)(0, 0) == doctest::Approx(0.3 / (1 - 0.64)).epsilon(1e-14));
  a << 1.0;
  CHECK_THROWS_AS(dlyap(a, w), DivergenceError);
}

TEST_CASE("dlyap residual on a coupled system") {
  MatrixXd a(3, 3);
  a << 0.5, 0.2, 0, -0.1, 0.7, 0.3, 0, 0.1, 0.4;
  MatrixXd w = MatrixXd::Identity(3, 3);
  const MatrixXd x = dlyap(a, w);
  CHECK((a * x * a.transpose() - x + w).norm() < 1e-12);
}
