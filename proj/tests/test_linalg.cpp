#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "mctail/error.hpp"
#include "mctail/linalg.hpp"
#include "mctail/rng.hpp"
#include "test_util.hpp"

using namespace mctail;

TEST_SUITE("linalg") {

TEST_CASE("jacobi diagonalizes a known 2x2") {
  Eigen::MatrixXd a(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;
  const auto eig = linalg::jacobi_eigen(a);
  CHECK(eig.values(0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(eig.values(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("jacobi handles an already-diagonal matrix") {
  Eigen::MatrixXd a = Eigen::VectorXd::LinSpaced(5, -2.0, 2.0).asDiagonal();
  const auto eig = linalg::jacobi_eigen(a);
  CHECK(eig.values(0) == 2.0);
  CHECK(eig.values(4) == -2.0);
}

TEST_CASE("jacobi matches the reference solver on random symmetric matrices") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 20;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.next_gaussian();
    a = (0.5 * (a + a.transpose())).eval();

    const auto eig = linalg::jacobi_eigen(a);

    // Residual and orthogonality.
    CHECK((a * eig.vectors - eig.vectors * eig.values.asDiagonal()).norm() < 1e-11);
    CHECK((eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(n, n)).norm() <
          1e-12);

    // Independent route: Eigen's tridiagonalization-based solver.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    Eigen::VectorXd expected = ref.eigenvalues().reverse();
    CHECK((eig.values - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("jacobi rejects non-square input") {
  CHECK_THROWS_AS(linalg::jacobi_eigen(Eigen::MatrixXd::Zero(2, 3)), Error);
}

TEST_CASE("stationary_power recovers mu of a birth-death chain") {
  const auto chain = testutil::birth_death3();
  const Eigen::VectorXd mu = linalg::stationary_power(chain.kernel());
  CHECK((mu - chain.stationary()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("stationary_power converges on a periodic chain") {
  // Plain power iteration oscillates on the even cycle; the half-lazy
  // iteration must not.
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(4, 4);
  for (int s = 0; s < 4; ++s) {
    p(s, (s + 1) % 4) = 0.5;
    p(s, (s + 3) % 4) = 0.5;
  }
  const Eigen::VectorXd mu = linalg::stationary_power(p);
  CHECK((mu - Eigen::VectorXd::Constant(4, 0.25)).cwiseAbs().maxCoeff() < 1e-11);
}

}  // TEST_SUITE
