#include <doctest.h>

#include <sstream>

#include "mctail/error.hpp"
#include "mctail/observable.hpp"
#include "mctail/rng.hpp"
#include "test_util.hpp"

using namespace mctail;

TEST_SUITE("observable") {

TEST_CASE("loading a zero observable") {
  const auto chain = build_complete(3);
  std::istringstream in("3 2\n0 0\n0 0\n0 0\n");
  const auto f = parse_observable(in, chain);
  CHECK(f.linf() == 0.0);
  CHECK(f.principal_variance() == 0.0);
}

TEST_CASE("Rademacher observable on the two-state swap") {
  const auto chain = build_complete(2);
  std::istringstream in("2 1\n1\n-1\n");
  const auto f = parse_observable(in, chain);
  CHECK(f.linf() == 1.0);
  CHECK(f.mean()(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(f.principal_variance() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("statistics match an independent naive pass") {
  const auto chain = testutil::birth_death3();
  std::istringstream in("3 2\n0.3 -1.2\n0.5 0.25\n-0.875 0.125\n");
  const auto f = parse_observable(in, chain);

  // Naive recomputation with plain loops.
  double linf = 0.0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  for (int s = 0; s < 3; ++s) {
    const double norm = std::hypot(f.values()(s, 0), f.values()(s, 1));
    linf = std::max(linf, norm);
    mean += chain.stationary()(s) * f.values().row(s).transpose();
  }
  CHECK(f.linf() == doctest::Approx(linf).epsilon(1e-14));
  CHECK((f.mean() - mean).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("observable parse errors") {
  const auto chain = build_complete(2);
  std::istringstream wrong_rows("3 1\n1\n2\n3\n");
  CHECK_THROWS_AS(parse_observable(wrong_rows, chain), Error);
  std::istringstream garbage("2 1\n1\nzz\n");
  CHECK_THROWS_AS(parse_observable(garbage, chain), Error);
  CHECK_THROWS_AS(load_observable("/nonexistent/f.txt", chain), Error);
}

TEST_CASE("center is idempotent and kills constants") {
  const auto chain = build_complete(32);
  const auto f = random_observable(chain, 3, 2.0, 17);
  const auto once = center(f, chain);
  const auto twice = center(once, chain);
  CHECK((once.values() - twice.values()).cwiseAbs().maxCoeff() <= 1e-15);

  const auto constant =
      VectorObservable::from_values(Eigen::MatrixXd::Constant(32, 2, 3.5), chain);
  const auto centered = center(constant, chain);
  CHECK(centered.values().cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("center drives the mean to zero") {
  const auto chain = build_complete(32);
  Eigen::MatrixXd raw(32, 2);
  SplitMix64 rng(3);
  for (int s = 0; s < 32; ++s)
    for (int j = 0; j < 2; ++j) raw(s, j) = 5.0 * rng.next_gaussian() + 1.0;
  const auto f = VectorObservable::from_values(raw, chain);
  CHECK(center(f, chain).mean().norm() <= 1e-12);
}

TEST_CASE("principal variance equals the scalar variance for m = 1") {
  const auto chain = testutil::birth_death3();
  Eigen::MatrixXd values(3, 1);
  values << 0.4, 0.1, -0.15;
  auto f = center(VectorObservable::from_values(values, chain), chain);
  double naive = 0.0;
  for (int s = 0; s < 3; ++s)
    naive += chain.stationary()(s) * f.values()(s, 0) * f.values()(s, 0);
  CHECK(principal_variance(f, chain) == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("principal variance of the 4-state cross observable is 1/2") {
  const auto chain = build_complete(4);
  Eigen::MatrixXd values(4, 2);
  values << 1, 0,
            -1, 0,
            0, 1,
            0, -1;
  const auto f = VectorObservable::from_values(values, chain);
  CHECK(principal_variance(f, chain) == doctest::Approx(0.5).epsilon(1e-13));

  // Grid search approaches the eigenvalue from below.
  SplitMix64 rng(11);
  double grid_max = 0.0;
  for (int k = 0; k < 10000; ++k) {
    Eigen::VectorXd u(2);
    u << rng.next_gaussian(), rng.next_gaussian();
    if (u.norm() < 1e-12) continue;
    u /= u.norm();
    double second_moment = 0.0;
    for (int s = 0; s < 4; ++s) {
      const double dot = f.values().row(s) * u;
      second_moment += chain.stationary()(s) * dot * dot;
    }
    grid_max = std::max(grid_max, second_moment);
  }
  CHECK(grid_max <= principal_variance(f, chain) + 1e-9);
  CHECK(grid_max == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("grid search lower-bounds the principal variance for m <= 3") {
  const auto chain = build_complete(8);
  for (int m : {1, 2, 3}) {
    const auto f = random_observable(chain, m, 1.0, 100 + m);
    const double pv = principal_variance(f, chain);
    SplitMix64 rng(7);
    double grid_max = 0.0;
    for (int k = 0; k < 10000; ++k) {
      Eigen::VectorXd u(m);
      for (int j = 0; j < m; ++j) u(j) = rng.next_gaussian();
      if (u.norm() < 1e-12) continue;
      u /= u.norm();
      double second_moment = 0.0;
      for (int s = 0; s < 8; ++s) {
        const double dot = f.values().row(s) * u;
        second_moment += chain.stationary()(s) * dot * dot;
      }
      grid_max = std::max(grid_max, second_moment);
    }
    CHECK(grid_max <= pv + 1e-9);
  }
}

TEST_CASE("principal variance requires centering") {
  const auto chain = build_complete(4);
  const auto f =
      VectorObservable::from_values(Eigen::MatrixXd::Constant(4, 1, 2.0), chain);
  CHECK_THROWS_AS(principal_variance(f, chain), Error);
  CHECK(VectorObservable::from_values(Eigen::MatrixXd::Zero(4, 1), chain)
            .principal_variance() == 0.0);
}

TEST_CASE("sigma^2 / L^2 is scale invariant") {
  const auto chain = build_lazy_hypercube(3);
  const auto f = random_observable(chain, 3, 1.0, 23);
  const double base = principal_variance(f, chain) / (f.linf() * f.linf());
  for (double c : {0.5, 2.0, 10.0}) {
    const auto scaled = VectorObservable::from_values(c * f.values(), chain);
    const double ratio = principal_variance(scaled, chain) / (scaled.linf() * scaled.linf());
    CHECK(ratio == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("random observables are deterministic, centered, bounded") {
  const auto chain = build_complete(16);
  const auto a = random_observable(chain, 4, 0.7, 42);
  const auto b = random_observable(chain, 4, 0.7, 42);
  CHECK((a.values() - b.values()).cwiseAbs().maxCoeff() == 0.0);

  const auto c = random_observable(chain, 4, 0.7, 43);
  CHECK((a.values() - c.values()).cwiseAbs().maxCoeff() > 0.0);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_observable(chain, 3, 1.0, seed);
    CHECK(f.mean().norm() <= 1e-12);
    CHECK(f.linf() <= 1.0);
    const auto recentered = center(f, chain);
    CHECK((recentered.values() - f.values()).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("random scalar observable on two equiprobable states is antisymmetric") {
  const auto chain = build_lazy_hypercube(1);
  const auto f = random_observable(chain, 1, 1.0, 9);
  CHECK(f.values()(0, 0) == doctest::Approx(-f.values()(1, 0)).epsilon(1e-12));
  CHECK(std::abs(f.values()(0, 0)) <= 1.0);
}

}  // TEST_SUITE
