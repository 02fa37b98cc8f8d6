#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here recomputes quantities by routes the library does not use: exhaustive
// path enumeration, closed-form spectra, naive summation.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mctail/chain.hpp"
#include "mctail/observable.hpp"
#include "mctail/rng.hpp"

namespace testutil {

// Three-state birth-death chain with mu = (1, 2, 4)/7.
inline mctail::ReversibleChain birth_death3() {
  Eigen::MatrixXd p(3, 3);
  p << 0.5, 0.5, 0.0,
       0.25, 0.25, 0.5,
       0.0, 0.25, 0.75;
  Eigen::VectorXd mu(3);
  mu << 1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0;
  return mctail::ReversibleChain::from_matrix(p, mu, "birth-death:3");
}

// Two-state chain with mu = (0.8, 0.2).
inline mctail::ReversibleChain skewed2() {
  Eigen::MatrixXd p(2, 2);
  p << 0.75, 0.25,
       1.0, 0.0;
  Eigen::VectorXd mu(2);
  mu << 0.8, 0.2;
  return mctail::ReversibleChain::from_matrix(p, mu, "skewed:2");
}

// Closed-form eigenvalue multisets, sorted descending.
inline std::vector<double> complete_eigenvalues(int n) {
  std::vector<double> v{1.0};
  v.insert(v.end(), static_cast<std::size_t>(n - 1), -1.0 / (n - 1));
  return v;
}

inline std::vector<double> hypercube_eigenvalues(int d) {
  std::vector<double> v;
  long long binom = 1;
  for (int k = 0; k <= d; ++k) {
    for (long long i = 0; i < binom; ++i) v.push_back(1.0 - 2.0 * k / (d + 1));
    binom = binom * (d - k) / (k + 1);
  }
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

inline std::vector<double> cycle_eigenvalues(int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(std::cos(2.0 * M_PI * k / n));
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

inline double max_multiset_distance(const Eigen::VectorXd& got, std::vector<double> expected) {
  std::vector<double> a(got.data(), got.data() + got.size());
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(expected.begin(), expected.end(), std::greater<>());
  if (a.size() != expected.size()) return 1e300;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - expected[i]));
  return worst;
}

// Exhaustive sum over all length-N state paths of
// mu0(s0) prod_t P(s_{t-1}, s_t) e^{<f(s_t), u>}. Exponential in N.
inline double enumerate_quadratic_form(const mctail::ReversibleChain& chain,
                                       const mctail::VectorObservable& f,
                                       const Eigen::VectorXd& u,
                                       const mctail::InitialDistribution& mu0, int steps) {
  const int n = chain.n();
  const Eigen::VectorXd tilt = f.values() * u;
  double total = 0.0;
  std::vector<int> path(static_cast<std::size_t>(steps) + 1, 0);
  // Odometer over n^(steps+1) paths.
  while (true) {
    double w = mu0.weights()(path[0]);
    for (int t = 1; t <= steps && w != 0.0; ++t)
      w *= chain.kernel()(path[t - 1], path[t]) * std::exp(tilt(path[t]));
    total += w;
    int pos = 0;
    while (pos <= steps && ++path[pos] == n) path[pos++] = 0;
    if (pos > steps) break;
  }
  return total;
}

// Exact Pr{|S_N| >= eps N} by the same enumeration.
inline double enumerate_tail_probability(const mctail::ReversibleChain& chain,
                                         const mctail::VectorObservable& f,
                                         const mctail::InitialDistribution& mu0, int steps,
                                         double eps) {
  const int n = chain.n();
  double total = 0.0;
  std::vector<int> path(static_cast<std::size_t>(steps) + 1, 0);
  while (true) {
    double w = mu0.weights()(path[0]);
    for (int t = 1; t <= steps && w != 0.0; ++t) w *= chain.kernel()(path[t - 1], path[t]);
    if (w != 0.0) {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(f.dimension());
      for (int t = 1; t <= steps; ++t) sum += f.values().row(path[t]).transpose();
      if (sum.norm() >= eps * steps) total += w;
    }
    int pos = 0;
    while (pos <= steps && ++path[pos] == n) path[pos++] = 0;
    if (pos > steps) break;
  }
  return total;
}

inline Eigen::VectorXd random_unit_direction(int m, std::uint64_t seed) {
  mctail::SplitMix64 rng = mctail::derive_stream(seed, 0xd19ULL);
  Eigen::VectorXd dir(m);
  do {
    for (int j = 0; j < m; ++j) dir(j) = rng.next_gaussian();
  } while (dir.norm() < 1e-12);
  return dir / dir.norm();
}

// Random start distribution (squared Gaussians, normalized).
inline mctail::InitialDistribution random_start(int n, std::uint64_t seed) {
  mctail::SplitMix64 rng = mctail::derive_stream(seed, 0x57a27ULL);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    w(i) = g * g + 1e-6;
  }
  w /= w.sum();
  return mctail::InitialDistribution::from_weights(w);
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("mctail_test_" + std::to_string(++counter) + "_" +
             std::to_string(::getpid()) + ".txt");
    std::ofstream out(path_);
    out << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
