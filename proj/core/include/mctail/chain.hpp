#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace mctail {

/// A finite Markov chain with row-stochastic kernel P and invariant
/// distribution mu, validated for detailed balance (mu_s P_st = mu_t P_ts)
/// at construction. Immutable afterwards; safe for concurrent reads.
class ReversibleChain {
 public:
  /// Validates and adopts an explicit kernel / invariant distribution pair.
  /// Rejects: non-square or too-small matrices, rows that do not sum to 1
  /// within 1e-9, nonpositive mu, and detailed-balance violations beyond
  /// balance_tol.
  static ReversibleChain from_matrix(Eigen::MatrixXd kernel, Eigen::VectorXd mu,
                                     std::string label, double balance_tol = 1e-10);

  int n() const noexcept { return static_cast<int>(kernel_.rows()); }
  const Eigen::MatrixXd& kernel() const noexcept { return kernel_; }
  const Eigen::VectorXd& stationary() const noexcept { return mu_; }
  const std::string& label() const noexcept { return label_; }

  /// Similar symmetric matrix S = D P D^{-1}, D = diag(sqrt(mu_s)).
  Eigen::MatrixXd symmetrized() const;

 private:
  ReversibleChain(Eigen::MatrixXd kernel, Eigen::VectorXd mu, std::string label)
      : kernel_(std::move(kernel)), mu_(std::move(mu)), label_(std::move(label)) {}

  Eigen::MatrixXd kernel_;
  Eigen::VectorXd mu_;
  std::string label_;
};

/// Random walk on the complete graph K_n: uniform over the n-1 other states.
ReversibleChain build_complete(int n);

/// Lazy walk on the d-dimensional hypercube with hold probability 1/(d+1)
/// and probability 1/(d+1) for each of the d neighbors. States are
/// enumerated as binary integers 0..2^d-1. d is capped at 12 (dense storage).
ReversibleChain build_lazy_hypercube(int d);

/// Symmetric walk on the n-cycle, states 0..n-1.
ReversibleChain build_cycle(int n);

/// Reads the chain text format: '#' comments, first token n, then n*n
/// row-major transition probabilities, optionally "mu:" followed by n reals.
/// When mu is absent it is computed by power iteration (residual <= 1e-12);
/// a zero entry in the computed mu reports a reducible chain.
ReversibleChain load_chain(const std::filesystem::path& path);

/// Same format, from a stream (mostly for tests and in-memory fixtures).
ReversibleChain parse_chain(std::istream& in, std::string label);

/// Builder spec strings "complete:N" | "hypercube:D" | "cycle:N"; anything
/// else is treated as a file path.
ReversibleChain chain_from_spec(const std::string& spec);

/// Eigenvalues of the chain (computed from the symmetrized kernel), sorted
/// in descending order, with the two gap conventions:
///   gap          = 1 - lambda_1
///   absolute_gap = 1 - max_{i>=1} |lambda_i|
/// The conventions differ for nearly periodic chains (odd cycle).
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  double gap = 0.0;
  double absolute_gap = 0.0;
};

Spectrum spectrum(const ReversibleChain& chain);

/// Spread nu = max(mu)/min(mu) >= 1.
double spread(const ReversibleChain& chain);

/// A start distribution for the walk (nonnegative, sums to 1 within 1e-9).
class InitialDistribution {
 public:
  static InitialDistribution from_weights(Eigen::VectorXd weights);
  static InitialDistribution uniform(int n);
  static InitialDistribution point_mass(int n, int state);

  int n() const noexcept { return static_cast<int>(weights_.size()); }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

 private:
  explicit InitialDistribution(Eigen::VectorXd weights) : weights_(std::move(weights)) {}
  Eigen::VectorXd weights_;
};

/// chi distance sqrt(sum_s mu0_s^2 / mu_s) between start and invariant
/// distribution; equals 1 exactly when mu0 = mu.
double chi_distance(const InitialDistribution& mu0, const ReversibleChain& chain);

}  // namespace mctail
