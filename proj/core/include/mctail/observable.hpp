#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "mctail/chain.hpp"

namespace mctail {

/// A map from chain states to m-dimensional vectors, with the statistics
/// every bound consumes cached at construction:
///   mean               sum_s mu_s f(s)                       (m-vector)
///   linf               max_s |f(s)|                          (Euclidean norm)
///   principal_variance largest eigenvalue of sum_s mu_s f(s) f(s)^T,
///                      i.e. sup_{|u|=1} E<f,u>^2
/// Immutable after construction.
class VectorObservable {
 public:
  /// values is n x m, one row per state, in the chain's state order.
  static VectorObservable from_values(Eigen::MatrixXd values, const ReversibleChain& chain);

  int states() const noexcept { return static_cast<int>(values_.rows()); }
  int dimension() const noexcept { return static_cast<int>(values_.cols()); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  double linf() const noexcept { return linf_; }
  double principal_variance() const noexcept { return principal_variance_; }

 private:
  VectorObservable(Eigen::MatrixXd values, Eigen::VectorXd mean, double linf, double pv)
      : values_(std::move(values)), mean_(std::move(mean)), linf_(linf),
        principal_variance_(pv) {}

  Eigen::MatrixXd values_;
  Eigen::VectorXd mean_;
  double linf_;
  double principal_variance_;
};

/// Observable text format: '#' comments, first two tokens "n m", then n
/// rows of m reals in the chain's state order.
VectorObservable load_observable(const std::filesystem::path& path, const ReversibleChain& chain);
VectorObservable parse_observable(std::istream& in, const ReversibleChain& chain);

/// Subtracts the stationary mean from every row; idempotent.
VectorObservable center(const VectorObservable& f, const ReversibleChain& chain);

/// Largest eigenvalue of the stationary second-moment matrix, recomputed by
/// the symmetric eigensolver. Requires a centered observable (|mean| <= 1e-9).
double principal_variance(const VectorObservable& f, const ReversibleChain& chain);

/// Deterministic-in-seed random observable: Gaussian rows, centered, then
/// rescaled so that linf <= L holds exactly.
VectorObservable random_observable(const ReversibleChain& chain, int m, double L,
                                   std::uint64_t seed);

}  // namespace mctail
