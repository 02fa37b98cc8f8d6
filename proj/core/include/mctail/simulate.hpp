#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mctail/chain.hpp"
#include "mctail/observable.hpp"

namespace mctail {

/// Monte Carlo tail estimates for the event {|S_N| >= eps N}. Bit-identical
/// for identical (seed, parameters) regardless of worker count: every
/// replica owns a counter-derived random stream and the merge is a fold in
/// replica order.
struct SimulationReport {
  std::int64_t steps = 0;
  std::int64_t replicas = 0;
  std::vector<double> epsilon_grid;
  std::vector<std::int64_t> hits;    ///< replicas with |S_N| >= eps N, per eps
  std::vector<double> estimate;      ///< hits / replicas
  std::vector<double> upper99;       ///< exact binomial 99% upper confidence bound
  std::vector<std::int64_t> occupancy;  ///< state visit counts over steps 1..N
  std::uint64_t seed = 0;
};

/// Each replica draws s0 from mu0 and then N kernel steps; S_N sums f over
/// s_1..s_N (s_0 excluded). The event is closed: |S_N| >= eps N.
SimulationReport simulate_tails(const ReversibleChain& chain, const VectorObservable& f,
                                const InitialDistribution& mu0, std::int64_t steps,
                                std::int64_t replicas, std::vector<double> epsilon_grid,
                                std::uint64_t seed, int workers = 0);

struct MgfEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error of exp<S_N, u> over replicas. The exact
/// value of this expectation is quadratic_form_power(chain, f, u, mu0, N).
MgfEstimate estimate_mgf(const ReversibleChain& chain, const VectorObservable& f,
                         const Eigen::VectorXd& u, const InitialDistribution& mu0,
                         std::int64_t steps, std::int64_t replicas, std::uint64_t seed,
                         int workers = 0);

/// One-sided Clopper-Pearson upper confidence bound for a binomial
/// proportion: 1 when hits = trials, otherwise the beta quantile
/// Beta^{-1}(confidence; hits + 1, trials - hits).
double clopper_pearson_upper(std::int64_t hits, std::int64_t trials, double confidence);

}  // namespace mctail
