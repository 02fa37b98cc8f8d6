#include "mctail/simulate.hpp"

#include <algorithm>
#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <exception>
#include <thread>

#include "mctail/error.hpp"
#include "mctail/rng.hpp"

namespace mctail {

namespace {

// Per-row cumulative transition probabilities, sampled by binary search.
// The final cumulative entry is forced to 1 so a unit draw in [0,1) always
// lands inside the row.
class CdfSampler {
 public:
  explicit CdfSampler(const Eigen::MatrixXd& kernel)
      : n_(static_cast<int>(kernel.rows())), rows_(static_cast<std::size_t>(n_) * n_) {
    for (int s = 0; s < n_; ++s) {
      double acc = 0.0;
      for (int t = 0; t < n_; ++t) {
        acc += kernel(s, t);
        rows_[static_cast<std::size_t>(s) * n_ + t] = acc;
      }
      rows_[static_cast<std::size_t>(s) * n_ + n_ - 1] = 1.0;
    }
  }

  int sample(int state, double unit) const {
    const double* begin = rows_.data() + static_cast<std::size_t>(state) * n_;
    return static_cast<int>(std::upper_bound(begin, begin + n_, unit) - begin);
  }

 private:
  int n_;
  std::vector<double> rows_;
};

std::vector<double> cumulative(const Eigen::VectorXd& weights) {
  std::vector<double> cdf(weights.size());
  double acc = 0.0;
  for (int i = 0; i < weights.size(); ++i) {
    acc += weights(i);
    cdf[static_cast<std::size_t>(i)] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

int sample_cdf(const std::vector<double>& cdf, double unit) {
  return static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), unit) - cdf.begin());
}

int worker_count(int requested, std::int64_t replicas) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  const int autod = hw == 0 ? 1 : static_cast<int>(hw);
  return static_cast<int>(std::min<std::int64_t>(autod, std::max<std::int64_t>(1, replicas)));
}

// Runs fn(replica_index, rng, scratch) for every replica, split over
// workers. Results must be written to per-replica slots so the outcome is
// independent of the split.
template <typename Fn>
void for_each_replica(std::int64_t replicas, std::uint64_t seed, int workers, Fn&& fn) {
  const int w = worker_count(workers, replicas);
  if (w == 1) {
    for (std::int64_t r = 0; r < replicas; ++r) {
      SplitMix64 rng = derive_stream(seed, static_cast<std::uint64_t>(r));
      fn(r, rng, 0);
    }
    return;
  }
  const std::int64_t chunk = (replicas + w - 1) / w;
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i) {
    const std::int64_t lo = i * chunk;
    const std::int64_t hi = std::min(replicas, lo + chunk);
    threads.emplace_back([&, i, lo, hi] {
      try {
        for (std::int64_t r = lo; r < hi; ++r) {
          SplitMix64 rng = derive_stream(seed, static_cast<std::uint64_t>(r));
          fn(r, rng, i);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Deterministic compensated sum in index order.
double neumaier_sum(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

double clopper_pearson_upper(std::int64_t hits, std::int64_t trials, double confidence) {
  if (trials < 1 || hits < 0 || hits > trials)
    fail(errc::invalid_parameter, "need 0 <= hits <= trials, trials >= 1");
  if (!(confidence > 0.0) || !(confidence < 1.0))
    fail(errc::invalid_parameter, "confidence must lie in (0, 1)");
  if (hits == trials) return 1.0;
  const boost::math::beta_distribution<double> dist(static_cast<double>(hits) + 1.0,
                                                    static_cast<double>(trials - hits));
  return boost::math::quantile(dist, confidence);
}

SimulationReport simulate_tails(const ReversibleChain& chain, const VectorObservable& f,
                                const InitialDistribution& mu0, std::int64_t steps,
                                std::int64_t replicas, std::vector<double> epsilon_grid,
                                std::uint64_t seed, int workers) {
  if (f.states() != chain.n()) fail(errc::dimension_mismatch, "observable does not match chain");
  if (mu0.n() != chain.n()) fail(errc::dimension_mismatch, "mu0 does not match chain");
  if (steps < 1) fail(errc::invalid_parameter, "need at least one step");
  if (replicas < 1) fail(errc::invalid_parameter, "need at least one replica");
  if (epsilon_grid.empty()) fail(errc::empty_grid, "epsilon grid is empty");

  const CdfSampler kernel_cdf(chain.kernel());
  const std::vector<double> start_cdf = cumulative(mu0.weights());
  const Eigen::MatrixXd values_t = f.values().transpose();  // column per state
  const int n = chain.n();
  const int m = f.dimension();
  const int w = worker_count(workers, replicas);

  std::vector<double> sum_norms(static_cast<std::size_t>(replicas));
  std::vector<std::vector<std::int64_t>> occupancy(
      static_cast<std::size_t>(w), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));

  for_each_replica(replicas, seed, w,
                   [&](std::int64_t r, SplitMix64& rng, int worker) {
                     Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
                     int s = sample_cdf(start_cdf, rng.next_unit());
                     auto& counts = occupancy[static_cast<std::size_t>(worker)];
                     for (std::int64_t t = 0; t < steps; ++t) {
                       s = kernel_cdf.sample(s, rng.next_unit());
                       acc += values_t.col(s);
                       ++counts[static_cast<std::size_t>(s)];
                     }
                     sum_norms[static_cast<std::size_t>(r)] = acc.norm();
                   });

  SimulationReport report;
  report.steps = steps;
  report.replicas = replicas;
  report.epsilon_grid = std::move(epsilon_grid);
  report.seed = seed;
  report.occupancy.assign(static_cast<std::size_t>(n), 0);
  for (const auto& counts : occupancy)
    for (int s = 0; s < n; ++s) report.occupancy[static_cast<std::size_t>(s)] += counts[s];

  for (double eps : report.epsilon_grid) {
    const double threshold = eps * static_cast<double>(steps);
    std::int64_t hits = 0;
    for (double norm : sum_norms)
      if (norm >= threshold) ++hits;
    report.hits.push_back(hits);
    report.estimate.push_back(static_cast<double>(hits) / static_cast<double>(replicas));
    report.upper99.push_back(clopper_pearson_upper(hits, replicas, 0.99));
  }
  return report;
}

MgfEstimate estimate_mgf(const ReversibleChain& chain, const VectorObservable& f,
                         const Eigen::VectorXd& u, const InitialDistribution& mu0,
                         std::int64_t steps, std::int64_t replicas, std::uint64_t seed,
                         int workers) {
  if (f.states() != chain.n()) fail(errc::dimension_mismatch, "observable does not match chain");
  if (u.size() != f.dimension()) fail(errc::dimension_mismatch, "u does not match observable");
  if (mu0.n() != chain.n()) fail(errc::dimension_mismatch, "mu0 does not match chain");
  if (steps < 0) fail(errc::invalid_parameter, "steps must be nonnegative");
  if (replicas < 1) fail(errc::invalid_parameter, "need at least one replica");

  const CdfSampler kernel_cdf(chain.kernel());
  const std::vector<double> start_cdf = cumulative(mu0.weights());
  const Eigen::VectorXd tilt = f.values() * u;  // <f(s), u> per state

  std::vector<double> samples(static_cast<std::size_t>(replicas));
  for_each_replica(replicas, seed, workers,
                   [&](std::int64_t r, SplitMix64& rng, int) {
                     double exponent = 0.0;
                     int s = sample_cdf(start_cdf, rng.next_unit());
                     for (std::int64_t t = 0; t < steps; ++t) {
                       s = kernel_cdf.sample(s, rng.next_unit());
                       exponent += tilt(s);
                     }
                     samples[static_cast<std::size_t>(r)] = std::exp(exponent);
                   });

  MgfEstimate out;
  out.mean = neumaier_sum(samples) / static_cast<double>(replicas);
  if (replicas > 1) {
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double d = samples[i] - out.mean;
      sq[i] = d * d;
    }
    const double var = neumaier_sum(sq) / static_cast<double>(replicas - 1);
    out.std_error = std::sqrt(var / static_cast<double>(replicas));
  }
  return out;
}

}  // namespace mctail
