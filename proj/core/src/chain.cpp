#include "mctail/chain.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include "mctail/error.hpp"
#include "mctail/linalg.hpp"

namespace mctail {

namespace {

constexpr double kRowSumTol = 1e-9;
constexpr double kMuSumTol = 1e-9;

void validate_square(const Eigen::MatrixXd& kernel) {
  if (kernel.rows() != kernel.cols())
    fail(errc::invalid_parameter, "transition matrix must be square");
  if (kernel.rows() < 2) fail(errc::invalid_parameter, "chain must have at least 2 states");
}

}  // namespace

ReversibleChain ReversibleChain::from_matrix(Eigen::MatrixXd kernel, Eigen::VectorXd mu,
                                             std::string label, double balance_tol) {
  validate_square(kernel);
  const int n = static_cast<int>(kernel.rows());
  if (mu.size() != n)
    fail(errc::dimension_mismatch, "invariant distribution size does not match state count");

  for (int s = 0; s < n; ++s) {
    double row_sum = 0.0;
    for (int t = 0; t < n; ++t) {
      const double p = kernel(s, t);
      if (!(p >= 0.0) || p > 1.0 + kRowSumTol)
        fail(errc::non_stochastic_row,
             "row " + std::to_string(s) + " has entry outside [0,1]");
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > kRowSumTol)
      fail(errc::non_stochastic_row, "row " + std::to_string(s) + " sums to " +
                                         std::to_string(row_sum) + ", expected 1");
  }

  if (!(mu.minCoeff() > 0.0))
    fail(errc::invalid_parameter, "invariant distribution must be strictly positive");
  if (std::abs(mu.sum() - 1.0) > kMuSumTol)
    fail(errc::invalid_parameter, "invariant distribution must sum to 1");

  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) {
      const double gap = std::abs(mu(s) * kernel(s, t) - mu(t) * kernel(t, s));
      if (gap > balance_tol)
        fail(errc::not_reversible, "detailed balance violated at (" + std::to_string(s) + "," +
                                       std::to_string(t) + ") by " + std::to_string(gap));
    }

  // Implied by balance + stochasticity, checked as a guard against NaN input.
  const double stat_residual = (kernel.transpose() * mu - mu).cwiseAbs().maxCoeff();
  if (!(stat_residual <= std::max(1e-10, n * balance_tol)))
    fail(errc::not_reversible, "mu is not invariant under the kernel");

  return ReversibleChain(std::move(kernel), std::move(mu), std::move(label));
}

Eigen::MatrixXd ReversibleChain::symmetrized() const {
  const Eigen::VectorXd d = mu_.cwiseSqrt();
  return d.asDiagonal() * kernel_ * d.cwiseInverse().asDiagonal();
}

ReversibleChain build_complete(int n) {
  if (n < 2) fail(errc::invalid_parameter, "complete graph needs n >= 2");
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(n, n, 1.0 / (n - 1));
  p.diagonal().setZero();
  return ReversibleChain::from_matrix(std::move(p), Eigen::VectorXd::Constant(n, 1.0 / n),
                                      "complete:" + std::to_string(n));
}

ReversibleChain build_lazy_hypercube(int d) {
  if (d < 1) fail(errc::invalid_parameter, "hypercube needs d >= 1");
  if (d > 12) fail(errc::capacity, "hypercube dimension capped at 12 (dense 2^d x 2^d storage)");
  const int n = 1 << d;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  const double w = 1.0 / (d + 1);
  for (int s = 0; s < n; ++s) {
    p(s, s) = w;
    for (int b = 0; b < d; ++b) p(s, s ^ (1 << b)) = w;
  }
  return ReversibleChain::from_matrix(std::move(p), Eigen::VectorXd::Constant(n, 1.0 / n),
                                      "hypercube:" + std::to_string(d));
}

ReversibleChain build_cycle(int n) {
  if (n < 3) fail(errc::invalid_parameter, "cycle needs n >= 3");
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    p(s, (s + 1) % n) = 0.5;
    p(s, (s + n - 1) % n) = 0.5;
  }
  return ReversibleChain::from_matrix(std::move(p), Eigen::VectorXd::Constant(n, 1.0 / n),
                                      "cycle:" + std::to_string(n));
}

namespace {

// Whitespace tokens with '#' comments stripped to end of line.
std::vector<std::string> tokenize(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  return tokens;
}

double parse_real(const std::string& tok) {
  double value = 0.0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    fail(errc::parse_error, "expected a real number, got '" + tok + "'");
  return value;
}

long parse_count(const std::string& tok) {
  long value = 0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    fail(errc::parse_error, "expected an integer, got '" + tok + "'");
  return value;
}

}  // namespace

ReversibleChain parse_chain(std::istream& in, std::string label) {
  const std::vector<std::string> tokens = tokenize(in);
  if (tokens.empty()) fail(errc::parse_error, "empty chain file");

  const long n_long = parse_count(tokens[0]);
  if (n_long < 2) fail(errc::invalid_parameter, "chain must have at least 2 states");
  if (n_long > 8192) fail(errc::capacity, "chain too large for dense storage (n > 8192)");
  const int n = static_cast<int>(n_long);

  const std::size_t need = 1 + static_cast<std::size_t>(n) * n;
  if (tokens.size() < need)
    fail(errc::parse_error, "expected " + std::to_string(n) + "*" + std::to_string(n) +
                                " transition probabilities");

  Eigen::MatrixXd p(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) p(s, t) = parse_real(tokens[1 + s * n + t]);

  Eigen::VectorXd mu;
  std::size_t pos = need;
  if (pos < tokens.size() && tokens[pos] == "mu:") {
    ++pos;
    if (tokens.size() - pos < static_cast<std::size_t>(n))
      fail(errc::parse_error, "mu: must be followed by n reals");
    mu.resize(n);
    for (int s = 0; s < n; ++s) mu(s) = parse_real(tokens[pos + s]);
    pos += n;
  }
  if (pos != tokens.size())
    fail(errc::parse_error, "unexpected trailing token '" + tokens[pos] + "'");

  if (mu.size() == 0) {
    // Validate stochasticity before power iteration so bad rows report as such.
    for (int s = 0; s < n; ++s) {
      if (p.row(s).minCoeff() < 0.0)
        fail(errc::non_stochastic_row, "row " + std::to_string(s) + " has a negative entry");
      if (std::abs(p.row(s).sum() - 1.0) > kRowSumTol)
        fail(errc::non_stochastic_row,
             "row " + std::to_string(s) + " sums to " + std::to_string(p.row(s).sum()));
    }
    mu = linalg::stationary_power(p);
    if (mu.minCoeff() <= 1e-12)
      fail(errc::reducible_chain, "computed invariant distribution has a (near-)zero entry");
  }

  return ReversibleChain::from_matrix(std::move(p), std::move(mu), std::move(label), 1e-8);
}

ReversibleChain load_chain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open chain file '" + path.string() + "'");
  return parse_chain(in, path.string());
}

ReversibleChain chain_from_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    if (head == "complete" || head == "hypercube" || head == "cycle") {
      const long v = parse_count(arg);
      if (head == "complete") return build_complete(static_cast<int>(v));
      if (head == "hypercube") return build_lazy_hypercube(static_cast<int>(v));
      return build_cycle(static_cast<int>(v));
    }
  }
  return load_chain(spec);
}

Spectrum spectrum(const ReversibleChain& chain) {
  const linalg::SymmetricEigen eig = linalg::jacobi_eigen(chain.symmetrized());
  Spectrum out;
  out.eigenvalues = eig.values;
  if (std::abs(out.eigenvalues(0) - 1.0) > 1e-10)
    fail(errc::numerical_failure, "top eigenvalue deviates from 1 beyond tolerance");
  out.gap = 1.0 - out.eigenvalues(1);
  double max_abs = 0.0;
  for (int i = 1; i < out.eigenvalues.size(); ++i)
    max_abs = std::max(max_abs, std::abs(out.eigenvalues(i)));
  out.absolute_gap = 1.0 - max_abs;
  return out;
}

double spread(const ReversibleChain& chain) {
  return chain.stationary().maxCoeff() / chain.stationary().minCoeff();
}

InitialDistribution InitialDistribution::from_weights(Eigen::VectorXd weights) {
  if (weights.size() == 0) fail(errc::invalid_parameter, "empty distribution");
  if (weights.minCoeff() < 0.0)
    fail(errc::invalid_parameter, "distribution weights must be nonnegative");
  if (std::abs(weights.sum() - 1.0) > 1e-9)
    fail(errc::invalid_parameter, "distribution weights must sum to 1");
  return InitialDistribution(std::move(weights));
}

InitialDistribution InitialDistribution::uniform(int n) {
  if (n < 1) fail(errc::invalid_parameter, "uniform distribution needs n >= 1");
  return InitialDistribution(Eigen::VectorXd::Constant(n, 1.0 / n));
}

InitialDistribution InitialDistribution::point_mass(int n, int state) {
  if (n < 1 || state < 0 || state >= n)
    fail(errc::invalid_parameter, "point mass state out of range");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w(state) = 1.0;
  return InitialDistribution(std::move(w));
}

double chi_distance(const InitialDistribution& mu0, const ReversibleChain& chain) {
  if (mu0.n() != chain.n())
    fail(errc::dimension_mismatch, "initial distribution size does not match chain");
  const Eigen::VectorXd& w = mu0.weights();
  const Eigen::VectorXd& mu = chain.stationary();
  double sum = 0.0;
  for (int s = 0; s < chain.n(); ++s) sum += w(s) * w(s) / mu(s);
  return std::sqrt(sum);
}

}  // namespace mctail
