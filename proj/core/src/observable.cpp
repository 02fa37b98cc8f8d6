#include "mctail/observable.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include "mctail/error.hpp"
#include "mctail/linalg.hpp"
#include "mctail/rng.hpp"

namespace mctail {

namespace {

double top_second_moment_eigenvalue(const Eigen::MatrixXd& values, const Eigen::VectorXd& mu) {
  const Eigen::MatrixXd second_moment =
      values.transpose() * mu.asDiagonal() * values;  // m x m, PSD up to roundoff
  if (second_moment.rows() == 1) return std::max(0.0, second_moment(0, 0));
  return std::max(0.0, linalg::jacobi_eigen(second_moment).values(0));
}

}  // namespace

VectorObservable VectorObservable::from_values(Eigen::MatrixXd values,
                                               const ReversibleChain& chain) {
  if (values.rows() != chain.n())
    fail(errc::dimension_mismatch, "observable has " + std::to_string(values.rows()) +
                                       " rows, chain has " + std::to_string(chain.n()) +
                                       " states");
  if (values.cols() < 1) fail(errc::invalid_parameter, "observable dimension must be >= 1");

  Eigen::VectorXd mean = values.transpose() * chain.stationary();
  const double linf = values.rowwise().norm().maxCoeff();
  const double pv = top_second_moment_eigenvalue(values, chain.stationary());
  return VectorObservable(std::move(values), std::move(mean), linf, pv);
}

VectorObservable parse_observable(std::istream& in, const ReversibleChain& chain) {
  std::vector<std::string> tokens;
  {
    std::string line;
    while (std::getline(in, line)) {
      if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
    }
  }
  if (tokens.size() < 2) fail(errc::parse_error, "observable file must start with 'n m'");

  auto parse_long = [](const std::string& tok) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      fail(errc::parse_error, "expected an integer, got '" + tok + "'");
    return v;
  };
  auto parse_real = [](const std::string& tok) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      fail(errc::parse_error, "expected a real number, got '" + tok + "'");
    return v;
  };

  const long n = parse_long(tokens[0]);
  const long m = parse_long(tokens[1]);
  if (m < 1) fail(errc::invalid_parameter, "observable dimension must be >= 1");
  if (n != chain.n())
    fail(errc::dimension_mismatch, "observable row count " + std::to_string(n) +
                                       " does not match chain states " +
                                       std::to_string(chain.n()));
  const std::size_t need = 2 + static_cast<std::size_t>(n) * m;
  if (tokens.size() != need)
    fail(errc::parse_error, "expected exactly n*m values after the header");

  Eigen::MatrixXd values(n, m);
  for (long s = 0; s < n; ++s)
    for (long j = 0; j < m; ++j) values(s, j) = parse_real(tokens[2 + s * m + j]);
  return VectorObservable::from_values(std::move(values), chain);
}

VectorObservable load_observable(const std::filesystem::path& path,
                                 const ReversibleChain& chain) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open observable file '" + path.string() + "'");
  return parse_observable(in, chain);
}

VectorObservable center(const VectorObservable& f, const ReversibleChain& chain) {
  Eigen::MatrixXd values = f.values();
  values.rowwise() -= f.mean().transpose();
  return VectorObservable::from_values(std::move(values), chain);
}

double principal_variance(const VectorObservable& f, const ReversibleChain& chain) {
  if (f.states() != chain.n())
    fail(errc::dimension_mismatch, "observable does not match chain");
  if (f.mean().norm() > 1e-9)
    fail(errc::non_centered, "principal variance requires a centered observable");
  return top_second_moment_eigenvalue(f.values(), chain.stationary());
}

VectorObservable random_observable(const ReversibleChain& chain, int m, double L,
                                   std::uint64_t seed) {
  if (m < 1) fail(errc::invalid_parameter, "observable dimension must be >= 1");
  if (!(L > 0.0)) fail(errc::invalid_parameter, "L must be positive");

  SplitMix64 rng = derive_stream(seed, 0x0b5e7fULL);
  Eigen::MatrixXd values(chain.n(), m);
  for (int s = 0; s < chain.n(); ++s)
    for (int j = 0; j < m; ++j) values(s, j) = rng.next_gaussian();

  const Eigen::VectorXd mean = values.transpose() * chain.stationary();
  values.rowwise() -= mean.transpose();

  const double linf = values.rowwise().norm().maxCoeff();
  if (linf > L) values *= L / linf;
  return VectorObservable::from_values(std::move(values), chain);
}

}  // namespace mctail
