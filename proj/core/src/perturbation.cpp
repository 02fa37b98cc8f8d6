#include "mctail/perturbation.hpp"

#include <cmath>
#include <complex>

#include "mctail/bounds.hpp"
#include "mctail/error.hpp"
#include "mctail/linalg.hpp"

namespace mctail {

namespace {

void check_dimensions(const ReversibleChain& chain, const VectorObservable& f,
                      const Eigen::VectorXd& u) {
  if (f.states() != chain.n())
    fail(errc::dimension_mismatch, "observable does not match chain state count");
  if (u.size() != f.dimension())
    fail(errc::dimension_mismatch, "direction dimension does not match observable");
}

void require_centered(const VectorObservable& f) {
  if (f.mean().norm() > 1e-9) fail(errc::non_centered, "observable must be centered");
}

void require_unit_sup_norm(const VectorObservable& f) {
  if (f.linf() > 1.0 + 1e-12)
    fail(errc::precondition, "observable must satisfy linf <= 1; rescale first");
}

void require_unit_direction(const Eigen::VectorXd& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    fail(errc::invalid_parameter, "direction must have unit length");
}

double definitional_gap(const ReversibleChain& chain) {
  const double g = spectrum(chain).gap;
  if (!(g > 0.0)) fail(errc::invalid_gap, "chain has zero spectral gap");
  return g;
}

// Row vector X'(0) = mu V D^{-1} (I - S)^+ D for V = diag(<f(t), u>).
Eigen::VectorXd eigvec_derivative(const ReversibleChain& chain, const Eigen::VectorXd& vdiag) {
  const Eigen::VectorXd sqrt_mu = chain.stationary().cwiseSqrt();
  const linalg::SymmetricEigen eig = linalg::jacobi_eigen(chain.symmetrized());
  if (1.0 - eig.values(1) <= 0.0)
    fail(errc::invalid_gap, "I - P is not invertible off the constants (gap is zero)");

  // y = (mu V) D^{-1} expressed in the symmetric coordinates.
  const Eigen::VectorXd y = sqrt_mu.cwiseProduct(vdiag);

  Eigen::VectorXd z = Eigen::VectorXd::Zero(chain.n());
  for (int i = 1; i < eig.values.size(); ++i) {
    const Eigen::VectorXd q = eig.vectors.col(i);
    z += q.dot(y) / (1.0 - eig.values(i)) * q;
  }
  return z.cwiseProduct(sqrt_mu);  // back to chain coordinates: X' = z^T D
}

}  // namespace

PerturbedKernel perturbed(const ReversibleChain& chain, const VectorObservable& f,
                          const Eigen::VectorXd& u) {
  check_dimensions(chain, f, u);
  const Eigen::VectorXd tilt = f.values() * u;  // <f(s), u> per state

  PerturbedKernel kernel;
  kernel.base = &chain;
  kernel.f = &f;
  kernel.u = u;

  kernel.Pu = chain.kernel().array().rowwise() * tilt.array().exp().transpose();

  const Eigen::VectorXd half = (0.5 * tilt).array().exp();
  kernel.Su = half.asDiagonal() * chain.symmetrized() * half.asDiagonal();
  return kernel;
}

double lambda0(const PerturbedKernel& kernel) {
  return linalg::jacobi_eigen(kernel.Su).values(0);
}

double lambda0_power(const PerturbedKernel& kernel, double rel_tol, int max_iters) {
  // Power iteration on Pu + I; the shift makes the chain aperiodic in the
  // matrix sense so the iteration cannot cycle between parity classes.
  const int n = static_cast<int>(kernel.Pu.rows());
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0);
  double estimate = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd y = kernel.Pu * x + x;
    const double norm = y.sum();  // entries stay positive
    const double next = norm / x.sum();
    y /= norm;
    const bool done = it > 0 && std::abs(next - estimate) <= rel_tol * std::abs(next);
    estimate = next;
    x = y;
    if (done) return estimate - 1.0;
  }
  fail(errc::numerical_failure, "power iteration did not converge");
}

PerturbationReport verify_prop9(const ReversibleChain& chain, const VectorObservable& f,
                                const Eigen::VectorXd& u) {
  check_dimensions(chain, f, u);
  require_centered(f);
  require_unit_sup_norm(f);
  const double g = definitional_gap(chain);

  PerturbationReport report;
  report.k_used = k_constant(f.principal_variance(), 1.0, g, KVariant::prop9);
  report.lambda0 = lambda0(perturbed(chain, f, u));
  report.margin = std::exp(report.k_used * u.squaredNorm()) - report.lambda0;
  return report;
}

PerturbationReport derivative_checks(const ReversibleChain& chain, const VectorObservable& f,
                                     const Eigen::VectorXd& direction, double h) {
  check_dimensions(chain, f, direction);
  require_centered(f);
  require_unit_sup_norm(f);
  require_unit_direction(direction);
  if (!(h >= 1e-6) || !(h <= 1e-2))
    fail(errc::step_out_of_range, "finite-difference step must lie in [1e-6, 1e-2]");
  const double g = definitional_gap(chain);

  const double plus = lambda0(perturbed(chain, f, h * direction));
  const double minus = lambda0(perturbed(chain, f, -h * direction));
  const double at_zero = lambda0(perturbed(chain, f, Eigen::VectorXd::Zero(direction.size())));

  PerturbationReport report;
  report.lambda0 = at_zero;
  report.derivative1 = (plus - minus) / (2.0 * h);
  report.derivative2 = (plus - 2.0 * at_zero + minus) / (h * h);
  report.d2_bound = (1.0 + 2.0 / g) * f.principal_variance();
  return report;
}

double second_derivative_formula(const ReversibleChain& chain, const VectorObservable& f,
                                 const Eigen::VectorXd& direction) {
  check_dimensions(chain, f, direction);
  require_centered(f);
  require_unit_direction(direction);

  const Eigen::VectorXd vdiag = f.values() * direction;
  const Eigen::VectorXd& mu = chain.stationary();

  const double term1 = mu.dot(vdiag.cwiseProduct(vdiag));  // mu V^2 1
  const Eigen::VectorXd xprime = eigvec_derivative(chain, vdiag);
  const double term2 = 2.0 * xprime.dot(chain.kernel() * vdiag);  // 2 X'(0) P V 1
  return term1 + term2;
}

EigvecDerivativeCheck eigvec_derivative_check(const ReversibleChain& chain,
                                              const VectorObservable& f,
                                              const Eigen::VectorXd& direction) {
  check_dimensions(chain, f, direction);
  require_centered(f);
  require_unit_direction(direction);

  const Eigen::VectorXd vdiag = f.values() * direction;
  const Eigen::VectorXd xprime = eigvec_derivative(chain, vdiag);
  const Eigen::VectorXd mu_v = chain.stationary().cwiseProduct(vdiag);

  // X'(0)(I - P), acting with row vectors: x - P^T x.
  const Eigen::VectorXd lhs = xprime - chain.kernel().transpose() * xprime;

  EigvecDerivativeCheck out;
  out.residual_inf = (lhs - mu_v).cwiseAbs().maxCoeff();
  out.orthogonality = std::abs(xprime.sum());
  return out;
}

ResolventReport resolvent_check(const ReversibleChain& chain, int samples) {
  if (samples < 1) fail(errc::invalid_parameter, "need at least one sample point");
  const Spectrum spec = spectrum(chain);
  const double g = spec.gap;
  if (!(g > 0.0)) fail(errc::invalid_gap, "resolvent circle degenerates at zero gap");

  auto norm_at = [&](std::complex<double> zeta) {
    double best = 0.0;
    for (int i = 0; i < spec.eigenvalues.size(); ++i) {
      const double lam = spec.eigenvalues(i);
      best = std::max(best, std::abs(lam / (lam - zeta)));
    }
    return best;
  };

  ResolventReport report;
  report.expected = 2.0 / g;
  const double radius = g / 2.0;
  for (int j = 0; j < samples; ++j) {
    const double theta = 2.0 * M_PI * j / samples;
    // theta = 0 gives zeta0 = 1 - g/2, always included.
    const std::complex<double> zeta =
        std::complex<double>(1.0, 0.0) - radius * std::exp(std::complex<double>(0.0, theta));
    const double value = norm_at(zeta);
    if (j == 0) report.at_zeta0 = value;
    report.max_norm = std::max(report.max_norm, value);
  }
  report.attained_at_zeta0 =
      std::abs(report.max_norm - report.at_zeta0) <= 1e-6 * report.max_norm;
  return report;
}

ScaledValue quadratic_form_power(const ReversibleChain& chain, const VectorObservable& f,
                                 const Eigen::VectorXd& u, const InitialDistribution& mu0,
                                 std::int64_t N) {
  check_dimensions(chain, f, u);
  if (mu0.n() != chain.n()) fail(errc::dimension_mismatch, "mu0 does not match chain");
  if (N < 0) fail(errc::invalid_parameter, "N must be nonnegative");

  const Eigen::VectorXd weights = (f.values() * u).array().exp();
  Eigen::VectorXd w = Eigen::VectorXd::Ones(chain.n());
  ScaledValue out;
  for (std::int64_t t = 0; t < N; ++t) {
    w = chain.kernel() * weights.cwiseProduct(w);
    const double peak = w.maxCoeff();
    if (peak > 1e300) {
      w *= 0x1.0p-512;
      out.exponent2 += 512;
    } else if (peak > 0.0 && peak < 1e-300) {
      w *= 0x1.0p+512;
      out.exponent2 -= 512;
    }
  }
  out.mantissa = mu0.weights().dot(w);
  return out;
}

double verify_lemma8(const ReversibleChain& chain, const VectorObservable& f,
                     const Eigen::VectorXd& u, const InitialDistribution& mu0, std::int64_t N) {
  check_dimensions(chain, f, u);
  if (u.norm() > 1.0 + 1e-12) fail(errc::precondition, "hypothesis |u| <= 1 violated");
  require_unit_sup_norm(f);
  if (N < 0) fail(errc::invalid_parameter, "N must be nonnegative");

  const double top = lambda0(perturbed(chain, f, u));
  const double bound = 3.0 * chi_distance(mu0, chain) * std::pow(top, static_cast<double>(N));
  return bound - quadratic_form_power(chain, f, u, mu0, N).value();
}

}  // namespace mctail
