#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>

#include "mctail/chain.hpp"
#include "mctail/observable.hpp"

namespace mctail {

/// Exponentially tilted kernel and its symmetric companion:
///   Pu_{st} = P_{st} e^{<f(t), u>}
///   Su      = E_u S E_u,  E_u = diag(e^{<f(s), u>/2}),  S = D P D^{-1}
/// Pu and Su are similar and share their (real) eigenvalue multiset; all
/// eigenvalue computations go through Su.
struct PerturbedKernel {
  const ReversibleChain* base = nullptr;
  const VectorObservable* f = nullptr;
  Eigen::VectorXd u;
  Eigen::MatrixXd Pu;
  Eigen::MatrixXd Su;
};

PerturbedKernel perturbed(const ReversibleChain& chain, const VectorObservable& f,
                          const Eigen::VectorXd& u);

/// Top eigenvalue of the tilted kernel, via the symmetric eigensolver on Su.
/// By Perron-Frobenius it is also the spectral radius; lambda0 at u = 0 is 1.
double lambda0(const PerturbedKernel& kernel);

/// Independent route to the same number: shifted power iteration on the
/// nonsymmetric Pu. Used by the verification surface to cross-check the
/// similarity claim without touching the symmetric path.
double lambda0_power(const PerturbedKernel& kernel, double rel_tol = 1e-13,
                     int max_iters = 200000);

struct PerturbationReport {
  double lambda0 = std::numeric_limits<double>::quiet_NaN();
  double k_used = std::numeric_limits<double>::quiet_NaN();
  /// e^{k|u|^2} - lambda0(u), recorded as computed (may be +inf, never clamped).
  double margin = std::numeric_limits<double>::quiet_NaN();
  double derivative1 = std::numeric_limits<double>::quiet_NaN();
  double derivative2 = std::numeric_limits<double>::quiet_NaN();
  /// (1 + 2/g) sigma^2, the analytic ceiling for derivative2.
  double d2_bound = std::numeric_limits<double>::quiet_NaN();
};

/// Checks lambda0(u) <= e^{k|u|^2} with k = k_constant(sigma^2(f), 1, g).
/// Requires a centered f with linf <= 1 and a chain with positive gap
/// (g is always the definitional 1 - lambda_1 here).
PerturbationReport verify_prop9(const ReversibleChain& chain, const VectorObservable& f,
                                const Eigen::VectorXd& u);

/// Central finite differences of lambda0 along a unit direction:
///   derivative1 = (lambda0(h u) - lambda0(-h u)) / (2h)        -> 0
///   derivative2 = (lambda0(h u) - 2 lambda0(0) + lambda0(-h u)) / h^2
/// h must lie in [1e-6, 1e-2].
PerturbationReport derivative_checks(const ReversibleChain& chain, const VectorObservable& f,
                                     const Eigen::VectorXd& direction, double h);

/// Closed form for the second derivative at u = 0:
///   lambda0''(0) = mu V^2 1 + 2 X'(0) P V 1,   V = diag(<f(t), u>),
/// with X'(0) = mu V (I - P)^+ realized through the spectral decomposition
/// of S ((I - S)^+ has eigenvalues 1/(1 - lambda_i) for i >= 1, zero on the
/// top eigenvector).
double second_derivative_formula(const ReversibleChain& chain, const VectorObservable& f,
                                 const Eigen::VectorXd& direction);

/// Residuals of the defining equation for the eigenvector derivative:
///   residual_inf   = || X'(0)(I - P) - mu V ||_inf
///   orthogonality  = | <X'(0), 1> |
struct EigvecDerivativeCheck {
  double residual_inf = 0.0;
  double orthogonality = 0.0;
};

EigvecDerivativeCheck eigvec_derivative_check(const ReversibleChain& chain,
                                              const VectorObservable& f,
                                              const Eigen::VectorXd& direction);

/// Samples zeta on the circle |zeta - 1| = g/2 (always including
/// zeta0 = 1 - g/2) and evaluates ||R_S(zeta) S|| = max_i |lambda_i /
/// (lambda_i - zeta)|; the sampled maximum should equal 2/g and be attained
/// at zeta0.
struct ResolventReport {
  double max_norm = 0.0;
  double at_zeta0 = 0.0;
  double expected = 0.0;  ///< 2/g
  bool attained_at_zeta0 = false;
};

ResolventReport resolvent_check(const ReversibleChain& chain, int samples);

/// (mu0, [P(u)]^N 1) by N matrix-vector products, no eigendecomposition.
/// Intermediates beyond 1e300 are rescaled by powers of two; the result is
/// mantissa * 2^exponent2.
struct ScaledValue {
  double mantissa = 0.0;
  std::int64_t exponent2 = 0;

  double value() const noexcept {
    if (exponent2 > 3000) return std::numeric_limits<double>::infinity();
    if (exponent2 < -3000) return 0.0;
    return std::ldexp(mantissa, static_cast<int>(exponent2));
  }
  double log() const noexcept {
    return std::log(mantissa) + 0.69314718055994530942 * static_cast<double>(exponent2);
  }
};

ScaledValue quadratic_form_power(const ReversibleChain& chain, const VectorObservable& f,
                                 const Eigen::VectorXd& u, const InitialDistribution& mu0,
                                 std::int64_t N);

/// margin = 3 chi lambda0(u)^N - (mu0, [P(u)]^N 1); nonnegative whenever
/// |u| <= 1 and linf(f) <= 1 (enforced as preconditions).
double verify_lemma8(const ReversibleChain& chain, const VectorObservable& f,
                     const Eigen::VectorXd& u, const InitialDistribution& mu0, std::int64_t N);

}  // namespace mctail
