#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mctail {

/// Tail-bound families. All bound an event of the form {|S_N| >= eps N}
/// by prefactor * exp(-rate * N).
///
///   kargin         spectral-gap Bernstein bound for m-dimensional
///                  observables: prefactor 3 chi 2^{m/2}, rate eps^2/(8k)
///   kargin_literal same, with the k variant whose third term omits the
///                  factor g (kept for comparison; see KVariant)
///   corollary2     kargin specialized to sigma^2 = L^2, expressed through
///                  alpha(g): rate = alpha (eps/L)^2
///   gillman        one-dimensional spectral bound: prefactor 2 chi,
///                  rate (g/(20 nu)) (eps/L)^2
///   gillman_md     componentwise reduction of gillman to m dimensions:
///                  prefactor 2 m chi, rate scaled by 1/m
///   martingale     Bernstein martingale bound using only the state count:
///                  prefactor 2, rate eps^2 / (2 [2(n-1)L]^2)
///   hoeffding_iid  i.i.d. baseline: prefactor 2, rate eps^2/(2 L^2)
enum class Method {
  kargin,
  kargin_literal,
  corollary2,
  gillman,
  gillman_md,
  martingale,
  hoeffding_iid,
};

Method method_from_string(std::string_view name);
const char* to_string(Method method) noexcept;

/// The two published forms of the constant k. prop9 carries a factor g in
/// the L^2 term and is the default: it is the only variant consistent with
/// alpha_corollary2 (8 k alpha = 1) and the only one that reproduces the
/// reference sample sizes.
enum class KVariant { prop9, literal_thm1 };

/// k = sigma2 (1/2 + 1/g) + L^2 (192/125) g / ln^2(1 + g/2)   [prop9]
/// The literal variant drops the factor g in the second term.
double k_constant(double sigma2, double L, double g, KVariant variant = KVariant::prop9);

/// alpha = (4 + 8/g + (1536/125) g / ln^2(1 + g/2))^{-1}; satisfies
/// alpha * 8 * k_constant(1, 1, g, prop9) = 1 identically.
double alpha_corollary2(double g);

/// Inputs for one bound evaluation. Statistics are given in the units of
/// the observable; the bounds are invariant under (f, eps) -> (c f, c eps).
struct BoundQuery {
  Method method = Method::kargin;
  double epsilon = 0.0;                ///< per-step deviation threshold
  std::optional<std::int64_t> steps;   ///< N; empty for sample-size queries
  int m = 1;                           ///< observable dimension
  double sigma2 = 1.0;                 ///< principal variance
  double L = 1.0;                      ///< sup-norm bound on |f(s)|
  double g = 0.0;                      ///< spectral gap passed explicitly
  double nu = 1.0;                     ///< spread max(mu)/min(mu)
  double chi = 1.0;                    ///< ||mu0/mu||
  std::optional<int> n_states;         ///< martingale method only
  KVariant variant = KVariant::prop9;  ///< k variant (kargin only)
};

struct BoundResult {
  double prefactor = 0.0;
  double rate = 0.0;
  /// min(1, prefactor e^{-rate N}) when steps was given, NaN otherwise.
  /// Clamping happens only here; prefactor and rate are exact.
  double probability = 0.0;
  Method method = Method::kargin;
};

BoundResult bound_kargin(const BoundQuery& q);
BoundResult bound_corollary2(const BoundQuery& q);
BoundResult bound_gillman(const BoundQuery& q);
BoundResult bound_gillman_md(const BoundQuery& q);
BoundResult bound_martingale(const BoundQuery& q);
BoundResult bound_hoeffding_iid(const BoundQuery& q);

/// Dispatch on q.method.
BoundResult evaluate_bound(const BoundQuery& q);

/// Smallest N with prefactor e^{-rate N} <= target, i.e.
/// ceil(ln(prefactor/target)/rate); 0 when target >= prefactor.
std::int64_t sample_size(const BoundQuery& q, double target);

/// One cell of the reference table.
struct Table1Row {
  std::string method;
  std::string chain;
  int m = 0;
  std::int64_t steps = -1;     ///< -1 when the method has no m=20 form
  std::string rounded_mln;     ///< presentation rounding, "-" when absent
  std::string flag;            ///< discrepancy annotations
};

/// Sample sizes for Pr{|S_N/N| >= 0.01} <= 0.05 with sigma^2 = L = 1,
/// chi = nu = 1 across three walks (complete:32, hypercube:5, cycle:33,
/// the last with gap 1 - cos(pi/33)) x m in {1, 20} x three methods.
/// The two circle m=20 cells additionally carry the m=10 evaluation in
/// `flag`: the published numbers for that column match m=10, not m=20.
std::vector<Table1Row> table1();

/// CSV with header: method,chain,m,N_required,N_required_millions_rounded,flag
std::string table1_csv();

/// Presentation rounding of a sample size to millions, matching the
/// granularity of the published table: one decimal below 1 mln, whole
/// millions below 100 mln, multiples of 20 mln above.
std::string round_millions(double steps);

}  // namespace mctail
