#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mctail/bounds.hpp"
#include "mctail/chain.hpp"
#include "mctail/error.hpp"
#include "mctail/format.hpp"
#include "mctail/observable.hpp"
#include "mctail/perturbation.hpp"
#include "mctail/rng.hpp"
#include "mctail/simulate.hpp"

namespace mctail::cli {

namespace {

std::vector<double> parse_grid(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) {
    std::istringstream ss(text);
    double v = 0.0;
    if (!(ss >> v)) fail(errc::parse_error, "bad grid '" + text + "'");
    return {v};
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos)
    fail(errc::parse_error, "grid must be a:b:step, got '" + text + "'");
  double a = 0.0, b = 0.0, step = 0.0;
  try {
    a = std::stod(text.substr(0, first));
    b = std::stod(text.substr(first + 1, second - first - 1));
    step = std::stod(text.substr(second + 1));
  } catch (const std::exception&) {
    fail(errc::parse_error, "grid must be a:b:step, got '" + text + "'");
  }
  if (!(step > 0.0) || b < a) fail(errc::parse_error, "grid needs step > 0 and b >= a");
  std::vector<double> grid;
  for (double v = a; v <= b + 1e-12; v += step) grid.push_back(v);
  return grid;
}

Eigen::VectorXd random_unit_direction(int m, std::uint64_t seed) {
  SplitMix64 rng = derive_stream(seed, 0xd19ULL);
  Eigen::VectorXd dir(m);
  do {
    for (int j = 0; j < m; ++j) dir(j) = rng.next_gaussian();
  } while (dir.norm() < 1e-12);
  return dir / dir.norm();
}

// Per-subcommand flag bundle; only the flags a subcommand registers are used.
struct Options {
  std::string chain_spec;
  std::string observable_path;
  std::string method = "kargin";
  std::string variant = "prop9";
  std::string eps_grid = "0.02:0.2:0.02";
  int m = 0;  // 0 = take from observable, else 1
  double epsilon = 0.01;
  double sigma2 = 1.0;
  double L = 1.0;
  double chi = 1.0;
  double target = 0.05;
  std::int64_t steps = -1;
  std::int64_t replicas = 10000;
  std::uint64_t seed = 1;
  int trials = 3;
  std::optional<double> nu;
  std::optional<double> gap_override;
};

struct QueryParts {
  ReversibleChain chain;
  BoundQuery query;
};

QueryParts build_query(const Options& opt) {
  ReversibleChain chain = chain_from_spec(opt.chain_spec);
  BoundQuery q;
  q.method = method_from_string(opt.method);
  q.variant = opt.variant == "literal" || opt.variant == "literal-thm1"
                  ? KVariant::literal_thm1
                  : KVariant::prop9;
  q.epsilon = opt.epsilon;
  if (opt.steps >= 0) q.steps = opt.steps;
  q.chi = opt.chi;
  q.n_states = chain.n();

  if (!opt.observable_path.empty()) {
    const VectorObservable f = load_observable(opt.observable_path, chain);
    if (f.mean().norm() > 1e-9)
      fail(errc::non_centered, "observable must be centered before bound evaluation");
    if (!(f.linf() > 0.0)) fail(errc::invalid_parameter, "observable is identically zero");
    q.m = f.dimension();
    if (opt.m > 0 && opt.m != q.m)
      fail(errc::invalid_parameter, "--m contradicts the observable dimension");
    q.sigma2 = f.principal_variance();
    q.L = f.linf();
  } else {
    q.m = opt.m > 0 ? opt.m : 1;
    q.sigma2 = opt.sigma2;
    q.L = opt.L;
  }

  q.g = opt.gap_override ? *opt.gap_override : spectrum(chain).gap;
  q.nu = opt.nu ? *opt.nu : spread(chain);
  return QueryParts{std::move(chain), q};
}

int run_spectral(const Options& opt, std::ostream& out) {
  const ReversibleChain chain = chain_from_spec(opt.chain_spec);
  const Spectrum spec = spectrum(chain);
  out << "chain,n,gap,absolute_gap,lambda1,lambda_min,spread\n";
  out << chain.label() << ',' << chain.n() << ',' << fmt12(spec.gap) << ','
      << fmt12(spec.absolute_gap) << ',' << fmt12(spec.eigenvalues(1)) << ','
      << fmt12(spec.eigenvalues(spec.eigenvalues.size() - 1)) << ',' << fmt12(spread(chain))
      << '\n';
  return 0;
}

int run_bound(const Options& opt, std::ostream& out) {
  QueryParts parts = build_query(opt);
  const BoundResult r = evaluate_bound(parts.query);
  out << "method,chain,m,epsilon,N,sigma2,L,g,nu,chi,prefactor,rate,probability\n";
  out << to_string(r.method) << ',' << parts.chain.label() << ',' << parts.query.m << ','
      << fmt12(parts.query.epsilon) << ',';
  if (parts.query.steps) out << *parts.query.steps;
  out << ',' << fmt12(parts.query.sigma2) << ',' << fmt12(parts.query.L) << ','
      << fmt12(parts.query.g) << ',' << fmt12(parts.query.nu) << ',' << fmt12(parts.query.chi)
      << ',' << fmt12(r.prefactor) << ',' << fmt12(r.rate) << ',';
  if (parts.query.steps) out << fmt12(r.probability);
  out << '\n';
  return 0;
}

int run_sample_size(const Options& opt, std::ostream& out) {
  QueryParts parts = build_query(opt);
  const std::int64_t needed = sample_size(parts.query, opt.target);
  out << "method,chain,m,epsilon,target,sigma2,L,g,nu,chi,N_required\n";
  out << to_string(parts.query.method) << ',' << parts.chain.label() << ',' << parts.query.m
      << ',' << fmt12(parts.query.epsilon) << ',' << fmt12(opt.target) << ','
      << fmt12(parts.query.sigma2) << ',' << fmt12(parts.query.L) << ',' << fmt12(parts.query.g)
      << ',' << fmt12(parts.query.nu) << ',' << fmt12(parts.query.chi) << ',' << needed << '\n';
  return 0;
}

int run_simulate(const Options& opt, std::ostream& out) {
  const ReversibleChain chain = chain_from_spec(opt.chain_spec);
  std::optional<VectorObservable> f;
  if (!opt.observable_path.empty()) {
    f = load_observable(opt.observable_path, chain);
    if (f->mean().norm() > 1e-9)
      fail(errc::non_centered, "observable must be centered (bound column assumes Ef = 0)");
  } else {
    f = random_observable(chain, opt.m > 0 ? opt.m : 1, opt.L, opt.seed);
  }
  const std::int64_t steps = opt.steps >= 0 ? opt.steps : 1000;
  const InitialDistribution mu0 = InitialDistribution::from_weights(chain.stationary());

  const SimulationReport report = simulate_tails(chain, *f, mu0, steps, opt.replicas,
                                                 parse_grid(opt.eps_grid), opt.seed);

  BoundQuery q;
  q.method = Method::kargin;
  q.m = f->dimension();
  q.sigma2 = f->principal_variance();
  q.L = f->linf();
  q.g = opt.gap_override ? *opt.gap_override : spectrum(chain).gap;
  q.nu = spread(chain);
  q.chi = chi_distance(mu0, chain);
  q.steps = steps;

  out << "epsilon,hits,replicas,estimate,upper99,bound_kargin,dominated\n";
  for (std::size_t i = 0; i < report.epsilon_grid.size(); ++i) {
    q.epsilon = report.epsilon_grid[i];
    const double bound = bound_kargin(q).probability;
    const bool dominated = report.upper99[i] <= bound;
    out << fmt12(report.epsilon_grid[i]) << ',' << report.hits[i] << ',' << report.replicas
        << ',' << fmt12(report.estimate[i]) << ',' << fmt12(report.upper99[i]) << ','
        << fmt12(bound) << ',' << (dominated ? "true" : "false") << '\n';
  }
  return 0;
}

struct CheckRow {
  const char* name;
  std::uint64_t seed;
  double value;
  double bound;
};

int run_verify(const Options& opt, std::ostream& out) {
  const ReversibleChain chain = chain_from_spec(opt.chain_spec);
  const double g = spectrum(chain).gap;
  if (!(g > 0.0)) fail(errc::invalid_gap, "verify needs a chain with positive spectral gap");

  std::vector<CheckRow> rows;
  const int m = opt.m > 0 ? opt.m : 3;

  for (int trial = 0; trial < opt.trials; ++trial) {
    const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(trial);
    const VectorObservable f = random_observable(chain, m, 1.0, seed);
    const Eigen::VectorXd dir = random_unit_direction(m, seed);

    {  // lambda0(u) <= e^{k|u|^2}, worst point of a |u| grid, in log space
      double worst = -1e300;
      for (double z : {0.25, 0.5, 1.0, 2.0, 3.0}) {
        const PerturbationReport rep = verify_prop9(chain, f, z * dir);
        worst = std::max(worst, std::log(rep.lambda0) - rep.k_used * z * z);
      }
      rows.push_back({"prop9_log_margin", seed, worst, 0.0});
    }
    {
      const PerturbationReport rep = derivative_checks(chain, f, dir, 1e-4);
      rows.push_back({"lemma10_first_derivative", seed, std::abs(rep.derivative1), 1e-6});
      rows.push_back({"lemma12_second_derivative", seed, rep.derivative2,
                      rep.d2_bound + 1e-6});
    }
    {
      const double formula = second_derivative_formula(chain, f, dir);
      const double fd_h = derivative_checks(chain, f, dir, 1e-3).derivative2;
      const double fd_2h = derivative_checks(chain, f, dir, 2e-3).derivative2;
      rows.push_back({"eq13_formula_vs_fd", seed, std::abs(fd_h - formula),
                      std::max(std::abs(fd_2h - formula) / 3.0, 1e-7)});
    }
    {
      const EigvecDerivativeCheck chk = eigvec_derivative_check(chain, f, dir);
      rows.push_back({"eq12_residual", seed, chk.residual_inf, 1e-11});
      rows.push_back({"eq12_orthogonality", seed, chk.orthogonality, 1e-12});
    }
    {
      double worst = -1e300;
      for (double z : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0})
        worst = std::max(worst, lambda0(perturbed(chain, f, z * dir)) - std::exp(z));
      rows.push_back({"lemma18_real_ray", seed, worst, 0.0});
    }
    {
      const PerturbedKernel kernel = perturbed(chain, f, 0.7 * dir);
      rows.push_back({"lemma7_similarity", seed,
                      std::abs(lambda0_power(kernel) - lambda0(kernel)), 1e-8});
    }
    {
      const InitialDistribution mu0 =
          InitialDistribution::point_mass(chain.n(), static_cast<int>(seed % chain.n()));
      const double margin = verify_lemma8(chain, f, 0.8 * dir, mu0, 50);
      rows.push_back({"lemma8_margin", seed, -margin, 0.0});
    }
  }
  {
    const ResolventReport rr = resolvent_check(chain, 64);
    rows.push_back({"lemma15_resolvent_norm", opt.seed,
                    std::abs(rr.max_norm - rr.expected) / rr.expected, 1e-6});
    rows.push_back({"lemma15_attained_at_zeta0", opt.seed,
                    std::abs(rr.max_norm - rr.at_zeta0) / rr.max_norm, 1e-6});
  }

  bool all_pass = true;
  out << "check_name,chain,seed,value,bound,margin,pass\n";
  for (const CheckRow& row : rows) {
    const double margin = row.bound - row.value;
    const bool pass = margin >= 0.0;
    all_pass = all_pass && pass;
    out << row.name << ',' << chain.label() << ',' << row.seed << ',' << fmt12(row.value)
        << ',' << fmt12(row.bound) << ',' << fmt12(margin) << ','
        << (pass ? "true" : "false") << '\n';
  }
  return all_pass ? 0 : 3;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tail bounds for sums of vector observables on reversible Markov chains"};
  app.require_subcommand(1);
  Options opt;

  auto add_chain = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--chain", opt.chain_spec,
                              "builder spec (complete:N | hypercube:D | cycle:N) or file path");
    if (required) o->required();
  };
  auto add_query_flags = [&](CLI::App* sub) {
    sub->add_option("--method", opt.method,
                    "kargin | kargin-literal | corollary2 | gillman | gillman-md | martingale "
                    "| hoeffding-iid");
    sub->add_option("--observable", opt.observable_path, "observable file (centered)");
    sub->add_option("--m", opt.m, "observable dimension");
    sub->add_option("--eps", opt.epsilon, "per-step deviation threshold");
    sub->add_option("--sigma2", opt.sigma2, "principal variance (without --observable)");
    sub->add_option("--L", opt.L, "sup-norm bound (without --observable)");
    sub->add_option("--chi", opt.chi, "||mu0/mu||, 1 for a stationary start");
    sub->add_option("--nu", opt.nu, "spread override (default: from chain)");
    sub->add_option("--gap-override", opt.gap_override,
                    "spectral gap override (default: 1 - lambda_1 of the chain)");
    sub->add_option("--variant", opt.variant, "k variant: prop9 | literal");
  };

  CLI::App* spectral = app.add_subcommand("spectral", "eigenvalues, gaps and spread");
  add_chain(spectral, true);

  CLI::App* bound = app.add_subcommand("bound", "evaluate one tail bound");
  add_chain(bound, true);
  add_query_flags(bound);
  bound->add_option("--N", opt.steps, "number of steps");

  CLI::App* size = app.add_subcommand("sample-size", "invert a bound for N");
  add_chain(size, true);
  add_query_flags(size);
  size->add_option("--target", opt.target, "target probability in (0,1)")->required();

  CLI::App* table = app.add_subcommand("table1", "reference sample-size table");

  CLI::App* verify = app.add_subcommand("verify", "numerical lemma checks (exit 3 on failure)");
  add_chain(verify, true);
  verify->add_option("--m", opt.m, "observable dimension (default 3)");
  verify->add_option("--seed", opt.seed, "base seed");
  verify->add_option("--trials", opt.trials, "random observables per check");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo tail estimation");
  add_chain(simulate, true);
  simulate->add_option("--observable", opt.observable_path, "observable file (centered)");
  simulate->add_option("--m", opt.m, "dimension for a seeded random observable");
  simulate->add_option("--L", opt.L, "sup-norm for the random observable");
  simulate->add_option("--N", opt.steps, "steps per replica");
  simulate->add_option("--replicas", opt.replicas, "number of replicas");
  simulate->add_option("--eps-grid", opt.eps_grid, "threshold grid a:b:step");
  simulate->add_option("--seed", opt.seed, "master seed");
  simulate->add_option("--gap-override", opt.gap_override, "gap for the bound column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error:cli: " << e.what() << '\n';
    return 2;
  }

  try {
    if (spectral->parsed()) return run_spectral(opt, out);
    if (bound->parsed()) return run_bound(opt, out);
    if (size->parsed()) return run_sample_size(opt, out);
    if (table->parsed()) {
      out << table1_csv();
      return 0;
    }
    if (verify->parsed()) return run_verify(opt, out);
    if (simulate->parsed()) return run_simulate(opt, out);
  } catch (const Error& e) {
    err << "error:" << e.code_name() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error:internal: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace mctail::cli
