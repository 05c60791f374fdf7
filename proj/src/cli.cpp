#include "ergo/cli.hpp"

#include "ergo/circle.hpp"
#include "ergo/expsums.hpp"
#include "ergo/harness.hpp"
#include "ergo/operators.hpp"
#include "ergo/primes.hpp"
#include "ergo/seminorms.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace ergo {

namespace {

/// Every flag any subcommand may read. Unused ones keep their defaults.
struct CliConfig {
  int k = 1;
  int k_prime = 0;
  int gamma_degree = 1;
  std::vector<int> gamma_only;
  std::string gamma_list;  // "1,0;0,2"
  std::string region = "ball";
  double half_side = 0.5;
  std::vector<double> semi_axes;
  double t = 1.0;
  std::vector<double> xi;
  std::vector<std::int64_t> xi_num, xi_den;
  std::int64_t q = 1;
  std::vector<std::int64_t> a;
  std::uint64_t limit = 0;
  // plan
  double p = 2.0, p0 = 3.0, tau = 0.4, chi = 0.05, rho = 10.0, beta = 0.4, delta = 0.0;
  int u = 1;
  // misc
  std::string mode;
  std::string values, times, sequence;
  double r = 2.0, lambda = 1.0;
  std::string signal, output, format = "json";
  std::vector<std::string> family;
  std::string weight = "unit";
  std::string kernel = "riesz";
  int kernel_index = 0;
  std::string twist;
  std::string what = "plan";
  std::string variant = "v";
  std::string theta = "phi";
  std::string level = "leq";
  std::int64_t index = 1, n = 1, s = 2;
  bool tilde = false;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> experiments;
};

std::string fmt(double v) {
  if (std::abs(v) < 5e-11) v = 0.0;  // no "-0.0000000000"
  std::ostringstream s;
  s << std::fixed << std::setprecision(10) << v;
  return s.str();
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParameterError("not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw ParameterError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<MultiIndex> parse_indices(const std::string& text) {
  std::vector<MultiIndex> out;
  std::stringstream in(text);
  std::string group;
  while (std::getline(in, group, ';')) {
    MultiIndex g;
    for (double v : parse_reals(group)) {
      if (v != std::floor(v)) throw ParameterError("multi-index entries must be integers");
      g.push_back(static_cast<int>(v));
    }
    out.push_back(std::move(g));
  }
  return out;
}

LatticeConfig make_cfg(const CliConfig& c) {
  if (c.k_prime < 0 || c.k_prime > c.k) throw ParameterError("need 0 <= k'' <= k");
  GammaSet gamma = c.gamma_list.empty() ? build_gamma(c.k, c.gamma_degree) : GammaSet(c.k, parse_indices(c.gamma_list));
  if (!c.gamma_only.empty()) gamma = gamma.restricted_to_orders(c.gamma_only);
  return LatticeConfig::make(c.k - c.k_prime, c.k_prime, std::move(gamma));
}

Region make_region(const CliConfig& c) {
  if (c.region == "ball") return Region::ball(c.k);
  if (c.region == "cube") return Region::cube(c.k, c.half_side);
  if (c.region == "ellipsoid") {
    RealVector axes = Eigen::Map<const RealVector>(c.semi_axes.data(), static_cast<Eigen::Index>(c.semi_axes.size()));
    return Region::ellipsoid(axes);
  }
  throw ParameterError("unknown region '" + c.region + "' (ball, cube, ellipsoid)");
}

ParameterPlan make_plan(const CliConfig& c, const GammaSet& gamma) {
  const double delta = c.delta > 0 ? c.delta : ParameterPlan::default_delta(gamma);
  return ParameterPlan::make(c.p, c.p0, c.tau, c.chi, c.rho, c.beta, c.u, delta, gamma);
}

Frequency make_frequency(const CliConfig& c, std::size_t size) {
  if (!c.xi_num.empty()) {
    if (c.xi_num.size() != size || c.xi_den.size() != size)
      throw ParameterError("--xi-num and --xi-den need one entry per Gamma index");
    return Frequency::rational(Eigen::Map<const IntVector>(c.xi_num.data(), static_cast<Eigen::Index>(size)),
                               Eigen::Map<const IntVector>(c.xi_den.data(), static_cast<Eigen::Index>(size)));
  }
  if (c.xi.empty()) return Frequency::zero(size);
  if (c.xi.size() != size) throw ParameterError("--xi needs one entry per Gamma index");
  return Frequency::real(Eigen::Map<const RealVector>(c.xi.data(), static_cast<Eigen::Index>(size)));
}

ReducedFraction make_fraction(const CliConfig& c, std::size_t size) {
  if (c.a.size() != size) throw ParameterError("--a needs one entry per Gamma index");
  return ReducedFraction::make(Eigen::Map<const IntVector>(c.a.data(), static_cast<Eigen::Index>(size)), c.q);
}

CZKernel make_kernel(const CliConfig& c) {
  if (c.kernel != "riesz") throw ParameterError("unknown kernel '" + c.kernel + "' (riesz)");
  return CZKernel::riesz(c.k, c.kernel_index);
}

void print_complex(std::ostream& out, Complex v) {
  out << "real " << fmt(v.real()) << "\nimag " << fmt(v.imag()) << "\nmodulus " << fmt(std::abs(v)) << '\n';
}

void emit_signal(const CliConfig& c, std::ostream& out, const Signal& g) {
  if (c.output.empty()) {
    write_signal(out, g);
    return;
  }
  std::ofstream file(c.output);
  if (!file) throw ResourceError("cannot write " + c.output);
  write_signal(file, g);
}

std::string fraction_text(const ReducedFraction& f) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < f.a.size(); ++i) s += (i ? "," : "") + std::to_string(f.a[i]);
  return s + ")/" + std::to_string(f.q);
}

int cmd_sieve(const CliConfig& c, std::ostream& out) {
  if (c.limit < 1) throw ParameterError("--limit must be positive");
  const PrimeTable table = sieve_primes(c.limit);
  for (std::size_t i = 0; i < table.primes.size(); ++i) out << (i ? " " : "") << table.primes[i];
  out << '\n';
  return 0;
}

int cmd_gauss(const CliConfig& c, std::ostream& out) {
  const LatticeConfig cfg = make_cfg(c);
  print_complex(out, gauss_sum(make_fraction(c, cfg.gamma.size()), cfg));
  return 0;
}

int cmd_weyl(const CliConfig& c, std::ostream& out) {
  const LatticeConfig cfg = make_cfg(c);
  const Region region = make_region(c);
  const Frequency xi = make_frequency(c, cfg.gamma.size());
  const WeylWeight phi = c.weight == "log" ? WeylWeight(log_weight) : WeylWeight(unit_weight);
  if (c.weight != "log" && c.weight != "unit") throw ParameterError("--weight is unit or log");
  const Complex sum = weyl_sum(xi, phi, cfg, region, nullptr, c.t);
  print_complex(out, sum);
  const double mass = c.weight == "log" ? chebyshev_omega(c.t, cfg, region)
                                        : static_cast<double>(enumerate_weighted_points(cfg, region, c.t).size());
  if (mass > 0) out << "normalized " << fmt(std::abs(sum) / mass) << '\n';
  return 0;
}

RealPolynomial parse_twist(const CliConfig& c) {
  // "coef:e1,e2;coef:e1,e2"
  std::vector<RealPolynomial::Term> terms;
  std::stringstream in(c.twist);
  std::string item;
  while (std::getline(in, item, ';')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParameterError("twist term needs coefficient:exponents");
    const auto coef = parse_reals(item.substr(0, colon));
    const auto exps = parse_indices(item.substr(colon + 1));
    if (coef.size() != 1 || exps.size() != 1) throw ParameterError("malformed twist term '" + item + "'");
    terms.push_back({coef[0], exps[0]});
  }
  return RealPolynomial(c.k, std::move(terms));
}

int cmd_operator(const std::string& which, const CliConfig& c, std::ostream& out) {
  if (c.signal.empty()) throw ParameterError("--signal is required");
  const LatticeConfig cfg = make_cfg(c);
  const Region region = make_region(c);
  const Signal f = read_signal_file(c.signal, static_cast<int>(cfg.gamma.size()));
  if (which == "average") {
    emit_signal(c, out, average_A(f, c.t, cfg, region));
  } else if (which == "cotlar") {
    emit_signal(c, out, cotlar_H(f, c.t, make_kernel(c), cfg, region));
  } else {
    emit_signal(c, out, twisted_average(f, c.t, parse_twist(c), cfg, region));
  }
  return 0;
}

int cmd_seminorm(const CliConfig& c, std::ostream& out) {
  if (!c.family.empty()) {
    // S^p over signal files f_0, f_1, ... on the grid --times (default 0, 1, ...).
    const int dims = static_cast<int>(make_cfg(c).gamma.size());
    std::vector<Signal> family;
    for (const auto& path : c.family) family.push_back(read_signal_file(path, dims));
    std::vector<double> times = c.times.empty() ? std::vector<double>{} : parse_reals(c.times);
    if (times.empty())
      for (std::size_t i = 0; i < family.size(); ++i) times.push_back(static_cast<double>(i));
    SeminormOptions opt;
    opt.seed = c.seed;
    const SeminormMode mode = c.mode == "oscillation" ? SeminormMode::oscillation : SeminormMode::jump;
    if (c.mode != "oscillation" && c.mode != "jump") throw ParameterError("family mode is jump or oscillation");
    const auto res = seminorm_S_p(times, family, c.p, mode, opt);
    out << fmt(res.value) << '\n';
    if (!res.exact) out << "lower bound from " << res.sequences << " sequences\n";
    return 0;
  }
  const auto values_real = parse_reals(c.values);
  std::vector<Complex> values(values_real.begin(), values_real.end());
  SampledCurve curve = c.times.empty() ? SampledCurve::indexed(values) : SampledCurve(parse_reals(c.times), values);
  if (c.mode == "jump") {
    out << fmt(jump_functional(curve)) << '\n';
  } else if (c.mode == "jump-count") {
    out << jump_count(curve, c.lambda) << '\n';
  } else if (c.mode == "variation") {
    out << fmt(variation(curve, c.r)) << '\n';
  } else if (c.mode == "oscillation") {
    out << fmt(oscillation(curve, parse_reals(c.sequence))) << '\n';
  } else {
    throw ParameterError("--mode is jump, jump-count, variation or oscillation");
  }
  return 0;
}

int cmd_arcs(const CliConfig& c, std::ostream& out) {
  const LatticeConfig cfg = make_cfg(c);
  const GammaSet& gamma = cfg.gamma;
  const ParameterPlan plan = make_plan(c, gamma);
  if (c.what == "plan") {
    out << plan_to_json(plan).dump(2) << '\n';
  } else if (c.what == "fractions" || c.what == "annulus") {
    const FractionSet set = c.what == "fractions" ? fractions_leq(c.n, gamma) : fractions_annulus(c.s, plan.u, gamma);
    out << "count " << set.size() << '\n';
    for (const auto& f : set.members) out << fraction_text(f) << '\n';
  } else if (c.what == "bump") {
    const Frequency xi = make_frequency(c, gamma.size());
    out << fmt(bump_eta_scaled(c.t, plan.chi, xi.value(), gamma, c.tilde ? BumpVariant::tilde : BumpVariant::standard))
        << '\n';
  } else if (c.what == "annuli") {
    const Frequency xi = make_frequency(c, gamma.size());
    const double v = c.level == "leq" ? annuli_multiplier_leq(c.index, plan, gamma, xi)
                                      : annuli_multiplier(c.index, std::stoll(c.level), plan, gamma, xi);
    out << fmt(v) << '\n';
  } else if (c.what == "composite") {
    static const std::map<std::string, CompositeVariant> variants = {
        {"v", CompositeVariant::v},         {"Lambda", CompositeVariant::Lambda}, {"w", CompositeVariant::w},
        {"Pi", CompositeVariant::Pi},       {"omega", CompositeVariant::omega},   {"Delta", CompositeVariant::Delta}};
    auto it = variants.find(c.variant);
    if (it == variants.end()) throw ParameterError("--variant is v, Lambda, w, Pi, omega or Delta");
    const Region region = make_region(c);
    std::optional<CZKernel> kernel;
    if (c.theta == "psi") kernel = make_kernel(c);
    const CompositeContext ctx{plan, cfg, region, c.theta == "psi" ? ContinuousMode::psi : ContinuousMode::phi,
                               kernel ? &*kernel : nullptr, {}};
    print_complex(out, composite_multiplier(it->second, c.index, c.s, ctx, make_frequency(c, gamma.size())));
  } else if (c.what == "support") {
    const auto r = support_radius_check(plan, c.s, gamma);
    out << "s " << r.s << "\nkappa " << fmt(r.kappa) << "\nQ_s " << r.q_s << "\nQ_s<=3^s " << r.lcm_bound_ok
        << "\ndivides_lcm " << r.divides_full_lcm << "\nseparation_holds " << r.separation_holds
        << "\nsupport_ok " << r.support_ok << '\n';
  } else if (c.what == "disjoint") {
    const auto r = bump_disjointness(c.index, plan, gamma);
    out << "fractions " << r.fractions << "\noverlapping_pairs " << r.overlapping_pairs << "\nmin_separation "
        << fmt(r.min_separation) << "\nsupport_radius " << fmt(r.support_radius) << "\narithmetic_holds "
        << r.arithmetic_holds << '\n';
  } else {
    throw ParameterError("--what is plan, fractions, annulus, bump, annuli, composite, support or disjoint");
  }
  return 0;
}

int cmd_verify(const CliConfig& c, bool seed_given, std::ostream& out) {
  if (!seed_given) throw ParameterError("verify requires an explicit --seed");
  std::vector<std::string> names = c.experiments;
  if (names.size() == 1 && names[0] == "all") names = experiment_names();
  if (c.format != "json" && c.format != "csv") throw ParameterError("--format is json or csv");
  const auto reports = run_experiments(names, c.seed, c.threads);
  bool ok = true;
  nlohmann::json all = nlohmann::json::array();
  std::string csv;
  for (auto r : reports) {
    out << r.experiment << " took " << fmt(r.duration_seconds) << " s\n";
    r.duration_seconds = 0;  // keeps report files byte-identical across runs
    for (const auto& v : r.verdicts) {
      out << r.experiment << " criterion " << v.criterion << ' ' << (v.pass ? "PASS" : "FAIL") << " observed "
          << fmt(v.observed) << " tolerance " << fmt(v.tolerance) << '\n';
      ok = ok && v.pass;
    }
    all.push_back(r);
    std::string part = to_csv(r);
    csv += csv.empty() ? part : part.substr(part.find('\n') + 1);
  }
  if (!c.output.empty()) {
    std::ofstream file(c.output);
    if (!file) throw ResourceError("cannot write " + c.output);
    if (c.format == "csv")
      file << csv;
    else
      file << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prime-weighted polynomial ergodic averages and circle-method toolkit", "ergo"};
  app.set_config("--config", "", "key=value defaults, one [subcommand] section each; flags override")->check(CLI::ExistingFile);
  app.require_subcommand(1);
  CliConfig c;

  auto lattice = [&](CLI::App* sub) {
    sub->add_option("--k", c.k, "dimension k = k' + k''");
    sub->add_option("--k-double-prime", c.k_prime, "number of prime coordinates k''");
    sub->add_option("--gamma-degree", c.gamma_degree, "Gamma = all nonzero multi-indices up to this degree");
    sub->add_option("--gamma-only", c.gamma_only, "keep only indices of these orders")->delimiter(',');
    sub->add_option("--gamma", c.gamma_list, "explicit multi-indices, e.g. 1,0;0,2");
    sub->add_option("--region", c.region, "ball, cube or ellipsoid");
    sub->add_option("--half-side", c.half_side, "cube half side");
    sub->add_option("--semi-axes", c.semi_axes, "ellipsoid semi-axes")->delimiter(',');
    sub->add_option("--t", c.t, "scale t");
  };
  auto frequency = [&](CLI::App* sub) {
    sub->add_option("--xi", c.xi, "real frequency, one entry per Gamma index")->delimiter(',');
    sub->add_option("--xi-num", c.xi_num, "rational frequency numerators")->delimiter(',');
    sub->add_option("--xi-den", c.xi_den, "rational frequency denominators")->delimiter(',');
  };
  auto plan = [&](CLI::App* sub) {
    sub->add_option("--p", c.p, "exponent p");
    sub->add_option("--p0", c.p0, "interpolation exponent p0");
    sub->add_option("--tau", c.tau, "tau");
    sub->add_option("--chi", c.chi, "chi");
    sub->add_option("--rho", c.rho, "rho");
    sub->add_option("--beta", c.beta, "beta (no explicit beta_rho is known)");
    sub->add_option("--u", c.u, "u");
    sub->add_option("--delta", c.delta, "delta; default 1/2 for quadratic Gamma, else 1/(2 max|gamma|)");
  };
  auto kernel = [&](CLI::App* sub) {
    sub->add_option("--kernel", c.kernel, "riesz");
    sub->add_option("--kernel-index", c.kernel_index, "Riesz component j");
  };

  auto* sieve = app.add_subcommand("sieve", "list the primes up to --limit");
  sieve->add_option("--limit", c.limit, "upper bound")->required();

  auto* gauss = app.add_subcommand("gauss", "normalized Gaussian sum G(a/q)");
  lattice(gauss);
  gauss->add_option("--q", c.q, "denominator")->required();
  gauss->add_option("--a", c.a, "numerators, one per Gamma index")->delimiter(',')->required();

  auto* weyl = app.add_subcommand("weyl", "Weyl sum over Omega_t");
  lattice(weyl);
  frequency(weyl);
  weyl->add_option("--weight", c.weight, "unit or log");

  std::vector<std::pair<std::string, CLI::App*>> ops;
  for (const char* name : {"average", "cotlar", "twisted"}) {
    auto* sub = app.add_subcommand(name, std::string("apply the ") + name + " operator to a signal file");
    lattice(sub);
    kernel(sub);
    sub->add_option("--signal", c.signal, "input signal file")->check(CLI::ExistingFile);
    sub->add_option("--output", c.output, "output signal file (stdout when absent)");
    if (std::string(name) == "twisted") sub->add_option("--twist", c.twist, "R as coef:e1,e2;coef:e1,e2");
    ops.emplace_back(name, sub);
  }

  auto* seminorm = app.add_subcommand("seminorm", "curve and family seminorms");
  seminorm->add_option("--mode", c.mode, "jump, jump-count, variation or oscillation")->required();
  seminorm->add_option("--values", c.values, "comma separated curve values");
  seminorm->add_option("--times", c.times, "comma separated increasing times");
  seminorm->add_option("--sequence", c.sequence, "oscillation sequence I");
  seminorm->add_option("--r", c.r, "variation exponent");
  seminorm->add_option("--lambda", c.lambda, "jump size");
  seminorm->add_option("--family", c.family, "signal files f_0, f_1, ...")->delimiter(',');
  seminorm->add_option("--p", c.p, "l^p exponent for families");
  seminorm->add_option("--k", c.k, "dimension k");
  seminorm->add_option("--gamma-degree", c.gamma_degree, "Gamma degree (sets the signal dimension)");
  seminorm->add_option("--gamma", c.gamma_list, "explicit multi-indices");
  seminorm->add_option("--seed", c.seed, "seed for randomized oscillation search");

  auto* arcs = app.add_subcommand("arcs", "fraction sets, bumps and composite multipliers");
  lattice(arcs);
  frequency(arcs);
  plan(arcs);
  kernel(arcs);
  arcs->add_option("--what", c.what, "plan, fractions, annulus, bump, annuli, composite, support or disjoint");
  arcs->add_option("--n", c.n, "N for fractions");
  arcs->add_option("--s", c.s, "annulus level s");
  arcs->add_option("--j", c.index, "j (or n for omega and Delta)");
  arcs->add_option("--level", c.level, "annulus level for --what annuli, or leq");
  arcs->add_option("--variant", c.variant, "v, Lambda, w, Pi, omega or Delta");
  arcs->add_option("--theta", c.theta, "phi or psi");
  arcs->add_flag("--tilde", c.tilde, "tilde bump variant");

  auto* verify = app.add_subcommand("verify", "run harness experiments");
  verify->add_option("experiments", c.experiments, "experiment names or all")->required();
  verify->add_option("--seed", c.seed, "seed (required)");
  verify->add_option("--threads", c.threads, "worker cap")->check(CLI::PositiveNumber);
  verify->add_option("--output", c.output, "report file");
  verify->add_option("--format", c.format, "json or csv");

  std::vector<std::string> storage{"ergo"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (sieve->parsed()) return cmd_sieve(c, out);
    if (gauss->parsed()) return cmd_gauss(c, out);
    if (weyl->parsed()) return cmd_weyl(c, out);
    for (const auto& [name, sub] : ops)
      if (sub->parsed()) return cmd_operator(name, c, out);
    if (seminorm->parsed()) return cmd_seminorm(c, out);
    if (arcs->parsed()) return cmd_arcs(c, out);
    if (verify->parsed()) return cmd_verify(c, verify->count("--seed") > 0, out);
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace ergo
