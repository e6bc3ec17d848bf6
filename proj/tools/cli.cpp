#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>

#include "trickle/asymptotics.hpp"
#include "trickle/empirical.hpp"
#include "trickle/errors.hpp"
#include "trickle/exact.hpp"
#include "trickle/generating.hpp"
#include "trickle/io.hpp"
#include "trickle/propagation.hpp"

namespace trickle::cli {

namespace {

constexpr double cross_check_tolerance = 1e-9;

struct Options {
  int R = 5;
  int n = 100;
  double eta = 0.5;
  int k = 1;
  double tau_l = 1.0;
  std::string tau_h = "inf";
  int reps = 10000;
  std::uint64_t seed = 1;
  std::string engine = "renewal";
  unsigned threads = 0;
  std::string format = "csv";
  std::string out = "-";
  int order = 2;
  int steps = 101;
  std::string trace_out;
  std::string hist_out;
  int bins = 40;
  double horizon = 0;
};

double parse_tau_h(const std::string& text) {
  if (text == "inf" || text == "infinity") return infinite_interval;
  double value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("--tau-h expects a number or 'inf', got '" + text + "'");
  return value;
}

TrickleParams protocol_params(const Options& o) {
  TrickleParams p;
  p.k = o.k;
  p.tau_l = o.tau_l;
  p.tau_h = parse_tau_h(o.tau_h);
  p.eta = o.eta;
  p.validate();
  return p;
}

SimulationConfig simulation_config(const Options& o) {
  SimulationConfig c;
  c.params = protocol_params(o);
  c.topo = {o.n, o.R};
  c.topo.validate();
  c.engine = parse_engine(o.engine);
  c.horizon = o.horizon;
  if (c.engine == Engine::renewal && (c.params.k != 1 || !std::isinf(c.params.tau_h)))
    throw std::invalid_argument("the renewal engine models k=1 and tau_h=inf only; use --engine protocol");
  return c;
}

std::string render(const Table& table, const json& doc, const std::string& format) {
  return format == "json" ? doc.dump(2) + "\n" : to_csv(table);
}

std::string cmd_analyze(const Options& o) {
  const auto stats = sigma_T_sq<double>(o.R, o.eta);
  const double hr = hop_rate<double>(o.R);
  const double dr = delay_rate<double>(o.R, o.eta);
  if (o.format == "json") {
    json doc = to_json(stats);
    doc["hop_rate"] = hr;
    doc["delay_rate"] = dr;
    return doc.dump(2) + "\n";
  }
  Table t{{"R", "eta", "mu_U", "mu_theta", "gamma_U_sq", "gamma_theta_sq", "Delta", "sigma_H_sq",
           "sigma_T_sq", "hop_rate", "delay_rate"},
          {}};
  t.add_row({static_cast<std::int64_t>(o.R), o.eta, stats.mu_U, stats.mu_theta, stats.gamma_U_sq,
             stats.gamma_theta_sq, stats.Delta, stats.sigma_H_sq, stats.sigma_T_sq, hr, dr});
  return to_csv(t);
}

json pmf_document(const Options& o, const std::vector<double>& pmf, const MeanVariance& hops,
                  const MeanVariance& delay) {
  json doc;
  doc["n"] = o.n;
  doc["R"] = o.R;
  doc["eta"] = o.eta;
  doc["mean"] = hops.mean;
  doc["variance"] = hops.variance;
  doc["delay_mean"] = delay.mean;
  doc["delay_variance"] = delay.variance;
  doc["pmf"] = pmf;
  return doc;
}

std::string cmd_exact(const Options& o) {
  const auto pmf = hop_pmf_dp(o.R, o.n);
  const auto moments = exact_moments_dp(o.R, o.eta, o.n);
  return render(pmf_table(pmf), pmf_document(o, pmf, moments.hops, moments.delay), o.format);
}

double relative_gap(double a, double b) {
  return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

std::string cmd_gf(const Options& o, std::ostream& err) {
  const auto gf_pmf = hop_pmf_gf<double>(o.R, o.n);
  const auto dp_pmf = hop_pmf_dp(o.R, o.n);
  const auto gf_delay = delay_moments_gf<double>(o.R, o.eta, o.n, std::max(o.order, 2));
  const auto dp = exact_moments_dp(o.R, o.eta, o.n);

  const std::size_t len = std::max(gf_pmf.size(), dp_pmf.size());
  const auto at = [](const std::vector<double>& v, std::size_t m) { return m < v.size() ? v[m] : 0.0; };
  Table t{{"m", "probability", "dp_probability", "abs_diff"}, {}};
  double worst = 0;
  double hop_mean = 0;
  double hop_sq = 0;
  for (std::size_t m = 0; m < len; ++m) {
    const double g = at(gf_pmf, m);
    const double d = at(dp_pmf, m);
    worst = std::max(worst, std::fabs(g - d));
    hop_mean += m * g;
    hop_sq += static_cast<double>(m * m) * g;
    t.add_row({static_cast<std::int64_t>(m), g, d, std::fabs(g - d)});
  }
  const MeanVariance gf_hops{hop_mean, hop_sq - hop_mean * hop_mean};
  const double mean_gap = relative_gap(gf_delay.mean(), dp.delay.mean);
  const double var_gap = relative_gap(gf_delay.variance(), dp.delay.variance);

  if (worst > cross_check_tolerance || mean_gap > cross_check_tolerance ||
      var_gap > cross_check_tolerance) {
    err << "gf/dp cross-check failed: max pmf gap " << format_double(worst)
        << ", delay mean rel gap " << format_double(mean_gap) << ", delay variance rel gap "
        << format_double(var_gap) << "\n";
    throw engine_error("generating-function result disagrees with the DP oracle");
  }

  json doc = pmf_document(o, gf_pmf, gf_hops, {gf_delay.mean(), gf_delay.variance()});
  doc["raw_delay_moments"] = gf_delay.raw;
  doc["dp_pmf"] = dp_pmf;
  doc["max_abs_pmf_diff"] = worst;
  doc["delay_mean_rel_diff"] = mean_gap;
  doc["delay_variance_rel_diff"] = var_gap;
  return render(t, doc, o.format);
}

std::string cmd_simulate(const Options& o, std::ostream& out) {
  const SimulationConfig config = simulation_config(o);
  if (!o.trace_out.empty()) {
    random_engine rng = make_stream(o.seed, 0);
    const auto trace = run_protocol_event(config.params, config.topo, rng, config.horizon);
    emit(to_json(trace).dump(2) + "\n", o.trace_out, out);
  }
  const SampleSet samples = monte_carlo(config, o.reps, o.seed, o.threads);
  const Table t = sample_table(samples);
  if (o.format == "json") {
    json doc;
    doc["meta"] = to_json(samples.meta);
    doc["samples"] = table_json(t);
    return doc.dump(2) + "\n";
  }
  return to_csv(t);
}

std::string cmd_compare(const Options& o, std::ostream& out) {
  const SimulationConfig config = simulation_config(o);
  const SampleSet samples = monte_carlo(config, o.reps, o.seed, o.threads);
  // analytics are in units of tau_l
  std::vector<double> t(samples.t_samples);
  for (double& x : t) x /= config.params.tau_l;
  std::vector<double> h(samples.h_samples.begin(), samples.h_samples.end());

  const NormalApprox approx = normal_approx(o.R, o.eta, o.n);
  const ExactMoments exact = exact_moments_dp(o.R, o.eta, o.n);

  Table table{{"quantity", "empirical_mean", "empirical_var", "std_error", "approx_mean", "approx_var",
               "exact_mean", "exact_var", "z_vs_approx", "z_vs_exact", "ks_asymptotic", "ks_exact"},
              {}};
  const auto add = [&](const std::string& name, const std::vector<double>& xs, double am, double as,
                       const MeanVariance& ex) {
    const SampleSummary s = summarize(std::span<const double>(xs));
    const double se = s.std_error > 0 ? s.std_error : std::nan("");
    table.add_row({name, s.mean, s.variance, s.std_error, am, as * as, ex.mean, ex.variance,
                   (s.mean - am) / se, (s.mean - ex.mean) / se, ks_distance(xs, {am, as}),
                   ks_distance(xs, {ex.mean, std::sqrt(ex.variance)})});
  };
  add("H", h, approx.mean_H, approx.std_H, exact.hops);
  add("T", t, approx.mean_T, approx.std_T, exact.delay);

  if (!o.hist_out.empty()) {
    const auto [lo_it, hi_it] = std::minmax_element(t.begin(), t.end());
    const double lo = *lo_it;
    const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
    const Histogram hist = histogram(t, static_cast<std::size_t>(o.bins), lo, hi);
    const auto pdf = [](double x, double mean, double sd) {
      const double z = (x - mean) / sd;
      return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
    };
    Table ht{{"bin_lo", "bin_hi", "count", "density", "normal_approx_density", "normal_exact_density"}, {}};
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
      const double a = hist.lo + b * hist.width;
      const double mid = a + 0.5 * hist.width;
      ht.add_row({a, a + hist.width, static_cast<std::int64_t>(hist.counts[b]), hist.density(b),
                  pdf(mid, approx.mean_T, approx.std_T),
                  pdf(mid, exact.delay.mean, std::sqrt(exact.delay.variance))});
    }
    emit(to_csv(ht), o.hist_out, out);
  }

  json doc;
  doc["meta"] = to_json(samples.meta);
  doc["rows"] = table_json(table);
  return render(table, doc, o.format);
}

std::string cmd_sweep_eta(const Options& o) {
  if (o.steps < 2) throw std::invalid_argument("--steps must be >= 2");
  Table t{{"kind", "eta", "delay_rate", "sigma_T_sq"}, {}};
  for (int i = 0; i < o.steps; ++i) {
    const double eta = static_cast<double>(i) / (o.steps - 1);
    t.add_row({std::string("grid"), eta, delay_rate<double>(o.R, eta), sigma_T_sq<double>(o.R, eta).sigma_T_sq});
  }
  const EtaMinimum best = argmin_delay_variance(o.R, o.steps);
  t.add_row({std::string("argmin"), best.eta, delay_rate<double>(o.R, best.eta), best.sigma_T_sq});
  json doc;
  doc["R"] = o.R;
  doc["grid"] = table_json(t);
  doc["argmin"] = {{"eta", best.eta}, {"sigma_T_sq", best.sigma_T_sq}};
  return render(t, doc, o.format);
}

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "output path, '-' for stdout");
}

void add_range(CLI::App* cmd, Options& o) {
  cmd->add_option("--R", o.R, "transmission range in hops")->check(CLI::Range(1, 100000));
}

void add_eta(CLI::App* cmd, Options& o) {
  cmd->add_option("--eta", o.eta, "listen-only fraction at tau_l")->check(CLI::Range(0.0, 1.0));
}

void add_nodes(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.n, "index of the last node on the line")->check(CLI::Range(1, 100000000));
}

void add_simulation(CLI::App* cmd, Options& o) {
  add_range(cmd, o);
  add_nodes(cmd, o);
  add_eta(cmd, o);
  cmd->add_option("--k", o.k, "redundancy constant")->check(CLI::PositiveNumber);
  cmd->add_option("--tau-l", o.tau_l, "minimum interval")->check(CLI::PositiveNumber);
  cmd->add_option("--tau-h", o.tau_h, "maximum interval or 'inf'");
  cmd->add_option("--reps", o.reps, "replications")->check(CLI::Range(1, 1000000000));
  cmd->add_option("--seed", o.seed, "master seed (default: $TRICKLE_LAB_SEED or 1)");
  cmd->add_option("--engine", o.engine, "simulation engine")->check(CLI::IsMember({"protocol", "renewal"}));
  cmd->add_option("--threads", o.threads, "worker threads, 0 for all cores");
  cmd->add_option("--horizon", o.horizon, "protocol time limit per run, 0 for 10 n tau_l")
      ->check(CLI::NonNegativeNumber);
  add_format(cmd, o);
}

std::uint64_t env_seed(std::uint64_t fallback) {
  const char* text = std::getenv("TRICKLE_LAB_SEED");
  if (!text || !*text) return fallback;
  std::uint64_t value = 0;
  const char* end = text + std::char_traits<char>::length(text);
  const auto res = std::from_chars(text, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument(std::string("TRICKLE_LAB_SEED is not an unsigned integer: ") + text);
  return value;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Trickle dissemination on a line: analytics, exact laws and simulation", "trickle-lab"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "long-run rates and variances");
  add_range(analyze, o);
  add_eta(analyze, o);
  add_format(analyze, o);

  auto* exact = app.add_subcommand("exact", "DP hop-count pmf and moments");
  add_range(exact, o);
  add_nodes(exact, o);
  add_eta(exact, o);
  add_format(exact, o);

  auto* gf = app.add_subcommand("gf", "generating-function pmf and moments, checked against DP");
  add_range(gf, o);
  add_nodes(gf, o);
  add_eta(gf, o);
  gf->add_option("--order", o.order, "delay moment order")->check(CLI::Range(1, 12));
  add_format(gf, o);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo samples of (H, T)");
  add_simulation(simulate, o);
  simulate->add_option("--trace", o.trace_out, "write a protocol trace of replication 0 as JSON");

  auto* compare = app.add_subcommand("compare", "Monte Carlo vs normal approximation and exact moments");
  add_simulation(compare, o);
  compare->add_option("--hist-out", o.hist_out, "write a delay histogram with normal curves as CSV");
  compare->add_option("--bins", o.bins, "histogram bins")->check(CLI::Range(1, 100000));

  auto* sweep = app.add_subcommand("sweep-eta", "sigma_T^2 and delay rate over an eta grid");
  add_range(sweep, o);
  sweep->add_option("--steps", o.steps, "grid points on [0, 1]")->check(CLI::Range(2, 1000000));
  add_format(sweep, o);

  try {
    o.seed = env_seed(o.seed);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : bad_flags;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return bad_flags;
  }

  try {
    std::string text;
    if (analyze->parsed()) text = cmd_analyze(o);
    else if (exact->parsed()) text = cmd_exact(o);
    else if (gf->parsed()) text = cmd_gf(o, err);
    else if (simulate->parsed()) text = cmd_simulate(o, out);
    else if (compare->parsed()) text = cmd_compare(o, out);
    else text = cmd_sweep_eta(o);
    emit(text, o.out, out);
    return ok;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return bad_flags;
  } catch (const engine_error& e) {
    err << "engine error: " << e.what() << "\n";
    return engine_failure;
  } catch (const io_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return io_failure;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return unexpected;
  }
}

}  // namespace trickle::cli
