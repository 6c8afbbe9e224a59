#pragma once

// Command-line front end. `run_cli` takes the arguments after the program
// name, writes data to `out` (or the --output file) and diagnostics to `err`,
// and returns the process exit status.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zenolab/analytic_core.hpp"
#include "zenolab/measurement_sim.hpp"
#include "zenolab/path_explorer.hpp"
#include "zenolab/report.hpp"

namespace zenolab {

enum class OutputFormat { Csv, Json };

namespace detail {

struct CliOptions {
  // dynamics
  std::vector<double> alpha;
  std::vector<double> tau;
  std::vector<double> k;
  std::vector<std::uint64_t> n;
  std::vector<double> ln_n;
  // path
  std::optional<double> beta;
  std::optional<double> gamma;
  std::vector<double> ratio;
  // simulation
  std::optional<std::uint64_t> trajectories;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  // iterated
  double convergence_tol = 1e-4;
  // shared
  Thresholds thresholds;
  OutputFormat format = OutputFormat::Csv;
  std::string output = "-";
  bool verbose = false;
};

inline const std::vector<std::uint64_t>& default_n_grid() {
  static const std::vector<std::uint64_t> grid{10ull, 100ull, 1'000ull, 10'000ull, 100'000ull, 1'000'000ull};
  return grid;
}

inline const std::vector<double>& default_ratio_grid() {
  static const std::vector<double> grid{1.25, 1.5, 2.0};
  return grid;
}

inline const std::vector<double>& default_ln_n_grid() {
  static const std::vector<double> grid{10.0, 100.0, 1e3, 1e4, 1e6};
  return grid;
}

inline constexpr double kDefaultGamma = 0.4;

inline void add_shared(CLI::App* sub, CliOptions& o) {
  sub->add_option("--format", o.format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"csv", OutputFormat::Csv},
                                                                              {"json", OutputFormat::Json}}));
  sub->add_option("-o,--output", o.output, "Output file ('-' for standard output)");
  sub->add_flag("-v,--verbose", o.verbose, "Progress messages on the error stream");
  sub->add_option("--validity-threshold", o.thresholds.validity, "Per-step decay mass flag threshold")
      ->check(CLI::PositiveNumber);
  sub->add_option("--linearization-threshold", o.thresholds.linearization,
                  "Total-mass threshold for the linearised formula")
      ->check(CLI::PositiveNumber);
}

inline CLI::Option* add_scalar(CLI::App* sub, const std::string& name, std::vector<double>& dest,
                               const std::string& help) {
  return sub->add_option(name, dest, help)->expected(1);
}

inline CLI::Option* add_list(CLI::App* sub, const std::string& name, std::vector<double>& dest,
                             const std::string& help) {
  return sub->add_option(name, dest, help)->delimiter(',')->expected(1, 1 << 20);
}

inline void require_single_n(const CliOptions& o) {
  for (auto n : o.n) check_count(n);
}

inline std::vector<HamletPath> paths_from(const CliOptions& o) {
  if (o.beta && o.gamma) return {HamletPath(*o.beta, *o.gamma)};
  if (o.beta || o.gamma) {
    if (o.beta) return {HamletPath(*o.beta, kDefaultGamma)};
    throw std::invalid_argument("--gamma needs --beta");
  }
  std::vector<HamletPath> paths;
  for (double r : default_ratio_grid()) paths.emplace_back(r * kDefaultGamma, kDefaultGamma);
  return paths;
}

inline Table grid_table(const CliOptions& o, double k) {
  Table t{sweep_columns(), {}};
  const auto& ns = o.n.empty() ? default_n_grid() : o.n;
  for (auto n : ns) t.add_row(sweep_row({o.alpha.front(), o.tau.front(), k, n, std::nullopt}, o.thresholds));
  return t;
}

inline Table sweep_table(const CliOptions& o, std::ostream& err) {
  const bool on_path = !o.ratio.empty();
  std::optional<MonteCarloSpec> mc;
  if (o.trajectories || o.seed) {
    if (!o.trajectories || !o.seed) throw std::invalid_argument("--trajectories and --seed go together");
    mc = MonteCarloSpec{*o.trajectories, *o.seed, o.workers};
  }
  const double gamma = o.gamma.value_or(kDefaultGamma);
  const std::vector<double> ks = on_path ? std::vector<double>{1.0} : o.k;

  Table t{sweep_columns(), {}};
  for (double alpha : o.alpha) {
    for (double tau : o.tau) {
      for (double k : ks) {
        for (auto n : o.n) {
          if (on_path) {
            for (double r : o.ratio) {
              t.add_row(sweep_row({alpha, tau, 1.0, n, HamletPath(r * gamma, gamma)}, o.thresholds, mc));
            }
          } else {
            t.add_row(sweep_row({alpha, tau, k, n, std::nullopt}, o.thresholds, mc));
          }
          if (o.verbose) err << "sweep: " << t.rows.size() << " rows\n";
        }
      }
    }
  }
  return t;
}

inline void emit(const std::string& text, const CliOptions& o, std::ostream& out) {
  if (o.output == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file '" + o.output + "'");
  file << text;
  file.close();
  if (!file) throw std::runtime_error("failed writing output file '" + o.output + "'");
}

inline std::string render(const Table& t, const CliOptions& o, bool scalar) {
  return o.format == OutputFormat::Csv ? to_csv(t) : to_json(t, scalar);
}

}  // namespace detail

[[nodiscard]] inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Repeated-measurement survival laboratory: Zeno, anti-Zeno and path-dependent limits"};
  app.name("zenolab");
  app.require_subcommand(1, 1);

  detail::CliOptions o;

  auto* survival = app.add_subcommand("survival", "Exact and linearised survival after n measurements");
  detail::add_scalar(survival, "--alpha", o.alpha, "Decay-rate parameter")->required();
  detail::add_scalar(survival, "--tau", o.tau, "Total time interval")->required();
  detail::add_scalar(survival, "--k", o.k, "Dynamical degree")->required();
  survival->add_option("--n", o.n, "Number of measurements")->expected(1)->required();

  auto* zeno = app.add_subcommand("zeno", "k = 2 survival over an n grid");
  auto* antizeno = app.add_subcommand("antizeno", "k = 1 survival over an n grid against exp(-alpha tau)");
  for (auto* sub : {zeno, antizeno}) {
    detail::add_scalar(sub, "--alpha", o.alpha, "Decay-rate parameter")->required();
    detail::add_scalar(sub, "--tau", o.tau, "Total time interval")->required();
    sub->add_option("--n", o.n, "Comma-separated n grid")->delimiter(',')->expected(1, 1 << 20);
  }

  auto* hamlet = app.add_subcommand("hamlet", "Survival along k = 1 + (beta/gamma)/ln n and its limit");
  detail::add_scalar(hamlet, "--alpha", o.alpha, "Decay-rate parameter")->required();
  detail::add_scalar(hamlet, "--tau", o.tau, "Total time interval")->required();
  hamlet->add_option("--beta", o.beta, "Path parameter beta");
  hamlet->add_option("--gamma", o.gamma, "Path parameter gamma");
  auto* h_ln = detail::add_list(hamlet, "--ln-n", o.ln_n, "Comma-separated ln(n) grid");
  auto* h_n = hamlet->add_option("--n", o.n, "Comma-separated n grid")->delimiter(',')->expected(1, 1 << 20);
  h_ln->excludes(h_n);

  auto* iterated = app.add_subcommand("iterated", "Both iterated limits and the path-limit family");
  detail::add_scalar(iterated, "--alpha", o.alpha, "Decay-rate parameter")->required();
  detail::add_scalar(iterated, "--tau", o.tau, "Total time interval")->required();
  detail::add_list(iterated, "--k", o.k, "Comma-separated k grid (all > 1)");
  iterated->add_option("--n", o.n, "Comma-separated ascending n grid")->delimiter(',')->expected(1, 1 << 20);
  detail::add_list(iterated, "--ratio", o.ratio, "Comma-separated path ratios (all > 1)");
  iterated->add_option("--convergence-tol", o.convergence_tol, "Inner-tail convergence tolerance")
      ->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the n-measurement survival");
  detail::add_scalar(simulate, "--alpha", o.alpha, "Decay-rate parameter")->required();
  detail::add_scalar(simulate, "--tau", o.tau, "Total time interval")->required();
  detail::add_scalar(simulate, "--k", o.k, "Dynamical degree")->required();
  simulate->add_option("--n", o.n, "Number of measurements")->expected(1)->required();
  simulate->add_option("--trajectories", o.trajectories, "Number of trajectories")->required();
  simulate->add_option("--seed", o.seed, "Master seed")->required();
  simulate->add_option("--workers", o.workers, "Worker threads (0 = all cores); does not affect results");

  auto* sweep = app.add_subcommand("sweep", "Cartesian grid over alpha, tau, k (or path ratio) and n");
  detail::add_list(sweep, "--alpha", o.alpha, "Comma-separated alpha grid")->required();
  detail::add_list(sweep, "--tau", o.tau, "Comma-separated tau grid")->required();
  auto* s_k = detail::add_list(sweep, "--k", o.k, "Comma-separated k grid");
  auto* s_r = detail::add_list(sweep, "--ratio", o.ratio, "Comma-separated path ratios (k follows the path)");
  s_k->excludes(s_r);
  sweep->add_option("--gamma", o.gamma, "Path gamma used with --ratio (default 0.4)");
  sweep->add_option("--n", o.n, "Comma-separated n grid")->delimiter(',')->expected(1, 1 << 20)->required();
  sweep->add_option("--trajectories", o.trajectories, "Monte Carlo trajectories per row");
  sweep->add_option("--seed", o.seed, "Master seed for Monte Carlo columns");
  sweep->add_option("--workers", o.workers, "Worker threads (0 = all cores); does not affect results");

  for (auto* sub : {survival, zeno, antizeno, hamlet, iterated, simulate, sweep}) detail::add_shared(sub, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    detail::require_single_n(o);
    std::string text;
    if (survival->parsed()) {
      const DynamicsParams params{o.alpha.front(), o.tau.front(), o.k.front()};
      text = detail::render(survival_table(params, o.n.front(), o.thresholds), o, true);
    } else if (zeno->parsed()) {
      text = detail::render(detail::grid_table(o, 2.0), o, false);
    } else if (antizeno->parsed()) {
      text = detail::render(detail::grid_table(o, 1.0), o, false);
    } else if (hamlet->parsed()) {
      std::vector<double> ln_ns = o.ln_n;
      for (auto n : o.n) ln_ns.push_back(std::log(static_cast<double>(n)));
      if (ln_ns.empty()) ln_ns = detail::default_ln_n_grid();
      text = detail::render(hamlet_table(o.alpha.front(), o.tau.front(), detail::paths_from(o), ln_ns), o, false);
    } else if (iterated->parsed()) {
      ProbeGrid grid;
      if (!o.k.empty()) grid.k_values = o.k;
      if (!o.n.empty()) grid.n_values = o.n;
      if (!o.ratio.empty()) grid.ratios = o.ratio;
      grid.convergence_tol = o.convergence_tol;
      grid.thresholds = o.thresholds;
      const IteratedLimitReport rep = iterated_limits(o.alpha.front(), o.tau.front(), grid);
      text = o.format == OutputFormat::Csv ? to_csv(iterated_table(rep)) : iterated_json(rep);
    } else if (simulate->parsed()) {
      const TrajectoryConfig cfg{{o.alpha.front(), o.tau.front(), o.k.front()}, o.n.front(), *o.trajectories, *o.seed};
      if (o.verbose) err << "simulate: " << cfg.trajectories << " trajectories of " << cfg.n << " steps\n";
      text = detail::render(simulate_table(cfg, o.workers), o, true);
    } else if (sweep->parsed()) {
      if (o.k.empty() && o.ratio.empty()) throw std::invalid_argument("sweep needs --k or --ratio");
      text = detail::render(detail::sweep_table(o, err), o, false);
    }
    detail::emit(text, o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace zenolab
