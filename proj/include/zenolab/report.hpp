#pragma once

// Tabular output shared by the command-line front end.
//
// A Table is an ordered list of named columns and rows of cells. It is
// written either as CSV (header row, comma separated, '\n' endings, 17
// significant digits for reals, empty field for an absent value) or as JSON
// (array of row objects, or a single object for one-row reports; absent
// values become null).

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "zenolab/analytic_core.hpp"
#include "zenolab/measurement_sim.hpp"
#include "zenolab/path_explorer.hpp"

namespace zenolab {

using Cell = std::variant<std::monostate, bool, std::uint64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match header");
    rows.push_back(std::move(row));
  }
};

/// Shortest form that is still 17 significant digits, e.g. 0.60577043649072822.
[[nodiscard]] inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::uint64_t u) const { return std::to_string(u); }
    std::string operator()(double d) const { return format_real(d); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      return quoted + '"';
    }
  };
  return std::visit(Visitor{}, c);
}

inline nlohmann::json json_cell(const Cell& c) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(bool b) const { return b; }
    nlohmann::json operator()(std::uint64_t u) const { return u; }
    nlohmann::json operator()(double d) const {
      if (!std::isfinite(d)) return nullptr;
      return d;
    }
    nlohmann::json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

template <typename T>
Cell opt_cell(const std::optional<T>& v) {
  if (!v) return std::monostate{};
  return Cell{*v};
}

}  // namespace detail

[[nodiscard]] inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += detail::csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

[[nodiscard]] inline nlohmann::ordered_json row_object(const Table& t, std::size_t r) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = detail::json_cell(t.rows.at(r)[i]);
  return obj;
}

/// JSON text; `as_object` emits the single row as a top-level object.
[[nodiscard]] inline std::string to_json(const Table& t, bool as_object) {
  nlohmann::ordered_json doc;
  if (as_object) {
    if (t.rows.size() != 1) throw std::logic_error("object output needs exactly one row");
    doc = row_object(t, 0);
  } else {
    doc = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < t.rows.size(); ++r) doc.push_back(row_object(t, r));
  }
  return doc.dump(2) + '\n';
}

// ---------------------------------------------------------------------------
// Sweep rows

/// Optional Monte Carlo settings attached to a sweep.
struct MonteCarloSpec {
  std::uint64_t trajectories = 0;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

/// One grid point. When `path` is set, k is taken from the path at ln n and
/// the row also carries the path survival and its limit.
struct SweepPoint {
  double alpha = 0.0;
  double tau = 1.0;
  double k = 1.0;
  std::uint64_t n = 1;
  std::optional<HamletPath> path;
};

[[nodiscard]] inline std::vector<std::string> sweep_columns() {
  return {"alpha",         "tau",           "k",
          "n",             "beta",          "gamma",
          "ratio",         "regime",        "step_mass",
          "outside_weak_coupling",          "exact",
          "decay",         "approx",        "approx_valid",
          "approx_clamped", "limit_ref",    "limit_gap",
          "hamlet_survival", "hamlet_out_of_range",
          "mc_trajectories", "mc_seed",     "mc_survivors",
          "mc_p_hat",      "mc_std_err",    "mc_z"};
}

/// Evaluates one sweep row. Every input needed to recompute `exact` is
/// echoed in the row.
[[nodiscard]] inline std::vector<Cell> sweep_row(const SweepPoint& pt, const Thresholds& thresholds,
                                                 const std::optional<MonteCarloSpec>& mc = std::nullopt) {
  DynamicsParams params{pt.alpha, pt.tau, pt.k};
  std::optional<PathPoint> on_path;
  std::optional<double> limit;
  if (pt.path) {
    if (pt.n < 2) throw std::invalid_argument("path rows need n >= 2");
    on_path = hamlet_survival(pt.alpha, pt.tau, *pt.path, std::log(static_cast<double>(pt.n)));
    params.k = on_path->k;
    limit = hamlet_limit(pt.alpha, pt.tau, *pt.path);
  }

  const SurvivalResult res =
      pt.n >= 2 ? survival_n_approx(params, pt.n, thresholds) : survival_n_exact(params, pt.n, thresholds);
  if (!limit) limit = fixed_k_limit(params);

  std::optional<TrajectoryEstimate> est;
  if (mc) {
    TrajectoryConfig cfg{params, pt.n, mc->trajectories, mc->seed};
    est = estimate_survival(cfg, res.exact, mc->workers);
  }

  auto path_field = [&](auto get) -> Cell {
    if (!pt.path) return std::monostate{};
    return Cell{get(*pt.path)};
  };

  return {
      pt.alpha,
      pt.tau,
      params.k,
      pt.n,
      path_field([](const HamletPath& p) { return p.beta(); }),
      path_field([](const HamletPath& p) { return p.gamma(); }),
      path_field([](const HamletPath& p) { return p.ratio(); }),
      std::string(to_string(res.regime)),
      res.step_mass,
      res.outside_weak_coupling,
      res.exact,
      res.decay,
      detail::opt_cell(res.approx),
      res.approx ? Cell{res.approx_valid} : Cell{},
      res.approx ? Cell{res.approx_clamped} : Cell{},
      *limit,
      res.exact - *limit,
      on_path ? Cell{on_path->survival} : Cell{},
      on_path ? Cell{on_path->out_of_range} : Cell{},
      est ? Cell{est->trajectories} : Cell{},
      est ? Cell{mc->seed} : Cell{},
      est ? Cell{est->survivors} : Cell{},
      est ? Cell{est->p_hat} : Cell{},
      est ? Cell{est->std_err} : Cell{},
      est ? detail::opt_cell(est->z_vs) : Cell{},
  };
}

// ---------------------------------------------------------------------------
// Fixed-shape reports

[[nodiscard]] inline Table survival_table(const DynamicsParams& params, std::uint64_t n, const Thresholds& thresholds) {
  Table t{sweep_columns(), {}};
  t.add_row(sweep_row({params.alpha, params.tau, params.k, n, std::nullopt}, thresholds));
  return t;
}

[[nodiscard]] inline Table hamlet_table(double alpha, double tau, const std::vector<HamletPath>& paths,
                                        const std::vector<double>& ln_ns) {
  Table t{{"alpha", "tau", "beta", "gamma", "ratio", "ln_n", "k", "survival", "out_of_range", "limit", "gap"}, {}};
  for (const auto& path : paths) {
    const double limit = hamlet_limit(alpha, tau, path);
    for (double ln_n : ln_ns) {
      const PathPoint pt = hamlet_survival(alpha, tau, path, ln_n);
      t.add_row({alpha, tau, path.beta(), path.gamma(), path.ratio(), ln_n, pt.k, pt.survival, pt.out_of_range, limit,
                 pt.survival - limit});
    }
  }
  return t;
}

[[nodiscard]] inline Table simulate_table(const TrajectoryConfig& cfg, unsigned workers) {
  const double exact = survival_n_exact(cfg.params, cfg.n).exact;
  const TrajectoryEstimate est = estimate_survival(cfg, exact, workers);
  Table t{{"alpha", "tau", "k", "n", "trajectories", "seed", "survivors", "p_hat", "std_err", "exact", "z_vs"}, {}};
  t.add_row({cfg.params.alpha, cfg.params.tau, cfg.params.k, cfg.n, cfg.trajectories, cfg.master_seed, est.survivors,
             est.p_hat, est.std_err, exact, detail::opt_cell(est.z_vs)});
  return t;
}

/// Flat view of an iterated-limit report: one row per reported quantity.
[[nodiscard]] inline Table iterated_table(const IteratedLimitReport& rep) {
  Table t{{"quantity", "alpha", "tau", "k", "n", "ratio", "value", "converged", "monotone", "outside_weak_coupling"}, {}};
  auto tail_row = [&](const std::string& name, const TailEstimate& e) {
    t.add_row({name, rep.alpha, rep.tau, e.k, e.n_last, Cell{}, e.tail, e.converged, e.monotone,
               e.outside_weak_coupling});
  };
  for (const auto& e : rep.fixed_k_tails) tail_row("fixed_k_tail", e);
  tail_row("k_one_tail", rep.at_k_one);
  auto scalar_row = [&](const std::string& name, double k, double value) {
    t.add_row({name, rep.alpha, rep.tau, std::isnan(k) ? Cell{} : Cell{k}, Cell{}, Cell{}, value, Cell{}, Cell{},
               Cell{}});
  };
  scalar_row("limit_k_then_n", rep.k_then_n_at, rep.k_then_n);
  scalar_row("limit_n_at_k_one", 1.0, rep.n_at_k_one);
  scalar_row("iterated_difference", std::nan(""), rep.difference);
  for (const auto& pl : rep.path_limits) {
    t.add_row({std::string("path_limit"), rep.alpha, rep.tau, Cell{}, Cell{}, pl.ratio, pl.limit, Cell{}, Cell{},
               Cell{}});
  }
  scalar_row("path_limit_infimum", std::nan(""), rep.path_limit_infimum);
  scalar_row("path_limit_spread", std::nan(""), rep.path_limit_spread);
  return t;
}

/// Structured JSON view of an iterated-limit report.
[[nodiscard]] inline std::string iterated_json(const IteratedLimitReport& rep) {
  using nlohmann::ordered_json;
  auto num = [](double v) -> ordered_json { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  auto tail = [&](const TailEstimate& e) {
    ordered_json j;
    j["k"] = e.k;
    j["n_last"] = e.n_last;
    j["tail"] = num(e.tail);
    j["values"] = e.values;
    j["converged"] = e.converged;
    j["monotone"] = e.monotone;
    j["outside_weak_coupling"] = e.outside_weak_coupling;
    return j;
  };
  ordered_json doc;
  doc["alpha"] = rep.alpha;
  doc["tau"] = rep.tau;
  doc["fixed_k_tails"] = ordered_json::array();
  for (const auto& e : rep.fixed_k_tails) doc["fixed_k_tails"].push_back(tail(e));
  doc["k_one_tail"] = tail(rep.at_k_one);
  doc["limit_k_then_n"] = num(rep.k_then_n);
  doc["limit_k_then_n_at"] = num(rep.k_then_n_at);
  doc["limit_n_at_k_one"] = num(rep.n_at_k_one);
  doc["iterated_difference"] = num(rep.difference);
  doc["path_limits"] = ordered_json::array();
  for (const auto& pl : rep.path_limits) doc["path_limits"].push_back({{"ratio", pl.ratio}, {"limit", pl.limit}});
  doc["path_limit_infimum"] = rep.path_limit_infimum;
  doc["path_limit_spread"] = rep.path_limit_spread;
  doc["any_flagged"] = rep.any_flagged;
  return doc.dump(2) + '\n';
}

}  // namespace zenolab
