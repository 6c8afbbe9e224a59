#pragma once

// Joint limit n -> infinity, k -> 1+ along the path family
//
//     k(n) = 1 + (beta/gamma) / ln n,     0 < gamma < beta < 1,
//
// and the iterated-limit diagnostics that show the joint limit of the
// n-measurement survival probability does not exist.
//
// Along a path n^(k-1) = exp(beta/gamma) for every n, so the linearised
// survival becomes 1 - alpha tau^k exp(-beta/gamma), whose limit
// 1 - alpha tau exp(-beta/gamma) depends on the ratio beta/gamma. All path
// quantities are parametrised by ln n, which stays finite long after n
// itself overflows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "zenolab/analytic_core.hpp"

namespace zenolab {

class HamletPath {
 public:
  /// Throws std::invalid_argument unless 0 < gamma < beta < 1.
  HamletPath(double beta, double gamma) : beta_(beta), gamma_(gamma) {
    if (!(0.0 < gamma && gamma < beta && beta < 1.0)) {
      throw std::invalid_argument("path parameters must satisfy 0 < gamma < beta < 1");
    }
    ratio_ = beta / gamma;
  }

  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] double ratio() const noexcept { return ratio_; }

 private:
  double beta_;
  double gamma_;
  double ratio_;
};

struct PathPoint {
  double ln_n = 0.0;
  double k = 1.0;
  double survival = 1.0;
  /// survival left [0, 1]; the value is reported unclamped.
  bool out_of_range = false;
};

namespace detail {

inline void check_ln_n(double ln_n) {
  if (!(ln_n > 0.0) || !std::isfinite(ln_n)) {
    throw std::domain_error("ln(n) must be positive and finite (n > 1)");
  }
}

inline void check_alpha_tau(double alpha, double tau) {
  DynamicsParams{alpha, tau, 1.0}.validate();
}

inline double limit_for_ratio(double alpha, double tau, double ratio) {
  return 1.0 - alpha * tau * std::exp(-ratio);
}

}  // namespace detail

[[nodiscard]] inline double k_of_n(const HamletPath& path, double ln_n) {
  detail::check_ln_n(ln_n);
  return 1.0 + path.ratio() / ln_n;
}

/// Inverse of k_of_n; returns ln n.
[[nodiscard]] inline double n_of_k(const HamletPath& path, double k) {
  if (!(k > 1.0) || !std::isfinite(k)) throw std::domain_error("k must exceed 1 on a path");
  return path.ratio() / (k - 1.0);
}

/// Linearised n-measurement survival at the path point ln_n.
[[nodiscard]] inline PathPoint hamlet_survival(double alpha, double tau, const HamletPath& path, double ln_n) {
  detail::check_alpha_tau(alpha, tau);
  PathPoint pt;
  pt.ln_n = ln_n;
  pt.k = k_of_n(path, ln_n);
  const double r = path.ratio();
  pt.survival = 1.0 - alpha * std::exp((1.0 + r / ln_n) * std::log(tau) - r);
  pt.out_of_range = !(pt.survival >= 0.0 && pt.survival <= 1.0);
  return pt;
}

/// Limit of hamlet_survival as ln n -> infinity: 1 - alpha tau exp(-beta/gamma).
[[nodiscard]] inline double hamlet_limit(double alpha, double tau, const HamletPath& path) {
  detail::check_alpha_tau(alpha, tau);
  return detail::limit_for_ratio(alpha, tau, path.ratio());
}

/// Probe grids for iterated_limits. Every n must be >= 1 and every k > 1.
struct ProbeGrid {
  std::vector<double> k_values{2.0, 1.75, 1.5, 1.375, 1.25};
  std::vector<std::uint64_t> n_values{100ull, 10'000ull, 1'000'000ull, 100'000'000ull, 10'000'000'000ull,
                                      1'000'000'000'000ull, 100'000'000'000'000ull,
                                      10'000'000'000'000'000ull, 1'000'000'000'000'000'000ull};
  std::vector<double> ratios{1.25, 1.5, 2.0};
  /// An inner tail counts as converged when its last two values differ by
  /// at most this much.
  double convergence_tol = 1e-4;
  Thresholds thresholds{};
};

struct TailEstimate {
  double k = 1.0;
  std::uint64_t n_last = 0;
  /// survival_n_exact at every grid n, in grid order.
  std::vector<double> values;
  double tail = std::numeric_limits<double>::quiet_NaN();
  /// Last three values are monotone (either direction, to rounding).
  bool monotone = false;
  /// |values[last] - values[last-1]| <= convergence_tol.
  bool converged = false;
  /// Some grid point has per-step mass above the validity threshold.
  bool outside_weak_coupling = false;
};

struct PathLimit {
  double ratio = 0.0;
  double limit = 1.0;
};

struct IteratedLimitReport {
  double alpha = 0.0;
  double tau = 1.0;
  /// Inner n -> infinity tails at each fixed k > 1.
  std::vector<TailEstimate> fixed_k_tails;
  /// lim_{k->1+} lim_{n->inf}: tail at the smallest k whose inner tail
  /// converged. NaN when none did.
  double k_then_n = std::numeric_limits<double>::quiet_NaN();
  double k_then_n_at = std::numeric_limits<double>::quiet_NaN();
  /// Inner tail at k = 1 exactly: lim_{n->inf} at k = 1.
  TailEstimate at_k_one;
  double n_at_k_one = std::numeric_limits<double>::quiet_NaN();
  double difference = std::numeric_limits<double>::quiet_NaN();
  std::vector<PathLimit> path_limits;
  /// Infimum of path limits over admissible ratios (ratio -> 1+), not attained.
  double path_limit_infimum = 1.0;
  double path_limit_spread = 0.0;
  bool any_flagged = false;
};

namespace detail {

inline bool monotone_tail(const std::vector<double>& v) {
  if (v.size() < 3) return false;
  const double a = v[v.size() - 3];
  const double b = v[v.size() - 2];
  const double c = v[v.size() - 1];
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
  const bool up = b >= a - slack && c >= b - slack;
  const bool down = b <= a + slack && c <= b + slack;
  return up || down;
}

inline TailEstimate tail_at(double alpha, double tau, double k, const ProbeGrid& grid) {
  TailEstimate t;
  t.k = k;
  const DynamicsParams params{alpha, tau, k};
  for (auto n : grid.n_values) {
    const SurvivalResult r = survival_n_exact(params, n, grid.thresholds);
    t.values.push_back(r.exact);
    t.outside_weak_coupling = t.outside_weak_coupling || r.outside_weak_coupling;
  }
  t.n_last = grid.n_values.back();
  t.tail = t.values.back();
  t.monotone = monotone_tail(t.values);
  t.converged = t.values.size() >= 2 &&
                std::abs(t.values.back() - t.values[t.values.size() - 2]) <= grid.convergence_tol;
  return t;
}

}  // namespace detail

/// Numerical estimate of both iterated limits of the n-measurement survival
/// probability as n -> infinity and k -> 1, plus the path-limit family.
[[nodiscard]] inline IteratedLimitReport iterated_limits(double alpha, double tau, const ProbeGrid& grid = {}) {
  detail::check_alpha_tau(alpha, tau);
  if (grid.n_values.empty()) throw std::invalid_argument("probe grid needs at least one n");
  if (!std::is_sorted(grid.n_values.begin(), grid.n_values.end())) {
    throw std::invalid_argument("probe grid n values must be ascending");
  }
  for (double k : grid.k_values) {
    if (!(k > 1.0)) throw std::invalid_argument("probe grid k values must exceed 1");
  }
  for (double r : grid.ratios) {
    if (!(r > 1.0)) throw std::invalid_argument("path ratios must exceed 1");
  }

  IteratedLimitReport rep;
  rep.alpha = alpha;
  rep.tau = tau;

  for (double k : grid.k_values) {
    rep.fixed_k_tails.push_back(detail::tail_at(alpha, tau, k, grid));
    rep.any_flagged = rep.any_flagged || rep.fixed_k_tails.back().outside_weak_coupling;
  }
  for (const auto& t : rep.fixed_k_tails) {
    if (t.converged && (std::isnan(rep.k_then_n_at) || t.k < rep.k_then_n_at)) {
      rep.k_then_n_at = t.k;
      rep.k_then_n = t.tail;
    }
  }

  rep.at_k_one = detail::tail_at(alpha, tau, 1.0, grid);
  rep.any_flagged = rep.any_flagged || rep.at_k_one.outside_weak_coupling;
  rep.n_at_k_one = rep.at_k_one.tail;
  rep.difference = rep.k_then_n - rep.n_at_k_one;

  double lo = 1.0;
  double hi = 0.0;
  for (double r : grid.ratios) {
    const double limit = detail::limit_for_ratio(alpha, tau, r);
    rep.path_limits.push_back({r, limit});
    lo = std::min(lo, limit);
    hi = std::max(hi, limit);
  }
  rep.path_limit_infimum = detail::limit_for_ratio(alpha, tau, 1.0);
  rep.path_limit_spread = rep.path_limits.empty() ? 0.0 : hi - lo;
  return rep;
}

}  // namespace zenolab
