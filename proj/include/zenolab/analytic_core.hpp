#pragma once

// Closed-form survival probabilities of a two-state "unstable" system
// under repeated projective measurement.
//
// The state after free evolution for a time dt, starting from |N>, is
//
//     |F> = a(dt)|N> + b(dt)|D>,   b = sqrt(alpha dt^k),  a = sqrt(1 - alpha dt^k)
//
// and a measurement in the {|N>, |D>} basis finds |N> with probability
// 1 - alpha dt^k. Splitting [0, tau] into n equal sub-intervals with a
// measurement at the end of each gives (1 - alpha (tau/n)^k)^n.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zenolab {

/// Tolerance used to recognise the special dynamical degrees k = 1 and k = 2.
inline constexpr double kRegimeTolerance = 1e-12;

/// Largest measurement count accepted as a concrete integer.
inline constexpr std::uint64_t kMaxMeasurements = std::uint64_t{1} << 62;

/// Thresholds that quantify "much smaller than one".
struct Thresholds {
  /// Per-step decay mass alpha dt^k above which the short-time model is
  /// considered outside its regime (flagged, not rejected).
  double validity = 0.1;
  /// Total subtracted mass n alpha (tau/n)^k above which the linearised
  /// n-measurement formula is marked invalid.
  double linearization = 0.1;
};

struct TwoLevelState {
  double amp_survive = 1.0;
  double amp_decay = 0.0;

  [[nodiscard]] double norm_squared() const noexcept {
    return amp_survive * amp_survive + amp_decay * amp_decay;
  }
};

/// (alpha, tau, k). alpha = 0 is admitted as the zero-coupling limit.
struct DynamicsParams {
  double alpha = 0.0;
  double tau = 1.0;
  double k = 1.0;

  /// Throws std::invalid_argument unless alpha >= 0, tau > 0, k > 0 and all
  /// three are finite.
  void validate() const {
    if (!std::isfinite(alpha) || alpha < 0.0) {
      throw std::invalid_argument("alpha must be finite and non-negative");
    }
    if (!std::isfinite(tau) || tau <= 0.0) {
      throw std::invalid_argument("tau must be finite and positive");
    }
    if (!std::isfinite(k) || k <= 0.0) {
      throw std::invalid_argument("k must be finite and positive");
    }
  }

  /// Decay mass alpha dt^k accumulated during one free-evolution step.
  [[nodiscard]] double decay_mass(double dt) const { return alpha * std::pow(dt, k); }
};

enum class Regime { Zeno, AntiZeno, General };

[[nodiscard]] inline std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Zeno:
      return "zeno";
    case Regime::AntiZeno:
      return "anti_zeno";
    case Regime::General:
      break;
  }
  return "general";
}

[[nodiscard]] inline Regime classify_regime(double k) noexcept {
  if (std::abs(k - 2.0) <= kRegimeTolerance) return Regime::Zeno;
  if (std::abs(k - 1.0) <= kRegimeTolerance) return Regime::AntiZeno;
  return Regime::General;
}

struct StepOutcome {
  TwoLevelState state;
  double decay_mass = 0.0;
  /// decay_mass exceeds Thresholds::validity.
  bool outside_weak_coupling = false;
  /// decay_mass == 1: the state is fully |D>.
  bool at_domain_boundary = false;
};

struct SurvivalResult {
  std::uint64_t n = 1;
  Regime regime = Regime::General;
  /// alpha (tau/n)^k, the decay probability of a single sub-interval.
  double step_mass = 0.0;
  bool outside_weak_coupling = false;
  /// (1 - step_mass)^n.
  double exact = 1.0;
  /// 1 - exact, evaluated without cancellation.
  double decay = 0.0;
  /// 1 - alpha tau^k / n^(k-1); only filled by survival_n_approx.
  std::optional<double> approx;
  bool approx_valid = false;
  bool approx_clamped = false;
};

namespace detail {

inline void check_step_mass(double mass) {
  if (!(mass <= 1.0)) {
    throw std::domain_error("decay mass alpha*dt^k = " + std::to_string(mass) +
                            " exceeds 1; amplitudes would not be real");
  }
}

inline void check_count(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("measurement count n must be >= 1");
  if (n > kMaxMeasurements) {
    throw std::invalid_argument("measurement count n exceeds 2^62; use ln(n) path evaluation");
  }
}

// log(1 - x)^n = n log1p(-x); exp/expm1 of that for survival and decay.
inline void fill_exact(SurvivalResult& r) {
  if (r.n == 1) {
    r.exact = 1.0 - r.step_mass;
    r.decay = r.step_mass;
    return;
  }
  const double log_survival = static_cast<double>(r.n) * std::log1p(-r.step_mass);
  r.exact = std::exp(log_survival);
  r.decay = -std::expm1(log_survival);
}

inline SurvivalResult base_result(const DynamicsParams& params, std::uint64_t n,
                                  const Thresholds& thresholds) {
  params.validate();
  check_count(n);
  SurvivalResult r;
  r.n = n;
  r.regime = classify_regime(params.k);
  r.step_mass = params.decay_mass(params.tau / static_cast<double>(n));
  check_step_mass(r.step_mass);
  r.outside_weak_coupling = r.step_mass > thresholds.validity;
  fill_exact(r);
  return r;
}

}  // namespace detail

/// Free evolution of |N> for a time dt.
[[nodiscard]] inline StepOutcome evolve_step(const DynamicsParams& params, double dt,
                                             const Thresholds& thresholds = {}) {
  params.validate();
  if (!std::isfinite(dt) || dt <= 0.0) throw std::invalid_argument("dt must be positive");
  const double mass = params.decay_mass(dt);
  detail::check_step_mass(mass);
  StepOutcome out;
  out.decay_mass = mass;
  out.state.amp_decay = std::sqrt(mass);
  out.state.amp_survive = std::sqrt(1.0 - mass);
  out.outside_weak_coupling = mass > thresholds.validity;
  out.at_domain_boundary = mass == 1.0;
  return out;
}

/// Probability of finding |N> after one measurement at tau: 1 - alpha tau^k.
[[nodiscard]] inline double survival_single(const DynamicsParams& params) {
  params.validate();
  const double mass = params.decay_mass(params.tau);
  detail::check_step_mass(mass);
  return 1.0 - mass;
}

/// Survival after n equally spaced measurements in [0, tau].
[[nodiscard]] inline SurvivalResult survival_n_exact(const DynamicsParams& params, std::uint64_t n,
                                                     const Thresholds& thresholds = {}) {
  return detail::base_result(params, n, thresholds);
}

/// As survival_n_exact, plus the large-n linearisation 1 - alpha tau^k / n^(k-1).
///
/// The linearisation is reported even when it is meaningless; approx_valid is
/// true only when the total subtracted mass n alpha (tau/n)^k is at most
/// thresholds.linearization. Values outside [0, 1] are clamped and flagged.
[[nodiscard]] inline SurvivalResult survival_n_approx(const DynamicsParams& params, std::uint64_t n,
                                                      const Thresholds& thresholds = {}) {
  if (n < 2) throw std::invalid_argument("the linearised formula needs n >= 2");
  SurvivalResult r = detail::base_result(params, n, thresholds);
  const double nd = static_cast<double>(n);
  const double total_mass = params.alpha * std::pow(params.tau, params.k) * std::pow(nd, 1.0 - params.k);
  double approx = 1.0 - total_mass;
  if (approx < 0.0 || approx > 1.0) {
    approx = approx < 0.0 ? 0.0 : 1.0;
    r.approx_clamped = true;
  }
  r.approx = approx;
  r.approx_valid = total_mass <= thresholds.linearization;
  return r;
}

/// n -> infinity limit of the k = 1 survival probability, exp(-alpha tau).
[[nodiscard]] inline double anti_zeno_limit(const DynamicsParams& params) {
  params.validate();
  if (classify_regime(params.k) != Regime::AntiZeno) {
    throw std::invalid_argument("anti_zeno_limit requires k = 1");
  }
  return std::exp(-params.alpha * params.tau);
}

/// n -> infinity limit of the survival probability at fixed k:
/// 1 for k > 1, exp(-alpha tau) for k = 1, 0 for k < 1 (alpha > 0).
[[nodiscard]] inline double fixed_k_limit(const DynamicsParams& params) {
  params.validate();
  if (params.alpha == 0.0) return 1.0;
  switch (classify_regime(params.k)) {
    case Regime::AntiZeno:
      return anti_zeno_limit(params);
    case Regime::Zeno:
      return 1.0;
    case Regime::General:
      break;
  }
  return params.k > 1.0 ? 1.0 : 0.0;
}

}  // namespace zenolab
