#pragma once

// Monte Carlo reproduction of the n-measurement protocol.
//
// Each trajectory starts in |N>, evolves for tau/n, and is measured. A
// "non-decayed" outcome projects back onto |N>; a "decayed" outcome is
// absorbing and ends the trajectory. Trajectory i draws its variates from
// PhiloxStream(master_seed, i), so the survivor count is a function of the
// configuration alone, whatever the number of worker threads.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "zenolab/analytic_core.hpp"
#include "zenolab/philox.hpp"

namespace zenolab {

template <typename S>
concept UniformStream = requires(S& s) {
  { s.next_uniform() } -> std::convertible_to<double>;
};

struct TrajectoryConfig {
  DynamicsParams params;
  std::uint64_t n = 1;
  std::uint64_t trajectories = 1;
  std::uint64_t master_seed = 0;

  void validate() const {
    params.validate();
    detail::check_count(n);
    if (trajectories == 0) throw std::invalid_argument("trajectories must be >= 1");
    detail::check_step_mass(params.decay_mass(params.tau / static_cast<double>(n)));
  }
};

struct TrajectoryEstimate {
  std::uint64_t survivors = 0;
  std::uint64_t trajectories = 0;
  double p_hat = 0.0;
  double std_err = 0.0;
  /// (p_hat - reference) / std_err. Left empty when std_err == 0 and
  /// p_hat differs from the reference.
  std::optional<double> z_vs;
};

/// Binomial point estimate and standard error from an integer count.
[[nodiscard]] inline TrajectoryEstimate make_estimate(std::uint64_t survivors, std::uint64_t trajectories,
                                                      std::optional<double> reference = std::nullopt) {
  if (trajectories == 0) throw std::invalid_argument("trajectories must be >= 1");
  if (survivors > trajectories) throw std::invalid_argument("survivors exceed trajectories");
  TrajectoryEstimate est;
  est.survivors = survivors;
  est.trajectories = trajectories;
  est.p_hat = static_cast<double>(survivors) / static_cast<double>(trajectories);
  est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trajectories));
  if (reference) {
    if (est.std_err > 0.0) {
      est.z_vs = (est.p_hat - *reference) / est.std_err;
    } else if (est.p_hat == *reference) {
      est.z_vs = 0.0;
    }
  }
  return est;
}

/// One trajectory of n measurements. Returns true if every outcome was
/// "non-decayed". Draws exactly m variates when the decay happens at step m.
template <UniformStream Stream>
[[nodiscard]] bool run_trajectory(const DynamicsParams& params, std::uint64_t n, Stream& stream) {
  params.validate();
  detail::check_count(n);
  const double step_mass = params.decay_mass(params.tau / static_cast<double>(n));
  detail::check_step_mass(step_mass);
  const double p_survive = 1.0 - step_mass;
  for (std::uint64_t m = 0; m < n; ++m) {
    if (!(stream.next_uniform() < p_survive)) return false;
  }
  return true;
}

namespace detail {

inline std::uint64_t count_survivors(const DynamicsParams& params, std::uint64_t n, std::uint64_t seed,
                                     std::uint64_t first, std::uint64_t last) {
  std::uint64_t survivors = 0;
  for (std::uint64_t i = first; i < last; ++i) {
    PhiloxStream stream(seed, i);
    survivors += run_trajectory(params, n, stream) ? 1u : 0u;
  }
  return survivors;
}

}  // namespace detail

/// Runs config.trajectories independent trajectories on up to `workers`
/// threads (0 = hardware concurrency).
[[nodiscard]] inline TrajectoryEstimate estimate_survival(const TrajectoryConfig& config,
                                                          std::optional<double> reference = std::nullopt,
                                                          unsigned workers = 0) {
  config.validate();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t total = config.trajectories;
  const auto chunks = static_cast<std::uint64_t>(std::min<std::uint64_t>(workers, total));

  std::vector<std::uint64_t> partial(chunks, 0);
  auto bounds = [&](std::uint64_t c) { return c * total / chunks; };

  if (chunks == 1) {
    partial[0] = detail::count_survivors(config.params, config.n, config.master_seed, 0, total);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(chunks);
    for (std::uint64_t c = 0; c < chunks; ++c) {
      pool.emplace_back([&, c] {
        partial[c] = detail::count_survivors(config.params, config.n, config.master_seed, bounds(c), bounds(c + 1));
      });
    }
  }

  std::uint64_t survivors = 0;
  for (auto s : partial) survivors += s;
  return make_estimate(survivors, total, reference);
}

}  // namespace zenolab
