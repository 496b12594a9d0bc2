#ifndef TVARBIAS_RESAMPLING_HPP
#define TVARBIAS_RESAMPLING_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tvarbias/pareto.hpp"
#include "tvarbias/sample.hpp"

namespace tvarbias {

struct BootstrapConfig {
    std::size_t num_resamples = 1000;
    std::uint64_t seed = 0;
    /// Threads used for resamples; 0 selects the hardware concurrency.
    /// Results do not depend on this value.
    std::size_t workers = 1;
};

struct BootstrapResult {
    /// Mean of tvar*_b - tvar_hat. May be positive; never clamped.
    double estimate;
    double original_estimate;
    /// tvar*_b for every resample, in resample order.
    std::vector<double> resample_values;
};

/// Efron bootstrap estimate of the empirical TVaR bias. Resample b draws n
/// indices uniformly with replacement from Rng::stream(seed, b).
BootstrapResult bootstrap_bias(const Sample& sample, ProbabilityLevel p,
                               const BootstrapConfig& config);

/// `repetitions` independent bootstrap bias estimates; repetition r runs
/// bootstrap_bias with seed derive_seed(config.seed, r).
std::vector<double> repeated_bootstrap_bias(const Sample& sample, ProbabilityLevel p,
                                            const BootstrapConfig& config,
                                            std::size_t repetitions);

enum class TailEstimator { tvar, tce };

struct MonteCarloResult {
    double mean_bias;
    double standard_error;
    std::size_t replications;
};

/// Monte-Carlo mean of (estimator(sample_r) - T_p) over Pareto samples of
/// size n; sample_r uses seed derive_seed(seed, r). Reduction runs in
/// replication order, so the result is bit-identical for any worker count.
MonteCarloResult monte_carlo_bias(const ParetoModel& model, std::size_t n, ProbabilityLevel p,
                                  std::size_t replications, std::uint64_t seed,
                                  TailEstimator estimator = TailEstimator::tvar,
                                  std::size_t workers = 1);

}  // namespace tvarbias

#endif  // TVARBIAS_RESAMPLING_HPP
