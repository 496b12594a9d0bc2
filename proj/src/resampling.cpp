#include "tvarbias/resampling.hpp"

#include <cmath>
#include <stdexcept>

#include "tvarbias/estimators.hpp"
#include "tvarbias/parallel.hpp"
#include "tvarbias/rng.hpp"

namespace tvarbias {
namespace {

// Draws one resample and returns it sorted. Since the source is sorted, the
// sorted resample is each source value repeated by its draw count.
void draw_sorted_resample(std::span<const double> source, Rng& rng,
                          std::vector<std::uint32_t>& counts, std::vector<double>& out) {
    const std::size_t n = source.size();
    counts.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[rng.index_below(n)];
    out.clear();
    for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), counts[i], source[i]);
}

}  // namespace

BootstrapResult bootstrap_bias(const Sample& sample, ProbabilityLevel p,
                               const BootstrapConfig& config) {
    if (config.num_resamples < 1) {
        throw std::invalid_argument("bootstrap needs at least one resample");
    }
    const double original = empirical_tvar(sample, p);
    std::vector<double> values(config.num_resamples);
    const auto source = sample.values();

    const std::size_t workers = detail::resolve_workers(config.workers);
    detail::parallel_for(config.num_resamples, workers, [&](std::size_t b) {
        thread_local std::vector<std::uint32_t> counts;
        thread_local std::vector<double> resample;
        Rng rng = Rng::stream(config.seed, b);
        draw_sorted_resample(source, rng, counts, resample);
        values[b] = empirical_tvar_sorted(resample, p);
    });

    double sum = 0.0;
    for (double v : values) sum += v - original;
    return {sum / static_cast<double>(values.size()), original, std::move(values)};
}

std::vector<double> repeated_bootstrap_bias(const Sample& sample, ProbabilityLevel p,
                                            const BootstrapConfig& config,
                                            std::size_t repetitions) {
    std::vector<double> estimates(repetitions);
    const std::size_t workers = detail::resolve_workers(config.workers);
    detail::parallel_for(repetitions, workers, [&](std::size_t r) {
        BootstrapConfig inner = config;
        inner.seed = derive_seed(config.seed, r);
        inner.workers = 1;
        estimates[r] = bootstrap_bias(sample, p, inner).estimate;
    });
    return estimates;
}

MonteCarloResult monte_carlo_bias(const ParetoModel& model, std::size_t n, ProbabilityLevel p,
                                  std::size_t replications, std::uint64_t seed,
                                  TailEstimator estimator, std::size_t workers) {
    if (replications < 2) throw std::invalid_argument("Monte-Carlo needs at least 2 replications");
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    const double truth = model.true_tvar(p);
    std::vector<double> errors(replications);
    detail::parallel_for(replications, detail::resolve_workers(workers), [&](std::size_t r) {
        const Sample s = model.sample(n, derive_seed(seed, r));
        const double est = estimator == TailEstimator::tvar ? empirical_tvar(s, p)
                                                            : empirical_tce(s, p);
        errors[r] = est - truth;
    });

    const double count = static_cast<double>(replications);
    double mean = 0.0;
    for (double e : errors) mean += e;
    mean /= count;
    double ss = 0.0;
    for (double e : errors) ss += (e - mean) * (e - mean);
    const double sd = std::sqrt(ss / (count - 1.0));
    return {mean, sd / std::sqrt(count), replications};
}

}  // namespace tvarbias
