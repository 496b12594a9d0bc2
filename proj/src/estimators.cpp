#include "tvarbias/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace tvarbias {
namespace {

// Index (0-based) of X_{[np]+1:n}; throws when the tail is empty.
std::size_t tail_start(std::size_t n, const FloorProduct& k) {
    if (k.whole + 1 > n) {
        throw std::domain_error("empty tail: [np] + 1 exceeds the sample size");
    }
    return k.whole;
}

double upper_sum(std::span<const double> sorted, std::size_t from) {
    double sum = 0.0;
    for (std::size_t i = from; i < sorted.size(); ++i) sum += sorted[i];
    return sum;
}

}  // namespace

double empirical_quantile(const Sample& sample, ProbabilityLevel u) {
    const auto k = floor_product(sample.size(), u);
    if (k.is_integer()) {
        // nu rounds to 0 only for u below the integer-detection tolerance.
        return sample.order_statistic(std::max<std::size_t>(k.whole, 1));
    }
    return sample.order_statistic(k.whole + 1);
}

double empirical_tvar_sorted(std::span<const double> x, ProbabilityLevel p) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("sample must contain at least one observation");
    const auto k = floor_product(n, p);
    const std::size_t start = tail_start(n, k);
    const double scale = (1.0 - p) * static_cast<double>(n);
    return (upper_sum(x, start) - k.fraction * x[start]) / scale;
}

double empirical_tce_sorted(std::span<const double> x, ProbabilityLevel p) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("sample must contain at least one observation");
    const auto k = floor_product(n, p);
    const std::size_t start = tail_start(n, k);
    return upper_sum(x, start) / static_cast<double>(n - start);
}

double empirical_tvar(const Sample& sample, ProbabilityLevel p) {
    return empirical_tvar_sorted(sample.values(), p);
}

double empirical_tce(const Sample& sample, ProbabilityLevel p) {
    return empirical_tce_sorted(sample.values(), p);
}

double tce_tvar_identity_gap(const Sample& sample, ProbabilityLevel p) {
    const std::size_t n = sample.size();
    const auto k = floor_product(n, p);
    const std::size_t start = tail_start(n, k);
    if (k.is_integer()) return 0.0;
    const double tvar = empirical_tvar(sample, p);
    return k.fraction / static_cast<double>(n - start) * (tvar - sample.values()[start]);
}

ResidualDecomposition residual_decomposition(const Sample& sample, ProbabilityLevel p,
                                             double xi_p, double true_tvar,
                                             double winsorized_mean) {
    if (!std::isfinite(xi_p) || !std::isfinite(true_tvar) || !std::isfinite(winsorized_mean)) {
        throw std::invalid_argument("model quantities must be finite");
    }
    const std::size_t n = sample.size();
    const auto k = floor_product(n, p);
    const std::size_t start = tail_start(n, k);
    const auto x = sample.values();
    const double scale = static_cast<double>(n) * (1.0 - p);

    // Sorted input: N_p is the position of the first value above xi_p.
    const auto count_below =
        static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), xi_p) - x.begin());

    double winsorized = 0.0;
    for (double v : x) winsorized += std::max(v, xi_p) - winsorized_mean;

    double residual = k.fraction / scale * (x[start] - xi_p);
    if (count_below != k.whole) {
        const double sign = count_below > k.whole ? 1.0 : -1.0;
        const std::size_t lo = std::min(k.whole, count_below);
        const std::size_t hi = std::max(k.whole, count_below);
        double between = 0.0;
        for (std::size_t i = lo; i < hi; ++i) between += x[i] - xi_p;
        residual -= sign / scale * between;
    }

    const double tvar_error = empirical_tvar(sample, p) - true_tvar;
    return {winsorized / scale, residual, xi_p, count_below, tvar_error};
}

}  // namespace tvarbias
