#include "tvarbias/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tvarbias/summary.hpp"

namespace tvarbias {

double silverman_bandwidth(const Sample& sample) {
    const auto x = sample.values();
    const double n = static_cast<double>(x.size());
    if (x.size() < 2) return 0.0;

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));

    const double iqr = sorted_quantile(x, 0.75) - sorted_quantile(x, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) spread = sd;
    return 0.9 * spread * std::pow(n, -0.2);
}

double resolve_bandwidth(const Sample& sample, const KdeConfig& config) {
    return config.bandwidth ? *config.bandwidth : silverman_bandwidth(sample);
}

double kde_density_at(const Sample& sample, double x, double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        std::ostringstream msg;
        msg << "KDE bandwidth must be positive and finite, got " << bandwidth;
        throw std::invalid_argument(msg.str());
    }
    const auto values = sample.values();
    // Contributions beyond 40 bandwidths underflow; skip them via the sort.
    const double reach = 40.0 * bandwidth;
    auto first = std::lower_bound(values.begin(), values.end(), x - reach);
    auto last = std::upper_bound(first, values.end(), x + reach);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
        const double z = (x - *it) / bandwidth;
        sum += std::exp(-0.5 * z * z);
    }
    return sum * std::numbers::inv_sqrtpi / std::numbers::sqrt2 /
           (static_cast<double>(values.size()) * bandwidth);
}

double kde_density_at(const Sample& sample, double x, const KdeConfig& config) {
    return kde_density_at(sample, x, resolve_bandwidth(sample, config));
}

}  // namespace tvarbias
