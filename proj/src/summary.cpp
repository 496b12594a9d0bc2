#include "tvarbias/summary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tvarbias {
double sorted_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sequence");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("cannot summarize an empty sequence");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return {sorted.front(),
            sorted_quantile(sorted, 0.25),
            sorted_quantile(sorted, 0.5),
            sorted_quantile(sorted, 0.75),
            sorted.back(),
            sum / static_cast<double>(values.size()),
            values.size()};
}

}  // namespace tvarbias
