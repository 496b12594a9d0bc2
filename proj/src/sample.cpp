#include "tvarbias/sample.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tvarbias {

ProbabilityLevel::ProbabilityLevel(double p) : p_(p) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << "probability level must lie in (0, 1), got " << p;
        throw std::invalid_argument(msg.str());
    }
}

FloorProduct floor_product(std::size_t n, double p) {
    const double np = static_cast<double>(n) * p;
    const double nearest = std::round(np);
    if (std::fabs(np - nearest) < 1e-9 * static_cast<double>(n)) {
        return {static_cast<std::size_t>(nearest), 0.0};
    }
    const double whole = std::floor(np);
    return {static_cast<std::size_t>(whole), np - whole};
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("sample must contain at least one observation");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            std::ostringstream msg;
            msg << "sample value at position " << i << " is not finite";
            throw std::invalid_argument(msg.str());
        }
    }
    std::sort(values_.begin(), values_.end());
}

double Sample::order_statistic(std::size_t i) const {
    if (i < 1 || i > values_.size()) {
        std::ostringstream msg;
        msg << "order statistic index " << i << " outside [1, " << values_.size() << "]";
        throw std::out_of_range(msg.str());
    }
    return values_[i - 1];
}

}  // namespace tvarbias
