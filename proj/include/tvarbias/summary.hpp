#ifndef TVARBIAS_SUMMARY_HPP
#define TVARBIAS_SUMMARY_HPP

#include <cstddef>
#include <span>

namespace tvarbias {

/// Five-number summary plus mean, for boxplot reconstruction. Quartiles use
/// linear interpolation between order statistics (Hyndman-Fan type 7).
struct BoxStats {
    double min;
    double q25;
    double median;
    double q75;
    double max;
    double mean;
    std::size_t count;
};

/// Type 7 quantile of data sorted ascending; q is clamped to [0, 1].
double sorted_quantile(std::span<const double> sorted, double q);

/// Throws std::invalid_argument on empty input.
BoxStats summarize(std::span<const double> values);

}  // namespace tvarbias

#endif  // TVARBIAS_SUMMARY_HPP
