#ifndef TVARBIAS_KDE_HPP
#define TVARBIAS_KDE_HPP

#include <optional>

#include "tvarbias/sample.hpp"

namespace tvarbias {

/// Gaussian kernel density estimate settings. No explicit bandwidth means
/// Silverman's rule of thumb, 0.9 * min(sd, IQR/1.34) * n^{-1/5}.
struct KdeConfig {
    std::optional<double> bandwidth;

    static KdeConfig silverman() { return {}; }
    static KdeConfig fixed(double b) { return {b}; }
};

/// Silverman bandwidth. Falls back to the standard deviation when the IQR is
/// zero; returns 0 for a constant sample.
double silverman_bandwidth(const Sample& sample);

/// Explicit bandwidth if set, otherwise the Silverman rule.
double resolve_bandwidth(const Sample& sample, const KdeConfig& config);

/// (1/(n b)) sum phi((x - X_i)/b). Throws std::invalid_argument for b <= 0.
double kde_density_at(const Sample& sample, double x, double bandwidth);
double kde_density_at(const Sample& sample, double x, const KdeConfig& config);

}  // namespace tvarbias

#endif  // TVARBIAS_KDE_HPP
