#ifndef TVARBIAS_BIAS_HPP
#define TVARBIAS_BIAS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "tvarbias/kde.hpp"
#include "tvarbias/sample.hpp"

namespace tvarbias {

/// Raised when the estimated density at the empirical quantile is too small
/// (or the bandwidth degenerate) to support a bias estimate.
class DensityFloorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDensityFloor = 1e-12;
inline constexpr std::size_t kDefaultGridPoints = 201;
inline constexpr double kDefaultLocality = 0.05;
inline constexpr double kDefaultSlack = 0.05;

/// Local Hoelder continuity of the quantile function at p:
/// |F^{-1}(u) - F^{-1}(p)| <= c_gamma |u - p|^gamma near p.
struct HolderParams {
    double gamma = 1.0;
    double c_gamma = 1.0;
    double delta = kDefaultSlack;  // slack, C = c_gamma (1 + delta)
    double h = kDefaultLocality;   // half-width of the density neighbourhood

    /// Throws std::invalid_argument unless 0 < gamma <= 1 and c_gamma, delta, h > 0.
    void validate() const;
};

/// -p / (2 n f(xi_p)), the first-order term of the TVaR bias.
double leading_term_bias(std::size_t n, ProbabilityLevel p, double density_at_quantile);

/// C p^{(1+gamma)/2} / (n^{(1+gamma)/2} (1-p)^{(1-gamma)/2}), C = c_gamma (1 + delta).
/// Bounds the negative bias only for n beyond an unquantified n0.
double bias_upper_bound(std::size_t n, ProbabilityLevel p, const HolderParams& params);

/// 1 / inf f over [xi_p - h, xi_p + h], the infimum taken over `grid_points`
/// equally spaced points including both endpoints.
double lipschitz_constant_analytic(const std::function<double(double)>& density, double xi_p,
                                   double h, std::size_t grid_points = kDefaultGridPoints);

/// Same as the analytic constant with f replaced by the KDE and xi_p by the
/// empirical quantile.
double lipschitz_constant_empirical(const Sample& sample, ProbabilityLevel p, double h,
                                    const KdeConfig& config,
                                    std::size_t grid_points = kDefaultGridPoints);

struct LeadingTermEstimate {
    double quantile_estimate;
    double bandwidth;
    double density_at_quantile;
    double leading_term;
};

/// Leading term with xi_p replaced by the empirical quantile and f(xi_p) by
/// the Gaussian KDE. Throws DensityFloorError for degenerate data.
LeadingTermEstimate estimate_leading_term(const Sample& sample, ProbabilityLevel p,
                                          const KdeConfig& config);

struct BiasOptions {
    KdeConfig kde;
    double gamma = 1.0;
    /// Required when gamma != 1; with gamma == 1 the empirical Lipschitz
    /// constant is used unless this is set.
    std::optional<double> c_gamma;
    double delta = kDefaultSlack;
    double h = kDefaultLocality;
    std::size_t grid_points = kDefaultGridPoints;
};

struct BiasReport {
    std::size_t n;
    double p;
    double tvar_estimate;
    double quantile_estimate;
    double bandwidth;
    double density_at_quantile;
    double leading_term;
    double lipschitz_constant;
    HolderParams holder;
    double upper_bound;
};

/// Data-driven bias assessment for one (sample, p) pair.
BiasReport estimate_bias(const Sample& sample, ProbabilityLevel p, const BiasOptions& options);

}  // namespace tvarbias

#endif  // TVARBIAS_BIAS_HPP
