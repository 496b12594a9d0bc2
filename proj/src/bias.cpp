#include "tvarbias/bias.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tvarbias/estimators.hpp"

namespace tvarbias {
namespace {

double grid_infimum(const std::function<double(double)>& f, double centre, double h,
                    std::size_t grid_points) {
    if (!(h > 0.0)) throw std::invalid_argument("neighbourhood half-width h must be positive");
    if (grid_points < 2) throw std::invalid_argument("infimum grid needs at least 2 points");
    const double lo = centre - h;
    const double step = 2.0 * h / static_cast<double>(grid_points - 1);
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double x = k + 1 == grid_points ? centre + h : lo + step * static_cast<double>(k);
        inf = std::min(inf, f(x));
    }
    return inf;
}

}  // namespace

void HolderParams::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("Hoelder exponent gamma must lie in (0, 1]");
    }
    if (!(c_gamma > 0.0) || !std::isfinite(c_gamma)) {
        throw std::invalid_argument("Hoelder constant c_gamma must be positive and finite");
    }
    if (!(delta > 0.0)) throw std::invalid_argument("slack delta must be positive");
    if (!(h > 0.0)) throw std::invalid_argument("locality h must be positive");
}

double leading_term_bias(std::size_t n, ProbabilityLevel p, double density_at_quantile) {
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    if (!(density_at_quantile > 0.0) || !std::isfinite(density_at_quantile)) {
        throw std::invalid_argument("density at the quantile must be positive and finite");
    }
    return -p / (2.0 * static_cast<double>(n) * density_at_quantile);
}

double bias_upper_bound(std::size_t n, ProbabilityLevel p, const HolderParams& params) {
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    params.validate();
    const double c = params.c_gamma * (1.0 + params.delta);
    const double up = 0.5 * (1.0 + params.gamma);
    const double down = 0.5 * (1.0 - params.gamma);
    return c * std::pow(p / static_cast<double>(n), up) / std::pow(1.0 - p, down);
}

double lipschitz_constant_analytic(const std::function<double(double)>& density, double xi_p,
                                   double h, std::size_t grid_points) {
    const double inf = grid_infimum(density, xi_p, h, grid_points);
    if (!(inf > 0.0)) {
        std::ostringstream msg;
        msg << "density is not positive on [" << xi_p - h << ", " << xi_p + h << "]";
        throw std::domain_error(msg.str());
    }
    return 1.0 / inf;
}

double lipschitz_constant_empirical(const Sample& sample, ProbabilityLevel p, double h,
                                    const KdeConfig& config, std::size_t grid_points) {
    const double b = resolve_bandwidth(sample, config);
    if (!(b > 0.0)) throw DensityFloorError("KDE bandwidth degenerates to zero (constant data); density at the quantile cannot be estimated");
    const double xi = empirical_quantile(sample, p);
    const double inf = grid_infimum(
        [&](double x) { return kde_density_at(sample, x, b); }, xi, h, grid_points);
    if (inf < kDensityFloor) {
        std::ostringstream msg;
        msg << "KDE minimum " << inf << " near the empirical quantile " << xi
            << " is below the density floor";
        throw DensityFloorError(msg.str());
    }
    return 1.0 / inf;
}

LeadingTermEstimate estimate_leading_term(const Sample& sample, ProbabilityLevel p,
                                          const KdeConfig& config) {
    const double b = resolve_bandwidth(sample, config);
    if (!(b > 0.0)) throw DensityFloorError("KDE bandwidth degenerates to zero (constant data); density at the quantile cannot be estimated");
    const double xi = empirical_quantile(sample, p);
    const double f = kde_density_at(sample, xi, b);
    if (f < kDensityFloor) {
        std::ostringstream msg;
        msg << "KDE value " << f << " at the empirical quantile " << xi
            << " is below the density floor";
        throw DensityFloorError(msg.str());
    }
    return {xi, b, f, leading_term_bias(sample.size(), p, f)};
}

BiasReport estimate_bias(const Sample& sample, ProbabilityLevel p, const BiasOptions& options) {
    const auto lead = estimate_leading_term(sample, p, options.kde);
    const double c1 = lipschitz_constant_empirical(sample, p, options.h,
                                                   KdeConfig::fixed(lead.bandwidth),
                                                   options.grid_points);
    HolderParams holder{options.gamma, 0.0, options.delta, options.h};
    if (options.c_gamma) {
        holder.c_gamma = *options.c_gamma;
    } else if (options.gamma == 1.0) {
        holder.c_gamma = c1;
    } else {
        throw std::invalid_argument("c_gamma must be supplied when gamma != 1");
    }
    const std::size_t n = sample.size();
    return {n,
            p.value(),
            empirical_tvar(sample, p),
            lead.quantile_estimate,
            lead.bandwidth,
            lead.density_at_quantile,
            lead.leading_term,
            c1,
            holder,
            bias_upper_bound(n, p, holder)};
}

}  // namespace tvarbias
