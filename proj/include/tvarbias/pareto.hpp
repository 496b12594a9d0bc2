#ifndef TVARBIAS_PARETO_HPP
#define TVARBIAS_PARETO_HPP

#include <cstddef>
#include <cstdint>

#include "tvarbias/sample.hpp"

namespace tvarbias {

/// Pareto law F(x) = 1 - x^{-alpha} on (1, inf), alpha > 1.
///
/// Supplies closed-form ground truth for the empirical TVaR: quantiles, the
/// true TVaR, exact order-statistic means and the exact finite-sample bias.
class ParetoModel {
public:
    /// Throws std::invalid_argument unless alpha > 1 (finite mean).
    explicit ParetoModel(double alpha);

    double alpha() const noexcept { return alpha_; }

    double cdf(double x) const noexcept;
    double pdf(double x) const noexcept;
    double quantile(ProbabilityLevel p) const;
    double density_at_quantile(ProbabilityLevel p) const;
    double true_tvar(ProbabilityLevel p) const;

    /// E max(X, F^{-1}(p)) = p*xi_p + (1-p)*T_p.
    double winsorized_mean(ProbabilityLevel p) const;

    /// E X_{i:n}, evaluated as exp of log-gamma differences.
    /// Requires 1 <= i <= n and i < n + 1 - 1/alpha.
    double order_statistic_mean(std::size_t i, std::size_t n) const;

    /// E(tvar_hat) - T_p for samples of size n. Strictly negative.
    double exact_bias(ProbabilityLevel p, std::size_t n) const;

    /// Reciprocal of the infimum of the density over [xi_p - h, xi_p + h]:
    /// (xi_p + h)^{alpha+1} / alpha.
    double lipschitz_constant(ProbabilityLevel p, double h) const;

    /// n inverse-transform draws quantile(U_i), U_i from Rng(seed).
    Sample sample(std::size_t n, std::uint64_t seed) const;

private:
    double alpha_;
};

}  // namespace tvarbias

#endif  // TVARBIAS_PARETO_HPP
