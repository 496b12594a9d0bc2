#ifndef TVARBIAS_ESTIMATORS_HPP
#define TVARBIAS_ESTIMATORS_HPP

#include <cstddef>
#include <span>

#include "tvarbias/sample.hpp"

namespace tvarbias {

/// Left-continuous empirical quantile: X_{nu:n} when nu is an integer,
/// X_{[nu]+1:n} otherwise.
double empirical_quantile(const Sample& sample, ProbabilityLevel u);

/// Plug-in TVaR, the average of the empirical quantile function over (p, 1].
double empirical_tvar(const Sample& sample, ProbabilityLevel p);

/// empirical_tvar on values already sorted ascending (not checked).
double empirical_tvar_sorted(std::span<const double> sorted, ProbabilityLevel p);

/// empirical_tce on values already sorted ascending (not checked).
double empirical_tce_sorted(std::span<const double> sorted, ProbabilityLevel p);

/// Mean of the order statistics X_{[np]+1:n}, ..., X_{n:n}.
double empirical_tce(const Sample& sample, ProbabilityLevel p);

/// Nonnegative amount by which the empirical TCE falls below the empirical
/// TVaR: tce = tvar - gap. Zero whenever np is an integer.
double tce_tvar_identity_gap(const Sample& sample, ProbabilityLevel p);

/// Winsorized-mean decomposition of the TVaR estimation error,
///
///   tvar_hat - true_tvar = winsorized_mean_term - residual,
///
/// where the winsorized term averages max(X_i, threshold) - winsorized_mean
/// and the residual is nonnegative.
struct ResidualDecomposition {
    double winsorized_mean_term;
    double residual;
    double threshold;
    std::size_t count_below;
    /// tvar_hat - true_tvar, computed directly from the estimator.
    double tvar_error;
};

/// `xi_p`, `true_tvar` and `winsorized_mean` are the model quantities
/// F^{-1}(p), T_p and E max(X, F^{-1}(p)); the identity above only holds when
/// they are mutually consistent (winsorized_mean = p*xi_p + (1-p)*true_tvar).
ResidualDecomposition residual_decomposition(const Sample& sample, ProbabilityLevel p,
                                             double xi_p, double true_tvar,
                                             double winsorized_mean);

}  // namespace tvarbias

#endif  // TVARBIAS_ESTIMATORS_HPP
