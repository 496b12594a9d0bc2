#include "tvarbias/pareto.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tvarbias/rng.hpp"

namespace tvarbias {
namespace {

// Kahan-Babuska (Neumaier) accumulator.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            carry_ += (sum_ - t) + v;
        } else {
            carry_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// log Gamma(m - a) - log Gamma(m), m >= 1, 0 < a < 1.
double log_gamma_shift(double m, double a) {
    return std::lgamma(m - a) - std::lgamma(m);
}

}  // namespace

ParetoModel::ParetoModel(double alpha) : alpha_(alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) {
        std::ostringstream msg;
        msg << "Pareto shape must be a finite value > 1, got " << alpha;
        throw std::invalid_argument(msg.str());
    }
}

double ParetoModel::cdf(double x) const noexcept {
    if (x <= 1.0) return 0.0;
    return 1.0 - std::pow(x, -alpha_);
}

double ParetoModel::pdf(double x) const noexcept {
    if (x < 1.0) return 0.0;
    return alpha_ * std::pow(x, -alpha_ - 1.0);
}

double ParetoModel::quantile(ProbabilityLevel p) const {
    return std::pow(1.0 - p, -1.0 / alpha_);
}

double ParetoModel::density_at_quantile(ProbabilityLevel p) const {
    return alpha_ * std::pow(1.0 - p, (alpha_ + 1.0) / alpha_);
}

double ParetoModel::true_tvar(ProbabilityLevel p) const {
    return alpha_ / (alpha_ - 1.0) * quantile(p);
}

double ParetoModel::winsorized_mean(ProbabilityLevel p) const {
    return p * quantile(p) + (1.0 - p) * true_tvar(p);
}

double ParetoModel::order_statistic_mean(std::size_t i, std::size_t n) const {
    if (i < 1 || i > n) {
        std::ostringstream msg;
        msg << "order statistic index " << i << " outside [1, " << n << "]";
        throw std::invalid_argument(msg.str());
    }
    const double inv = 1.0 / alpha_;
    const double nd = static_cast<double>(n);
    if (!(static_cast<double>(i) < nd + 1.0 - inv)) {
        throw std::domain_error("order statistic mean does not exist for this (i, n, alpha)");
    }
    // Gamma(n+1) Gamma(n-i+1-1/a) / (Gamma(n-i+1) Gamma(n+1-1/a))
    const double j = nd - static_cast<double>(i) + 1.0;
    return std::exp(log_gamma_shift(j, inv) - log_gamma_shift(nd + 1.0, inv));
}

double ParetoModel::exact_bias(ProbabilityLevel p, std::size_t n) const {
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    const auto k = floor_product(n, p);
    if (k.whole + 1 > n) throw std::domain_error("empty tail: [np] + 1 exceeds n");

    // E tvar_hat = [ -frac * E X_{k+1:n} + sum_{i=k+1..n} E X_{i:n} ] / ((1-p) n),
    // with E X_{i:n} = G * Gamma(n-i+1-1/a) / Gamma(n-i+1) and G the common
    // factor Gamma(n+1) / Gamma(n+1-1/a). Terms are summed with j = n-i+1
    // running upward from 1.
    const double inv = 1.0 / alpha_;
    const double nd = static_cast<double>(n);
    const std::size_t tail = n - k.whole;
    CompensatedSum ratios;
    for (std::size_t j = 1; j <= tail; ++j) {
        ratios.add(std::exp(log_gamma_shift(static_cast<double>(j), inv)));
    }
    const double first = std::exp(log_gamma_shift(static_cast<double>(tail), inv));
    ratios.add(-k.fraction * first);

    const double common = std::exp(-log_gamma_shift(nd + 1.0, inv));
    const double expected = common * ratios.value() / ((1.0 - p) * nd);
    return expected - true_tvar(p);
}

double ParetoModel::lipschitz_constant(ProbabilityLevel p, double h) const {
    if (!(h > 0.0)) throw std::invalid_argument("neighbourhood half-width h must be positive");
    return std::pow(quantile(p) + h, alpha_ + 1.0) / alpha_;
}

Sample ParetoModel::sample(std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    Rng rng(seed);
    std::vector<double> values(n);
    const double inv = -1.0 / alpha_;
    for (auto& v : values) v = std::pow(1.0 - rng.uniform_open(), inv);
    return Sample(std::move(values));
}

}  // namespace tvarbias
