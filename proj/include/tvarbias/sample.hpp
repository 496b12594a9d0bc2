#ifndef TVARBIAS_SAMPLE_HPP
#define TVARBIAS_SAMPLE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace tvarbias {

/// Probability level strictly inside (0, 1).
class ProbabilityLevel {
public:
    explicit ProbabilityLevel(double p);

    double value() const noexcept { return p_; }
    operator double() const noexcept { return p_; }

private:
    double p_;
};

/// Integer part of n*p together with its fractional remainder.
///
/// n*p is treated as an integer when it lies within 1e-9*n of the nearest
/// integer; in that case `fraction` is exactly zero.
struct FloorProduct {
    std::size_t whole;
    double fraction;

    bool is_integer() const noexcept { return fraction == 0.0; }
};

FloorProduct floor_product(std::size_t n, double p);

/// Finite loss observations, sorted ascending once at construction.
class Sample {
public:
    /// Throws std::invalid_argument on empty input or non-finite values.
    explicit Sample(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }

    /// i-th order statistic, 1-based (X_{i:n}).
    double order_statistic(std::size_t i) const;

    std::span<const double> values() const noexcept { return values_; }

    double min() const noexcept { return values_.front(); }
    double max() const noexcept { return values_.back(); }

private:
    std::vector<double> values_;
};

}  // namespace tvarbias

#endif  // TVARBIAS_SAMPLE_HPP
