#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "tvarbias/estimators.hpp"
#include "tvarbias/pareto.hpp"

using namespace tvarbias;

namespace {

// Exact integral of the empirical quantile step function over (p, 1],
// divided by (1 - p). On ((i-1)/n, i/n] the quantile equals X_{i:n}.
double integrate_step_quantile(std::vector<double> x, double p) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lo = std::max(p, static_cast<double>(i) / n);
        const double hi = static_cast<double>(i + 1) / n;
        if (hi > lo) total += x[i] * (hi - lo);
    }
    return total / (1.0 - p);
}

// Midpoint rule over (p, 1] using the left-continuous inverse directly.
double riemann_tvar(std::vector<double> x, double p, std::size_t steps) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    const double width = (1.0 - p) / static_cast<double>(steps);
    double total = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double u = p + (static_cast<double>(k) + 0.5) * width;
        const auto idx = static_cast<std::size_t>(std::ceil(n * u)) - 1;
        total += x[std::min(idx, x.size() - 1)] * width;
    }
    return total / (1.0 - p);
}

std::vector<double> random_values(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> d(0.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(gen);
    return v;
}

}  // namespace

TEST_CASE("sample construction") {
    CHECK_THROWS_AS(Sample({}), std::invalid_argument);
    CHECK_THROWS_AS(Sample({1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
    CHECK_THROWS_AS(Sample({std::numeric_limits<double>::infinity()}), std::invalid_argument);
    const Sample s({3.0, 1.0, 2.0, 2.0});
    CHECK(s.size() == 4);
    CHECK(s.order_statistic(1) == 1.0);
    CHECK(s.order_statistic(4) == 3.0);
    CHECK(std::is_sorted(s.values().begin(), s.values().end()));
    CHECK_THROWS_AS(s.order_statistic(0), std::out_of_range);
    CHECK_THROWS_AS(s.order_statistic(5), std::out_of_range);
}

TEST_CASE("probability level bounds") {
    CHECK_THROWS_AS(ProbabilityLevel(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ProbabilityLevel(1.0), std::invalid_argument);
    CHECK_THROWS_AS(ProbabilityLevel(-0.2), std::invalid_argument);
    CHECK_THROWS_AS(ProbabilityLevel(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK(ProbabilityLevel(0.3).value() == 0.3);
}

TEST_CASE("integer detection of n*p") {
    // 0.95 * 20 is 18.999999999999996 in binary floating point.
    const auto k = floor_product(20, 0.95);
    CHECK(k.whole == 19);
    CHECK(k.is_integer());
    const auto j = floor_product(5, 0.5);
    CHECK(j.whole == 2);
    CHECK(j.fraction == doctest::Approx(0.5));
}

TEST_CASE("empirical quantile") {
    const Sample s({5.0, 4.0, 3.0, 2.0, 1.0});
    CHECK(empirical_quantile(s, ProbabilityLevel(0.4)) == 2.0);
    CHECK(empirical_quantile(s, ProbabilityLevel(0.5)) == 3.0);
    CHECK(empirical_quantile(Sample({7.0}), ProbabilityLevel(0.99)) == 7.0);
    CHECK(empirical_quantile(s, ProbabilityLevel(1e-15)) == 1.0);
}

TEST_CASE("empirical TVaR") {
    CHECK(empirical_tvar(Sample({1, 2, 3, 4}), ProbabilityLevel(0.5)) == doctest::Approx(3.5));
    CHECK(empirical_tvar(Sample({1, 2, 3, 4, 5}), ProbabilityLevel(0.5)) ==
          doctest::Approx(4.2).epsilon(1e-14));
    for (double p : {0.01, 0.37, 0.5, 0.9, 0.999}) {
        CHECK(empirical_tvar(Sample(std::vector<double>(13, 2.5)), ProbabilityLevel(p)) ==
              doctest::Approx(2.5).epsilon(1e-14));
    }
}

TEST_CASE("empirical TCE and gap") {
    const Sample five({1, 2, 3, 4, 5});
    const Sample four({1, 2, 3, 4});
    CHECK(empirical_tce(five, ProbabilityLevel(0.5)) == doctest::Approx(4.0));
    CHECK(empirical_tce(four, ProbabilityLevel(0.5)) == doctest::Approx(3.5));
    CHECK(empirical_tce(four, ProbabilityLevel(0.5)) ==
          doctest::Approx(empirical_tvar(four, ProbabilityLevel(0.5))));
    CHECK(empirical_tce(Sample({5.0}), ProbabilityLevel(0.1)) == 5.0);

    CHECK(tce_tvar_identity_gap(five, ProbabilityLevel(0.5)) == doctest::Approx(0.2));
    CHECK(tce_tvar_identity_gap(four, ProbabilityLevel(0.5)) == 0.0);
    CHECK(tce_tvar_identity_gap(Sample(std::vector<double>(9, -1.0)), ProbabilityLevel(0.42)) ==
          doctest::Approx(0.0));
}

TEST_CASE("empty tail is rejected for sorted spans") {
    const std::vector<double> none;
    CHECK_THROWS_AS(empirical_tvar_sorted(none, ProbabilityLevel(0.5)), std::invalid_argument);
    CHECK_THROWS_AS(empirical_tce_sorted(none, ProbabilityLevel(0.5)), std::invalid_argument);
}

TEST_CASE("TVaR equals the integral of the empirical quantile function") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> level(0.001, 0.999);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 1 + gen() % 50;
        const auto v = random_values(gen, n);
        const double p = level(gen);
        const double est = empirical_tvar(Sample(v), ProbabilityLevel(p));
        const double oracle = integrate_step_quantile(v, p);
        CHECK(est == doctest::Approx(oracle).epsilon(1e-10).scale(1.0));
    }
    // Independent crude quadrature on one case.
    const std::vector<double> v{0.3, -1.2, 4.4, 2.0, 2.0, 9.1, -0.5};
    CHECK(empirical_tvar(Sample(v), ProbabilityLevel(0.61)) ==
          doctest::Approx(riemann_tvar(v, 0.61, 2'000'000)).epsilon(1e-5));
}

TEST_CASE("ordering and equivariance properties") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> level(0.01, 0.99);
    std::uniform_real_distribution<double> shift(-10.0, 10.0);
    std::uniform_real_distribution<double> factor(0.1, 10.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 1 + gen() % 60;
        auto v = random_values(gen, n);
        const ProbabilityLevel p(level(gen));
        const Sample s(v);
        const double tvar = empirical_tvar(s, p);
        const double tce = empirical_tce(s, p);
        const double gap = tce_tvar_identity_gap(s, p);
        const double scale = 1.0 + std::fabs(tvar);

        if (!floor_product(n, p).is_integer()) {
            CHECK(tvar >= empirical_quantile(s, p) - 1e-12 * scale);
        }
        CHECK(gap >= -1e-12 * scale);
        CHECK(tce <= tvar + 1e-12 * scale);
        CHECK(tce == doctest::Approx(tvar - gap).epsilon(1e-12).scale(scale));

        const double c = shift(gen);
        const double lambda = factor(gen);
        std::vector<double> shifted = v;
        std::vector<double> scaled = v;
        for (auto& x : shifted) x += c;
        for (auto& x : scaled) x *= lambda;
        CHECK(empirical_tvar(Sample(shifted), p) ==
              doctest::Approx(tvar + c).epsilon(1e-12).scale(scale + std::fabs(c)));
        CHECK(empirical_tvar(Sample(scaled), p) ==
              doctest::Approx(lambda * tvar).epsilon(1e-12).scale(lambda * scale));
    }
}

TEST_CASE("residual decomposition") {
    const ParetoModel model(3.0);

    SUBCASE("vanishes when np is an integer and N_p equals np") {
        // p = 0.5, n = 4 and xi between the second and third observations.
        const Sample s({1.1, 1.2, 5.0, 6.0});
        const ProbabilityLevel p(0.5);
        const double xi = 2.0;
        const double tp = 3.0;
        const auto d = residual_decomposition(s, p, xi, tp, p * xi + (1 - p) * tp);
        CHECK(d.count_below == 2);
        CHECK(d.residual == 0.0);
        CHECK(d.threshold == xi);
    }

    SUBCASE("identity on a seeded Pareto sample") {
        const ProbabilityLevel p(0.5);
        const Sample s = model.sample(57, 2024);
        const double tp = model.true_tvar(p);
        const auto d = residual_decomposition(s, p, model.quantile(p), tp, model.winsorized_mean(p));
        CHECK(d.tvar_error == doctest::Approx(empirical_tvar(s, p) - tp));
        CHECK(std::fabs(d.tvar_error - (d.winsorized_mean_term - d.residual)) < 1e-12 * tp);
    }

    SUBCASE("residual is nonnegative on randomized inputs") {
        std::mt19937_64 gen(99);
        std::uniform_real_distribution<double> level(0.02, 0.98);
        for (int trial = 0; trial < 10000; ++trial) {
            const ParetoModel m(1.5 + static_cast<double>(gen() % 100) / 10.0);
            const std::size_t n = 1 + gen() % 120;
            const ProbabilityLevel p(level(gen));
            const Sample s = m.sample(n, gen());
            const double tp = m.true_tvar(p);
            const auto d = residual_decomposition(s, p, m.quantile(p), tp, m.winsorized_mean(p));
            CHECK(d.residual >= -1e-12 * tp);
            CHECK(std::fabs(d.tvar_error - (d.winsorized_mean_term - d.residual)) <= 1e-10 * tp);
        }
    }

    SUBCASE("rejects non-finite model quantities") {
        const Sample s({1.0, 2.0});
        CHECK_THROWS_AS(residual_decomposition(s, ProbabilityLevel(0.5),
                                               std::numeric_limits<double>::infinity(), 1.0, 1.0),
                        std::invalid_argument);
    }
}
