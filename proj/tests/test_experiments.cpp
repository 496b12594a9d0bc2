#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "tvarbias/experiments.hpp"
#include "tvarbias/pareto.hpp"

using namespace tvarbias;

namespace {

std::string csv_of(const SweepResult& r) {
    std::ostringstream out;
    write_csv(r, out);
    return out.str();
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("figure ids") {
    CHECK(parse_figure_id("fig3") == FigureId::fig3);
    CHECK(to_string(FigureId::fig5) == "fig5");
    CHECK_THROWS_AS(parse_figure_id("fig8"), std::invalid_argument);
    CHECK_THROWS_AS(default_spec(FigureId::fig6, 1), std::invalid_argument);
}

TEST_CASE("default grids") {
    const auto f1 = default_spec(FigureId::fig1, 1);
    CHECK(f1.alpha_grid == std::vector<double>{5.0});
    CHECK(f1.p_grid == std::vector<double>{0.95});
    CHECK(f1.n_grid == std::vector<std::size_t>{100, 300, 500, 700, 900});
    CHECK(f1.replications == 100);
    CHECK(default_spec(FigureId::fig2, 1).p_grid == std::vector<double>{0.80, 0.85, 0.90, 0.95, 0.975});
    CHECK(default_spec(FigureId::fig3, 1).alpha_grid == std::vector<double>{3, 5, 10, 20, 30});
    CHECK(default_spec(FigureId::fig4, 1).delta_grid == std::vector<double>{0.01, 0.05, 0.1});
    CHECK(default_spec(FigureId::fig5, 1).delta_grid == std::vector<double>{0.05});
    CHECK(default_spec(FigureId::fig5, 1).h == 0.05);
}

TEST_CASE("spec validation and JSON round trip") {
    auto s = default_spec(FigureId::fig2, 9);
    s.p_grid = {1.2};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = default_spec(FigureId::fig3, 9);
    s.alpha_grid = {0.9};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = default_spec(FigureId::fig1, 9);
    s.n_grid.clear();
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = default_spec(FigureId::fig1, 9);
    s.mc_replications = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);

    const auto spec = default_spec(FigureId::fig4, 77);
    const auto back = spec_from_json(to_json(spec), std::nullopt);
    CHECK(to_json(back) == to_json(spec));

    nlohmann::json partial{{"figure", "fig1"}, {"n", {50}}, {"replications", 3}};
    CHECK_THROWS_AS(spec_from_json(partial, std::nullopt), std::invalid_argument);
    const auto filled = spec_from_json(partial, 5);
    CHECK(filled.n_grid == std::vector<std::size_t>{50});
    CHECK(filled.alpha_grid == std::vector<double>{5.0});
    CHECK(filled.seed == 5);
    CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"figure", "fig1"}, {"n", "x"}}, 1),
                    std::invalid_argument);
}

TEST_CASE("fig1 sweep shape and invariants") {
    auto spec = default_spec(FigureId::fig1, 42);
    spec.mc_replications = 200;
    const auto r = run_sweep(spec, 4);
    REQUIRE(r.rows.size() == 5);
    double previous = std::numeric_limits<double>::infinity();
    for (const auto& row : r.rows) {
        CHECK(row.error.empty());
        REQUIRE(row.leading_stats);
        CHECK(row.leading_stats->count == 100);
        CHECK(*row.exact_bias < 0.0);
        CHECK(*row.leading_theory < 0.0);
        const double rel = std::fabs(*row.exact_bias - *row.leading_theory) / std::fabs(*row.exact_bias);
        CHECK(rel <= previous);
        previous = rel;
        CHECK(row.leading_stats->min <= row.leading_stats->q25);
        CHECK(row.leading_stats->q25 <= row.leading_stats->median);
        CHECK(row.leading_stats->median <= row.leading_stats->q75);
        CHECK(row.leading_stats->q75 <= row.leading_stats->max);
    }
    CHECK(r.metadata["generator"] == "mt19937_64/splitmix64-stream-v1");
    CHECK(r.metadata["spec"]["seed"] == 42);
}

TEST_CASE("fig2 and fig3 keep exact and leading terms aligned") {
    for (FigureId id : {FigureId::fig2, FigureId::fig3}) {
        auto spec = default_spec(id, 3);
        spec.replications = 5;
        spec.mc_replications = 0;
        const auto r = run_sweep(spec, 2);
        REQUIRE(r.rows.size() == 5);
        for (const auto& row : r.rows) {
            CHECK(*row.exact_bias < 0.0);
            CHECK(*row.leading_theory < 0.0);
            CHECK_FALSE(row.mc_bias.has_value());
        }
    }
}

TEST_CASE("bound sweeps cover the exact bias") {
    const auto f4 = run_sweep(default_spec(FigureId::fig4, 8), 2);
    REQUIRE(f4.rows.size() == 15);
    CHECK(*f4.rows[0].delta == 0.01);
    CHECK(*f4.rows[5].delta == 0.05);
    CHECK(*f4.rows[14].delta == 0.1);
    for (const auto& row : f4.rows) {
        CHECK(*row.bound_theory > -*row.exact_bias);
        CHECK_FALSE(row.bound_stats.has_value());
    }

    auto spec5 = default_spec(FigureId::fig5, 8);
    spec5.replications = 20;
    spec5.mc_replications = 0;
    const auto f5 = run_sweep(spec5, 2);
    REQUIRE(f5.rows.size() == 5);
    for (const auto& row : f5.rows) {
        CHECK(*row.bound_theory > -*row.exact_bias);
        REQUIRE(row.bound_stats);
        CHECK(row.bound_stats->min > 0.0);
    }
}

TEST_CASE("degenerate single-point sweep is deterministic") {
    SweepSpec s = default_spec(FigureId::fig1, 1234);
    s.n_grid = {200};
    s.replications = 1;
    s.mc_replications = 2;
    const auto a = run_sweep(s, 1);
    const auto b = run_sweep(s, 3);
    REQUIRE(a.rows.size() == 1);
    CHECK(a.rows[0].leading_stats->count == 1);
    CHECK(csv_of(a) == csv_of(b));
}

TEST_CASE("replication failures are counted, not fatal") {
    SweepSpec s = default_spec(FigureId::fig1, 5);
    s.n_grid = {1};
    s.replications = 4;
    s.mc_replications = 0;
    const auto r = run_sweep(s, 1);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].error.empty());
    CHECK(*r.rows[0].failures == 4);
    CHECK_FALSE(r.rows[0].leading_stats.has_value());
    const std::string csv = csv_of(r);
    CHECK(csv.find("leading_median") == std::string::npos);
}

TEST_CASE("sweep output is independent of worker count") {
    auto spec = default_spec(FigureId::fig5, 2);
    spec.replications = 10;
    spec.mc_replications = 50;
    CHECK(csv_of(run_sweep(spec, 1)) == csv_of(run_sweep(spec, 6)));
}

TEST_CASE("dataset analysis") {
    const Sample s = ParetoModel(1.8).sample(1500, 606);
    DatasetAnalysisConfig cfg;
    cfg.bootstrap = {50, 17, 1};
    cfg.outer_repetitions = 12;
    const auto r = analyze_dataset(s, cfg, 3);
    REQUIRE(r.rows.size() == 5 + 5 * 8);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& row = r.rows[i];
        CHECK(row.row == i);
        CHECK(row.error.empty());
        CHECK(*row.leading_estimate < 0.0);
        CHECK(*row.bound_estimate > 0.0);
        if (i < 5) {
            CHECK(row.figure == "fig6");
            REQUIRE(row.bootstrap_stats);
            CHECK(row.bootstrap_stats->count == 12);
            CHECK(*row.n == 1500);
        } else {
            CHECK(row.figure == "fig7");
        }
    }
    // Curves scale as 1/n for the leading term.
    CHECK(*r.rows[5].leading_estimate == doctest::Approx(2.5 * *r.rows[6].leading_estimate));
    CHECK(csv_of(r) == csv_of(analyze_dataset(s, cfg, 1)));
}

TEST_CASE("dataset analysis on constant data records per-level errors") {
    const Sample s(std::vector<double>(100, 7.0));
    DatasetAnalysisConfig cfg;
    cfg.bootstrap = {10, 1, 1};
    cfg.outer_repetitions = 2;
    const auto r = analyze_dataset(s, cfg, 1);
    REQUIRE(r.rows.size() == 5);
    for (const auto& row : r.rows) {
        CHECK_FALSE(row.error.empty());
        CHECK(*row.tvar_estimate == doctest::Approx(7.0));
    }
    const std::string csv = csv_of(r);
    CHECK(count_lines(csv) == 6);
    CHECK(csv.find("density") != std::string::npos);
}

TEST_CASE("csv quoting of error messages") {
    SweepResult r;
    SweepRow row;
    row.figure = "fig1";
    row.p = 0.5;
    row.error = "bad \"value\", see log";
    r.rows.push_back(row);
    CHECK(csv_of(r) == "figure,row,p,error\nfig1,0,0.5,\"bad \"\"value\"\", see log\"\n");
}
