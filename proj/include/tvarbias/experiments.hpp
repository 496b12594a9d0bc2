#ifndef TVARBIAS_EXPERIMENTS_HPP
#define TVARBIAS_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tvarbias/bias.hpp"
#include "tvarbias/resampling.hpp"
#include "tvarbias/sample.hpp"
#include "tvarbias/summary.hpp"

namespace tvarbias {

/// fig1..fig3: exact bias vs. leading term over n, p and alpha.
/// fig4..fig5: exact bias vs. the upper bound over n (and slack delta).
/// fig6..fig7: data workflow, produced by analyze_dataset.
enum class FigureId { fig1, fig2, fig3, fig4, fig5, fig6, fig7 };

std::string_view to_string(FigureId id);
/// Throws std::invalid_argument for an unknown tag.
FigureId parse_figure_id(std::string_view tag);

struct SweepSpec {
    FigureId figure = FigureId::fig1;
    std::vector<double> alpha_grid;
    std::vector<double> p_grid;
    std::vector<std::size_t> n_grid;
    std::vector<double> delta_grid;
    double h = kDefaultLocality;
    /// Simulated datasets per grid point for the estimated quantities.
    std::size_t replications = 100;
    /// Monte-Carlo replications for the simulated-bias cross-check; 0 disables it.
    std::size_t mc_replications = 1000;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument describing the first invalid field.
    void validate() const;
};

/// Grid of the corresponding published experiment (fig1..fig5).
SweepSpec default_spec(FigureId figure, std::uint64_t seed);

nlohmann::json to_json(const SweepSpec& spec);
/// Missing keys take the figure's defaults. `seed` may be absent only when
/// `fallback_seed` is given.
SweepSpec spec_from_json(const nlohmann::json& j, std::optional<std::uint64_t> fallback_seed);

struct SweepRow {
    std::string figure;
    std::size_t row = 0;

    std::optional<double> alpha;
    std::optional<double> p;
    std::optional<std::size_t> n;
    std::optional<double> delta;
    std::optional<double> h;

    // Model truth.
    std::optional<double> exact_bias;
    std::optional<double> leading_theory;
    std::optional<double> lipschitz_theory;
    std::optional<double> bound_theory;
    std::optional<double> mc_bias;
    std::optional<double> mc_se;

    // Data-driven point values (analyze_dataset).
    std::optional<double> tvar_estimate;
    std::optional<double> quantile_estimate;
    std::optional<double> density_estimate;
    std::optional<double> lipschitz_estimate;
    std::optional<double> leading_estimate;
    std::optional<double> bound_estimate;

    // Distributions over replications.
    std::optional<BoxStats> leading_stats;
    std::optional<BoxStats> bound_stats;
    std::optional<BoxStats> bootstrap_stats;
    std::optional<std::size_t> bootstrap_positive;
    std::optional<std::size_t> failures;

    /// Non-empty when the grid point could not be evaluated.
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    nlohmann::json metadata;
};

/// Evaluates every grid point of a fig1..fig5 spec. A failing grid point
/// yields a row with `error` set; the sweep continues. Output is independent
/// of `workers` (0 selects the hardware concurrency).
SweepResult run_sweep(const SweepSpec& spec, std::size_t workers = 1);

struct DatasetAnalysisConfig {
    std::vector<double> p_grid{0.9, 0.925, 0.95, 0.975, 0.99};
    BiasOptions bias;
    BootstrapConfig bootstrap;
    /// Repeated bootstrap bias estimates per probability level.
    std::size_t outer_repetitions = 100;
    /// Sample sizes for the bias-versus-n curves.
    std::vector<std::size_t> curve_n_grid{100, 250, 500, 1000, 2000, 3000, 4000, 5000};
};

/// Per p: empirical TVaR, estimated leading term, empirical bound and the
/// distribution of repeated bootstrap bias estimates (rows tagged fig6); plus
/// leading-term and bound curves over curve_n_grid with the density and
/// Lipschitz estimates held at their full-sample values (rows tagged fig7).
SweepResult analyze_dataset(const Sample& sample, const DatasetAnalysisConfig& config,
                            std::size_t workers = 1);

/// Shortest decimal form that round-trips to the same double.
std::string format_number(double v);

/// One header row, then one line per row. Column groups appear only when at
/// least one row carries them. Numbers use the shortest round-trip form.
void write_csv(const SweepResult& result, std::ostream& out);

}  // namespace tvarbias

#endif  // TVARBIAS_EXPERIMENTS_HPP
