// Command-line front end: point estimates, bias reports, simulation sweeps
// and the dataset workflow. Exit codes: 0 success, 1 internal error,
// 2 input or usage error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvarbias/bias.hpp"
#include "tvarbias/estimators.hpp"
#include "tvarbias/experiments.hpp"
#include "tvarbias/loss_data.hpp"
#include "tvarbias/resampling.hpp"
#include "tvarbias/rng.hpp"
#include "tvarbias/summary.hpp"
#include "tvarbias/version.hpp"

namespace {

using namespace tvarbias;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

/// Usage problems detected after parsing (missing seed, bad combinations).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputOptions {
    std::string path;
    std::string column;
    bool no_header = false;
    std::string delimiter = ",";

    void add_to(CLI::App& cmd) {
        cmd.add_option("input", path, "Delimited text file with one loss per row")->required();
        cmd.add_option("--column", column, "Column name or 0-based index (default: first)");
        cmd.add_flag("--no-header", no_header, "Treat the first row as data");
        cmd.add_option("--delimiter", delimiter, "Field delimiter (default ',')");
    }

    Sample load() const {
        if (delimiter.size() != 1) throw UsageError("--delimiter must be a single character");
        LossColumnOptions opts;
        opts.column = column;
        opts.header = no_header ? HeaderMode::absent : HeaderMode::automatic;
        opts.delimiter = delimiter.front();
        return Sample(read_loss_file(path, opts));
    }
};

std::string number(double v) { return format_number(v); }

std::string default_out_dir() {
    if (const char* env = std::getenv("TVARBIAS_OUT_DIR"); env && *env) return env;
    return ".";
}

void require_seed(const std::optional<std::uint64_t>& seed, const char* what) {
    if (!seed) throw UsageError(std::string(what) + " is stochastic; --seed is required");
}

// Writes to `path`, or stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << text;
}

void write_sweep(const SweepResult& result, const std::filesystem::path& dir,
                 const std::string& stem) {
    std::filesystem::create_directories(dir);
    std::ostringstream csv;
    write_csv(result, csv);
    emit((dir / (stem + ".csv")).string(), csv.str());
    emit((dir / (stem + ".json")).string(), result.metadata.dump(2) + "\n");
    std::cerr << "wrote " << (dir / (stem + ".csv")).string() << " (" << result.rows.size()
              << " rows)\n";
}

// ---- estimate ------------------------------------------------------------

struct EstimateCommand {
    InputOptions input;
    double p = 0.0;
    std::string format = "csv";

    void add_to(CLI::App& app) {
        auto* cmd = app.add_subcommand("estimate", "Empirical TVaR, TCE and quantile");
        input.add_to(*cmd);
        cmd->add_option("--p", p, "Probability level in (0, 1)")->required();
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        cmd->callback([this] { result = run(); });
    }

    int run() const {
        const ProbabilityLevel level(p);
        const Sample sample = input.load();
        const double tvar = empirical_tvar(sample, level);
        const double tce = empirical_tce(sample, level);
        const double q = empirical_quantile(sample, level);
        const double gap = tce_tvar_identity_gap(sample, level);
        if (format == "json") {
            ordered_json j{{"n", sample.size()}, {"p", p},     {"tvar", tvar},
                           {"tce", tce},         {"quantile", q}, {"tce_gap", gap}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "n,p,tvar,tce,quantile,tce_gap\n"
                      << sample.size() << ',' << number(p) << ',' << number(tvar) << ','
                      << number(tce) << ',' << number(q) << ',' << number(gap) << '\n';
        }
        return kExitOk;
    }

    int result = kExitOk;
};

// ---- bias ----------------------------------------------------------------

struct BiasCommand {
    InputOptions input;
    double p = 0.0;
    double h = kDefaultLocality;
    double delta = kDefaultSlack;
    double gamma = 1.0;
    std::optional<double> c_gamma;
    std::string bandwidth = "auto";
    std::size_t grid_points = kDefaultGridPoints;
    std::size_t bootstrap = 0;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 0;
    std::string format = "json";
    std::string out;

    void add_to(CLI::App& app) {
        auto* cmd = app.add_subcommand("bias", "Leading-term bias, upper bound, optional bootstrap");
        input.add_to(*cmd);
        cmd->add_option("--p", p, "Probability level in (0, 1)")->required();
        cmd->add_option("--h", h, "Half-width of the Lipschitz neighbourhood");
        cmd->add_option("--delta", delta, "Slack parameter of the bound");
        cmd->add_option("--gamma", gamma, "Hoelder exponent in (0, 1]");
        cmd->add_option("--c-gamma", c_gamma, "Hoelder constant (required when gamma != 1)");
        cmd->add_option("--bandwidth", bandwidth, "KDE bandwidth or 'auto' (Silverman)");
        cmd->add_option("--grid", grid_points, "Grid points for the density infimum");
        cmd->add_option("--bootstrap", bootstrap, "Bootstrap resamples (0 disables)");
        cmd->add_option("--seed", seed, "Seed for the bootstrap");
        cmd->add_option("--workers", workers, "Threads (0 = all cores)");
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out, "Output file (default stdout)");
        cmd->callback([this] { result = run(); });
    }

    int run() const {
        const ProbabilityLevel level(p);
        BiasOptions opts;
        if (bandwidth != "auto") {
            double b = 0.0;
            try {
                std::size_t used = 0;
                b = std::stod(bandwidth, &used);
                if (used != bandwidth.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw UsageError("--bandwidth must be a positive number or 'auto'");
            }
            if (!(b > 0.0)) throw UsageError("--bandwidth must be positive");
            opts.kde = KdeConfig::fixed(b);
        }
        opts.gamma = gamma;
        opts.c_gamma = c_gamma;
        opts.delta = delta;
        opts.h = h;
        opts.grid_points = grid_points;
        if (bootstrap > 0) require_seed(seed, "--bootstrap");

        const Sample sample = input.load();
        const BiasReport r = estimate_bias(sample, level, opts);

        ordered_json j{{"n", r.n},
                       {"p", r.p},
                       {"tvar", r.tvar_estimate},
                       {"tce", empirical_tce(sample, level)},
                       {"quantile", r.quantile_estimate},
                       {"bandwidth", r.bandwidth},
                       {"density_at_quantile", r.density_at_quantile},
                       {"leading_term", r.leading_term},
                       {"lipschitz_constant", r.lipschitz_constant},
                       {"gamma", r.holder.gamma},
                       {"c_gamma", r.holder.c_gamma},
                       {"delta", r.holder.delta},
                       {"h", r.holder.h},
                       {"upper_bound", r.upper_bound}};
        if (bootstrap > 0) {
            const auto boot = bootstrap_bias(sample, level, {bootstrap, *seed, workers});
            const BoxStats s = summarize(boot.resample_values);
            j["bootstrap"] = ordered_json{{"generator", kGeneratorId},
                                          {"seed", *seed},
                                          {"resamples", bootstrap},
                                          {"bias_estimate", boot.estimate},
                                          {"resample_tvar_min", s.min},
                                          {"resample_tvar_q25", s.q25},
                                          {"resample_tvar_median", s.median},
                                          {"resample_tvar_q75", s.q75},
                                          {"resample_tvar_max", s.max}};
        }

        std::string text;
        if (format == "json") {
            text = j.dump(2) + "\n";
        } else {
            std::string header;
            std::string row;
            auto add = [&](const std::string& key, const ordered_json& v) {
                header += (header.empty() ? "" : ",") + key;
                row += (row.empty() ? "" : ",") +
                       (v.is_number_float() ? number(v.get<double>()) : v.dump());
            };
            for (const auto& [key, value] : j.items()) {
                if (key == "bootstrap") {
                    for (const auto& [bk, bv] : value.items()) {
                        add("bootstrap_" + bk, bv.is_string() ? ordered_json(bv.get<std::string>())
                                                              : bv);
                    }
                } else {
                    add(key, value);
                }
            }
            text = header + "\n" + row + "\n";
        }
        emit(out, text);
        return kExitOk;
    }

    int result = kExitOk;
};

// ---- simulate ------------------------------------------------------------

struct SimulateCommand {
    std::string figure;
    std::string spec_path;
    std::string out = default_out_dir();
    std::optional<std::uint64_t> seed;
    std::size_t workers = 0;

    void add_to(CLI::App& app) {
        auto* cmd = app.add_subcommand("simulate", "Pareto simulation sweeps (fig1..fig5)");
        auto* fig = cmd->add_option("--figure", figure, "Built-in sweep: fig1..fig5");
        auto* spec = cmd->add_option("--spec", spec_path, "Sweep spec JSON file");
        fig->excludes(spec);
        cmd->add_option("--out", out, "Output directory (default $TVARBIAS_OUT_DIR or .)");
        cmd->add_option("--seed", seed, "Root seed");
        cmd->add_option("--workers", workers, "Threads (0 = all cores)");
        cmd->callback([this] { result = run(); });
    }

    int run() const {
        SweepSpec spec;
        if (!spec_path.empty()) {
            std::ifstream in(spec_path);
            if (!in) throw DataError(spec_path + ": cannot open file");
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw DataError(spec_path + ": " + e.what());
            }
            if (seed) j["seed"] = *seed;
            spec = spec_from_json(j, seed);
        } else if (!figure.empty()) {
            require_seed(seed, "simulate");
            const FigureId id = parse_figure_id(figure);
            if (id == FigureId::fig6 || id == FigureId::fig7) {
                throw UsageError(figure + " needs a dataset; use the analyze command");
            }
            spec = default_spec(id, *seed);
        } else {
            throw UsageError("simulate needs --figure or --spec");
        }
        const SweepResult result = run_sweep(spec, workers);
        write_sweep(result, out, std::string(to_string(spec.figure)));
        return kExitOk;
    }

    int result = kExitOk;
};

// ---- analyze -------------------------------------------------------------

struct AnalyzeCommand {
    InputOptions input;
    std::vector<double> p_grid{0.9, 0.925, 0.95, 0.975, 0.99};
    std::vector<std::size_t> curve_n{100, 250, 500, 1000, 2000, 3000, 4000, 5000};
    double h = kDefaultLocality;
    double delta = kDefaultSlack;
    std::string bandwidth = "auto";
    std::size_t bootstrap = 1000;
    std::size_t repetitions = 100;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 0;
    std::string out = default_out_dir();
    std::string stem = "analysis";

    void add_to(CLI::App& app) {
        auto* cmd = app.add_subcommand("analyze", "Bootstrap comparison and bias-vs-n curves for a dataset");
        input.add_to(*cmd);
        cmd->add_option("--p", p_grid, "Probability levels")->delimiter(',');
        cmd->add_option("--curve-n", curve_n, "Sample sizes for the bias curves")->delimiter(',');
        cmd->add_option("--h", h, "Half-width of the Lipschitz neighbourhood");
        cmd->add_option("--delta", delta, "Slack parameter of the bound");
        cmd->add_option("--bandwidth", bandwidth, "KDE bandwidth or 'auto' (Silverman)");
        cmd->add_option("--bootstrap", bootstrap, "Resamples per bootstrap estimate");
        cmd->add_option("--repetitions", repetitions, "Repeated bootstrap estimates per level");
        cmd->add_option("--seed", seed, "Root seed");
        cmd->add_option("--workers", workers, "Threads (0 = all cores)");
        cmd->add_option("--out", out, "Output directory (default $TVARBIAS_OUT_DIR or .)");
        cmd->add_option("--name", stem, "Output file stem");
        cmd->callback([this] { result = run(); });
    }

    int run() const {
        require_seed(seed, "analyze");
        for (double p : p_grid) ProbabilityLevel{p};
        if (bootstrap < 1 || repetitions < 1) {
            throw UsageError("--bootstrap and --repetitions must be positive");
        }
        DatasetAnalysisConfig cfg;
        cfg.p_grid = p_grid;
        cfg.curve_n_grid = curve_n;
        cfg.bias.h = h;
        cfg.bias.delta = delta;
        if (bandwidth != "auto") cfg.bias.kde = KdeConfig::fixed(std::stod(bandwidth));
        cfg.bootstrap = {bootstrap, *seed, workers};
        cfg.outer_repetitions = repetitions;
        const Sample sample = input.load();
        const SweepResult result = analyze_dataset(sample, cfg, workers);
        write_sweep(result, out, stem);
        return kExitOk;
    }

    int result = kExitOk;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Empirical TVaR estimation and finite-sample bias analysis", "tvarbias"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    // "--h" is a tuning flag, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");

    EstimateCommand estimate;
    BiasCommand bias;
    SimulateCommand simulate;
    AnalyzeCommand analyze;
    estimate.add_to(app);
    bias.add_to(app);
    simulate.add_to(app);
    analyze.add_to(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DensityFloorError& e) {
        std::cerr << "density floor: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }

    for (const auto* cmd : {&estimate.result, &bias.result, &simulate.result, &analyze.result}) {
        if (*cmd != kExitOk) return *cmd;
    }
    return kExitOk;
}
