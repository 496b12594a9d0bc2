#include "tvarbias/experiments.hpp"

#include <array>
#include <charconv>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tvarbias/estimators.hpp"
#include "tvarbias/parallel.hpp"
#include "tvarbias/pareto.hpp"
#include "tvarbias/rng.hpp"
#include "tvarbias/version.hpp"

namespace tvarbias {
namespace {

constexpr std::array<std::string_view, 7> kFigureTags{"fig1", "fig2", "fig3", "fig4",
                                                      "fig5", "fig6", "fig7"};

const std::vector<std::size_t> kSizeGrid{100, 300, 500, 700, 900};

bool is_bound_figure(FigureId id) { return id == FigureId::fig4 || id == FigureId::fig5; }

// Stream layout under a row seed.
constexpr std::uint64_t kSampleStream = 0;
constexpr std::uint64_t kMonteCarloStream = 1;

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct ReplicationOutcome {
    std::vector<double> values;
    std::size_t failures = 0;
};

// Runs `fn` on `count` seeded Pareto samples; DensityFloorError counts as a
// failed replication, any other exception aborts the grid point.
template <typename Fn>
ReplicationOutcome replicate(const ParetoModel& model, std::size_t n, std::size_t count,
                             std::uint64_t seed, std::size_t workers, Fn&& fn) {
    std::vector<double> slots(count);
    std::vector<char> ok(count, 0);
    detail::parallel_for(count, workers, [&](std::size_t r) {
        const Sample s = model.sample(n, derive_seed(seed, r));
        try {
            slots[r] = fn(s);
            ok[r] = 1;
        } catch (const DensityFloorError&) {
        }
    });
    ReplicationOutcome out;
    for (std::size_t r = 0; r < count; ++r) {
        if (ok[r]) {
            out.values.push_back(slots[r]);
        } else {
            ++out.failures;
        }
    }
    return out;
}

void evaluate_point(const SweepSpec& spec, SweepRow& row, std::uint64_t row_seed,
                    std::size_t workers) {
    const ParetoModel model(*row.alpha);
    const ProbabilityLevel p(*row.p);
    const std::size_t n = *row.n;

    row.exact_bias = model.exact_bias(p, n);
    if (spec.mc_replications >= 2) {
        const auto mc = monte_carlo_bias(model, n, p, spec.mc_replications,
                                         derive_seed(row_seed, kMonteCarloStream),
                                         TailEstimator::tvar, workers);
        row.mc_bias = mc.mean_bias;
        row.mc_se = mc.standard_error;
    }

    const std::uint64_t sample_seed = derive_seed(row_seed, kSampleStream);
    if (!is_bound_figure(spec.figure)) {
        row.leading_theory = leading_term_bias(n, p, model.density_at_quantile(p));
        if (spec.replications > 0) {
            auto rep = replicate(model, n, spec.replications, sample_seed, workers,
                                 [&](const Sample& s) {
                                     return estimate_leading_term(s, p, KdeConfig::silverman())
                                         .leading_term;
                                 });
            row.failures = rep.failures;
            if (!rep.values.empty()) row.leading_stats = summarize(rep.values);
        }
        return;
    }

    row.h = spec.h;
    row.lipschitz_theory = model.lipschitz_constant(p, spec.h);
    const HolderParams theory{1.0, *row.lipschitz_theory, *row.delta, spec.h};
    row.bound_theory = bias_upper_bound(n, p, theory);
    if (spec.figure == FigureId::fig5 && spec.replications > 0) {
        auto rep = replicate(model, n, spec.replications, sample_seed, workers,
                             [&](const Sample& s) {
                                 const double c1 = lipschitz_constant_empirical(
                                     s, p, spec.h, KdeConfig::silverman());
                                 return bias_upper_bound(n, p, {1.0, c1, *row.delta, spec.h});
                             });
        row.failures = rep.failures;
        if (!rep.values.empty()) row.bound_stats = summarize(rep.values);
    }
}

template <typename T>
void require_nonempty(const std::vector<T>& grid, const char* name) {
    if (grid.empty()) throw std::invalid_argument(std::string(name) + " must not be empty");
}

}  // namespace

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string_view to_string(FigureId id) { return kFigureTags[static_cast<std::size_t>(id)]; }

FigureId parse_figure_id(std::string_view tag) {
    for (std::size_t i = 0; i < kFigureTags.size(); ++i) {
        if (kFigureTags[i] == tag) return static_cast<FigureId>(i);
    }
    throw std::invalid_argument("unknown figure id '" + std::string(tag) + "' (expected fig1..fig7)");
}

void SweepSpec::validate() const {
    if (figure == FigureId::fig6 || figure == FigureId::fig7) {
        throw std::invalid_argument(std::string(to_string(figure)) +
                                    " is produced from a dataset, not a simulation sweep");
    }
    require_nonempty(alpha_grid, "alpha grid");
    require_nonempty(p_grid, "p grid");
    require_nonempty(n_grid, "n grid");
    for (double a : alpha_grid) {
        if (!(a > 1.0)) throw std::invalid_argument("alpha values must exceed 1");
    }
    for (double p : p_grid) ProbabilityLevel{p};
    for (std::size_t n : n_grid) {
        if (n < 1) throw std::invalid_argument("sample sizes must be positive");
    }
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    if (is_bound_figure(figure)) {
        require_nonempty(delta_grid, "delta grid");
        for (double d : delta_grid) {
            if (!(d > 0.0)) throw std::invalid_argument("delta values must be positive");
        }
    }
    if (mc_replications == 1) {
        throw std::invalid_argument("mc_replications must be 0 (disabled) or at least 2");
    }
}

SweepSpec default_spec(FigureId figure, std::uint64_t seed) {
    SweepSpec s;
    s.figure = figure;
    s.seed = seed;
    s.delta_grid = {kDefaultSlack};
    switch (figure) {
        case FigureId::fig1:
            s.alpha_grid = {5.0};
            s.p_grid = {0.95};
            s.n_grid = kSizeGrid;
            break;
        case FigureId::fig2:
            s.alpha_grid = {5.0};
            s.p_grid = {0.80, 0.85, 0.90, 0.95, 0.975};
            s.n_grid = {500};
            break;
        case FigureId::fig3:
            s.alpha_grid = {3.0, 5.0, 10.0, 20.0, 30.0};
            s.p_grid = {0.95};
            s.n_grid = {500};
            break;
        case FigureId::fig4:
            s.alpha_grid = {3.0};
            s.p_grid = {0.95};
            s.n_grid = kSizeGrid;
            s.delta_grid = {0.01, 0.05, 0.1};
            s.replications = 0;
            break;
        case FigureId::fig5:
            s.alpha_grid = {3.0};
            s.p_grid = {0.95};
            s.n_grid = kSizeGrid;
            break;
        case FigureId::fig6:
        case FigureId::fig7:
            throw std::invalid_argument(std::string(to_string(figure)) +
                                        " has no simulation defaults; use analyze_dataset");
    }
    return s;
}

nlohmann::json to_json(const SweepSpec& spec) {
    return {{"figure", to_string(spec.figure)},
            {"alpha", spec.alpha_grid},
            {"p", spec.p_grid},
            {"n", spec.n_grid},
            {"delta", spec.delta_grid},
            {"h", spec.h},
            {"replications", spec.replications},
            {"mc_replications", spec.mc_replications},
            {"seed", spec.seed}};
}

SweepSpec spec_from_json(const nlohmann::json& j, std::optional<std::uint64_t> fallback_seed) {
    if (!j.is_object()) throw std::invalid_argument("sweep spec must be a JSON object");
    if (!j.contains("figure")) throw std::invalid_argument("sweep spec needs a 'figure' field");
    std::optional<std::uint64_t> seed = fallback_seed;
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (!seed) throw std::invalid_argument("sweep spec needs a seed (field 'seed' or --seed)");

    SweepSpec s = default_spec(parse_figure_id(j.at("figure").get<std::string>()), *seed);
    try {
        if (j.contains("alpha")) s.alpha_grid = j.at("alpha").get<std::vector<double>>();
        if (j.contains("p")) s.p_grid = j.at("p").get<std::vector<double>>();
        if (j.contains("n")) s.n_grid = j.at("n").get<std::vector<std::size_t>>();
        if (j.contains("delta")) s.delta_grid = j.at("delta").get<std::vector<double>>();
        if (j.contains("h")) s.h = j.at("h").get<double>();
        if (j.contains("replications")) s.replications = j.at("replications").get<std::size_t>();
        if (j.contains("mc_replications")) {
            s.mc_replications = j.at("mc_replications").get<std::size_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed sweep spec: ") + e.what());
    }
    s.validate();
    return s;
}

SweepResult run_sweep(const SweepSpec& spec, std::size_t workers) {
    spec.validate();
    workers = detail::resolve_workers(workers);

    std::vector<double> deltas = is_bound_figure(spec.figure) ? spec.delta_grid
                                                              : std::vector<double>{};
    if (deltas.empty()) deltas.push_back(0.0);

    SweepResult result;
    for (double delta : deltas) {
        for (double alpha : spec.alpha_grid) {
            for (double p : spec.p_grid) {
                for (std::size_t n : spec.n_grid) {
                    SweepRow row;
                    row.figure = std::string(to_string(spec.figure));
                    row.row = result.rows.size();
                    row.alpha = alpha;
                    row.p = p;
                    row.n = n;
                    if (is_bound_figure(spec.figure)) row.delta = delta;
                    try {
                        evaluate_point(spec, row, derive_seed(spec.seed, row.row), workers);
                    } catch (const std::exception& e) {
                        row.error = e.what();
                    }
                    result.rows.push_back(std::move(row));
                }
            }
        }
    }

    result.metadata = {{"software", "tvarbias"},
                       {"version", kVersion},
                       {"generator", kGeneratorId},
                       {"seed", spec.seed},
                       {"spec", to_json(spec)},
                       {"rows", result.rows.size()}};
    return result;
}

SweepResult analyze_dataset(const Sample& sample, const DatasetAnalysisConfig& config,
                            std::size_t workers) {
    if (config.p_grid.empty()) throw std::invalid_argument("p grid must not be empty");
    if (config.outer_repetitions < 1) {
        throw std::invalid_argument("outer repetitions must be at least 1");
    }
    for (std::size_t n : config.curve_n_grid) {
        if (n < 1) throw std::invalid_argument("curve sample sizes must be positive");
    }
    workers = detail::resolve_workers(workers);

    SweepResult result;
    std::vector<SweepRow> curves;
    for (std::size_t pi = 0; pi < config.p_grid.size(); ++pi) {
        SweepRow row;
        row.figure = "fig6";
        row.row = result.rows.size();
        row.p = config.p_grid[pi];
        row.n = sample.size();
        row.delta = config.bias.delta;
        row.h = config.bias.h;
        try {
            const ProbabilityLevel p(config.p_grid[pi]);
            row.tvar_estimate = empirical_tvar(sample, p);
            const BiasReport report = estimate_bias(sample, p, config.bias);
            row.quantile_estimate = report.quantile_estimate;
            row.density_estimate = report.density_at_quantile;
            row.lipschitz_estimate = report.lipschitz_constant;
            row.leading_estimate = report.leading_term;
            row.bound_estimate = report.upper_bound;

            BootstrapConfig boot = config.bootstrap;
            boot.seed = derive_seed(config.bootstrap.seed, pi);
            boot.workers = workers;
            const auto estimates =
                repeated_bootstrap_bias(sample, p, boot, config.outer_repetitions);
            row.bootstrap_stats = summarize(estimates);
            std::size_t positive = 0;
            for (double e : estimates) positive += e > 0.0 ? 1 : 0;
            row.bootstrap_positive = positive;

            for (std::size_t n : config.curve_n_grid) {
                SweepRow c;
                c.figure = "fig7";
                c.p = row.p;
                c.n = n;
                c.delta = row.delta;
                c.h = row.h;
                c.density_estimate = report.density_at_quantile;
                c.lipschitz_estimate = report.lipschitz_constant;
                c.leading_estimate = leading_term_bias(n, p, report.density_at_quantile);
                c.bound_estimate = bias_upper_bound(n, p, report.holder);
                curves.push_back(std::move(c));
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        result.rows.push_back(std::move(row));
    }
    for (auto& c : curves) {
        c.row = result.rows.size();
        result.rows.push_back(std::move(c));
    }

    const auto& b = config.bias;
    nlohmann::json kde = b.kde.bandwidth ? nlohmann::json(*b.kde.bandwidth)
                                         : nlohmann::json("silverman");
    result.metadata = {
        {"software", "tvarbias"},
        {"version", kVersion},
        {"generator", kGeneratorId},
        {"seed", config.bootstrap.seed},
        {"analysis",
         {{"n", sample.size()},
          {"p", config.p_grid},
          {"bandwidth", kde},
          {"gamma", b.gamma},
          {"c_gamma", b.c_gamma ? nlohmann::json(*b.c_gamma) : nlohmann::json("empirical")},
          {"delta", b.delta},
          {"h", b.h},
          {"grid_points", b.grid_points},
          {"bootstrap_resamples", config.bootstrap.num_resamples},
          {"outer_repetitions", config.outer_repetitions},
          {"curve_n", config.curve_n_grid}}},
        {"rows", result.rows.size()}};
    return result;
}

void write_csv(const SweepResult& result, std::ostream& out) {
    using Getter = std::function<std::optional<std::string>(const SweepRow&)>;
    struct Column {
        std::string name;
        Getter get;
    };
    auto num = [](std::optional<double> SweepRow::*field) -> Getter {
        return [field](const SweepRow& r) -> std::optional<std::string> {
            if (!(r.*field)) return std::nullopt;
            return format_number(*(r.*field));
        };
    };
    auto count = [](std::optional<std::size_t> SweepRow::*field) -> Getter {
        return [field](const SweepRow& r) -> std::optional<std::string> {
            if (!(r.*field)) return std::nullopt;
            return std::to_string(*(r.*field));
        };
    };

    std::vector<Column> candidates{
        {"alpha", num(&SweepRow::alpha)},
        {"p", num(&SweepRow::p)},
        {"n", count(&SweepRow::n)},
        {"delta", num(&SweepRow::delta)},
        {"h", num(&SweepRow::h)},
        {"exact_bias", num(&SweepRow::exact_bias)},
        {"leading_theory", num(&SweepRow::leading_theory)},
        {"lipschitz_theory", num(&SweepRow::lipschitz_theory)},
        {"bound_theory", num(&SweepRow::bound_theory)},
        {"mc_bias", num(&SweepRow::mc_bias)},
        {"mc_se", num(&SweepRow::mc_se)},
        {"tvar_estimate", num(&SweepRow::tvar_estimate)},
        {"quantile_estimate", num(&SweepRow::quantile_estimate)},
        {"density_estimate", num(&SweepRow::density_estimate)},
        {"lipschitz_estimate", num(&SweepRow::lipschitz_estimate)},
        {"leading_estimate", num(&SweepRow::leading_estimate)},
        {"bound_estimate", num(&SweepRow::bound_estimate)},
    };
    const std::array<std::pair<const char*, std::optional<BoxStats> SweepRow::*>, 3> boxes{{
        {"leading", &SweepRow::leading_stats},
        {"bound", &SweepRow::bound_stats},
        {"bootstrap", &SweepRow::bootstrap_stats},
    }};
    const std::array<std::pair<const char*, double BoxStats::*>, 6> parts{{
        {"min", &BoxStats::min},
        {"q25", &BoxStats::q25},
        {"median", &BoxStats::median},
        {"q75", &BoxStats::q75},
        {"max", &BoxStats::max},
        {"mean", &BoxStats::mean},
    }};
    for (const auto& [prefix, field] : boxes) {
        for (const auto& [suffix, part] : parts) {
            candidates.push_back({std::string(prefix) + "_" + suffix,
                                  [field, part](const SweepRow& r) -> std::optional<std::string> {
                                      if (!(r.*field)) return std::nullopt;
                                      return format_number((*(r.*field)).*part);
                                  }});
        }
        candidates.push_back({std::string(prefix) + "_count",
                              [field](const SweepRow& r) -> std::optional<std::string> {
                                  if (!(r.*field)) return std::nullopt;
                                  return std::to_string((*(r.*field)).count);
                              }});
    }
    candidates.push_back({"bootstrap_positive", count(&SweepRow::bootstrap_positive)});
    candidates.push_back({"failures", count(&SweepRow::failures)});

    std::vector<Column> columns;
    for (auto& c : candidates) {
        for (const auto& r : result.rows) {
            if (c.get(r)) {
                columns.push_back(std::move(c));
                break;
            }
        }
    }

    out << "figure,row";
    for (const auto& c : columns) out << ',' << c.name;
    out << ",error\n";
    for (const auto& r : result.rows) {
        out << csv_field(r.figure) << ',' << r.row;
        for (const auto& c : columns) out << ',' << c.get(r).value_or("");
        out << ',' << csv_field(r.error) << '\n';
    }
}

}  // namespace tvarbias
