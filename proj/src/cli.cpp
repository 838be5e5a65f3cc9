#include "sigtrade/cli.hpp"

#include "sigtrade/config.hpp"
#include "sigtrade/errors.hpp"
#include "sigtrade/figures.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>

namespace sigtrade {

namespace {

struct Options {
    std::string config;
    std::vector<std::string> overrides;
    std::string out_dir;
    int figure_id = 0;
    FigureOptions figure;
};

fs::path output_dir(const Options& o, const ScenarioConfig* cfg) {
    if (!o.out_dir.empty()) return o.out_dir;
    if (const char* env = std::getenv("SIGTRADE_OUTPUT_DIR"); env && *env) return env;
    return cfg ? fs::path(cfg->outputs) : fs::path(".");
}

ScenarioConfig checked_config(const Options& o) {
    ScenarioConfig cfg = load_config(o.config, o.overrides);
    if (const auto report = validate(cfg); !report.empty()) {
        std::string msg = report.front();
        for (std::size_t i = 1; i < report.size(); ++i) msg += "; " + report[i];
        throw ParameterError(msg);
    }
    return cfg;
}

std::vector<fs::path> dispatch(const std::string& command, const Options& o) {
    if (command == "figure") {
        fs::path dir = output_dir(o, nullptr);
        FigureOptions fo = o.figure;
        if (!o.config.empty()) {
            const ScenarioConfig cfg = checked_config(o);
            dir = output_dir(o, &cfg);
            fo.n_steps = cfg.n_steps;
        }
        return write_figure(o.figure_id, dir, fo);
    }

    const ScenarioConfig cfg = checked_config(o);
    const fs::path dir = output_dir(o, &cfg);
    const TimeGrid grid = cfg.grid();
    const ModelParams& p = cfg.model;

    if (command == "solve-single") return {write_single_coefficients(solve_single(p, grid), dir / "coeffs_single.csv")};
    if (command == "solve-shared") return {write_shared_coefficients(solve_shared(p, grid), dir / "coeffs_shared.csv")};
    if (command == "solve-separate")
        return {write_separate_coefficients(solve_separate(p, grid), dir / "coeffs_separate.csv")};
    if (command == "simulate") {
        const std::string prefix = std::string("sim_") + to_string(cfg.mode);
        switch (cfg.mode) {
            case Mode::single:
                return write_simulation(simulate_single(p, solve_single(p, grid), cfg.initial, cfg.simulation), dir, prefix);
            case Mode::shared:
                return write_simulation(simulate_shared(p, solve_shared(p, grid), cfg.initial, cfg.simulation), dir, prefix);
            case Mode::separate:
                return write_simulation(simulate_separate(p, solve_separate(p, grid), cfg.initial, cfg.simulation), dir, prefix);
        }
    }
    if (command == "moments")
        return {write_moments(p, cfg.initial.covariance(), {p.rho}, cfg.n_steps, dir / "moments.csv")};
    if (command == "price-variance")
        return {write_price_variance(p, cfg.rho_values, cfg.n_steps, dir / "price_variance.csv")};
    throw ConfigError("unknown subcommand " + command);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal trading with trade signals: equilibrium solvers, moments and simulation"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("-c,--config", o.config, "scenario INI file");
        if (config_required) c->required();
        c->check(CLI::ExistingFile);
        sub->add_option("-s,--set", o.overrides, "override as section.key=value (repeatable)");
        sub->add_option("-o,--out", o.out_dir, "output directory");
    };

    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"solve-single", "single-agent coefficients and loadings"},
             {"solve-shared", "shared-signal equilibrium coefficients and loadings"},
             {"solve-separate", "separate-signal equilibrium coefficients and loadings"},
             {"simulate", "simulate agents in the configured mode"},
             {"moments", "mean-field cross-sectional moments and price variance"},
             {"price-variance", "price variance for each analysis.rho_values entry"}})
        add_common(app.add_subcommand(name, help), true);

    auto* fig = app.add_subcommand("figure", "data behind one figure (1-9)");
    fig->add_option("id", o.figure_id, "figure number")->required()->check(CLI::Range(1, 9));
    fig->add_option("--seed", o.figure.seed, "simulation seed");
    fig->add_option("--threads", o.figure.threads, "simulation threads")->check(CLI::PositiveNumber);
    add_common(fig, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        for (const auto& f : dispatch(command, o)) out << f.string() << '\n';
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IntegrationBlowup& e) {
        err << "error: " << e.what() << '\n';
        return kExitBlowup;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace sigtrade
