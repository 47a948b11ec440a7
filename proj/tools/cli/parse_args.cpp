#include "run_config.hpp"

#include <CLI11.hpp>

#include <esn/params.hpp>

#include <charconv>
#include <cstdlib>
#include <string_view>
#include <map>

namespace esn::cli {

const char* to_string(Command c) {
    switch (c) {
    case Command::Eval: return "eval";
    case Command::Bounds: return "bounds";
    case Command::Tail: return "tail";
    case Command::Constants: return "constants";
    case Command::Rates: return "rates";
    case Command::Simulate: return "simulate";
    }
    return "unknown";
}

std::vector<double> RunConfig::x_grid() const {
    std::vector<double> xs;
    if (x_steps == 1) return {x_min};
    for (int i = 0; i < x_steps; ++i) {
        double t = static_cast<double>(i) / (x_steps - 1);
        xs.push_back(i + 1 == x_steps ? x_max : x_min + t * (x_max - x_min));
    }
    return xs;
}

namespace {

struct GridDefault {
    double lo, hi;
    int steps;
};

// Default x grids, chosen to land where each command is informative.
const std::map<Command, GridDefault> grid_defaults{
    {Command::Eval, {-3, 3, 7}},
    {Command::Bounds, {0.5, 20, 40}},
    {Command::Tail, {6, 24, 10}},
    {Command::Rates, {-1, 2, 4}},
};

struct Sub {
    Command command;
    CLI::App* app;
    CLI::Option* x = nullptr;
    CLI::Option* x_min = nullptr;
    CLI::Option* x_max = nullptr;
    CLI::Option* x_steps = nullptr;
};

} // namespace

RunConfig parse_args(int argc, const char* const* argv) {
    CLI::App app{"Extended skew-normal extremes toolkit", "esn-extremes"};
    app.require_subcommand(1);
    app.allow_extras(false);

    RunConfig cfg;
    // ESN_PRECISION replaces the default; an explicit --precision still wins.
    // Read here rather than through CLI11, which drops invalid env values silently.
    if (const char* env = std::getenv("ESN_PRECISION"); env && *env) {
        std::string_view text(env);
        auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), cfg.precision_digits);
        if (ec != std::errc() || end != text.data() + text.size() || cfg.precision_digits < 15)
            throw cli_exit(exit_usage, "error: ESN_PRECISION must be an integer of at least 15, got '" +
                                           std::string(text) + "'\n");
    }
    double x_single = 0;
    std::string format = "csv";
    std::string normalization = "exact";
    std::string out_path;

    std::vector<Sub> subs;
    auto add = [&](Command c, const char* help) {
        Sub s{c, app.add_subcommand(to_string(c), help)};
        s.app->add_option("--alpha", cfg.alpha, "slant")->capture_default_str();
        s.app->add_option("--tau", cfg.tau, "extension")->capture_default_str();
        s.app->add_option("--precision", cfg.precision_digits, "significant decimal digits")
            ->check(CLI::Range(15, 100000))
            ->capture_default_str()
            ->description("significant decimal digits (default from ESN_PRECISION if set)");
        s.app->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        s.app->add_option("--out", out_path, "write to PATH instead of standard output");
        subs.push_back(s);
        return &subs.back();
    };
    auto add_grid = [&](Sub* s) {
        s->x = s->app->add_option("--x", x_single, "single evaluation point");
        s->x_min = s->app->add_option("--x-min", cfg.x_min, "grid start")->excludes(s->x);
        s->x_max = s->app->add_option("--x-max", cfg.x_max, "grid end")->excludes(s->x);
        s->x_steps = s->app->add_option("--x-steps", cfg.x_steps, "grid points")->excludes(s->x);
    };
    auto add_ln_n = [&](Sub* s) {
        s->app->add_option("--ln-n", cfg.ln_n_list, "log block size, repeatable")->required()->allow_extra_args(false);
    };

    subs.reserve(6);
    add_grid(add(Command::Eval, "pdf, cdf, survival and log-survival over an x grid"));
    add_grid(add(Command::Bounds, "Mills ratio envelopes against the quadrature ratio"));
    add_grid(add(Command::Tail, "tail expansion and Von Mises form against the oracle"));
    add_ln_n(add(Command::Constants, "exact and closed-form normalising constants"));
    {
        Sub* s = add(Command::Rates, "first- and second-order convergence terms");
        add_grid(s);
        add_ln_n(s);
    }
    {
        Sub* s = add(Command::Simulate, "normalised block maxima and their KS distance");
        s->app->add_option("--block-size", cfg.block_size, "draws per block")->check(CLI::Range(std::int64_t{3}, std::int64_t{1} << 40))->capture_default_str();
        s->app->add_option("--replicates", cfg.replicates, "number of blocks")->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40))->capture_default_str();
        s->app->add_option("--normalization", normalization, "exact or closed")
            ->check(CLI::IsMember({"exact", "closed"}))
            ->capture_default_str();
        s->app->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw cli_exit(exit_ok, app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw cli_exit(exit_ok, app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        const CLI::App* failed = &app;
        for (const auto& s : subs)
            if (s.app->parsed()) failed = s.app;
        throw cli_exit(exit_usage, std::string("error: ") + e.what() + "\n\n" + failed->help());
    }

    const Sub* chosen = nullptr;
    for (const auto& s : subs)
        if (s.app->parsed()) chosen = &s;
    cfg.command = chosen->command;
    cfg.output_format = format == "json" ? Format::Json : Format::Csv;
    cfg.closed_normalization = normalization == "closed";
    if (!out_path.empty()) cfg.output_path = out_path;

    auto usage = [&](const std::string& msg) {
        return cli_exit(exit_usage, "error: " + msg + "\n\n" + chosen->app->help());
    };

    if (chosen->x) {
        auto d = grid_defaults.at(cfg.command);
        if (chosen->x->count()) {
            cfg.x_min = cfg.x_max = x_single;
            cfg.x_steps = 1;
        } else {
            if (!chosen->x_min->count()) cfg.x_min = d.lo;
            if (!chosen->x_max->count()) cfg.x_max = d.hi;
            if (!chosen->x_steps->count()) cfg.x_steps = d.steps;
        }
        if (cfg.x_steps < 1) throw usage("--x-steps must be at least 1");
        if (!(cfg.x_min <= cfg.x_max)) throw usage("--x-min must not exceed --x-max");
    }

    EsnParams p{cfg.alpha, cfg.tau};
    if (!std::isfinite(cfg.alpha) || !std::isfinite(cfg.tau)) throw usage("--alpha and --tau must be finite");
    // eval is defined for every slant; the rest rely on the tail regime.
    if (cfg.command != Command::Eval && !p.tail_regime_ok())
        throw cli_exit(exit_regime, std::string("error: regime violation: ") + regime_assumption_text() + " (" +
                                        p.describe() + ")\n");
    return cfg;
}

} // namespace esn::cli
