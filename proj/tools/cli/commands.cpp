#include "commands.hpp"

#include <esn/esn.hpp>

#include <algorithm>
#include <fstream>

#include "table.hpp"

namespace esn::cli {

namespace {

using R = mp_real;

PrecisionContext context_of(const RunConfig& cfg) {
    PrecisionContext ctx;
    ctx.digits = cfg.precision_digits;
    return ctx;
}

Table eval_table(const RunConfig& cfg, const EsnParams& p, const PrecisionContext& ctx) {
    Table t{{"x", "pdf", "cdf", "survival", "log_survival"}, {}};
    for (double xv : cfg.x_grid()) {
        R x(xv);
        t.rows.push_back({Cell::number(xv), Cell::number(pdf(p, x, ctx)), Cell::number(cdf(p, x, ctx)),
                          Cell::number(survival(p, x, ctx)), Cell::number(log_survival(p, x, ctx))});
    }
    return t;
}

Table bounds_table(const RunConfig& cfg, const EsnParams& p, const PrecisionContext& ctx) {
    Table t{{"x", "case_id", "lower", "ratio_oracle", "upper", "sandwich_ok"}, {}};
    for (double xv : cfg.x_grid()) {
        R x(xv);
        R ratio = mills_ratio(p, x, ctx).value;
        try {
            auto env = mills_bounds(p, x);
            bool ok = env.lower < ratio && ratio < env.upper;
            t.rows.push_back({Cell::number(xv), Cell::str(to_string(env.case_id)), Cell::number(env.lower),
                              Cell::number(ratio), Cell::number(env.upper), Cell::boolean(ok)});
        } catch (const error& e) {
            if (e.kind() != error_kind::boundary) throw;
            t.rows.push_back({Cell::number(xv), Cell::str("boundary"), Cell::empty(), Cell::number(ratio),
                              Cell::empty(), Cell::empty()});
        }
    }
    return t;
}

Table tail_table(const RunConfig& cfg, const EsnParams& p, const PrecisionContext& ctx) {
    Table t{{"x", "log_survival", "log_survival_expansion", "rel_error", "est_rel_error", "von_mises_ratio"}, {}};
    for (double xv : cfg.x_grid()) {
        R x(xv);
        R truth = log_survival(p, x, ctx);
        R vm = exp(truth - log_von_mises_survival(p, x));
        std::vector<Cell> row{Cell::number(xv), Cell::number(truth)};
        try {
            auto e = tail_expansion(p, x);
            row.push_back(Cell::number(e.log_survival_approx));
            row.push_back(Cell::number(R(abs(expm1(R(e.log_survival_approx - truth))))));
            row.push_back(Cell::number(e.est_rel_error));
        } catch (const error& e) {
            // Too close to the origin for the expansion to mean anything.
            if (e.kind() != error_kind::accuracy) throw;
            row.insert(row.end(), 3, Cell::empty());
        }
        row.push_back(Cell::number(vm));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table constants_table(const RunConfig& cfg, const EsnParams& p, const PrecisionContext& ctx) {
    Table t{{"alpha", "tau", "ln_n", "a_n", "b_n", "alpha_n", "beta_n", "residual"}, {}};
    for (double ln_n : cfg.ln_n_list) {
        auto c = normalizing_constants(p, R(ln_n), ctx);
        t.rows.push_back({Cell::number(p.alpha), Cell::number(p.tau), Cell::number(ln_n), Cell::number(c.a_n),
                          Cell::number(c.b_n), Cell::number(c.alpha_n), Cell::number(c.beta_n),
                          Cell::number(c.residual)});
    }
    return t;
}

Table rates_table(const RunConfig& cfg, const EsnParams& p, const PrecisionContext& ctx) {
    Table t{{"x", "ln_n", "b_n", "h", "first_order", "kappa", "second_order", "omega"}, {}};
    std::vector<R> grid;
    for (double x : cfg.x_grid()) grid.emplace_back(x);
    for (double ln_n : cfg.ln_n_list) {
        auto prof = rate_profile(p, grid, R(ln_n), ctx);
        for (std::size_t i = 0; i < grid.size(); ++i)
            t.rows.push_back({Cell::number(grid[i]), Cell::number(ln_n), Cell::number(prof.b_n),
                              Cell::number(prof.h[i]), Cell::number(prof.first_order[i]),
                              Cell::number(prof.kappa_theory[i]), Cell::number(prof.second_order[i]),
                              Cell::number(prof.omega_theory[i])});
    }
    return t;
}

Table simulate_table(const RunConfig& cfg, const EsnParams& p, const PrecisionContext& ctx, Summary& summary) {
    auto norm = cfg.closed_normalization ? Normalization::ClosedForm : Normalization::Exact;
    auto ex = run_maxima_experiment<R>(p, cfg.block_size, cfg.replicates, norm, cfg.seed, ctx);
    double ks_exact = ks_against_exact_law<R>(p, ex, ctx);
    std::size_t n = ex.maxima.size();
    summary = {{"ks_statistic", Cell::number(ex.ks_statistic)},
               {"ks_exact_law", Cell::number(ks_exact)},
               {"ks_critical_99", Cell::number(ks_critical_99(n))},
               {"dkw_epsilon_99", Cell::number(dkw_epsilon(n))},
               {"block_size", Cell::integer(ex.block_size)},
               {"replicates", Cell::integer(ex.replicates)},
               {"seed", Cell::str(std::to_string(ex.seed))},
               {"normalization", Cell::str(to_string(ex.normalization))},
               {"scale", Cell::number(ex.scale)},
               {"location", Cell::number(ex.location)}};
    Table t{{"replicate", "maximum", "normalized"}, {}};
    for (std::size_t r = 0; r < n; ++r)
        t.rows.push_back({Cell::integer(static_cast<long long>(r)), Cell::number(ex.maxima[r]),
                          Cell::number(ex.normalized[r])});
    return t;
}

int exit_code_for(error_kind k) {
    switch (k) {
    case error_kind::regime: return exit_regime;
    case error_kind::domain: return exit_usage;
    default: return exit_numeric;
    }
}

} // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    EsnParams p{cfg.alpha, cfg.tau};
    PrecisionContext ctx = context_of(cfg);
    try {
        scoped_precision<R> guard(ctx.digits);
        Summary summary;
        Table t;
        switch (cfg.command) {
        case Command::Eval: t = eval_table(cfg, p, ctx); break;
        case Command::Bounds: t = bounds_table(cfg, p, ctx); break;
        case Command::Tail: t = tail_table(cfg, p, ctx); break;
        case Command::Constants: t = constants_table(cfg, p, ctx); break;
        case Command::Rates: t = rates_table(cfg, p, ctx); break;
        case Command::Simulate: t = simulate_table(cfg, p, ctx, summary); break;
        }
        const Summary* extra = cfg.command == Command::Simulate ? &summary : nullptr;
        if (cfg.output_format == Format::Csv) {
            write_csv(out, t);
            if (extra) {
                write_json_object(err, summary);
                err << '\n';
            }
        } else {
            Summary header{{"command", Cell::str(to_string(cfg.command))},
                           {"alpha", Cell::number(cfg.alpha)},
                           {"tau", Cell::number(cfg.tau)},
                           {"precision_digits", Cell::integer(cfg.precision_digits)}};
            write_json(out, header, t, extra);
        }
        out.flush();
        return exit_ok;
    } catch (const error& e) {
        err << "esn-extremes " << to_string(cfg.command) << ": " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "esn-extremes " << to_string(cfg.command) << ": " << e.what() << '\n';
        return exit_numeric;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(argc, argv);
    } catch (const cli_exit& e) {
        (e.code == exit_ok ? out : err) << e.what();
        return e.code;
    }
    if (!cfg.output_path) return run(cfg, out, err);
    std::ofstream file(*cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "esn-extremes: cannot open " << *cfg.output_path << " for writing\n";
        return exit_usage;
    }
    int code = run(cfg, file, err);
    file.close();
    if (code == exit_ok && !file) {
        err << "esn-extremes: failed writing " << *cfg.output_path << '\n';
        return exit_numeric;
    }
    return code;
}

} // namespace esn::cli
