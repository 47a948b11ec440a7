// Walks one parameter pair through the library: density and tail
// probabilities, the Mills envelope, the tail expansion, the normalising
// constants, and a small block-maxima simulation.
//
//   tail_walkthrough [alpha tau]

#include <esn/esn.hpp>

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
    using R = esn::mp_real;
    esn::EsnParams p{-1, 0};
    if (argc == 3) p = {std::atof(argv[1]), std::atof(argv[2])};

    esn::PrecisionContext ctx;  // 34 digits
    esn::scoped_precision<R> guard(ctx.digits);
    auto show = [](const R& v) { return v.convert_to<double>(); };

    std::printf("%s, mean %.6f\n\n", p.describe().c_str(), esn::mean<double>(p));
    std::printf("%6s %14s %14s %14s\n", "x", "pdf", "survival", "log_survival");
    for (double x : {-1.0, 0.0, 2.0, 5.0, 20.0})
        std::printf("%6g %14.6e %14.6e %14.6f\n", x, show(esn::pdf(p, R(x), ctx)), show(esn::survival(p, R(x), ctx)),
                    show(esn::log_survival(p, R(x), ctx)));

    std::printf("\nMills envelope\n");
    for (double x : {1.0, 4.0, 16.0}) {
        try {
            auto env = esn::mills_bounds(p, R(x));
            std::printf("  x=%-4g %-24s %.8f < %.8f < %.8f\n", x, esn::to_string(env.case_id), show(env.lower),
                        show(esn::mills_ratio(p, R(x), ctx).value), show(env.upper));
        } catch (const esn::error& e) {
            std::printf("  x=%-4g %s\n", x, e.what());
        }
    }

    if (!p.tail_regime_ok()) {
        std::printf("\n%s; stopping before the tail results.\n", esn::regime_assumption_text());
        return 0;
    }

    auto tail = esn::tail_expansion(p, R(16));
    double truth = show(esn::log_survival(p, R(16), ctx));
    std::printf("\nTail expansion at x=16: %.10f vs %.10f (estimated rel. error %.2e)\n",
                show(tail.log_survival_approx), truth, show(tail.est_rel_error));

    std::printf("\n%8s %12s %12s %12s %12s\n", "ln_n", "a_n", "b_n", "alpha_n", "beta_n");
    for (double ln_n : {10.0, 100.0, 1000.0}) {
        auto c = esn::normalizing_constants(p, R(ln_n), ctx);
        std::printf("%8g %12.8f %12.8f %12.8f %12.8f\n", ln_n, show(c.a_n), show(c.b_n), show(c.alpha_n),
                    show(c.beta_n));
    }

    auto ex = esn::run_maxima_experiment<R>(p, 2000, 1000, esn::Normalization::Exact, 7, ctx);
    std::printf("\n1000 maxima of 2000 draws: KS %.4f against the Gumbel law, %.4f against the exact law\n",
                ex.ks_statistic, esn::ks_against_exact_law<double>(p, ex));
    return 0;
}
