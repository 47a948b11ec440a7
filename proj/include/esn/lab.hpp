#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "constants.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "precision.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace esn {

// First-order coefficient of cdf^n(a_n x + b_n) - G0(x) in powers of 1/b_n^2.
template <class Real>
Real kappa(const EsnParams& p, const Real& x) {
    using std::exp;
    if (p.alpha >= 0) return (x * x + 2 * x) / 2 * exp(-x);
    Real abar2 = 1 + Real(p.alpha) * Real(p.alpha);
    return (x * x + 4 * x) / (2 * abar2) * exp(-x);
}

// Second-order coefficient.  For alpha < 0 it is
//   -e^{-x} [ x^2/abar^4 + kappa_poly^2/2 + 2x(1 + 3 alpha^2)/(alpha^2 abar^4) ]
// with kappa_poly = (x^2 + 4x)/(2 abar^2), i.e.
//   -e^{-x} (alpha^2 (x^4 + 8x^3 + 24x^2) + 16x(1 + 3 alpha^2)) / (8 alpha^2 abar^4).
template <class Real>
Real omega(const EsnParams& p, const Real& x) {
    using std::exp;
    Real x2 = x * x;
    if (p.alpha >= 0) return -(x2 * x2 + 4 * x2 * x + 8 * x2 + 16 * x) / 8 * exp(-x);
    Real a2 = Real(p.alpha) * Real(p.alpha);
    Real abar4 = (1 + a2) * (1 + a2);
    Real poly = a2 * (x2 * x2 + 8 * x2 * x + 24 * x2) + 16 * x * (1 + 3 * a2);
    return -exp(-x) * poly / (8 * a2 * abar4);
}

struct lab_options {
    bool monitor = true;
    int guard_digits = 10;
    double monitor_tol = 1e-6;
};

// Tolerances tied to the working precision.  b^4 h at ln_n = 1e6 needs
// log_survival accurate to far better than the library defaults.
inline PrecisionContext lab_context(const PrecisionContext& ctx) {
    PrecisionContext c = ctx;
    double rel = std::pow(10.0, -(ctx.digits - 4));
    c.quad_rel_tol = std::min(ctx.quad_rel_tol, rel);
    c.quad_abs_tol = std::min(ctx.quad_abs_tol, rel * 1e-2);
    c.max_subdivisions = std::max(ctx.max_subdivisions, 4000);
    return c;
}

inline solver_options lab_solver(const PrecisionContext& ctx) {
    solver_options s;
    s.secant_tol = std::pow(10.0, -(ctx.digits - 8));
    s.residual_tol = std::pow(10.0, -(ctx.digits - 8));
    return s;
}

namespace detail {

inline void require_lab_precision(const PrecisionContext& ctx, const char* op) {
    if (ctx.digits < 30)
        throw error(error_kind::precision, op,
                    "at least 30 significant digits are needed, got " + std::to_string(ctx.digits));
}

} // namespace detail

template <class Real>
struct LabPoint {
    Real h;
    Real first_order;
    Real second_order;
    Real phi_n_minus_g0;
    Real g0;
    Real kappa;
    Real omega;
};

// Exact constants for one (params, ln_n) plus the quantities built on them.
template <class Real>
class rate_evaluator {
public:
    rate_evaluator(const EsnParams& p, const Real& ln_n, const PrecisionContext& ctx)
        : p_(p), ctx_(lab_context(ctx)) {
        detail::require_lab_precision(ctx, "h_function");
        require_regime(p, "h_function");
        scoped_precision<Real> guard(ctx_.digits);
        ln_n_ = Real(ln_n);
        auto c = solve_bn(p, ln_n_, ctx_, lab_solver(ctx_));
        a_n_ = c.a_n;
        b_n_ = c.b_n;
    }

    const Real& a_n() const { return a_n_; }
    const Real& b_n() const { return b_n_; }
    const Real& ln_n() const { return ln_n_; }
    const PrecisionContext& context() const { return ctx_; }

    // n ln cdf(a_n x + b_n) + e^{-x}
    Real h(const Real& x) const {
        using std::exp;
        scoped_precision<Real> guard(ctx_.digits);
        Real y = a_n_ * x + b_n_;
        return n_log_cdf(p_, y, ln_n_, ctx_) + exp(-x);
    }

    LabPoint<Real> at(const Real& x_in) const {
        using std::exp;
        scoped_precision<Real> guard(ctx_.digits);
        Real x(x_in);
        Real y = a_n_ * x + b_n_;
        Real nlog = n_log_cdf(p_, y, ln_n_, ctx_);
        Real e = exp(-x);
        Real b2 = b_n_ * b_n_;
        LabPoint<Real> pt;
        pt.h = nlog + e;
        pt.kappa = kappa(p_, x);
        pt.omega = omega(p_, x);
        pt.first_order = b2 * pt.h;
        pt.second_order = b2 * (pt.first_order - pt.kappa);
        pt.g0 = exp(-e);
        pt.phi_n_minus_g0 = exp(nlog) - pt.g0;
        return pt;
    }

private:
    EsnParams p_;
    PrecisionContext ctx_;
    Real ln_n_, a_n_, b_n_;
};

template <class Real>
Real h_function(const EsnParams& p, const Real& x, const Real& ln_n, const PrecisionContext& ctx = {}) {
    rate_evaluator<Real> ev(p, ln_n, ctx);
    return ev.h(x);
}

template <class Real>
struct RateProfile {
    std::vector<Real> x_grid;
    Real ln_n;
    Real a_n;
    Real b_n;
    std::vector<Real> h;
    std::vector<Real> first_order;
    std::vector<Real> second_order;
    std::vector<Real> kappa_theory;
    std::vector<Real> omega_theory;
    std::vector<Real> phi_n_minus_g0;
    // b^2 [b^2 (cdf^n - G0)/G0 - kappa] two ways: from h through
    // e^h - 1 = h + h^2/2 + ..., and from cdf^n - G0 directly.
    std::vector<Real> identity_via_h;
    std::vector<Real> identity_via_phi_n;
    // Largest |change| / max(1, |second_order|) seen by the monitor.
    double monitor_change = 0;
};

template <class Real>
RateProfile<Real> rate_profile(const EsnParams& p, const std::vector<Real>& x_grid, const Real& ln_n,
                               const PrecisionContext& ctx = {}, const lab_options& opt = {}) {
    using std::abs;
    const char* op = "rate_profile";
    scoped_precision<Real> guard(ctx.digits);
    rate_evaluator<Real> ev(p, ln_n, ctx);
    RateProfile<Real> prof;
    prof.x_grid = x_grid;
    prof.ln_n = Real(ln_n);
    prof.a_n = ev.a_n();
    prof.b_n = ev.b_n();
    Real b2 = ev.b_n() * ev.b_n();
    for (const auto& x : x_grid) {
        auto pt = ev.at(x);
        prof.h.push_back(pt.h);
        prof.first_order.push_back(pt.first_order);
        prof.second_order.push_back(pt.second_order);
        prof.kappa_theory.push_back(pt.kappa);
        prof.omega_theory.push_back(pt.omega);
        prof.phi_n_minus_g0.push_back(pt.phi_n_minus_g0);
        prof.identity_via_h.push_back(pt.second_order + b2 * b2 * pt.h * pt.h / 2);
        prof.identity_via_phi_n.push_back(b2 * (b2 * pt.phi_n_minus_g0 / pt.g0 - pt.kappa));
    }
    if (opt.monitor) {
        PrecisionContext hi = ctx;
        hi.digits = ctx.digits + opt.guard_digits;
        scoped_precision<Real> hi_guard(hi.digits);
        rate_evaluator<Real> ref(p, ln_n, hi);
        for (std::size_t i = 0; i < x_grid.size(); ++i) {
            auto pt = ref.at(x_grid[i]);
            Real denom = abs(pt.second_order) > 1 ? abs(pt.second_order) : Real(1);
            double change = to_double(Real(abs(pt.second_order - prof.second_order[i]) / denom));
            prof.monitor_change = std::max(prof.monitor_change, change);
            if (!(change < opt.monitor_tol)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "second-order term moved by " << change << " (relative) between " << ctx.digits
                    << " and " << hi.digits << " digits at x=" << to_double(x_grid[i]) << ", ln_n="
                    << to_double(Real(ln_n)) << " (" << p.describe() << "); raise the precision";
                throw error(error_kind::precision, op, msg.str(), change);
            }
        }
    }
    return prof;
}

// [cdf^n(alpha_n x + beta_n) - G0(x)] c ln_n / (G0(x) e^{-x} (ln ln_n)^2),
// c = 16 for alpha >= 0 and 4 otherwise.
template <class Real>
std::vector<Real> closed_form_rate_check(const EsnParams& p, const Real& x, const std::vector<Real>& ln_n_grid,
                                         const PrecisionContext& ctx = {}) {
    using std::exp;
    using std::log;
    const char* op = "closed_form_rate_check";
    require_regime(p, op);
    PrecisionContext lab = lab_context(ctx);
    scoped_precision<Real> guard(lab.digits);
    Real c = p.alpha >= 0 ? Real(16) : Real(4);
    Real xr(x);
    Real g0 = gumbel_cdf(xr);
    std::vector<Real> out;
    for (const auto& ln_n_in : ln_n_grid) {
        Real ln_n(ln_n_in);
        if (!(ln_n > exp(Real(1))))
            throw error(error_kind::domain, op, "every ln_n must exceed e");
        auto cf = closed_form_constants(p, ln_n);
        Real phin = exp(n_log_cdf(p, Real(cf.alpha_n * xr + cf.beta_n), ln_n, lab));
        Real lnln = log(ln_n);
        out.push_back((phin - g0) * c * ln_n / (g0 * exp(-xr) * lnln * lnln));
    }
    return out;
}

enum class Normalization { Exact, ClosedForm };

inline const char* to_string(Normalization n) {
    return n == Normalization::Exact ? "exact" : "closed";
}

struct maxima_options {
    double budget = 1e9;
    unsigned workers = 0;
    double acceptance_floor = 1e-4;
};

struct MaximaExperiment {
    std::int64_t block_size = 0;
    std::int64_t replicates = 0;
    std::uint64_t seed = 0;
    Normalization normalization = Normalization::Exact;
    double scale = 0;
    double location = 0;
    double ln_n = 0;
    std::vector<double> maxima;
    std::vector<double> normalized;
    double ks_statistic = 0;
};

// Block maxima of iid draws, normalised by the chosen constants, and their
// KS distance to the Gumbel law.  Replicate r always uses stream r of the
// seed, so the result does not depend on the worker count.
template <class Real>
MaximaExperiment run_maxima_experiment(const EsnParams& p, std::int64_t block_size, std::int64_t replicates,
                                       Normalization norm, std::uint64_t seed,
                                       const PrecisionContext& ctx = {}, const maxima_options& opt = {}) {
    const char* op = "run_maxima_experiment";
    require_regime(p, op);
    if (block_size < 3 || replicates < 1)
        throw error(error_kind::domain, op, "block_size must be at least 3 and replicates at least 1");
    double draws = static_cast<double>(block_size) * static_cast<double>(replicates);
    if (draws > opt.budget) {
        std::ostringstream msg;
        msg << block_size << " x " << replicates << " draws exceed the budget of " << opt.budget;
        throw error(error_kind::resource, op, msg.str(), draws);
    }
    esn_sampler draw(p, opt.acceptance_floor);

    MaximaExperiment ex;
    ex.block_size = block_size;
    ex.replicates = replicates;
    ex.seed = seed;
    ex.normalization = norm;
    ex.ln_n = std::log(static_cast<double>(block_size));
    {
        scoped_precision<Real> guard(ctx.digits);
        using std::log;
        Real ln_n = log(Real(block_size));
        if (norm == Normalization::Exact) {
            auto c = solve_bn(p, ln_n, ctx);
            ex.scale = to_double(c.a_n);
            ex.location = to_double(c.b_n);
        } else {
            auto c = closed_form_constants(p, ln_n);
            ex.scale = to_double(c.alpha_n);
            ex.location = to_double(c.beta_n);
        }
    }

    ex.maxima.resize(static_cast<std::size_t>(replicates));
    parallel_for(ex.maxima.size(), opt.workers, [&](std::size_t r) {
        normal_source src(derive_seed(seed, r));
        double m = -std::numeric_limits<double>::infinity();
        for (std::int64_t i = 0; i < block_size; ++i) m = std::max(m, draw(src));
        ex.maxima[r] = m;
    });
    ex.normalized.resize(ex.maxima.size());
    for (std::size_t r = 0; r < ex.maxima.size(); ++r)
        ex.normalized[r] = (ex.maxima[r] - ex.location) / ex.scale;
    std::vector<double> sorted = ex.normalized;
    std::sort(sorted.begin(), sorted.end());
    ex.ks_statistic = ks_statistic(sorted, [](double x) { return gumbel_cdf(x); });
    return ex;
}

// KS distance between the normalised maxima and their exact finite-n law
// cdf^n(scale x + location).
template <class Real>
double ks_against_exact_law(const EsnParams& p, const MaximaExperiment& ex, const PrecisionContext& ctx = {}) {
    scoped_precision<Real> guard(ctx.digits);
    std::vector<double> sorted = ex.normalized;
    std::sort(sorted.begin(), sorted.end());
    using std::exp;
    using std::log;
    Real ln_n = log(Real(ex.block_size));
    return ks_statistic(sorted, [&](double x) {
        Real y = Real(ex.scale) * Real(x) + Real(ex.location);
        return to_double(Real(exp(n_log_cdf(p, y, ln_n, ctx))));
    });
}

} // namespace esn
