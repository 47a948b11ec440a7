#pragma once

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "core.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "precision.hpp"
#include "tail.hpp"

namespace esn {

template <class Real>
struct ClosedFormConstants {
    Real alpha_n;
    Real beta_n;
};

template <class Real>
struct ExactConstants {
    Real a_n;
    Real b_n;
    Real residual;  // log_survival(b_n) + ln_n
    int evaluations = 0;
};

template <class Real>
struct NormalizingConstants {
    Real a_n;
    Real b_n;
    Real alpha_n;
    Real beta_n;
    Real ln_n;
    Real residual;
};

struct GumbelValue {
    double x;
    double g0;
};

struct solver_options {
    double bisect_tol = 1e-3;
    double secant_tol = 1e-12;
    double residual_tol = 1e-10;
    int max_expansions = 200;
    int max_iterations = 200;
};

namespace detail {

inline void require_ln_n(double ln_n, const char* op) {
    if (!(ln_n > 1) || !std::isfinite(ln_n))
        throw error(error_kind::domain, op, "ln_n must be finite and greater than 1");
}

template <class Real>
std::string solver_where(const EsnParams& p, const Real& ln_n) {
    std::ostringstream os;
    os.precision(17);
    os << p.describe() << ", ln_n=" << to_double(ln_n);
    return os.str();
}

} // namespace detail

// Closed-form location and scale.  With ell = sqrt(2 ln n (1 + alpha^2)):
//   alpha > 0:  1/ell_0,  ell_0 - (ln(2 sqrt(pi)) + ln ln n / 2 + ln Phi(tau/abar)) / ell_0
//   alpha = 0:  the same without the ln Phi term (plain normal constants)
//   alpha < 0:  1/ell,    ell - (2 ln(2 sqrt(pi)|alpha|) + ln ln n + ln Phi(tau/abar) - tau^2/2) / (2 ell)
//                         - alpha tau / abar^2
template <class Real>
ClosedFormConstants<Real> closed_form_constants(const EsnParams& p, const Real& ln_n) {
    using std::log;
    const char* op = "closed_form_constants";
    p.validate(op);
    detail::require_ln_n(to_double(ln_n), op);
    Real a(p.alpha), t(p.tau);
    Real abar2 = 1 + a * a;
    Real lnphi = log_normal_cdf(Real(t / sqrt(abar2)));
    Real lnln = log(ln_n);
    Real two_root_pi = 2 * boost::math::constants::root_pi<Real>();
    ClosedFormConstants<Real> c;
    if (p.alpha >= 0) {
        Real ell = sqrt(2 * ln_n);
        Real shift = log(two_root_pi) + lnln / 2;
        if (p.alpha > 0) shift += lnphi;
        c.alpha_n = 1 / ell;
        c.beta_n = ell - shift / ell;
    } else {
        using std::abs;
        Real ell = sqrt(2 * ln_n * abar2);
        c.alpha_n = 1 / ell;
        c.beta_n = ell - (2 * log(two_root_pi * abs(a)) + lnln + lnphi - t * t / 2) / (2 * ell)
                   - a * t / abar2;
    }
    return c;
}

// Solves log_survival(b) = -ln_n.  Starts from the closed-form bracket
// beta_n +/- 3 alpha_n, widens it until the residual changes sign, bisects
// to bisect_tol and finishes with a bracketed secant iteration.
template <class Real>
ExactConstants<Real> solve_bn(const EsnParams& p, const Real& ln_n_in, const PrecisionContext& ctx = {},
                              const solver_options& opt = {}) {
    using std::abs;
    const char* op = "solve_bn";
    require_regime(p, op);
    ctx.validate();
    detail::require_ln_n(to_double(ln_n_in), op);
    scoped_precision<Real> guard(ctx.digits);
    Real ln_n(ln_n_in);
    int evals = 0;
    auto F = [&](const Real& b) {
        ++evals;
        return log_survival(p, b, ctx) + ln_n;
    };

    auto cf = closed_form_constants(p, ln_n);
    Real width = 3 * cf.alpha_n;
    Real lo = cf.beta_n - width, hi = cf.beta_n + width;
    Real flo = F(lo), fhi = F(hi);
    for (int i = 0; flo < 0 || fhi > 0; ++i) {
        if (i >= opt.max_expansions) {
            std::ostringstream msg;
            msg << "bracket expansion failed after " << i << " steps, last bracket [" << to_double(lo)
                << ", " << to_double(hi) << "] (" << detail::solver_where(p, ln_n) << ")";
            throw error(error_kind::solver, op, msg.str());
        }
        width *= 2;
        if (flo < 0) {
            hi = lo;
            fhi = flo;
            lo -= width;
            flo = F(lo);
        } else {
            lo = hi;
            flo = fhi;
            hi += width;
            fhi = F(hi);
        }
    }

    Real bisect_tol(opt.bisect_tol);
    while (hi - lo > bisect_tol) {
        Real mid = (lo + hi) / 2;
        Real fm = F(mid);
        if (fm == 0) {
            lo = hi = mid;
            flo = fhi = fm;
            break;
        }
        if (fm > 0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }

    // Secant from the two bracket ends, falling back to bisection whenever
    // the step would leave the bracket.
    Real x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
    Real b = abs(flo) < abs(fhi) ? lo : hi;
    Real fb = abs(flo) < abs(fhi) ? flo : fhi;
    Real secant_tol(opt.secant_tol), residual_tol(opt.residual_tol);
    Real step = hi - lo;
    for (int it = 0;; ++it) {
        if (fb == 0 || (abs(step) <= secant_tol && abs(fb) <= residual_tol)) break;
        if (it >= opt.max_iterations) {
            std::ostringstream msg;
            msg << "no convergence after " << it << " iterations, residual " << to_double(fb) << " ("
                << detail::solver_where(p, ln_n) << ")";
            throw error(error_kind::solver, op, msg.str(), to_double(abs(fb)));
        }
        Real next;
        if (f1 != f0) next = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (f1 == f0 || !(next > lo && next < hi)) next = (lo + hi) / 2;
        Real fn = F(next);
        step = next - x1;
        x0 = x1;
        f0 = f1;
        x1 = next;
        f1 = fn;
        if (fn > 0) {
            lo = next;
            flo = fn;
        } else if (fn < 0) {
            hi = next;
            fhi = fn;
        }
        b = next;
        fb = fn;
        if (hi - lo <= 0) break;
    }
    if (abs(fb) > residual_tol) {
        std::ostringstream msg;
        msg << "residual " << to_double(fb) << " above tolerance (" << detail::solver_where(p, ln_n) << ")";
        throw error(error_kind::solver, op, msg.str(), to_double(abs(fb)));
    }
    auto rep = von_mises_parts<Real>(p);
    return {rep.f(b), b, fb, evals};
}

template <class Real>
NormalizingConstants<Real> normalizing_constants(const EsnParams& p, const Real& ln_n,
                                                 const PrecisionContext& ctx = {},
                                                 const solver_options& opt = {}) {
    scoped_precision<Real> guard(ctx.digits);
    auto exact = solve_bn(p, ln_n, ctx, opt);
    auto cf = closed_form_constants(p, Real(ln_n));
    return {exact.a_n, exact.b_n, cf.alpha_n, cf.beta_n, Real(ln_n), exact.residual};
}

template <class Real>
Real gumbel_cdf(const Real& x) {
    using std::exp;
    return exp(-exp(-x));
}

inline GumbelValue gumbel(double x) {
    return {x, gumbel_cdf(x)};
}

// ln cdf(y), switching to the survival side once that is the small one.
template <class Real>
Real log_cdf(const EsnParams& p, const Real& y, const PrecisionContext& ctx) {
    using std::exp;
    using std::log;
    using std::log1p;
    Real ls = log_survival(p, y, ctx);
    if (ls < -log(Real(2))) return log1p(-exp(ls));
    return log(cdf(p, y, ctx));
}

// n ln cdf(y) for n = e^{ln_n}, formed without materialising n.
template <class Real>
Real n_log_cdf(const EsnParams& p, const Real& y, const Real& ln_n, const PrecisionContext& ctx) {
    using std::exp;
    using std::log;
    Real l = log_cdf(p, y, ctx);
    if (l == 0) return Real(0);
    return -exp(ln_n + log(-l));
}

// P(max of n draws <= scale x + location) for the chosen constants.
template <class Real>
Real max_cdf(const EsnParams& p, const NormalizingConstants<Real>& c, const Real& x, bool use_closed_form,
             const PrecisionContext& ctx = {}) {
    using std::exp;
    const char* op = "max_cdf";
    require_regime(p, op);
    scoped_precision<Real> guard(ctx.digits);
    if (x == std::numeric_limits<Real>::infinity()) return Real(1);
    Real y = use_closed_form ? Real(c.alpha_n * x + c.beta_n) : Real(c.a_n * x + c.b_n);
    return exp(n_log_cdf(p, y, c.ln_n, ctx));
}

} // namespace esn
