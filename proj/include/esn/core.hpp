#pragma once

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "params.hpp"
#include "precision.hpp"
#include "quadrature.hpp"
#include "special.hpp"
#include "tail.hpp"

namespace esn {

namespace detail {

inline quad_options quad_from(const PrecisionContext& ctx) {
    return {ctx.quad_rel_tol, ctx.quad_abs_tol, ctx.max_subdivisions};
}

template <class Real>
void require_finite(const Real& x, const char* op) {
    using boost::math::isfinite;
    if (!(boost::math::isfinite)(x)) throw error(error_kind::domain, op, "x must be finite");
}

template <class Real>
Real log_normalizer(const EsnParams& p) {
    Real a(p.alpha), t(p.tau);
    return log_normal_cdf(Real(t / sqrt(1 + a * a)));
}

// Decay rate of the density used to scale the tail integrals so the
// integrand falls off on a unit scale whatever the magnitude of x.
template <class Real>
Real tail_scale(const EsnParams& p, const Real& x) {
    using std::abs;
    Real a(p.alpha), t(p.tau);
    Real s = abs(x);
    Real d = abs((1 + a * a) * x + a * t);
    if (d > s) s = d;
    if (s < 1) s = 1;
    return s;
}

enum class side { upper, lower };

// integral over s in [0, inf) of pdf(x +/- s) / pdf(x).
template <class Real>
quad_result<Real> tail_ratio(const EsnParams& p, const Real& x, side dir, const PrecisionContext& ctx,
                             const char* op) {
    Real a(p.alpha), t(p.tau);
    Real sc = tail_scale(p, x);
    Real ln_phi_x = p.alpha == 0 ? Real(0) : log_normal_cdf(Real(a * x + t));
    Real sign = dir == side::upper ? Real(1) : Real(-1);
    auto integrand = [&](const Real& u) -> Real {
        Real s = u / sc;
        Real expo = -sign * x * s - s * s / 2;
        if (p.alpha != 0) expo += log_normal_cdf(Real(a * (x + sign * s) + t)) - ln_phi_x;
        return exp(expo);
    };
    auto r = integrate_half_line<Real>(integrand, quad_from(ctx), op);
    r.value /= sc;
    r.error /= sc;
    return r;
}

} // namespace detail

// Center of mass, used as the pivot between the two tail integrals.
template <class Real>
Real mean(const EsnParams& p) {
    Real a(p.alpha), t(p.tau);
    Real abar = sqrt(1 + a * a);
    Real z = t / abar;
    return a / abar * exp(log_normal_pdf(z) - log_normal_cdf(z));
}

template <class Real>
Real log_pdf(const EsnParams& p, const Real& x) {
    Real a(p.alpha), t(p.tau);
    Real v = log_normal_pdf(x);
    if (p.alpha != 0) v += log_normal_cdf(Real(a * x + t)) - detail::log_normalizer<Real>(p);
    return v;
}

template <class Real>
Real pdf(const EsnParams& p, const Real& x, const PrecisionContext& ctx = {}) {
    const char* op = "pdf";
    p.validate(op);
    detail::require_finite(x, op);
    scoped_precision<Real> guard(ctx.digits);
    return exp(log_pdf(p, x));
}

// survival(x) / pdf(x): the Mills ratio, by direct tail quadrature.
template <class Real>
quad_result<Real> mills_ratio(const EsnParams& p, const Real& x, const PrecisionContext& ctx = {}) {
    p.validate("mills_ratio");
    detail::require_finite(x, "mills_ratio");
    scoped_precision<Real> guard(ctx.digits);
    return detail::tail_ratio(p, Real(x), detail::side::upper, ctx, "mills_ratio");
}

namespace detail {

template <class Real>
Real upper_tail(const EsnParams& p, const Real& x, const PrecisionContext& ctx, const char* op) {
    return exp(log_pdf(p, x)) * tail_ratio(p, x, side::upper, ctx, op).value;
}

template <class Real>
Real clamp_unit(const Real& v) {
    if (v < 0) return Real(0);
    if (v > 1) return Real(1);
    return v;
}

template <class Real>
Real lower_tail(const EsnParams& p, const Real& x, const PrecisionContext& ctx, const char* op) {
    return exp(log_pdf(p, x)) * tail_ratio(p, x, side::lower, ctx, op).value;
}

} // namespace detail

// Lower-tail mass by quadrature.  Left of the mean it is the scaled
// integral over (-inf, x]; right of it the upper tail is integrated instead
// and subtracted from the total mass measured at the mean.
template <class Real>
Real cdf(const EsnParams& p, const Real& x_in, const PrecisionContext& ctx = {}) {
    const char* op = "cdf";
    p.validate(op);
    ctx.validate();
    using boost::math::isnan;
    if ((isnan)(x_in)) throw error(error_kind::domain, op, "x is NaN");
    if (x_in == std::numeric_limits<Real>::infinity()) return Real(1);
    if (x_in == -std::numeric_limits<Real>::infinity()) return Real(0);
    scoped_precision<Real> guard(ctx.digits);
    Real x(x_in);
    Real m = mean<Real>(p);
    Real v;
    if (x <= m) {
        v = detail::lower_tail(p, x, ctx, op);
    } else {
        Real lo = detail::lower_tail(p, m, ctx, op);
        Real hi = detail::upper_tail(p, m, ctx, op);
        v = lo + (hi - detail::upper_tail(p, x, ctx, op));
    }
    return detail::clamp_unit(v);
}

template <class Real>
Real survival(const EsnParams& p, const Real& x_in, const PrecisionContext& ctx = {}) {
    const char* op = "survival";
    p.validate(op);
    ctx.validate();
    using boost::math::isnan;
    if ((isnan)(x_in)) throw error(error_kind::domain, op, "x is NaN");
    if (x_in == std::numeric_limits<Real>::infinity()) return Real(0);
    if (x_in == -std::numeric_limits<Real>::infinity()) return Real(1);
    scoped_precision<Real> guard(ctx.digits);
    Real x(x_in);
    Real m = mean<Real>(p);
    Real v;
    if (x >= m) {
        v = detail::upper_tail(p, x, ctx, op);
    } else {
        Real lo = detail::lower_tail(p, m, ctx, op);
        Real hi = detail::upper_tail(p, m, ctx, op);
        v = hi + (lo - detail::lower_tail(p, x, ctx, op));
    }
    return detail::clamp_unit(v);
}

// ln survival(x).  Right of the mean this is ln pdf + ln(Mills ratio), which
// never underflows.  Far enough out that the tail expansion's own error
// estimate is below quad_rel_tol the expansion is used instead.
template <class Real>
Real log_survival(const EsnParams& p, const Real& x_in, const PrecisionContext& ctx = {}) {
    const char* op = "log_survival";
    p.validate(op);
    ctx.validate();
    using boost::math::isnan;
    if ((isnan)(x_in)) throw error(error_kind::domain, op, "x is NaN");
    if (x_in == std::numeric_limits<Real>::infinity()) return -std::numeric_limits<Real>::infinity();
    if (x_in == -std::numeric_limits<Real>::infinity()) return Real(0);
    scoped_precision<Real> guard(ctx.digits);
    Real x(x_in);
    Real m = mean<Real>(p);
    if (x < m) return log(survival(p, x, ctx));
    if (x >= 5 && p.tail_regime_ok()) {
        // 3/x^4 bounds the expansion's estimate from below on both branches.
        Real x2 = x * x;
        if (3 / (x2 * x2) < Real(ctx.quad_rel_tol)) {
            try {
                auto e = tail_expansion(p, x);
                if (e.est_rel_error < Real(ctx.quad_rel_tol)) return e.log_survival_approx;
            } catch (const error&) {
            }
        }
    }
    return log_pdf(p, x) + log(detail::tail_ratio(p, x, detail::side::upper, ctx, op).value);
}

// cdf(x) = prob by bracketing and TOMS 748.
template <class Real>
Real quantile(const EsnParams& p, const Real& prob, const PrecisionContext& ctx = {}) {
    const char* op = "quantile";
    p.validate(op);
    ctx.validate();
    if (!(prob > 0 && prob < 1)) throw error(error_kind::domain, op, "p must lie in (0, 1)");
    scoped_precision<Real> guard(ctx.digits);
    Real target(prob);
    auto f = [&](const Real& x) { return cdf(p, x, ctx) - target; };
    Real m = mean<Real>(p);
    Real lo = m - 1, hi = m + 1;
    Real flo = f(lo), fhi = f(hi);
    Real step = 1;
    for (int i = 0; flo > 0; ++i) {
        if (i > 60) throw error(error_kind::solver, op, "could not bracket the lower end");
        step *= 2;
        hi = lo;
        fhi = flo;
        lo -= step;
        flo = f(lo);
    }
    step = 1;
    for (int i = 0; fhi < 0; ++i) {
        if (i > 60) throw error(error_kind::solver, op, "could not bracket the upper end");
        step *= 2;
        lo = hi;
        flo = fhi;
        hi += step;
        fhi = f(hi);
    }
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    Real xtol = Real(ctx.quad_abs_tol);
    auto tol = [&](const Real& a, const Real& b) {
        using std::abs;
        return abs(b - a) <= xtol * (1 + abs(a));
    };
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    Real x = (r.first + r.second) / 2;
    using std::abs;
    Real resid = abs(f(x));
    if (resid > 10 * Real(ctx.quad_abs_tol)) {
        std::ostringstream msg;
        msg << "residual " << to_double(resid) << " exceeds tolerance (" << p.describe() << ")";
        throw error(error_kind::numeric, op, msg.str(), to_double(resid));
    }
    return x;
}

} // namespace esn
