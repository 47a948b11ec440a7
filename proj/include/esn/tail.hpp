#pragma once

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "special.hpp"

namespace esn {

enum class tail_branch { NonNegAlpha, NegAlpha };

inline const char* to_string(tail_branch b) {
    return b == tail_branch::NonNegAlpha ? "NonNegAlpha" : "NegAlpha";
}

// survival(x) = c(x) * exp(-int_1^x g/f) with c(x) -> c_limit.
template <class Real>
struct TailRepresentation {
    EsnParams params;
    tail_branch branch = tail_branch::NonNegAlpha;
    Real log_c_limit;
    Real c_limit;

    Real f(const Real& x) const {
        if (branch == tail_branch::NonNegAlpha) return 1 / x;
        return 1 / affine(x);
    }

    Real f_prime(const Real& x) const {
        if (branch == tail_branch::NonNegAlpha) return -1 / (x * x);
        Real d = affine(x);
        return -abar2() / (d * d);
    }

    Real g(const Real& x) const {
        if (branch == tail_branch::NonNegAlpha) return 1 + 1 / (x * x);
        Real a(params.alpha), t(params.tau);
        Real d = affine(x);
        return 1 + abar2() / (d * d) + a / ((a * x + t) * d);
    }

    // int_1^x g(v)/f(v) dv in closed form.
    //   alpha >= 0: g/f = v + 1/v, giving (x^2 - 1)/2 + ln x.
    //   alpha < 0:  with D(v) = (1+alpha^2) v + alpha*tau, g/f = D + (1+alpha^2)/D + alpha/(alpha v + tau),
    //               giving (1+alpha^2)(x^2-1)/2 + alpha*tau*(x-1) + ln(D(x)/D(1))
    //               + ln((alpha x + tau)/(alpha + tau)).
    //               D > 0 and alpha v + tau < 0 on [1, x] under the regime assumption.
    Real integral_g_over_f(const Real& x) const {
        using std::log;
        if (branch == tail_branch::NonNegAlpha) return (x * x - 1) / 2 + log(x);
        Real a(params.alpha), t(params.tau);
        Real at = a * t;
        return abar2() * (x * x - 1) / 2 + at * (x - 1) + log(affine(x) / affine(Real(1)))
               + log((a * x + t) / (a + t));
    }

    Real abar2() const { return Real(1) + Real(params.alpha) * Real(params.alpha); }
    Real affine(const Real& x) const { return abar2() * x + Real(params.alpha) * Real(params.tau); }
};

template <class Real>
TailRepresentation<Real> von_mises_parts(const EsnParams& p) {
    using std::log;
    require_regime(p, "von_mises_parts");
    TailRepresentation<Real> rep;
    rep.params = p;
    Real a(p.alpha), t(p.tau);
    Real abar = sqrt(1 + a * a);
    const Real two_pi = boost::math::constants::two_pi<Real>();
    if (p.alpha >= 0) {
        rep.branch = tail_branch::NonNegAlpha;
        // With zero slant the skewing factor is identically one, so the
        // constant is the plain normal value; the Phi(tau/abar) factor only
        // applies once alpha*x + tau grows without bound.
        rep.log_c_limit = -log(two_pi * exp(Real(1))) / 2;
        if (p.alpha > 0) rep.log_c_limit -= log_normal_cdf(Real(t / abar));
    } else {
        rep.branch = tail_branch::NegAlpha;
        Real s = a + t;
        rep.log_c_limit = -(1 + s * s) / 2 - log(two_pi) - log_normal_cdf(Real(t / abar))
                          - log(-(a * s + 1) * s);
    }
    rep.c_limit = exp(rep.log_c_limit);
    return rep;
}

template <class Real>
Real log_von_mises_survival(const EsnParams& p, const Real& x) {
    if (!(x >= 1)) throw error(error_kind::domain, "von_mises_survival", "x must be at least 1");
    auto rep = von_mises_parts<Real>(p);
    return rep.log_c_limit - rep.integral_g_over_f(x);
}

template <class Real>
Real von_mises_survival(const EsnParams& p, const Real& x) {
    return exp(log_von_mises_survival(p, x));
}

template <class Real>
struct TailExpansionResult {
    Real x;
    Real log_survival_approx;
    std::vector<Real> order_terms;
    Real est_rel_error;
};

// Large-x tail expansion of the survival function, evaluated in log space.
// order_terms lists the successive correction groups whose sum multiplies
// the leading factor; est_rel_error is |last group| / |sum|.
template <class Real>
TailExpansionResult<Real> tail_expansion(const EsnParams& p, const Real& x) {
    using std::abs;
    using std::log;
    const char* op = "tail_expansion";
    if (!(x >= 1)) throw error(error_kind::domain, op, "x must be at least 1");
    auto rep = von_mises_parts<Real>(p);
    Real a(p.alpha), t(p.tau);
    Real abar2 = 1 + a * a;
    Real abar = sqrt(abar2);
    Real xa = a * x + t;
    Real x2 = x * x;
    Real x4 = x2 * x2;

    TailExpansionResult<Real> r;
    r.x = x;
    Real sum;
    Real log_lead;
    if (rep.branch == tail_branch::NonNegAlpha) {
        r.order_terms = {Real(1), -1 / x2, 3 / x4};
        sum = r.order_terms[0] + r.order_terms[1] + r.order_terms[2];
        log_lead = -log(boost::math::constants::two_pi<Real>() * exp(Real(1))) / 2
                   + log_normal_cdf(xa) - log_normal_cdf(Real(t / abar));
    } else {
        Real at = a * t;
        Real ta = at / abar2;
        // ta^2 / (alpha tau) simplifies to alpha tau / abar^4, finite at tau = 0.
        Real rr = at / (abar2 * abar2);
        Real xa2 = xa * xa;
        Real x3 = x2 * x, x5 = x4 * x, x6 = x4 * x2;
        Real s = x + ta;
        Real s2 = s * s;
        Real base = 1 - 1 / x2 + 3 / x4;
        Real g1 = base * (1 - a * a * ta / x - at * ta / x2);
        Real g2 = -(1 - 1 / x2 - 3 / xa2) * (abar2 / xa2 + at / (x * xa2));
        Real bracket = (at * x + 2) / x3 - (at * x + 4) / x5 - (at * x + 2) / (x3 * s2 * abar2)
                       - (2 * at * x + 6) / (x4 * s * abar2) + 3 * at / x6
                       - rr * (a * a - 1) / (x4 * s2) + 4 * ta / (x5 * s)
                       + 11 * rr / (x3 * s2 * s) + 6 * rr / (x2 * s2 * s2);
        Real g3 = a * xa / abar2 * bracket;
        r.order_terms = {g1, g2, g3};
        sum = g1 + g2 + g3;
        log_lead = rep.log_c_limit;
    }
    r.est_rel_error = abs(r.order_terms.back()) / abs(sum);
    if (!(sum > 0) || !(r.est_rel_error < 1)) {
        std::ostringstream msg;
        msg << "expansion not usable at x=" << to_double(x) << " (" << p.describe()
            << "), estimated relative error " << to_double(r.est_rel_error);
        throw error(error_kind::accuracy, op, msg.str(), to_double(r.est_rel_error));
    }
    if (rep.branch == tail_branch::NonNegAlpha)
        r.log_survival_approx = log_lead + log(sum) - rep.integral_g_over_f(x);
    else
        r.log_survival_approx = log_lead - rep.integral_g_over_f(x) + log(sum);
    return r;
}

} // namespace esn
