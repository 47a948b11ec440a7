#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/fraction.hpp>

#include <cmath>
#include <utility>

#include "precision.hpp"

namespace esn {

using std::erfc;
using std::exp;
using std::log;
using std::log1p;
using std::sqrt;

template <class Real>
Real log_sqrt_two_pi() {
    return log(boost::math::constants::root_two_pi<Real>());
}

template <class Real>
Real log_normal_pdf(const Real& z) {
    return -z * z / 2 - log_sqrt_two_pi<Real>();
}

template <class Real>
Real normal_pdf(const Real& z) {
    return exp(log_normal_pdf(z));
}

template <class Real>
Real normal_cdf(const Real& z) {
    return erfc(-z / boost::math::constants::root_two<Real>()) / 2;
}

namespace detail {

template <class Real>
struct mills_fraction {
    using result_type = std::pair<Real, Real>;
    Real t;
    int k = 0;
    std::pair<Real, Real> operator()() {
        int a = k++;
        return {Real(a), t};
    }
};

} // namespace detail

// Q(t)/phi(t) for t > 0 from the Laplace continued fraction
// 1/(t + 1/(t + 2/(t + 3/(t + ...)))).  Converges quickly once t is a few units.
template <class Real>
Real normal_mills_ratio(const Real& t) {
    detail::mills_fraction<Real> gen{t};
    Real denom = boost::math::tools::continued_fraction_b(gen, working_epsilon<Real>());
    return 1 / denom;
}

// ln Phi(z).
// Doubles use erfc until it would underflow, then the continued fraction.
// For mpfr, erfc is slow at moderate arguments, so beyond |z| = 6 the left
// tail between 6 and 30 goes through the continued fraction, and on the
// right Q(z) = phi(z) R(z) enters only through log1p(-Q): once Q is below
// 10^-(digits-15) a double-precision R(z) carries every digit that matters.
template <class Real>
Real log_normal_cdf(const Real& z) {
    if constexpr (is_builtin_v<Real>) {
        if (z > 0) return log1p(-erfc(z / boost::math::constants::root_two<Real>()) / 2);
        if (z < -20) return log_normal_pdf(z) + log(normal_mills_ratio(-z));
        return log(normal_cdf(z));
    } else {
        if (z >= 6) {
            double zd = to_double(z);
            double log10_q = (-zd * zd / 2 - 0.9189385332046727 - std::log(zd)) / 2.302585092994046;
            double digits = static_cast<double>(Real::default_precision());
            if (log10_q < -(digits - 15)) {
                double r = normal_mills_ratio(zd);
                return log1p(-exp(log_normal_pdf(z)) * Real(r));
            }
            return log1p(-erfc(z / boost::math::constants::root_two<Real>()) / 2);
        }
        if (z > 0) return log1p(-erfc(z / boost::math::constants::root_two<Real>()) / 2);
        if (z <= -6 && z >= -30) return log_normal_pdf(z) + log(normal_mills_ratio(Real(-z)));
        return log(normal_cdf(z));
    }
}

} // namespace esn
