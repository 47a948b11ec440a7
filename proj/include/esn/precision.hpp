#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include "errors.hpp"

namespace esn {

using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

template <class Real>
inline constexpr bool is_builtin_v = std::is_floating_point_v<Real>;

struct PrecisionContext {
    int digits = 34;
    double quad_rel_tol = 1e-12;
    double quad_abs_tol = 1e-14;
    int max_subdivisions = 2000;

    void validate() const {
        if (digits < 15)
            throw error(error_kind::domain, "PrecisionContext", "digits must be at least 15");
        if (!(quad_rel_tol > 0 && quad_rel_tol < 1) || !(quad_abs_tol > 0 && quad_abs_tol < 1))
            throw error(error_kind::domain, "PrecisionContext", "tolerances must lie in (0, 1)");
        if (max_subdivisions < 1)
            throw error(error_kind::domain, "PrecisionContext", "max_subdivisions must be at least 1");
    }
};

// Sets the mpfr default precision for the lifetime of the guard.  Values
// created inside the scope carry the new precision.  A no-op for builtin types.
template <class Real>
class scoped_precision {
public:
    explicit scoped_precision(int digits) {
        if constexpr (!is_builtin_v<Real>) {
            saved_ = Real::default_precision();
            Real::default_precision(static_cast<unsigned>(digits));
        }
        (void)digits;
    }
    ~scoped_precision() {
        if constexpr (!is_builtin_v<Real>) Real::default_precision(saved_);
    }
    scoped_precision(const scoped_precision&) = delete;
    scoped_precision& operator=(const scoped_precision&) = delete;

private:
    unsigned saved_ = 0;
};

// Unit roundoff at the current working precision.
template <class Real>
Real working_epsilon() {
    if constexpr (is_builtin_v<Real>) {
        return std::numeric_limits<Real>::epsilon();
    } else {
        Real one = 1;
        long bits = static_cast<long>(mpfr_get_prec(one.backend().data()));
        Real e;
        mpfr_set_ui_2exp(e.backend().data(), 1, -(bits - 1), MPFR_RNDN);
        return e;
    }
}

template <class Real>
Real from_string(const char* s) {
    if constexpr (is_builtin_v<Real>)
        return static_cast<Real>(std::strtold(s, nullptr));
    else
        return Real(s);
}

template <class Real>
double to_double(const Real& x) {
    if constexpr (is_builtin_v<Real>)
        return static_cast<double>(x);
    else
        return x.template convert_to<double>();
}

} // namespace esn
