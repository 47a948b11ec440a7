#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "errors.hpp"

namespace esn {

// Standardized extended skew-normal: slant alpha, extension tau.
struct EsnParams {
    double alpha = 0.0;
    double tau = 0.0;

    void validate(const char* operation = "EsnParams") const {
        if (!std::isfinite(alpha) || !std::isfinite(tau))
            throw error(error_kind::domain, operation, "alpha and tau must be finite");
    }

    double alpha_bar() const { return std::sqrt(1.0 + alpha * alpha); }

    // Standing assumption behind every negative-slant tail result:
    // 1 + alpha^2 + alpha*tau > 0 and alpha + tau < 0.  Trivially true for alpha >= 0.
    bool tail_regime_ok() const {
        if (alpha >= 0) return true;
        return 1.0 + alpha * alpha + alpha * tau > 0 && alpha + tau < 0;
    }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        os << "alpha=" << alpha << ", tau=" << tau;
        return os.str();
    }
};

inline const char* regime_assumption_text() {
    return "negative slant requires alpha + tau < 0 and 1 + alpha^2 + alpha*tau > 0";
}

inline void require_regime(const EsnParams& p, const char* operation) {
    p.validate(operation);
    if (!p.tail_regime_ok())
        throw error(error_kind::regime, operation,
                    std::string(regime_assumption_text()) + " (" + p.describe() + ")");
}

} // namespace esn
