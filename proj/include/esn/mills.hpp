#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "params.hpp"
#include "precision.hpp"
#include "special.hpp"

namespace esn {

enum class CaseId {
    PosAlpha_PosArg,
    PosAlpha_NegArg,
    NegAlpha_PosArg_PosMix,
    NegAlpha_PosArg_NegMix,
    NegAlpha_NegArg,
};

inline const char* to_string(CaseId c) {
    switch (c) {
    case CaseId::PosAlpha_PosArg: return "PosAlpha_PosArg";
    case CaseId::PosAlpha_NegArg: return "PosAlpha_NegArg";
    case CaseId::NegAlpha_PosArg_PosMix: return "NegAlpha_PosArg_PosMix";
    case CaseId::NegAlpha_PosArg_NegMix: return "NegAlpha_PosArg_NegMix";
    case CaseId::NegAlpha_NegArg: return "NegAlpha_NegArg";
    }
    return "unknown";
}

template <class Real>
struct MillsEnvelope {
    Real x;
    CaseId case_id;
    Real lower;
    Real upper;
};

enum class SlopeForm { InverseX, InverseAffine };

// 1/x for alpha >= 0, 1/(affine_scale x + affine_shift) otherwise.
struct MillsRatioAsymptote {
    SlopeForm slope_form = SlopeForm::InverseX;
    double affine_scale = 1.0;
    double affine_shift = 0.0;
};

namespace detail {

template <class Real>
std::string where(const EsnParams& p, const Real& x) {
    std::ostringstream os;
    os.precision(17);
    os << p.describe() << ", x=" << to_double(x);
    return os.str();
}

} // namespace detail

template <class Real>
CaseId classify_case(const EsnParams& p, const Real& x) {
    const char* op = "classify_case";
    p.validate(op);
    if (!(x > 0)) throw error(error_kind::domain, op, "x must be positive (" + detail::where(p, x) + ")");
    Real a(p.alpha), t(p.tau);
    Real xa = a * x + t;
    if (xa == 0)
        throw error(error_kind::boundary, op, "alpha*x + tau = 0 (" + detail::where(p, x) + ")");
    if (p.alpha >= 0) return xa > 0 ? CaseId::PosAlpha_PosArg : CaseId::PosAlpha_NegArg;
    if (xa < 0) return CaseId::NegAlpha_NegArg;
    Real mix = x + a * xa;
    if (mix == 0)
        throw error(error_kind::boundary, op,
                    "x + alpha*(alpha*x + tau) = 0 (" + detail::where(p, x) + ")");
    return mix > 0 ? CaseId::NegAlpha_PosArg_PosMix : CaseId::NegAlpha_PosArg_NegMix;
}

namespace detail {

template <class Real>
void require_positive(const Real& v, const char* what, const EsnParams& p, const Real& x) {
    if (!(v > 0)) {
        std::ostringstream os;
        os.precision(17);
        os << "denominator " << what << " = " << to_double(v) << " is not positive (" << where(p, x) << ")";
        throw error(error_kind::boundary, "mills_bounds", os.str());
    }
}

} // namespace detail

// Closed-form lower and upper envelopes for survival(x)/pdf(x), x > 0.
template <class Real>
MillsEnvelope<Real> mills_bounds(const EsnParams& p, const Real& x) {
    using std::exp;
    using std::log;
    using std::log1p;
    CaseId c = classify_case(p, x);
    Real a(p.alpha), t(p.tau);
    Real abar2 = 1 + a * a;
    Real abar = sqrt(abar2);
    Real xa = a * x + t;
    Real phi_xa = normal_pdf(xa);
    Real inv_x = 1 / x;
    Real classical_lower = inv_x / (1 + 1 / (x * x));
    Real d = abar2 * x + a * t;

    MillsEnvelope<Real> env{x, c, Real(0), Real(0)};
    switch (c) {
    case CaseId::PosAlpha_PosArg: {
        Real den = 1 - phi_xa / xa;
        detail::require_positive(den, "1 - phi(xa)/xa", p, x);
        env.lower = classical_lower;
        env.upper = inv_x / den;
        break;
    }
    case CaseId::PosAlpha_NegArg:
        env.lower = classical_lower;
        env.upper = inv_x * (-(xa * xa + 1) / (xa * phi_xa));
        break;
    case CaseId::NegAlpha_PosArg_PosMix: {
        Real den_l = xa - phi_xa;
        Real den_u = xa * xa + 1 - xa * phi_xa;
        detail::require_positive(d, "(1+alpha^2)x + alpha*tau", p, x);
        detail::require_positive(den_l, "xa - phi(xa)", p, x);
        detail::require_positive(den_u, "xa^2 + 1 - xa*phi(xa)", p, x);
        env.lower = classical_lower * (1 + a / d * (phi_xa * xa / den_l));
        env.upper = inv_x * (1 + a * d / (d * d + abar2) * (phi_xa * d / den_u));
        break;
    }
    case CaseId::NegAlpha_PosArg_NegMix: {
        // 1/phi(q) and 1/phi(xa) overflow long before their ratio does,
        // so both fractions are formed after factoring out 1/phi(xa).
        Real q = abar * x + a * t / abar;
        Real lq = -log_normal_pdf(q);   // ln(1/phi(q))
        Real lx = -log_normal_pdf(xa);  // ln(1/phi(xa))
        Real scaled_l = 1 - exp(-lx) / xa;                  // (1/phi(xa) - 1/xa) * phi(xa)
        Real scaled_u = 1 - exp(-lx) * xa / (xa * xa + 1);  // (1/phi(xa) - xa/(xa^2+1)) * phi(xa)
        detail::require_positive(scaled_l, "1/phi(xa) - 1/xa", p, x);
        detail::require_positive(scaled_u, "1/phi(xa) - xa/(xa^2+1)", p, x);
        Real lead = a / abar * exp(lq - lx);
        Real num_l = lead + a * d / (d * d + abar2) * exp(-lx);
        Real num_u = lead + a / d * exp(-lx);
        env.lower = classical_lower * (1 + num_l / scaled_l);
        env.upper = inv_x * (1 + num_u / scaled_u);
        break;
    }
    case CaseId::NegAlpha_NegArg:
        detail::require_positive(d, "(1+alpha^2)x + alpha*tau", p, x);
        env.lower = classical_lower * (1 - a * xa / d * (1 + 1 / (xa * xa)));
        env.upper = inv_x * (1 - a * xa / d / (1 + abar2 / (d * d)));
        break;
    }
    return env;
}

inline MillsRatioAsymptote mills_ratio_asymptote_form(const EsnParams& p) {
    p.validate("mills_ratio_asymptote");
    if (p.alpha >= 0) return {};
    return {SlopeForm::InverseAffine, 1.0 + p.alpha * p.alpha, p.alpha * p.tau};
}

// Leading-order Mills ratio for large x.
template <class Real>
Real mills_ratio_asymptote(const EsnParams& p, const Real& x) {
    auto form = mills_ratio_asymptote_form(p);
    Real den = x;
    if (form.slope_form == SlopeForm::InverseAffine) {
        Real a(p.alpha), t(p.tau);
        den = (1 + a * a) * x + a * t;
    }
    if (!(den > 0))
        throw error(error_kind::domain, "mills_ratio_asymptote",
                    "denominator is not positive (" + detail::where(p, x) + ")");
    return 1 / den;
}

} // namespace esn
