#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "precision.hpp"

namespace esn {

template <class Real>
struct quad_result {
    Real value;
    Real error;
    int subdivisions = 0;
};

struct quad_options {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].  Only
// the non-negative half is stored; odd indices are Kronrod-only nodes.
inline constexpr std::array<const char*, 8> gk15_nodes = {
    "0",
    "0.207784955007898467600689403773244913479784407145170649713846",
    "0.405845151377397166906606412076961463347382014099370126387043",
    "0.586087235467691130294144838258729598436780750604360951304993",
    "0.741531185599394439863864773280788407074147647141390260119955",
    "0.864864423359769072789712788640926201210972307074088148601458",
    "0.949107912342758524526189684047851262400770937670617783548769",
    "0.991455371120812639206854697526328516642044338370334701291087",
};

inline constexpr std::array<const char*, 8> gk15_kronrod_weights = {
    "0.209482141084727828012999174891714263697762080223704316712998",
    "0.204432940075298892414161999234649084716517604180718357424471",
    "0.190350578064785409913256402421013682826078075455358355885441",
    "0.169004726639267902826583426598550284106244900302944241497340",
    "0.140653259715525918745189590510237920399889757247998575561745",
    "0.104790010322250183839876322541518017443756654213830611893391",
    "0.0630920926299785532907006631892042866650711572115507071136055",
    "0.0229353220105292249637320080589695919935608112757469922675074",
};

// Gauss weights for the even-indexed nodes 0, 2, 4, 6.
inline constexpr std::array<const char*, 4> gk15_gauss_weights = {
    "0.417959183673469387755102040816326530612244897959183673469388",
    "0.381830050505118944950369775488975133878365083533862734751083",
    "0.279705391489276667901467771423779582486925065226598764537014",
    "0.129484966168869693270611432679082018328587402259946663977209",
};

template <class Real>
struct gk15_table {
    std::array<Real, 8> x;
    std::array<Real, 8> wk;
    std::array<Real, 4> wg;
};

template <class Real>
gk15_table<Real> make_gk15_table() {
    gk15_table<Real> t;
    for (std::size_t i = 0; i < 8; ++i) {
        t.x[i] = from_string<Real>(gk15_nodes[i]);
        t.wk[i] = from_string<Real>(gk15_kronrod_weights[i]);
    }
    for (std::size_t i = 0; i < 4; ++i) t.wg[i] = from_string<Real>(gk15_gauss_weights[i]);
    return t;
}

// Tables are rebuilt whenever the working precision changes.
template <class Real>
const gk15_table<Real>& gk15() {
    if constexpr (is_builtin_v<Real>) {
        static const gk15_table<Real> table = make_gk15_table<Real>();
        return table;
    } else {
        thread_local std::map<unsigned, gk15_table<Real>> cache;
        unsigned prec = Real::default_precision();
        auto it = cache.find(prec);
        if (it == cache.end()) it = cache.emplace(prec, make_gk15_table<Real>()).first;
        return it->second;
    }
}

template <class Real>
struct panel {
    Real a, b, value, error;
    bool operator<(const panel& o) const { return error < o.error; }
};

template <class Real, class F>
panel<Real> gk15_panel(F& f, const Real& a, const Real& b) {
    using std::abs;
    const auto& t = gk15<Real>();
    Real half = (b - a) / 2;
    Real mid = (a + b) / 2;
    Real fc = f(mid);
    Real kron = t.wk[0] * fc;
    Real gauss = t.wg[0] * fc;
    Real resabs = abs(kron);
    std::array<Real, 8> lo, hi;
    for (std::size_t i = 1; i < 8; ++i) {
        Real dx = half * t.x[i];
        lo[i] = f(mid - dx);
        hi[i] = f(mid + dx);
        Real sum = lo[i] + hi[i];
        kron += t.wk[i] * sum;
        resabs += t.wk[i] * (abs(lo[i]) + abs(hi[i]));
        if (i % 2 == 0) gauss += t.wg[i / 2] * sum;
    }
    Real mean = kron / 2;
    Real resasc = t.wk[0] * abs(fc - mean);
    for (std::size_t i = 1; i < 8; ++i)
        resasc += t.wk[i] * (abs(lo[i] - mean) + abs(hi[i] - mean));
    kron *= half;
    gauss *= half;
    resabs *= abs(half);
    resasc *= abs(half);

    // Error heuristic as in QUADPACK's qk15.
    Real err = abs(kron - gauss);
    if (resasc != 0 && err != 0) {
        using std::pow;
        Real scaled = pow(200 * err / resasc, Real(1.5));
        err = resasc * (scaled < 1 ? scaled : Real(1));
    }
    Real floor = 50 * working_epsilon<Real>() * resabs;
    if (err < floor) err = floor;
    return {a, b, kron, err};
}

} // namespace detail

// Adaptive 7/15-point Gauss-Kronrod over the panels given by consecutive
// breakpoints.  Splits the panel with the largest error estimate until
// the total estimate drops below max(abs_tol, rel_tol * |value|).
template <class Real, class F>
quad_result<Real> integrate(F f, const std::vector<Real>& breakpoints, const quad_options& opt,
                            const char* operation = "quadrature") {
    using std::abs;
    std::priority_queue<detail::panel<Real>> heap;
    Real total = 0, total_err = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        auto p = detail::gk15_panel(f, breakpoints[i], breakpoints[i + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(std::move(p));
    }
    int subdivisions = 0;
    Real rel = opt.rel_tol, abst = opt.abs_tol;
    auto target = [&] {
        Real r = rel * abs(total);
        return r > abst ? r : abst;
    };
    while (total_err > target()) {
        if (subdivisions >= opt.max_subdivisions) {
            std::ostringstream msg;
            msg << "no convergence after " << subdivisions << " subdivisions, achieved error "
                << to_double(total_err);
            throw error(error_kind::numeric, operation, msg.str(), to_double(total_err));
        }
        auto worst = heap.top();
        heap.pop();
        Real mid = (worst.a + worst.b) / 2;
        auto left = detail::gk15_panel(f, worst.a, mid);
        auto right = detail::gk15_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
        ++subdivisions;
        // Refresh the running sums now and then so cancellation in the
        // incremental updates cannot stall convergence.
        if (subdivisions % 64 == 0) {
            auto copy = heap;
            total = 0;
            total_err = 0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                copy.pop();
            }
        }
    }
    return {total, total_err, subdivisions};
}

template <class Real, class F>
quad_result<Real> integrate(F f, const Real& a, const Real& b, const quad_options& opt,
                            const char* operation = "quadrature") {
    return integrate<Real>(std::move(f), std::vector<Real>{a, b}, opt, operation);
}

// Integral of f over [0, inf) through u = t / (1 - t).
template <class Real, class F>
quad_result<Real> integrate_half_line(F f, const quad_options& opt,
                                      const char* operation = "quadrature") {
    auto g = [&f](const Real& t) -> Real {
        Real one_minus = 1 - t;
        Real u = t / one_minus;
        return f(u) / (one_minus * one_minus);
    };
    std::vector<Real> bp{Real(0), Real(0.25), Real(0.5), Real(0.75), Real(1)};
    return integrate<Real>(g, bp, opt, operation);
}

} // namespace esn
