#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"

using esn::EsnParams;
using esn::Normalization;
using esn_test::R;
using esn_test::d;

namespace {

esn::PrecisionContext lab_ctx(int digits = 40) {
    esn::PrecisionContext c;
    c.digits = digits;
    return c;
}

} // namespace

TEST(RateCoefficients, Kappa) {
    EXPECT_NEAR(esn::kappa<double>({0, 0}, 2), 4 * std::exp(-2.0), 1e-16);
    EXPECT_NEAR(esn::kappa<double>({0, 0}, 2), 0.54134113294645077, 1e-16);
    EXPECT_NEAR(esn::kappa<double>({-1, 0}, 2), 0.40600584970983808, 1e-16);
    EXPECT_EQ(esn::kappa<double>({-1, 0}, 0), 0.0);
}

TEST(RateCoefficients, Omega) {
    EXPECT_NEAR(esn::omega<double>({0, 0}, 1), -29 / (8 * std::exp(1.0)), 1e-15);
    EXPECT_NEAR(esn::omega<double>({0, 0}, 1), -1.3335629742464784, 1e-15);
    EXPECT_NEAR(esn::omega<double>({-1, 0}, 1), -1.1151345560509345, 1e-15);
    EXPECT_EQ(esn::omega<double>({0.5, 1}, 0), 0.0);
    EXPECT_EQ(esn::omega<double>({-2, 0.5}, 0), 0.0);
}

TEST(HFunction, NeedsThirtyDigits) {
    try {
        esn::h_function<R>({0, 0}, R(0), R(100), lab_ctx(25));
        FAIL();
    } catch (const esn::error& e) {
        EXPECT_EQ(e.kind(), esn::error_kind::precision);
    }
}

TEST(HFunction, ShrinksWithLnN) {
    double prev = INFINITY;
    for (double ln_n : {100.0, 1000.0, 10000.0}) {
        double h = std::abs(d(esn::h_function<R>({0, 0}, R(1), R(ln_n), lab_ctx())));
        EXPECT_LT(h, prev);
        prev = h;
    }
}

TEST(HFunction, FirstOrderTermOnGrid) {
    esn::scoped_precision<R> guard(40);
    EsnParams p{0, 0};
    esn::rate_evaluator<R> ev(p, R(1e4), lab_ctx());
    double kmax = 0;
    std::vector<double> grid{-1, 0.5, 1, 2};
    for (double x : grid) kmax = std::max(kmax, std::abs(d(esn::kappa<R>(p, R(x)))));
    for (double x : grid) {
        auto pt = ev.at(R(x));
        EXPECT_LE(std::abs(d(pt.first_order - pt.kappa)), 0.15 * kmax) << x;
    }
}

TEST(HFunction, FirstOrderRatioApproachesOne) {
    double prev = INFINITY;
    for (double ln_n : {1e3, 1e4, 1e5}) {
        esn::scoped_precision<R> guard(40);
        esn::rate_evaluator<R> ev({0, 0}, R(ln_n), lab_ctx());
        auto pt = ev.at(R(1));
        double gap = std::abs(d(pt.first_order / pt.kappa) - 1);
        EXPECT_LT(gap, prev) << ln_n;
        prev = gap;
    }
}

TEST(RateProfile, SecondOrderAndIdentities) {
    esn::scoped_precision<R> guard(40);
    std::vector<R> grid{R(-1), R(0), R(1), R(2)};
    auto prof = esn::rate_profile<R>({0, 0}, grid, R(1e5), lab_ctx());
    ASSERT_EQ(prof.second_order.size(), grid.size());
    EXPECT_LT(prof.monitor_change, 1e-6);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double so = d(prof.second_order[i]), om = d(prof.omega_theory[i]);
        EXPECT_NEAR(so, om, 0.05 * std::max(1.0, std::abs(om))) << i;
        double a = d(prof.identity_via_h[i]), b = d(prof.identity_via_phi_n[i]);
        EXPECT_NEAR(a, b, 1e-3 * std::max(1.0, std::abs(a))) << i;
    }
    EXPECT_EQ(d(prof.second_order[1]), d(prof.second_order[1]));  // finite
}

TEST(RateProfile, FarRightTailVanishes) {
    esn::scoped_precision<R> guard(40);
    auto prof = esn::rate_profile<R>({-1, 0}, {R(40)}, R(1e3), lab_ctx());
    EXPECT_LT(std::abs(d(prof.h[0])), 1e-10);
    EXPECT_LT(std::abs(d(prof.phi_n_minus_g0[0])), 1e-10);
}

TEST(RateProfile, MonitorRejectsUnstableResult) {
    esn::lab_options opt;
    opt.monitor_tol = 1e-40;
    esn::scoped_precision<R> guard(40);
    try {
        esn::rate_profile<R>({0, 0}, {R(1)}, R(1e3), lab_ctx(), opt);
        FAIL();
    } catch (const esn::error& e) {
        EXPECT_EQ(e.kind(), esn::error_kind::precision);
        EXPECT_NE(std::string(e.what()).find("raise the precision"), std::string::npos);
    }
}

TEST(ClosedFormRateCheck, PositiveAndBounded) {
    std::vector<R> grid{R(100), R(1000)};
    esn::scoped_precision<R> guard(40);
    auto r = esn::closed_form_rate_check<R>({0, 0}, R(1), grid, lab_ctx());
    ASSERT_EQ(r.size(), 2u);
    for (auto& v : r) {
        EXPECT_GT(d(v), 0);
        EXPECT_LT(d(v), 10);
    }
    EXPECT_THROW(esn::closed_form_rate_check<R>({0, 0}, R(1), {R(2)}, lab_ctx()), esn::error);
}

TEST(ClosedFormRateCheck, MatchesOracle) {
    // Independent evaluation; the approach to 1 is not monotone at every x.
    std::vector<R> grid{R(100), R(1000), R(10000)};
    esn::scoped_precision<R> guard(40);
    auto n = esn::closed_form_rate_check<R>({0, 0}, R(0.5), grid, lab_ctx());
    EXPECT_NEAR(d(n[0]), 0.990707, 1e-6);
    EXPECT_NEAR(d(n[1]), 0.951873, 1e-6);
    EXPECT_NEAR(d(n[2]), 0.947786, 1e-6);
    // alpha = 1, tau = 0 has cdf Phi^2.
    auto s = esn::closed_form_rate_check<R>({1, 0}, R(2), grid, lab_ctx());
    EXPECT_NEAR(d(s[0]), 0.18927, 1e-5);
    EXPECT_NEAR(d(s[1]), 0.172032, 1e-6);
    EXPECT_NEAR(d(s[2]), 0.270714, 1e-6);
}

TEST(MaximaExperiment, Errors) {
    try {
        esn::run_maxima_experiment<R>({0, 0}, 100, 0, Normalization::Exact, 1);
        FAIL();
    } catch (const esn::error& e) {
        EXPECT_EQ(e.kind(), esn::error_kind::domain);
    }
    try {
        esn::run_maxima_experiment<R>({0, 0}, 1000000, 2000, Normalization::Exact, 1);
        FAIL();
    } catch (const esn::error& e) {
        EXPECT_EQ(e.kind(), esn::error_kind::resource);
    }
}

TEST(MaximaExperiment, DeterministicAcrossWorkers) {
    esn::maxima_options one, four;
    one.workers = 1;
    four.workers = 4;
    auto a = esn::run_maxima_experiment<R>({-1, 0}, 500, 64, Normalization::ClosedForm, 99, {}, one);
    auto b = esn::run_maxima_experiment<R>({-1, 0}, 500, 64, Normalization::ClosedForm, 99, {}, four);
    EXPECT_EQ(a.maxima, b.maxima);
    EXPECT_EQ(a.ks_statistic, b.ks_statistic);
}

TEST(MaximaExperiment, NormalBlockMaximaNearGumbel) {
    auto ex = esn::run_maxima_experiment<R>({0, 0}, 10000, 5000, Normalization::Exact, 2024);
    EXPECT_LE(ex.ks_statistic, 0.05);
    EXPECT_LE(esn::ks_against_exact_law<double>({0, 0}, ex), esn::ks_critical_99(5000));
}

TEST(MaximaExperiment, ExactConstantsBeatClosedForm) {
    std::vector<double> exact, closed;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        exact.push_back(esn::run_maxima_experiment<R>({0, 0}, 1000, 2000, Normalization::Exact, seed).ks_statistic);
        closed.push_back(
            esn::run_maxima_experiment<R>({0, 0}, 1000, 2000, Normalization::ClosedForm, seed).ks_statistic);
    }
    std::nth_element(exact.begin(), exact.begin() + 5, exact.end());
    std::nth_element(closed.begin(), closed.begin() + 5, closed.end());
    EXPECT_LE(exact[5], closed[5]);
}
