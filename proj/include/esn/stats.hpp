#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace esn {

// Two-sided Kolmogorov-Smirnov distance between the empirical CDF of
// `sorted` (ascending) and `ref`.
template <class Cdf>
double ks_statistic(const std::vector<double>& sorted, Cdf ref) {
    const double n = static_cast<double>(sorted.size());
    double d = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double f = ref(sorted[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// Asymptotic 99% critical value of the KS statistic.
inline double ks_critical_99(std::size_t n) {
    return 1.63 / std::sqrt(static_cast<double>(n));
}

// Dvoretzky-Kiefer-Wolfowitz half-width at the given confidence.
inline double dkw_epsilon(std::size_t n, double confidence = 0.99) {
    return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(n)));
}

} // namespace esn
