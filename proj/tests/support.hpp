#pragma once

#include <esn/esn.hpp>

#include <vector>

namespace esn_test {

using R = esn::mp_real;

inline double d(const R& x) { return x.convert_to<double>(); }

struct cell {
    double alpha;
    double tau;
};

// alpha in {-2,-1,-0.5,0,0.5,1,2} x tau in {-1,-0.5,0,0.5,1}, negative
// slants kept only where the tail results apply.
inline std::vector<cell> parameter_grid() {
    std::vector<cell> out;
    for (double a : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
        for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0})
            if (esn::EsnParams{a, t}.tail_regime_ok()) out.push_back({a, t});
    return out;
}

} // namespace esn_test
