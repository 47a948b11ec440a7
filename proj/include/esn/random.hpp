#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "special.hpp"

namespace esn {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream seed for chunk `stream` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// mt19937_64 output is fixed by the standard; the conversions below are
// written out so results do not depend on the library's distributions.
class normal_source {
public:
    explicit normal_source(std::uint64_t seed) : engine_(seed) {}

    // Uniform on (0, 1) with 53 random bits.
    double uniform() {
        for (;;) {
            double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
            if (u > 0) return u;
        }
    }

    // Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        for (;;) {
            double u = 2 * uniform() - 1;
            double v = 2 * uniform() - 1;
            double s = u * u + v * v;
            if (s > 0 && s < 1) {
                double m = std::sqrt(-2 * std::log(s) / s);
                spare_ = v * m;
                has_spare_ = true;
                return u * m;
            }
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0;
    bool has_spare_ = false;
};

struct EsnSample {
    std::vector<double> values;
    std::uint64_t seed = 0;
    EsnParams params;
};

struct sampler_options {
    double acceptance_floor = 1e-4;
    std::size_t chunk_size = 1 << 16;
    unsigned workers = 0;  // 0: one per hardware thread
};

// Normal proposal accepted with probability Phi(alpha z + tau).
class esn_sampler {
public:
    esn_sampler(const EsnParams& p, double acceptance_floor = 1e-4) : alpha_(p.alpha), tau_(p.tau) {
        p.validate("sample");
        double accept = normal_cdf(p.tau / p.alpha_bar());
        if (!(accept >= acceptance_floor))
            throw error(error_kind::rejected_parameters, "sample",
                        "expected acceptance " + std::to_string(accept) + " is below the floor " +
                            std::to_string(acceptance_floor) + " (" + p.describe() + ")");
    }

    double operator()(normal_source& src) const {
        for (;;) {
            double z = src.normal();
            if (src.uniform() < normal_cdf(alpha_ * z + tau_)) return z;
        }
    }

private:
    double alpha_;
    double tau_;
};

inline unsigned resolve_workers(unsigned requested, std::size_t tasks) {
    unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(tasks, 1)));
}

// Runs body(i) for i in [0, n) on up to `workers` threads.  Work items are
// claimed in a fixed interleave so results never depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body body) {
    unsigned w = resolve_workers(workers, n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(w);
    for (unsigned k = 0; k < w; ++k) {
        pool.emplace_back([&, k] {
            try {
                for (std::size_t i = k; i < n; i += w) body(i);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline EsnSample sample(const EsnParams& p, std::int64_t count, std::uint64_t seed,
                        const sampler_options& opt = {}) {
    if (count < 0) throw error(error_kind::domain, "sample", "count must be non-negative");
    EsnSample out;
    out.seed = seed;
    out.params = p;
    if (count == 0) return out;
    esn_sampler draw(p, opt.acceptance_floor);
    out.values.resize(static_cast<std::size_t>(count));
    std::size_t chunk = std::max<std::size_t>(opt.chunk_size, 1);
    std::size_t chunks = (out.values.size() + chunk - 1) / chunk;
    parallel_for(chunks, opt.workers, [&](std::size_t c) {
        normal_source src(derive_seed(seed, c));
        std::size_t end = std::min(out.values.size(), (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) out.values[i] = draw(src);
    });
    return out;
}

} // namespace esn
