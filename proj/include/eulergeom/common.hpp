#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace eulergeom {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Error types surfaced by the library. Each maps to one failure mode of a
// specific operation; see the throwing site for the contract.
struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidOrdering : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotApplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptySupport : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BlowUp : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvexWeight : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoleAt0 : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoleAt1 : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VacuumState : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FitDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedPair : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivisionDomain : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thread cap: EULER_GEOM_THREADS bounds every internal parallel loop.
inline unsigned max_threads() {
    static const unsigned cached = [] {
        unsigned hw = std::thread::hardware_concurrency();
        if (hw == 0) hw = 1;
        if (const char* env = std::getenv("EULER_GEOM_THREADS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 1 && static_cast<unsigned long>(v) < hw) hw = static_cast<unsigned>(v);
            if (v >= 1 && static_cast<unsigned long>(v) >= hw) hw = static_cast<unsigned>(v);
        }
        return hw;
    }();
    return cached;
}

// Deterministic static partition; body(i) must only write state owned by i.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    unsigned nthreads = max_threads();
    if (nthreads <= 1 || count < 2048) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Portable uniform doubles from a 64-bit generator. std::uniform_real_distribution
// is implementation-defined, which would break byte-stable outputs across builds.
struct UniformRng {
    std::uint64_t state;

    explicit UniformRng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

}  // namespace eulergeom
