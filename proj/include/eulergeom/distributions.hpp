#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "eulergeom/common.hpp"

namespace eulergeom {

// Real function sampled on the uniform symmetric grid x_j = -L + j (2L/n),
// j = 0 .. n-1 (n a power of two; x = 0 is a node).
struct SampledFunction {
    double L = 8.0;
    std::vector<double> values;

    SampledFunction() = default;
    SampledFunction(double L_, std::size_t n) : L(L_), values(n, 0.0) {
        if (n == 0 || (n & (n - 1)) != 0) throw DomainError("SampledFunction: n must be a power of two");
    }

    std::size_t size() const { return values.size(); }
    double h() const { return 2.0 * L / static_cast<double>(values.size()); }
    double x(std::size_t j) const { return -L + static_cast<double>(j) * h(); }

    template <typename F>
    static SampledFunction sample(const F& f, double L_ = 8.0, std::size_t n = 1u << 16) {
        SampledFunction s(L_, n);
        for (std::size_t j = 0; j < n; ++j) s.values[j] = f(s.x(j));
        return s;
    }

    // cubic (Catmull-Rom) interpolation; zero outside the grid
    double operator()(double xq) const {
        const double hh = h();
        const double fj = (xq + L) / hh;
        if (fj < 1.0 || fj > static_cast<double>(values.size()) - 3.0) {
            // fall back to linear / zero near the edges
            if (fj < 0.0 || fj > static_cast<double>(values.size()) - 1.0) return 0.0;
            const std::size_t j = static_cast<std::size_t>(fj);
            const double t = fj - static_cast<double>(j);
            const double right = (j + 1 < values.size()) ? values[j + 1] : 0.0;
            return (1.0 - t) * values[j] + t * right;
        }
        const std::size_t j = static_cast<std::size_t>(fj);
        const double t = fj - static_cast<double>(j);
        const double pm1 = values[j - 1], p0 = values[j], p1 = values[j + 1], p2 = values[j + 2];
        return p0 + 0.5 * t * (p1 - pm1 +
                               t * (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2 +
                                    t * (3.0 * (p0 - p1) + p2 - pm1)));
    }

    double l2_norm() const {
        double s = 0.0;
        for (double v : values) s += v * v;
        return std::sqrt(s * h());
    }
};

enum class AtomKind { Dirac, PV, Heaviside, CosineIntegral, Regular };

// One tagged term of a distributional expansion: coefficient * kind(s - location),
// or coefficient * payload(s) for the Regular kind.
struct SingularTerm {
    AtomKind kind = AtomKind::Regular;
    double location = 0.0;
    double coefficient = 0.0;
    std::function<double(double)> payload;  // Regular only

    static SingularTerm dirac(double c, double w) { return {AtomKind::Dirac, c, w, {}}; }
    static SingularTerm pv(double c, double w) { return {AtomKind::PV, c, w, {}}; }
    static SingularTerm heaviside(double c, double w) { return {AtomKind::Heaviside, c, w, {}}; }
    static SingularTerm cosine_int(double c, double w) { return {AtomKind::CosineIntegral, c, w, {}}; }
    static SingularTerm regular(std::function<double(double)> f, double w = 1.0) {
        return {AtomKind::Regular, 0.0, w, std::move(f)};
    }
};

// Fitted singular structure of the fractional derivatives of the kernel
// profile:
//   d f = a1 (H(s+1) + H(s-1)) + a2 (CI(s+1) - CI(s-1)) + r
//   D f = a1 (delta(s+1)+delta(s-1)) + a2 (PV(s+1)-PV(s-1))
//         + a3 (H(s+1)-H(s-1)) + a4 (CI(s+1)+CI(s-1)) + q
struct SingularExpansion {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a4 = 0.0;
    std::shared_ptr<SampledFunction> remainder_d;  // r
    std::shared_ptr<SampledFunction> remainder_D;  // q
};

}  // namespace eulergeom
