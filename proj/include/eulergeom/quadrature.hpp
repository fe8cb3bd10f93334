#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "eulergeom/common.hpp"

namespace eulergeom {

struct QuadratureRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

namespace detail {

inline double jacobi_poly(int n, double a, double b, double x) {
    if (n == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
    for (int k = 2; k <= n; ++k) {
        const double k2ab = 2.0 * k + a + b;
        const double a1 = 2.0 * k * (k + a + b) * (k2ab - 2.0);
        const double a2 = (k2ab - 1.0) * (a * a - b * b);
        const double a3 = (k2ab - 2.0) * (k2ab - 1.0) * k2ab;
        const double a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * k2ab;
        double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

inline double jacobi_poly_deriv(int n, double a, double b, double x) {
    if (n == 0) return 0.0;
    return 0.5 * (n + a + b + 1.0) * jacobi_poly(n - 1, a + 1.0, b + 1.0, x);
}

}  // namespace detail

// Gauss-Jacobi rule for ∫_{-1}^1 f(t) (1-t)^a (1+t)^b dt. Newton iteration with
// root deflation; weights from the derivative formula.
inline QuadratureRule gauss_jacobi(int n, double a, double b) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        // Chebyshev-like initial guess, warm-started from the previous root
        double x = -std::cos(kPi * (2.0 * k + 1.0) / (2.0 * n));
        if (k > 0) x = 0.5 * (x + rule.nodes[k - 1]);
        for (int it = 0; it < 100; ++it) {
            double defl = 0.0;
            for (int j = 0; j < k; ++j) defl += 1.0 / (x - rule.nodes[j]);
            const double p = detail::jacobi_poly(n, a, b, x);
            const double dp = detail::jacobi_poly_deriv(n, a, b, x);
            const double delta = -p / (dp - defl * p);
            x += delta;
            if (std::fabs(delta) < 1e-15) break;
        }
        rule.nodes[k] = x;
    }
    const double lognorm = (a + b + 1.0) * std::log(2.0) + std::lgamma(a + n + 1.0) +
                           std::lgamma(b + n + 1.0) - std::lgamma(n + 1.0) -
                           std::lgamma(a + b + n + 1.0);
    const double norm = std::exp(lognorm);
    for (int k = 0; k < n; ++k) {
        const double x = rule.nodes[k];
        const double dp = detail::jacobi_poly_deriv(n, a, b, x);
        rule.weights[k] = norm / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

inline QuadratureRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

// Process-wide cache of Legendre rules (nodes are pure functions of n).
inline const QuadratureRule& cached_legendre(int n) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
    return it->second;
}

template <typename F>
double integrate_gl(const F& f, double lo, double hi, int n = 20) {
    const QuadratureRule& r = cached_legendre(n);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k)
        sum += r.weights[k] * f(mid + half * r.nodes[k]);
    return sum * half;
}

// Gauss-Legendre over consecutive panels defined by sorted breakpoints.
template <typename F>
double integrate_panels(const F& f, const std::vector<double>& breaks, int n = 20) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] <= breaks[i]) continue;
        total += integrate_gl(f, breaks[i], breaks[i + 1], n);
    }
    return total;
}

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth, double width_floor) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    // a rounding-width interval cannot be refined further; its contribution is
    // O(|f| * width), below any meaningful tolerance
    if (b - a <= width_floor) return left + right;
    if (depth <= 0) throw QuadratureFailure("adaptive Simpson: depth exhausted before tolerance");
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, width_floor) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, width_floor);
}

}  // namespace detail

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int maxdepth = 48) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double width_floor = 1e-13 * (b - a) + 1e-300;
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, maxdepth, width_floor);
}

}  // namespace eulergeom
