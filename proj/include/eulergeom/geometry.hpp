#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "eulergeom/common.hpp"

namespace eulergeom {

enum class GeometryFamily { Nozzle, Spherical };

// Cross-section A(x). Nozzle: strictly positive C^1 profile on R, pinched
// between Alow and Ahigh. Spherical: A(x) = x^alpha on (0, inf), optionally
// regularized to (x + 1/n)^alpha.
class Geometry {
  public:
    static Geometry nozzle_constant(double value) {
        Geometry g(GeometryFamily::Nozzle);
        if (value <= 0.0) throw DomainError("nozzle_constant: area must be positive");
        g.kind_ = ProfileKind::Constant;
        g.c0_ = value;
        g.alow_ = g.ahigh_ = value;
        return g;
    }

    // A(x) = a + b cos(k x); requires a - |b| > 0
    static Geometry nozzle_cosine(double a, double b, double k) {
        Geometry g(GeometryFamily::Nozzle);
        if (a - std::fabs(b) <= 0.0) throw DomainError("nozzle_cosine: profile must stay positive");
        g.kind_ = ProfileKind::Cosine;
        g.c0_ = a;
        g.c1_ = b;
        g.c2_ = k;
        g.alow_ = a - std::fabs(b);
        g.ahigh_ = a + std::fabs(b);
        return g;
    }

    // Sampled profile, C^1 cubic interpolation with clamped one-sided end slopes.
    static Geometry nozzle_table(std::vector<double> x, std::vector<double> A) {
        Geometry g(GeometryFamily::Nozzle);
        if (x.size() != A.size() || x.size() < 4) throw DomainError("nozzle_table: need >= 4 samples");
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            if (x[i + 1] <= x[i]) throw DomainError("nozzle_table: abscissae must increase");
        for (double v : A)
            if (v <= 0.0) throw DomainError("nozzle_table: area must be positive");
        g.kind_ = ProfileKind::Table;
        g.tx_ = std::move(x);
        g.ta_ = std::move(A);
        g.alow_ = *std::min_element(g.ta_.begin(), g.ta_.end());
        g.ahigh_ = *std::max_element(g.ta_.begin(), g.ta_.end());
        return g;
    }

    static Geometry spherical(double alpha, std::optional<int> regularization_n = std::nullopt) {
        Geometry g(GeometryFamily::Spherical);
        if (alpha <= 0.0) throw DomainError("spherical: alpha must be positive");
        if (regularization_n && *regularization_n < 1)
            throw DomainError("spherical: regularization index must be >= 1");
        g.alpha_ = alpha;
        g.reg_n_ = regularization_n;
        return g;
    }

    GeometryFamily family() const { return family_; }
    double alpha() const { return alpha_; }
    std::optional<int> regularization_n() const { return reg_n_; }
    double area_lower_bound() const { return alow_; }
    double area_upper_bound() const { return ahigh_; }

    Geometry with_regularization(int n) const {
        Geometry g = *this;
        if (family_ == GeometryFamily::Spherical) g.reg_n_ = n;
        return g;  // nozzle: A^n := A
    }

    double area(double x) const {
        if (family_ == GeometryFamily::Spherical) {
            if (reg_n_) return std::pow(x + 1.0 / *reg_n_, alpha_);
            if (x <= 0.0) throw DomainError("spherical area: x must be positive without regularization");
            return std::pow(x, alpha_);
        }
        switch (kind_) {
            case ProfileKind::Constant: return c0_;
            case ProfileKind::Cosine: return c0_ + c1_ * std::cos(c2_ * x);
            case ProfileKind::Table: return table_eval(x);
        }
        return c0_;
    }

    double area_deriv(double x) const {
        if (family_ == GeometryFamily::Spherical) {
            if (reg_n_) return alpha_ * std::pow(x + 1.0 / *reg_n_, alpha_ - 1.0);
            if (x <= 0.0) throw DomainError("spherical area: x must be positive without regularization");
            return alpha_ * std::pow(x, alpha_ - 1.0);
        }
        switch (kind_) {
            case ProfileKind::Constant: return 0.0;
            case ProfileKind::Cosine: return -c1_ * c2_ * std::sin(c2_ * x);
            case ProfileKind::Table: {
                const double h = 1e-6 * (tx_.back() - tx_.front());
                return (table_eval(x + h) - table_eval(x - h)) / (2.0 * h);
            }
        }
        return 0.0;
    }

    // L1 and Linf norms of (dA/dx)_- over [lo, hi]; identically zero for the
    // spherical family (A strictly increasing).
    std::pair<double, double> grad_negative_part_norms(double lo, double hi,
                                                       int samples = 20001) const {
        if (family_ == GeometryFamily::Spherical) return {0.0, 0.0};
        if (hi <= lo) return {0.0, 0.0};
        const double h = (hi - lo) / (samples - 1);
        double l1 = 0.0, linf = 0.0, prev = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double g = -std::min(area_deriv(lo + i * h), 0.0);
            linf = std::max(linf, g);
            if (i > 0) l1 += 0.5 * (prev + g) * h;
            prev = g;
        }
        return {l1, linf};
    }

    // sup over [lo, hi] of |A^n - A|; zero when no regularization applies.
    double regularization_error(double lo, double hi, int samples = 20001) const {
        if (family_ == GeometryFamily::Nozzle) return 0.0;  // A^n := A
        if (!reg_n_) throw NotApplicable("regularization_error: no regularization index set");
        double sup = 0.0;
        const double h = (hi - lo) / (samples - 1);
        for (int i = 0; i < samples; ++i) {
            const double x = lo + i * h;
            const double an = std::pow(x + 1.0 / *reg_n_, alpha_);
            const double a = x > 0.0 ? std::pow(x, alpha_) : 0.0;
            sup = std::max(sup, std::fabs(an - a));
        }
        return sup;
    }

    double domain_left() const {
        return family_ == GeometryFamily::Spherical ? 0.0 : -std::numeric_limits<double>::infinity();
    }

  private:
    enum class ProfileKind { Constant, Cosine, Table };

    explicit Geometry(GeometryFamily f) : family_(f) {}

    double table_eval(double x) const {
        if (x <= tx_.front()) {
            const double m = (ta_[1] - ta_[0]) / (tx_[1] - tx_[0]);
            return ta_.front() + m * (x - tx_.front());
        }
        if (x >= tx_.back()) {
            const std::size_t n = tx_.size();
            const double m = (ta_[n - 1] - ta_[n - 2]) / (tx_[n - 1] - tx_[n - 2]);
            return ta_.back() + m * (x - tx_.back());
        }
        auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - tx_.begin()) - 1;
        const std::size_t n = tx_.size();
        const double h = tx_[i + 1] - tx_[i];
        const double t = (x - tx_[i]) / h;
        // clamped one-sided slopes at the table ends, central in the interior
        auto slope = [&](std::size_t j) {
            if (j == 0) return (ta_[1] - ta_[0]) / (tx_[1] - tx_[0]);
            if (j == n - 1) return (ta_[n - 1] - ta_[n - 2]) / (tx_[n - 1] - tx_[n - 2]);
            return (ta_[j + 1] - ta_[j - 1]) / (tx_[j + 1] - tx_[j - 1]);
        };
        const double m0 = slope(i) * h, m1 = slope(i + 1) * h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * ta_[i] + (t3 - 2 * t2 + t) * m0 +
               (-2 * t3 + 3 * t2) * ta_[i + 1] + (t3 - t2) * m1;
    }

    GeometryFamily family_;
    ProfileKind kind_ = ProfileKind::Constant;
    double c0_ = 1.0, c1_ = 0.0, c2_ = 0.0;
    std::vector<double> tx_, ta_;
    double alpha_ = 1.0;
    std::optional<int> reg_n_;
    double alow_ = 1.0, ahigh_ = 1.0;
};

}  // namespace eulergeom
