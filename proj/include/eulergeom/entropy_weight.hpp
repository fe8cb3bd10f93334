#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "eulergeom/common.hpp"

namespace eulergeom {

enum class WeightKind {
    Constant,
    Linear,
    Quadratic,
    TruncatedQuadratic,  // psi_R(s) = 2 (s^2 - R^2) 1_{|s| >= R}
    SmoothCompactTable,
    FluxSAbs,            // s|s|; not convex, only for the flux-bound diagnostic
};

enum class GrowthClass { Subquadratic, Quadratic, Cubic };

// Weight function psi for entropy pairs. Analytic kinds carry coefficients
// (a + b s + c s^2); the table kind holds samples with cubic interpolation.
class EntropyWeight {
  public:
    static EntropyWeight constant(double a) {
        EntropyWeight w(WeightKind::Constant);
        w.a_ = a;
        return w;
    }
    static EntropyWeight linear(double a, double b) {
        EntropyWeight w(WeightKind::Linear);
        w.a_ = a;
        w.b_ = b;
        return w;
    }
    static EntropyWeight quadratic(double a, double b, double c) {
        EntropyWeight w(WeightKind::Quadratic);
        w.a_ = a;
        w.b_ = b;
        w.c_ = c;
        return w;
    }
    // psi(s) = s^2/2, the energy weight
    static EntropyWeight energy() { return quadratic(0.0, 0.0, 0.5); }

    static EntropyWeight truncated_quadratic(double R) {
        if (R < 0.0) throw DomainError("truncated_quadratic: R must be >= 0");
        EntropyWeight w(WeightKind::TruncatedQuadratic);
        w.cut_ = R;
        return w;
    }

    static EntropyWeight table(std::vector<double> s, std::vector<double> psi) {
        if (s.size() != psi.size() || s.size() < 4)
            throw DomainError("table weight: need >= 4 samples");
        EntropyWeight w(WeightKind::SmoothCompactTable);
        w.ts_ = std::move(s);
        w.tv_ = std::move(psi);
        return w;
    }

    static EntropyWeight flux_s_abs() { return EntropyWeight(WeightKind::FluxSAbs); }

    WeightKind kind() const { return kind_; }
    double cutoff() const { return cut_; }

    bool convex() const { return kind_ != WeightKind::FluxSAbs; }

    GrowthClass growth() const {
        switch (kind_) {
            case WeightKind::Constant:
            case WeightKind::Linear:
            case WeightKind::SmoothCompactTable:
                return GrowthClass::Subquadratic;
            case WeightKind::Quadratic:
            case WeightKind::TruncatedQuadratic:
            case WeightKind::FluxSAbs:
                return GrowthClass::Quadratic;
        }
        return GrowthClass::Quadratic;
    }

    bool has_closed_moments() const {
        return kind_ == WeightKind::Constant || kind_ == WeightKind::Linear ||
               kind_ == WeightKind::Quadratic;
    }

    // polynomial coefficients for the closed-moment path
    double coeff_const() const { return a_; }
    double coeff_lin() const { return b_; }
    double coeff_quad() const { return c_; }

    double operator()(double s) const {
        switch (kind_) {
            case WeightKind::Constant: return a_;
            case WeightKind::Linear: return a_ + b_ * s;
            case WeightKind::Quadratic: return a_ + b_ * s + c_ * s * s;
            case WeightKind::TruncatedQuadratic:
                return std::fabs(s) >= cut_ ? 2.0 * (s * s - cut_ * cut_) : 0.0;
            case WeightKind::SmoothCompactTable: return interp(s);
            case WeightKind::FluxSAbs: return s * std::fabs(s);
        }
        return 0.0;
    }

    double deriv(double s) const {
        switch (kind_) {
            case WeightKind::Constant: return 0.0;
            case WeightKind::Linear: return b_;
            case WeightKind::Quadratic: return b_ + 2.0 * c_ * s;
            case WeightKind::TruncatedQuadratic: return std::fabs(s) >= cut_ ? 4.0 * s : 0.0;
            case WeightKind::SmoothCompactTable: return interp_deriv(s);
            case WeightKind::FluxSAbs: return 2.0 * std::fabs(s);
        }
        return 0.0;
    }

    // s-locations where psi is not smooth; quadratures split here.
    std::vector<double> kinks() const {
        switch (kind_) {
            case WeightKind::TruncatedQuadratic: return {-cut_, cut_};
            case WeightKind::FluxSAbs: return {0.0};
            case WeightKind::SmoothCompactTable: return ts_;  // knots
            default: return {};
        }
    }

  private:
    explicit EntropyWeight(WeightKind k) : kind_(k) {}

    double interp(double s) const {
        if (s <= ts_.front() || s >= ts_.back()) return 0.0;
        auto it = std::upper_bound(ts_.begin(), ts_.end(), s);
        const std::size_t i = static_cast<std::size_t>(it - ts_.begin()) - 1;
        const std::size_t n = ts_.size();
        // C^1 cubic with central slopes, one-sided at the table ends
        auto slope = [&](std::size_t j) {
            if (j == 0) return (tv_[1] - tv_[0]) / (ts_[1] - ts_[0]);
            if (j == n - 1) return (tv_[n - 1] - tv_[n - 2]) / (ts_[n - 1] - ts_[n - 2]);
            return (tv_[j + 1] - tv_[j - 1]) / (ts_[j + 1] - ts_[j - 1]);
        };
        const double h = ts_[i + 1] - ts_[i];
        const double t = (s - ts_[i]) / h;
        const double m0 = slope(i) * h;
        const double m1 = slope(i + 1) * h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * tv_[i] + (t3 - 2 * t2 + t) * m0 +
               (-2 * t3 + 3 * t2) * tv_[i + 1] + (t3 - t2) * m1;
    }

    double interp_deriv(double s) const {
        const double h = 1e-6 * (ts_.back() - ts_.front());
        return (interp(s + h) - interp(s - h)) / (2.0 * h);
    }

    WeightKind kind_;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;
    double cut_ = 0.0;
    std::vector<double> ts_, tv_;
};

}  // namespace eulergeom
