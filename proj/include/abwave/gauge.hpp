#pragma once

#include "abwave/vec.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace abwave {

/// Scalar gauge function G(x, y, t) with evaluable gradient and time
/// derivative. If no analytic gradient is supplied, central differences
/// with step h are used (O(h^2)).
class GaugeFunction {
public:
    using Scalar = std::function<double(double, double, double)>;
    using Grad = std::function<Vec2(double, double, double)>;

    GaugeFunction() : GaugeFunction(zero()) {}

    GaugeFunction(Scalar g, Grad grad = nullptr, Scalar dgdt = nullptr, double fd_step = 1e-5)
        : g_(std::move(g)), grad_(std::move(grad)), dgdt_(std::move(dgdt)), h_(fd_step) {}

    double operator()(double x, double y, double t) const { return g_(x, y, t); }

    Vec2 gradient(double x, double y, double t) const {
        if (grad_) return grad_(x, y, t);
        return {(g_(x + h_, y, t) - g_(x - h_, y, t)) / (2.0 * h_),
                (g_(x, y + h_, t) - g_(x, y - h_, t)) / (2.0 * h_)};
    }

    double time_derivative(double x, double y, double t) const {
        if (dgdt_) return dgdt_(x, y, t);
        return (g_(x, y, t + h_) - g_(x, y, t - h_)) / (2.0 * h_);
    }

    static GaugeFunction zero() {
        return GaugeFunction([](double, double, double) { return 0.0; },
                             [](double, double, double) { return Vec2{0.0, 0.0}; },
                             [](double, double, double) { return 0.0; });
    }

    static GaugeFunction constant(double c) {
        return GaugeFunction([c](double, double, double) { return c; },
                             [](double, double, double) { return Vec2{0.0, 0.0}; },
                             [](double, double, double) { return 0.0; });
    }

    /// G = sum_k c_k x^i_k y^j_k + ct * t. Terms are (i, j, coeff).
    struct PolyTerm {
        int ix = 0;
        int iy = 0;
        double c = 0.0;
    };

    static GaugeFunction polynomial(std::vector<PolyTerm> terms, double ct = 0.0) {
        auto val = [terms, ct](double x, double y, double t) {
            double s = ct * t;
            for (const auto& p : terms) s += p.c * std::pow(x, p.ix) * std::pow(y, p.iy);
            return s;
        };
        auto grad = [terms](double x, double y, double) {
            Vec2 g;
            for (const auto& p : terms) {
                if (p.ix > 0) g.x += p.c * p.ix * std::pow(x, p.ix - 1) * std::pow(y, p.iy);
                if (p.iy > 0) g.y += p.c * p.iy * std::pow(x, p.ix) * std::pow(y, p.iy - 1);
            }
            return g;
        };
        auto dt = [ct](double, double, double) { return ct; };
        return GaugeFunction(val, grad, dt);
    }

private:
    Scalar g_;
    Grad grad_;
    Scalar dgdt_;
    double h_;
};

} // namespace abwave
