#include "abwave/potentials.hpp"

#include "abwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace abwave {

namespace {

constexpr double kGL5Nodes[5] = {-0.906179845938664, -0.538469310105683, 0.0,
                                 0.538469310105683, 0.906179845938664};
constexpr double kGL5Weights[5] = {0.236926885056189, 0.478628670499366, 0.568888888888889,
                                   0.478628670499366, 0.236926885056189};

// distance from point p to segment a-b
double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 == 0.0) return (p - a).norm();
    const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * s)).norm();
}

// parameter interval of segment p0->p1 inside rect, or empty
std::pair<double, double> clip_to_rect(const Rect& r, const Vec2& p0, const Vec2& p1) {
    double s0 = 0.0, s1 = 1.0;
    const double d[2] = {p1.x - p0.x, p1.y - p0.y};
    const double lo[2] = {r.x0, r.y0}, hi[2] = {r.x1, r.y1};
    const double p[2] = {p0.x, p0.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (p[axis] < lo[axis] || p[axis] > hi[axis]) return {0.0, 0.0};
        } else {
            double a = (lo[axis] - p[axis]) / d[axis];
            double b = (hi[axis] - p[axis]) / d[axis];
            if (a > b) std::swap(a, b);
            s0 = std::max(s0, a);
            s1 = std::min(s1, b);
        }
    }
    if (s1 <= s0) return {0.0, 0.0};
    return {s0, s1};
}

} // namespace

PotentialField::PotentialField() : PotentialField(zero()) {}

PotentialField::PotentialField(ScalarFn phi, VectorFn a, LineIntegralFn closure,
                               std::vector<Vec2> singular_points)
    : phi_(std::move(phi)), a_(std::move(a)), closure_(std::move(closure)),
      singular_points_(std::move(singular_points)) {}

double PotentialField::phi(double x, double y, double t) const { return phi_(x, y, t); }

Vec2 PotentialField::a(double x, double y, double t) const { return a_(x, y, t); }

PotentialField PotentialField::zero() {
    return PotentialField([](double, double, double) { return 0.0; },
                          [](double, double, double) { return Vec2{}; },
                          [](const Vec2&, const Vec2&, double) { return 0.0; });
}

PotentialField PotentialField::uniform_channel(const Rect& region, const Vec2& a0) {
    if (region.area() <= 0.0) throw ConfigError("uniform_channel: degenerate region");
    auto a = [region, a0](double x, double y, double) {
        return region.contains(x, y) ? a0 : Vec2{};
    };
    auto closure = [region, a0](const Vec2& p0, const Vec2& p1, double) {
        const auto [s0, s1] = clip_to_rect(region, p0, p1);
        return a0.dot(p1 - p0) * (s1 - s0);
    };
    return PotentialField([](double, double, double) { return 0.0; }, a, closure);
}

PotentialField PotentialField::infinite_solenoid(const Vec2& center, double flux) {
    if (!std::isfinite(flux)) throw ConfigError("infinite_solenoid: flux must be finite");
    const double scale = flux / (2.0 * M_PI);
    auto a = [center, scale](double x, double y, double) {
        const Vec2 r{x - center.x, y - center.y};
        const double r2 = r.dot(r);
        if (r2 == 0.0) throw NumericalError("infinite_solenoid: evaluation at the singular axis");
        return Vec2{-scale * r.y / r2, scale * r.x / r2};
    };
    // Integral of the azimuthal field along a straight segment is the
    // signed angle swept around the center; a straight segment not
    // through the center sweeps less than pi, so atan2 is exact.
    auto closure = [center, scale](const Vec2& p0, const Vec2& p1, double) {
        const Vec2 r0 = p0 - center;
        const Vec2 r1 = p1 - center;
        const double cross = r0.x * r1.y - r0.y * r1.x;
        const double dot = r0.dot(r1);
        if (cross == 0.0 && dot <= 0.0)
            throw NumericalError("infinite_solenoid: segment through the singular axis");
        return scale * std::atan2(cross, dot);
    };
    return PotentialField([](double, double, double) { return 0.0; }, a, closure, {center});
}

PotentialField PotentialField::from_worldlines(std::vector<Worldline> sources, double alpha) {
    auto src = std::make_shared<std::vector<Worldline>>(std::move(sources));
    auto phi = [src, alpha](double x, double y, double t) {
        return alpha * retarded_potential(*src, {t, x, y, 0.0}).t;
    };
    auto a = [src, alpha](double x, double y, double t) {
        const Vec4 A = retarded_potential(*src, {t, x, y, 0.0});
        return Vec2{alpha * A.x, alpha * A.y};
    };
    return PotentialField(phi, a);
}

PotentialField PotentialField::composite(std::vector<PotentialField> parts) {
    auto shared = std::make_shared<std::vector<PotentialField>>(std::move(parts));
    bool all_closures = true;
    std::vector<Vec2> singular;
    for (const auto& p : *shared) {
        all_closures = all_closures && p.has_closure();
        singular.insert(singular.end(), p.singular_points().begin(), p.singular_points().end());
    }
    auto phi = [shared](double x, double y, double t) {
        double s = 0.0;
        for (const auto& p : *shared) s += p.phi(x, y, t);
        return s;
    };
    auto a = [shared](double x, double y, double t) {
        Vec2 s;
        for (const auto& p : *shared) s = s + p.a(x, y, t);
        return s;
    };
    LineIntegralFn closure;
    if (all_closures) {
        closure = [shared](const Vec2& p0, const Vec2& p1, double t) {
            double s = 0.0;
            for (const auto& p : *shared) s += p.closure_(p0, p1, t);
            return s;
        };
    }
    return PotentialField(phi, a, closure, std::move(singular));
}

PotentialField apply_gauge(const PotentialField& field, const GaugeFunction& g) {
    auto base_phi = field.phi_;
    auto base_a = field.a_;
    auto phi = [base_phi, g](double x, double y, double t) {
        return base_phi(x, y, t) - g.time_derivative(x, y, t);
    };
    auto a = [base_a, g](double x, double y, double t) {
        return base_a(x, y, t) + g.gradient(x, y, t);
    };
    PotentialField::LineIntegralFn closure;
    if (field.closure_) {
        auto base = field.closure_;
        // grad G integrates exactly to G(p1) - G(p0)
        closure = [base, g](const Vec2& p0, const Vec2& p1, double t) {
            return base(p0, p1, t) + g(p1.x, p1.y, t) - g(p0.x, p0.y, t);
        };
    }
    return PotentialField(phi, a, closure, field.singular_points());
}

FieldStrength field_strength(const PotentialField& field, const Vec2& point, double time,
                             double h) {
    for (const auto& s : field.singular_points())
        if ((point - s).norm() <= h)
            throw NumericalError("field_strength: evaluation at a singular point");
    const double x = point.x, y = point.y;
    FieldStrength f;
    const Vec2 a_tp = field.a(x, y, time + h);
    const Vec2 a_tm = field.a(x, y, time - h);
    f.e.x = -(field.phi(x + h, y, time) - field.phi(x - h, y, time)) / (2 * h) -
            (a_tp.x - a_tm.x) / (2 * h);
    f.e.y = -(field.phi(x, y + h, time) - field.phi(x, y - h, time)) / (2 * h) -
            (a_tp.y - a_tm.y) / (2 * h);
    f.b_z = (field.a(x + h, y, time).y - field.a(x - h, y, time).y) / (2 * h) -
            (field.a(x, y + h, time).x - field.a(x, y - h, time).x) / (2 * h);
    return f;
}

double edge_line_integral(const PotentialField& field, const Vec2& p0, const Vec2& p1,
                          double time) {
    for (const auto& s : field.singular_points())
        if (segment_distance(s, p0, p1) < 1e-12)
            throw NumericalError("edge_line_integral: segment crosses a singular point");
    if (field.closure_) return field.closure_(p0, p1, time);
    const Vec2 d = p1 - p0;
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double s = 0.5 * (1.0 + kGL5Nodes[i]);
        const Vec2 p = p0 + d * s;
        sum += 0.5 * kGL5Weights[i] * field.a(p.x, p.y, time).dot(d);
    }
    return sum;
}

} // namespace abwave
