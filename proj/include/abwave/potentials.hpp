#pragma once

#include "abwave/gauge.hpp"
#include "abwave/vec.hpp"
#include "abwave/worldline.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace abwave {

/// Electric field 2-vector and out-of-plane magnetic field.
struct FieldStrength {
    Vec2 e;
    double b_z = 0.0;
};

/// Electromagnetic potentials Phi(x, y, t) and A(x, y, t) on the 2D
/// simulation plane. Natural units: hbar = c = m = 1.
///
/// An analytic line-integral closure, when present, supplies exact
/// edge integrals of A; otherwise 5-point Gauss-Legendre quadrature
/// per segment is used. Evaluation is pure and thread-safe.
class PotentialField {
public:
    using ScalarFn = std::function<double(double, double, double)>;
    using VectorFn = std::function<Vec2(double, double, double)>;
    /// Exact integral of A . dl from p0 to p1 at time t.
    using LineIntegralFn = std::function<double(const Vec2&, const Vec2&, double)>;

    PotentialField();
    PotentialField(ScalarFn phi, VectorFn a, LineIntegralFn closure = nullptr,
                   std::vector<Vec2> singular_points = {});

    double phi(double x, double y, double t) const;
    Vec2 a(double x, double y, double t) const;
    bool has_closure() const { return static_cast<bool>(closure_); }
    const std::vector<Vec2>& singular_points() const { return singular_points_; }

    // --- factories ---

    /// Zero potentials everywhere.
    static PotentialField zero();

    /// Uniform vector potential a0 inside an axis-aligned rectangle,
    /// zero outside; Phi = 0. The idealized toroidal-solenoid bore.
    /// Rejects a degenerate (zero-area) region.
    static PotentialField uniform_channel(const Rect& region, const Vec2& a0);

    /// Idealized infinite solenoid: A azimuthal with magnitude
    /// flux / (2 pi r) outside the axis; B = 0 away from the axis,
    /// loop integral around the center equals flux. The center itself
    /// is a declared singular point.
    static PotentialField infinite_solenoid(const Vec2& center, double flux);

    /// Retarded potentials sourced by particle worldlines, evaluated on
    /// the z = 0 plane and scaled by the free coupling alpha.
    static PotentialField from_worldlines(std::vector<Worldline> sources, double alpha = 1.0);

    /// Pointwise sum of parts (closures compose when all parts have one).
    static PotentialField composite(std::vector<PotentialField> parts);

private:
    ScalarFn phi_;
    VectorFn a_;
    LineIntegralFn closure_;
    std::vector<Vec2> singular_points_;

    friend PotentialField apply_gauge(const PotentialField&, const GaugeFunction&);
    friend double edge_line_integral(const PotentialField&, const Vec2&, const Vec2&, double);
};

/// Gauge transformation of the potentials: A -> A + grad G,
/// Phi -> Phi - dG/dt. Field strengths are unchanged. The matching
/// wave-function rotation is psi -> psi * exp(i q G) (wavesolver).
PotentialField apply_gauge(const PotentialField& field, const GaugeFunction& g);

/// E = -grad Phi - dA/dt, B_z = dAy/dx - dAx/dy by central differences
/// with step h. Throws NumericalError within h of a declared singular
/// point.
FieldStrength field_strength(const PotentialField& field, const Vec2& point, double time,
                             double h = 1e-4);

/// Integral of A . dl along the straight segment p0 -> p1. Uses the
/// analytic closure when present, else 5-point Gauss-Legendre.
/// Throws NumericalError if the segment passes through a declared
/// singular point.
double edge_line_integral(const PotentialField& field, const Vec2& p0, const Vec2& p1,
                          double time);

} // namespace abwave
