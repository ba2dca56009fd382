#pragma once

#include "abwave/vec.hpp"

#include <string>
#include <vector>

namespace abwave {

/// Sampled particle worldline (t, x, y, z) with signed charge.
/// Samples must have strictly increasing t and subluminal segment speeds
/// (natural units, c = 1); both are checked at construction.
class Worldline {
public:
    Worldline(std::vector<Vec4> samples, double charge);

    static Worldline from_csv(const std::string& path, double charge);

    const std::vector<Vec4>& samples() const { return samples_; }
    double charge() const { return charge_; }

    /// Position at time t by piecewise-linear interpolation.
    /// t must lie within the sampled range.
    Vec4 position(double t) const;

    /// Velocity on the segment containing t.
    Vec4 velocity(double t) const;

    double t_min() const { return samples_.front().t; }
    double t_max() const { return samples_.back().t; }

private:
    std::vector<Vec4> samples_;
    double charge_;
};

/// Lienard-Wiechert 4-potential (Phi, Ax, Ay, Az) at a field point,
/// summed over sources. The retarded condition t_ret = t - |x - r(t_ret)|
/// is solved by bisection on the bracketing worldline segment to
/// |residual| < 1e-12. Throws NumericalError("insufficient history")
/// when the retarded time falls outside a worldline's coverage.
Vec4 retarded_potential(const std::vector<Worldline>& sources, const Vec4& field_point);

} // namespace abwave
