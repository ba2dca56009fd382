#include "abwave/worldline.hpp"

#include "abwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace abwave {

Worldline::Worldline(std::vector<Vec4> samples, double charge)
    : samples_(std::move(samples)), charge_(charge) {
    if (samples_.size() < 2) throw ConfigError("worldline needs at least two samples");
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        const Vec4 d = samples_[i] - samples_[i - 1];
        if (d.t <= 0.0) throw ConfigError("worldline samples must have strictly increasing t");
        if (d.spatial_norm() >= d.t)
            throw ConfigError("worldline segment is superluminal (speed >= 1)");
    }
}

Worldline Worldline::from_csv(const std::string& path, double charge) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open worldline CSV: " + path);
    std::vector<Vec4> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        // skip a header row
        if (line.find_first_not_of("0123456789+-.eE, \t\r") != std::string::npos) continue;
        std::istringstream ss(line);
        Vec4 p;
        char comma;
        if (ss >> p.t >> comma >> p.x >> comma >> p.y >> comma >> p.z) pts.push_back(p);
    }
    return Worldline(std::move(pts), charge);
}

Vec4 Worldline::position(double t) const {
    if (t < t_min() || t > t_max())
        throw NumericalError("worldline: time outside sampled range");
    auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                               [](const Vec4& s, double tt) { return s.t < tt; });
    if (it == samples_.begin()) ++it;
    const Vec4& b = *it;
    const Vec4& a = *(it - 1);
    const double w = (t - a.t) / (b.t - a.t);
    return a + (b - a) * w;
}

Vec4 Worldline::velocity(double t) const {
    if (t < t_min() || t > t_max())
        throw NumericalError("worldline: time outside sampled range");
    auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                               [](const Vec4& s, double tt) { return s.t < tt; });
    if (it == samples_.begin()) ++it;
    const Vec4& b = *it;
    const Vec4& a = *(it - 1);
    const double dt = b.t - a.t;
    return {1.0, (b.x - a.x) / dt, (b.y - a.y) / dt, (b.z - a.z) / dt};
}

namespace {

// residual of the retarded condition, f(t') = t - t' - |x - r(t')|.
// f is strictly decreasing in t' (sources are subluminal).
double retardation_residual(const Worldline& w, const Vec4& fp, double tp) {
    const Vec4 r = w.position(tp);
    const Vec4 d = fp - r;
    return fp.t - tp - d.spatial_norm();
}

Vec4 single_source_potential(const Worldline& w, const Vec4& fp) {
    const double f_lo = retardation_residual(w, fp, w.t_min());
    const double f_hi = retardation_residual(w, fp, w.t_max());
    // need f(t_min) >= 0 >= f(t_hi) with t_hi clipped to fp.t
    double hi = std::min(w.t_max(), fp.t);
    if (hi <= w.t_min() || f_lo < 0.0)
        throw NumericalError("retarded_potential: insufficient history for field point");
    (void)f_hi;
    double lo = w.t_min();
    if (retardation_residual(w, fp, hi) > 0.0)
        throw NumericalError("retarded_potential: insufficient history for field point");
    while (hi - lo > 1e-13 * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (retardation_residual(w, fp, mid) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double t_ret = 0.5 * (lo + hi);
    // polish: |residual| < 1e-12
    for (int i = 0; i < 4; ++i) {
        const double f = retardation_residual(w, fp, t_ret);
        if (std::abs(f) < 1e-12) break;
        t_ret += f; // contraction for subluminal sources
        t_ret = std::clamp(t_ret, w.t_min(), std::min(w.t_max(), fp.t));
    }

    const Vec4 r = w.position(t_ret);
    const Vec4 v = w.velocity(t_ret);
    const Vec4 d = fp - r;
    const double R = d.spatial_norm();
    if (R < 1e-300) throw NumericalError("retarded_potential: field point on the worldline");
    const double kappa = 1.0 - (d.x * v.x + d.y * v.y + d.z * v.z) / R;
    const double denom = 4.0 * M_PI * kappa * R;
    return {w.charge() / denom, w.charge() * v.x / denom, w.charge() * v.y / denom,
            w.charge() * v.z / denom};
}

} // namespace

Vec4 retarded_potential(const std::vector<Worldline>& sources, const Vec4& field_point) {
    Vec4 total;
    for (const auto& w : sources) total = total + single_source_potential(w, field_point);
    return total;
}

} // namespace abwave
