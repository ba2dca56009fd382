#include "abwave/analysis.hpp"

#include "abwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace abwave {

namespace {

double wrap_half(double f) {
    // map to (-0.5, 0.5]
    f -= std::round(f);
    if (f <= -0.5) f += 1.0;
    return f;
}

std::vector<double> resample(const Profile& src, const std::vector<double>& grid) {
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        auto it = std::lower_bound(src.x.begin(), src.x.end(), x);
        if (it == src.x.begin() || it == src.x.end()) {
            out[i] = (it == src.x.begin()) ? src.intensity.front() : src.intensity.back();
            continue;
        }
        const std::size_t hi = it - src.x.begin();
        const double w = (x - src.x[hi - 1]) / (src.x[hi] - src.x[hi - 1]);
        out[i] = (1.0 - w) * src.intensity[hi - 1] + w * src.intensity[hi];
    }
    return out;
}

} // namespace

FringeReport fringe_extract(const Profile& profile, double window_lo, double window_hi,
                            const FringeReport* reference) {
    if (profile.x.size() != profile.intensity.size() || profile.x.size() < 8)
        throw ConfigError("fringe_extract: malformed profile");

    std::size_t lo = 0, hi = profile.x.size();
    while (lo < hi && profile.x[lo] < window_lo) ++lo;
    while (hi > lo && profile.x[hi - 1] > window_hi) --hi;
    if (hi - lo < 8) throw ConfigError("fringe_extract: window too narrow");

    double global_max = 0.0;
    for (std::size_t i = lo; i < hi; ++i) global_max = std::max(global_max, profile.intensity[i]);
    if (global_max <= 0.0) throw NumericalError("fringe_extract: empty profile");
    const double threshold = 0.05 * global_max;

    FringeReport rep;
    std::vector<double> heights;
    for (std::size_t i = std::max<std::size_t>(lo, 1); i + 1 < hi; ++i) {
        const double im = profile.intensity[i - 1], i0 = profile.intensity[i],
                     ip = profile.intensity[i + 1];
        if (i0 < threshold || i0 < im || i0 <= ip) continue;
        // 3-point quadratic vertex
        const double denom = im - 2.0 * i0 + ip;
        const double frac = (denom != 0.0) ? 0.5 * (im - ip) / denom : 0.0;
        const double dx = profile.x[i + 1] - profile.x[i];
        rep.maxima_positions.push_back(profile.x[i] + frac * dx);
        heights.push_back(i0 - 0.25 * (im - ip) * frac);
    }
    if (rep.maxima_positions.size() < 3)
        throw NumericalError("fringe_extract: insufficient fringes (< 3 maxima)");

    std::vector<double> gaps;
    for (std::size_t i = 1; i < rep.maxima_positions.size(); ++i)
        gaps.push_back(rep.maxima_positions[i] - rep.maxima_positions[i - 1]);
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    rep.fringe_spacing = mean;
    rep.spacing_uncertainty = std::sqrt(var / gaps.size());

    const std::size_t best = std::max_element(heights.begin(), heights.end()) - heights.begin();
    rep.central_max_position = rep.maxima_positions[best];

    // contrast against the minima flanking the central maximum
    double i_min = global_max;
    for (std::size_t i = lo; i < hi; ++i) {
        const double x = profile.x[i];
        if (std::abs(x - rep.central_max_position) < 1.2 * mean &&
            std::abs(x - rep.central_max_position) > 0.2 * mean)
            i_min = std::min(i_min, profile.intensity[i]);
    }
    rep.visibility = (global_max - i_min) / (global_max + i_min);

    if (reference) {
        const double raw =
            (rep.central_max_position - reference->central_max_position) / rep.fringe_spacing;
        rep.shift_vs_reference = wrap_half(raw);
    }
    return rep;
}

namespace {

struct Demod {
    std::vector<double> x;
    std::vector<double> re, im;
};

// Window, remove the smooth background, demodulate against the
// reference carrier exp(+i 2 pi x / spacing), low-pass the complex
// signal. The result's phase tracks the local fringe phase; envelope
// and slow structure drop out of phase differences.
Demod demodulate(const Profile& p, const std::vector<double>& intensity, double spacing,
                 double window_lo, double window_hi) {
    Demod d;
    std::vector<double> raw;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        if (p.x[i] < window_lo || p.x[i] > window_hi) continue;
        d.x.push_back(p.x[i]);
        raw.push_back(intensity[i]);
    }
    const std::size_t n = d.x.size();
    if (n < 8) throw ConfigError("fringe analysis: window too narrow");

    auto smooth = [&](const std::vector<double>& re, const std::vector<double>& im, double sig,
                      std::vector<double>& sre, std::vector<double>& sim) {
        sre.assign(n, 0.0);
        sim.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double wr = 0.0, wi = 0.0, wsum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double t = (d.x[j] - d.x[i]) / sig;
                if (std::abs(t) > 4.0) continue;
                const double w = std::exp(-0.5 * t * t);
                wsum += w;
                wr += w * re[j];
                if (!im.empty()) wi += w * im[j];
            }
            sre[i] = wr / wsum;
            sim[i] = im.empty() ? 0.0 : wi / wsum;
        }
    };

    std::vector<double> bg, none;
    smooth(raw, {}, spacing, bg, none);
    const double kref = 2.0 * M_PI / spacing;
    std::vector<double> zr(n), zi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = raw[i] - bg[i];
        zr[i] = s * std::cos(kref * d.x[i]);
        zi[i] = s * std::sin(kref * d.x[i]);
    }
    smooth(zr, zi, 0.5 * spacing, d.re, d.im);
    return d;
}

} // namespace

double fringe_phase_shift(const Profile& p1, const Profile& p2, double spacing, double window_lo,
                          double window_hi) {
    if (p1.x.size() != p1.intensity.size() || p2.x.size() != p2.intensity.size() ||
        p1.x.size() < 8)
        throw ConfigError("fringe_phase_shift: malformed profile");
    if (!(spacing > 0.0)) throw ConfigError("fringe_phase_shift: spacing must be positive");
    const Demod c1 = demodulate(p1, p1.intensity, spacing, window_lo, window_hi);
    const Demod c2 = demodulate(p1, resample(p2, p1.x), spacing, window_lo, window_hi);
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < c1.x.size(); ++i) {
        // c2 * conj(c1)
        sr += c2.re[i] * c1.re[i] + c2.im[i] * c1.im[i];
        si += c2.im[i] * c1.re[i] - c2.re[i] * c1.im[i];
    }
    if (sr == 0.0 && si == 0.0) throw NumericalError("fringe_phase_shift: no carrier");
    return wrap_half(std::atan2(si, sr) / (2.0 * M_PI));
}

double carrier_drift(const Profile& p1, const Profile& p2, double spacing, double window_lo,
                     double window_hi) {
    if (p1.x.size() != p1.intensity.size() || p2.x.size() != p2.intensity.size() ||
        p1.x.size() < 8)
        throw ConfigError("carrier_drift: malformed profile");
    if (!(spacing > 0.0)) throw ConfigError("carrier_drift: spacing must be positive");
    const Demod c1 = demodulate(p1, p1.intensity, spacing, window_lo, window_hi);
    const Demod c2 = demodulate(p1, resample(p2, p1.x), spacing, window_lo, window_hi);
    const std::size_t n = c1.x.size();
    // rotate the pointwise product c2 conj(c1) by its mean phase so the
    // residual phases sit near zero (no wrapping in the regression)
    double zr = 0.0, zi = 0.0;
    std::vector<double> pr(n), pi(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        pr[i] = c2.re[i] * c1.re[i] + c2.im[i] * c1.im[i];
        pi[i] = c2.im[i] * c1.re[i] - c2.re[i] * c1.im[i];
        w[i] = std::hypot(pr[i], pi[i]);
        zr += pr[i];
        zi += pi[i];
    }
    const double zn = std::hypot(zr, zi);
    if (zn == 0.0) throw NumericalError("carrier_drift: no carrier");
    zr /= zn;
    zi /= zn;
    // weighted least-squares slope of the residual phase vs x over the
    // interior (the smoothing kernel's edge reach is excluded)
    const double margin = std::min(1.5 * spacing, 0.25 * (window_hi - window_lo));
    const double ilo = window_lo + margin, ihi = window_hi - margin;
    double wsum = 0.0, xbar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (c1.x[i] < ilo || c1.x[i] > ihi) w[i] = 0.0;
        wsum += w[i];
        xbar += w[i] * c1.x[i];
    }
    if (wsum == 0.0) throw NumericalError("carrier_drift: degenerate window");
    xbar /= wsum;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::atan2(pi[i] * zr - pr[i] * zi, pr[i] * zr + pi[i] * zi);
        num += w[i] * (c1.x[i] - xbar) * d;
        den += w[i] * (c1.x[i] - xbar) * (c1.x[i] - xbar);
    }
    if (den == 0.0) throw NumericalError("carrier_drift: degenerate window");
    // phase slope = k2 - k1; relative spacing change = -(k2 - k1)/k
    return -(num / den) * spacing / (2.0 * M_PI);
}

double carrier_spacing(const Profile& p, double spacing_ref, double window_lo, double window_hi) {
    if (p.x.size() != p.intensity.size() || p.x.size() < 8)
        throw ConfigError("carrier_spacing: malformed profile");
    if (!(spacing_ref > 0.0)) throw ConfigError("carrier_spacing: spacing must be positive");
    // iterate: a seed off the true spacing leaves a residual phase
    // slope whose estimate is slightly biased toward the seed, so
    // re-seed with each estimate until it settles
    double est = spacing_ref;
    for (int pass = 0; pass < 4; ++pass) {
        const Demod c = demodulate(p, p.intensity, est, window_lo, window_hi);
        // amplitude-weighted mean phase slope of consecutive samples:
        // arg(c_{i+1} conj(c_i)) -> deviation of the local wavenumber
        // from the reference; skip the smoothing kernel's edge reach
        // (capped so narrow windows keep an interior)
        const double margin = std::min(1.5 * est, 0.25 * (window_hi - window_lo));
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i + 1 < c.x.size(); ++i) {
            if (c.x[i] < window_lo + margin || c.x[i + 1] > window_hi - margin) continue;
            const double sr = c.re[i + 1] * c.re[i] + c.im[i + 1] * c.im[i];
            const double si = c.im[i + 1] * c.re[i] - c.re[i + 1] * c.im[i];
            const double w = std::hypot(c.re[i], c.im[i]) * std::hypot(c.re[i + 1], c.im[i + 1]);
            num += w * std::atan2(si, sr) / (c.x[i + 1] - c.x[i]);
            den += w;
        }
        if (den == 0.0) throw NumericalError("carrier_spacing: no carrier");
        const double k_local = 2.0 * M_PI / est - num / den;
        if (!(k_local > 0.0)) throw NumericalError("carrier_spacing: nonpositive wavenumber");
        est = 2.0 * M_PI / k_local;
    }
    return est;
}

ProfileComparison compare_profiles(const Profile& p1, const Profile& p2) {
    if (p1.x.empty() || p2.x.empty()) throw ConfigError("compare_profiles: empty profile");
    if (p2.x.front() > p1.x.back() || p2.x.back() < p1.x.front())
        throw ConfigError("compare_profiles: disjoint x-ranges");

    std::vector<double> a = p1.intensity;
    std::vector<double> b = resample(p2, p1.x);
    auto normalize = [](std::vector<double>& v) {
        const double s = std::accumulate(v.begin(), v.end(), 0.0);
        if (s > 0.0)
            for (double& x : v) x /= s;
    };
    normalize(a);
    normalize(b);

    ProfileComparison cmp;
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(a[i] - b[i]);
        cmp.max_abs_dev = std::max(cmp.max_abs_dev, d);
        sq += d * d;
    }
    cmp.rms_dev = std::sqrt(sq / a.size());

    // cross-correlation peak with quadratic refinement
    const int n = static_cast<int>(a.size());
    const int max_lag = n / 4;
    int best_lag = 0;
    double best = -1.0, best_m = 0.0, best_p = 0.0;
    auto corr = [&](int lag) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const int k = i + lag;
            if (k >= 0 && k < n) s += a[i] * b[k];
        }
        return s;
    };
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
        const double s = corr(lag);
        if (s > best) {
            best = s;
            best_lag = lag;
        }
    }
    best_m = corr(best_lag - 1);
    best_p = corr(best_lag + 1);
    const double denom = best_m - 2.0 * best + best_p;
    const double frac = (denom != 0.0) ? 0.5 * (best_m - best_p) / denom : 0.0;
    const double dx = (p1.x.back() - p1.x.front()) / (n - 1);
    // correlation peaks at lag*dx = s when p2(x) = p1(x - s)
    cmp.shift_estimate = (best_lag + frac) * dx;
    return cmp;
}

} // namespace abwave
