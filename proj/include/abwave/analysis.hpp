#pragma once

#include <optional>
#include <vector>

namespace abwave {

/// Intensity-vs-position record (screen profile).
struct Profile {
    std::vector<double> x;
    std::vector<double> intensity;
};

/// Extracted interference observables.
struct FringeReport {
    double fringe_spacing = 0.0;
    double spacing_uncertainty = 0.0;
    double central_max_position = 0.0;
    double visibility = 0.0;
    std::vector<double> maxima_positions;
    /// Fractional-fringe shift versus a reference pattern, in (-0.5, 0.5];
    /// only the fractional part is observable (the pattern is periodic).
    std::optional<double> shift_vs_reference;
};

/// Locate maxima above 5% of the global max by 3-point quadratic
/// interpolation; spacing = mean adjacent gap, uncertainty = their
/// standard deviation. Throws NumericalError("insufficient fringes")
/// with fewer than 3 maxima in the window.
FringeReport fringe_extract(const Profile& profile, double window_lo, double window_hi,
                            const FringeReport* reference = nullptr);

/// Fractional fringe shift of p2 relative to p1, mapped to (-0.5, 0.5]
/// fringes. Both profiles are demodulated against the same reference
/// carrier at the given spacing and low-passed; the pointwise product
/// c2 * conj(c1) cancels the common envelope and slow carrier drift,
/// so the estimate is insensitive to near-field curvature.
double fringe_phase_shift(const Profile& p1, const Profile& p2, double spacing, double window_lo,
                          double window_hi);

/// Local fringe spacing from the amplitude-weighted phase slope of the
/// demodulated carrier; `spacing_ref` seeds the demodulation and must
/// be within ~25% of the true spacing. Robust to the envelope and to
/// maxima leaving the window.
double carrier_spacing(const Profile& p, double spacing_ref, double window_lo, double window_hi);

/// Relative fringe-spacing change of p2 vs p1 from the slope of the
/// pointwise demodulated phase difference; the (common) envelope and
/// near-field phase curvature cancel, so this resolves changes far
/// below what absolute spacing estimates can.
double carrier_drift(const Profile& p1, const Profile& p2, double spacing, double window_lo,
                     double window_hi);

struct ProfileComparison {
    double max_abs_dev = 0.0;
    double rms_dev = 0.0;
    double shift_estimate = 0.0;
};

/// Deviations between unit-normalized profiles on a common x-grid (p2 is
/// linearly resampled onto p1's grid when needed); shift by
/// cross-correlation peak with quadratic refinement.
ProfileComparison compare_profiles(const Profile& p1, const Profile& p2);

} // namespace abwave
