#pragma once

#include "abwave/potentials.hpp"
#include "abwave/vec.hpp"
#include "abwave/wavesolver.hpp"

#include <vector>

namespace abwave {

/// Piecewise-straight spatial path; the unit tangent is constant per
/// segment (curl-free assumption).
struct RayPath {
    std::vector<Vec2> vertices;

    double length() const;
    static RayPath line(const Vec2& a, const Vec2& b) { return {{a, b}}; }
};

/// Piecewise-straight path in spacetime (t, x, y, z); physical electron
/// paths must be timelike or null segment by segment.
struct RayPath4 {
    std::vector<Vec4> vertices;
};

/// Accumulated semiclassical phase along a path (radians, hbar = 1).
struct EikonalSolution {
    double s_total = 0.0;
    std::vector<double> per_segment;
    /// local wavenumber sampled at segment midpoints
    std::vector<double> k_mid;
};

/// S = int [ sqrt(2m(E + q Phi)) + q A . t_hat ] dl, adaptive Simpson
/// to 1e-10 relative on the Phi term, exact edge integrals for the A
/// term when the field carries a closure. Throws NumericalError
/// ("turning point") where 2m(E + q Phi) < 0.
EikonalSolution eikonal_phase(const RayPath& path, const PotentialField& field, double energy,
                              double q, double m = 1.0, double time = 0.0);

/// S(path1) - S(path2) for paths sharing endpoints; reduces to
/// -q * (enclosed flux) for equal-geometry paths around a flux line.
double ab_phase_difference(const RayPath& path1, const RayPath& path2,
                           const PotentialField& field, double energy, double q, double m = 1.0);

/// Covariant (Klein-Gordon) eikonal phase: G(end) - G(start) =
/// int (q A_mu - m t_mu) dx^mu with t_mu the unit tangent and
/// A_mu dx^mu = Phi dt + A . dx, metric
/// (+,-,-,-). Throws NumericalError on spacelike segments.
EikonalSolution covariant_eikonal_phase(const RayPath4& path, const PotentialField& field,
                                        double m, double q);

/// Energy-eigenstate relativistic eikonal: spatial phase
/// int [ sqrt((E + q Phi)^2 - m^2) + q A . t_hat ] dl.
/// Throws NumericalError ("forbidden region") below the mass shell.
EikonalSolution energy_eigen_eikonal(const RayPath& path, const PotentialField& field,
                                     double total_energy, double m, double q, double time = 0.0);

/// E_kin = m (1/sqrt(1 - v^2) - 1), the kinetic energy entering the
/// non-relativistic comparison.
double relativistic_kinetic_energy(double v, double m = 1.0);

/// The fixed-gauge prescription: k_mu(x) = k0_mu - q [A_mu(x) -
/// A_mu(source)]. Gauge-dependent by construction; the audit reports
/// how it varies between gauge branches.
Vec4 fixed_gauge_wavevector(const PotentialField& field, const Vec2& source_point, const Vec2& x,
                            const Vec4& k0, double q, double time = 0.0);

/// Residuals of the amplitude/phase split of the Schroedinger equation:
/// r1 = (grad S - qA)^2 - 2m(E + q Phi) - lap(a)/a (Hamilton-Jacobi),
/// r2 = div[a^2 (grad S - qA)] (stationary continuity).
/// S is obtained by quality-guided unwrapping of arg psi from the
/// max-amplitude node; nodes with |psi| below amp_threshold (or without
/// a full difference stencil) are excluded.
struct HJResidual {
    std::vector<double> r1;
    std::vector<double> r2;
    std::vector<bool> included;
    std::size_t excluded_count = 0;
};
HJResidual hj_residual(const WaveField& state, const PotentialField& field, double energy,
                       double q, double m = 1.0, double amp_threshold = 1e-8);

} // namespace abwave
