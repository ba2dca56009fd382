#pragma once

#include "abwave/analysis.hpp"
#include "abwave/eikonal.hpp"
#include "abwave/gauge.hpp"
#include "abwave/potentials.hpp"
#include "abwave/wavesolver.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace abwave {

enum class ScenarioKind { Free, DoubleSlit, AbSolenoid, ToroidalChannel };

/// Named gauge for audits (polynomial in x, y plus optional linear t
/// term; audits use static gauges so discrete covariance is exact).
struct GaugeSpec {
    std::string name;
    std::vector<GaugeFunction::PolyTerm> terms;
    double ct = 0.0;

    GaugeFunction make() const { return GaugeFunction::polynomial(terms, ct); }
    bool is_identity() const { return terms.empty() && ct == 0.0; }
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Free;

    // grid
    int nx = 768, ny = 512;
    double dx = 0.0625, dy = 0.0625, dt = 0.004;

    // packet
    Vec2 packet_center{4.8, 16.0};
    double sigma = 1.4;
    double sigma_y = 5.0; // <= 0 means isotropic
    Vec2 k0{6.0, 0.0};

    double charge = -1.0;
    double mass = 1.0;

    // geometry (double slit family); y values relative to center_y
    double center_y = 16.0;
    double slit_separation = 8.5;
    double slit_width = 2.0;
    double barrier_x = 12.2;
    double barrier_thickness = 0.25;
    double screen_x = 44.8125;

    double solenoid_flux = 0.0;   // ab_solenoid
    double channel_length = 3.0;  // toroidal_channel
    double channel_upper_a = 0.0;
    double channel_lower_a = 0.0;

    bool closed_box = false;       // no absorbing edges (unitarity runs)
    double absorber_strength = 80.0;
    int absorber_cells = 96; // y-edge strip depth (x edges fixed at 16)
    int max_steps = 50000;
    int snapshot_every = 0;
    double stop_fraction = 0.99;
    std::uint64_t seed = 1;

    std::vector<GaugeSpec> gauges; // audit list (identity implied)

    void validate() const;
    GridSpec grid() const;

    /// Scenario potential in the base (untransformed) gauge.
    PotentialField build_potential() const;
    std::shared_ptr<const Mask> build_mask() const;

    /// Interferometer arm polylines source -> slit center -> screen
    /// center (double-slit family only).
    RayPath arm_path(bool upper) const;
    double packet_energy() const { return 0.5 * mass * k0.dot(k0); }
};

struct RunMetadata {
    std::string config_hash;
    int steps = 0;
    double final_time = 0.0;
    double stability_ratio = 0.0;
    double crossed_fraction = 0.0;
    double final_norm = 0.0;
    std::vector<double> norm_history; // sampled every 50 steps
    std::vector<std::string> warnings;
};

struct Snapshot {
    double time = 0.0;
    std::vector<double> density; // |psi|^2 per node
};

struct SimulationResult {
    Profile profile; // time-integrated current through the screen row
    std::vector<Snapshot> snapshots;
    RunMetadata metadata;
};

/// Full-wave run of a scenario. When `gauge` is non-null the potentials
/// and initial state are consistently gauge-transformed (observables
/// must not change). `fixed_steps` > 0 forces an exact step count
/// (audit branches must stay in lockstep).
SimulationResult run_scenario(const ScenarioConfig& config, const GaugeFunction* gauge = nullptr,
                              int fixed_steps = 0);

struct AuditBranch {
    std::string gauge_name;
    double snapshot_max_dev = 0.0;    // max node-wise |psi|^2 deviation
    double profile_max_dev = 0.0;     // on unit-normalized profiles
    double profile_rms_dev = 0.0;
    Vec4 wavevector;                  // fixed-gauge prescription, subtraction form
    Vec4 wavevector_frozen_ref;       // source reference frozen in base gauge
    double loop_phase = 0.0;          // eikonal closed-loop phase difference
};

struct AuditReport {
    std::vector<AuditBranch> branches; // first entry is the identity
    int steps = 0;
    bool failed = false;
    std::string failure;
};

/// Runs the identical scenario under every gauge (identity first) with
/// consistently transformed potentials and initial state; reports
/// observable deviations plus the gauge-dependent fixed-gauge track numbers.
AuditReport gauge_audit(const ScenarioConfig& config, const std::vector<GaugeSpec>& gauges);

struct EffectRow {
    double a = 0.0;
    double fullwave_spacing = 0.0;
    double fullwave_shift = 0.0;        // fringes vs a = 0, unwrapped
    double fixedgauge_wavelength = 0.0; // 2 pi / (k - q a)
    double fixedgauge_spacing = 0.0;    // lambda(a) L / d
    double eikonal_shift = 0.0;         // arm phase difference / 2 pi
    double botharm_profile_dev = 0.0;   // identical channels on both arms vs baseline
    double botharm_spacing = 0.0;       // fringe spacing of the both-arm control
};

struct EffectReport {
    std::vector<EffectRow> rows;
    double baseline_spacing = 0.0;
};

/// The a-sweep of the toroidal-channel proposal: single-arm full-wave
/// runs vs the fixed-gauge eikonal prediction, plus the both-arm
/// common-phase control. a_values must include 0.
EffectReport toroidal_effect_experiment(const ScenarioConfig& base,
                                        const std::vector<double>& a_values);

/// Default analysis window: middle 60% of the screen around center_y.
std::pair<double, double> default_window(const ScenarioConfig& config);

std::string config_hash(const ScenarioConfig& config);

} // namespace abwave
