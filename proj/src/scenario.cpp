#include "abwave/scenario.hpp"

#include "abwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abwave {

namespace {

constexpr double kWallBand = 2.0; // corridor wall thickness in cells
constexpr int kAbsorberCellsX = 16;  // normal incidence, shallow strip suffices

bool in_slit(double y, double yc, double d, double w) {
    return std::abs(y - (yc + 0.5 * d)) <= 0.5 * w || std::abs(y - (yc - 0.5 * d)) <= 0.5 * w;
}

} // namespace

void ScenarioConfig::validate() const {
    grid().validate();
    const double x_max = nx * dx, y_max = ny * dy;
    if (packet_center.x <= 0 || packet_center.x >= x_max || packet_center.y <= 0 ||
        packet_center.y >= y_max)
        throw InvariantViolation("packet center outside grid");
    if (screen_x <= 0 || screen_x >= x_max)
        throw InvariantViolation("screen outside grid");
    if (kind != ScenarioKind::Free) {
        if (screen_x <= barrier_x + barrier_thickness)
            throw InvariantViolation("screen strictly downstream of barrier violated");
        if (barrier_x <= 0 || barrier_x + barrier_thickness >= x_max)
            throw InvariantViolation("barrier outside grid");
        if (slit_separation <= slit_width)
            throw InvariantViolation("slit separation must exceed slit width");
        if (center_y + 0.5 * slit_separation + slit_width >= y_max ||
            center_y - 0.5 * slit_separation - slit_width <= 0)
            throw InvariantViolation("slits outside grid");
    }
    if (kind == ScenarioKind::ToroidalChannel) {
        if (barrier_x + barrier_thickness + channel_length >= screen_x)
            throw InvariantViolation("channel must end before the screen");
    }
    if (kind == ScenarioKind::AbSolenoid) {
        // the solenoid axis must sit inside the barrier wall (shielded)
        if (in_slit(center_y, center_y, slit_separation, slit_width))
            throw InvariantViolation("solenoid not enclosed by wall mask");
    }
}

GridSpec ScenarioConfig::grid() const {
    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    g.dx = dx;
    g.dy = dy;
    g.origin = {0.0, 0.0};
    g.dt = dt;
    return g;
}

PotentialField ScenarioConfig::build_potential() const {
    switch (kind) {
    case ScenarioKind::Free:
    case ScenarioKind::DoubleSlit:
        return PotentialField::zero();
    case ScenarioKind::AbSolenoid: {
        const Vec2 center{barrier_x + 0.5 * barrier_thickness + 0.25 * dx,
                          center_y + 0.25 * dy};
        return PotentialField::infinite_solenoid(center, solenoid_flux);
    }
    case ScenarioKind::ToroidalChannel: {
        const double x0 = barrier_x + barrier_thickness;
        const double x1 = x0 + channel_length;
        std::vector<PotentialField> parts;
        const double centers[2] = {center_y + 0.5 * slit_separation,
                                   center_y - 0.5 * slit_separation};
        const double amps[2] = {channel_upper_a, channel_lower_a};
        for (int arm = 0; arm < 2; ++arm) {
            const Rect r{x0, centers[arm] - 0.5 * slit_width, x1, centers[arm] + 0.5 * slit_width};
            parts.push_back(PotentialField::uniform_channel(r, {amps[arm], 0.0}));
        }
        return PotentialField::composite(std::move(parts));
    }
    }
    throw ConfigError("unknown scenario kind");
}

std::shared_ptr<const Mask> ScenarioConfig::build_mask() const {
    const GridSpec g = grid();
    Mask m = Mask::interior(g);
    if (!closed_box) {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                if (i < kAbsorberCellsX || i >= nx - kAbsorberCellsX ||
                    j < absorber_cells || j >= ny - absorber_cells)
                    m.kind[g.idx(i, j)] = Node::Absorber;
    }
    if (kind == ScenarioKind::DoubleSlit || kind == ScenarioKind::AbSolenoid ||
        kind == ScenarioKind::ToroidalChannel) {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const double x = g.x(i), y = g.y(j);
                if (x >= barrier_x && x <= barrier_x + barrier_thickness &&
                    !in_slit(y, center_y, slit_separation, slit_width))
                    m.kind[g.idx(i, j)] = Node::Wall;
            }
    }
    if (kind == ScenarioKind::ToroidalChannel) {
        const double x0 = barrier_x + barrier_thickness;
        const double x1 = x0 + channel_length;
        const double wt = kWallBand * dy;
        const double centers[2] = {center_y + 0.5 * slit_separation,
                                   center_y - 0.5 * slit_separation};
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const double x = g.x(i), y = g.y(j);
                if (x < x0 || x > x1) continue;
                for (const double sc : centers) {
                    const double edge_hi = sc + 0.5 * slit_width;
                    const double edge_lo = sc - 0.5 * slit_width;
                    if ((y > edge_hi && y <= edge_hi + wt) || (y < edge_lo && y >= edge_lo - wt))
                        m.kind[g.idx(i, j)] = Node::Wall;
                }
            }
    }
    return std::make_shared<const Mask>(std::move(m));
}

RayPath ScenarioConfig::arm_path(bool upper) const {
    const double sc = center_y + (upper ? 0.5 : -0.5) * slit_separation;
    const double exit_x = barrier_x + barrier_thickness +
                          (kind == ScenarioKind::ToroidalChannel ? channel_length : 0.0);
    RayPath p;
    p.vertices = {packet_center, {barrier_x, sc}, {exit_x, sc}, {screen_x, center_y}};
    return p;
}

std::pair<double, double> default_window(const ScenarioConfig& config) {
    const double half = 0.3 * config.ny * config.dy;
    return {config.center_y - half, config.center_y + half};
}

SimulationResult run_scenario(const ScenarioConfig& config, const GaugeFunction* gauge,
                              int fixed_steps) {
    config.validate();
    const GridSpec g = config.grid();
    auto mask = config.build_mask();
    PotentialField field = config.build_potential();
    if (gauge) field = apply_gauge(field, *gauge);

    const double q = config.charge;
    const LinkPhases links = LinkPhases::build(g, field, q, 0.0);
    // kinetic-momentum-k0 preparation: for a gauge branch the gauged A
    // also supplies the psi -> psi e^{iqG} rotation (global phase apart)
    WaveField state = init_packet(g, mask, config.packet_center, config.sigma, config.k0,
                                 config.sigma_y, &field, q);
    const Propagator prop(g, mask, links, q, config.mass, config.absorber_strength);

    SimulationResult res;
    res.metadata.config_hash = config_hash(config);
    res.metadata.stability_ratio = g.stability_ratio();

    const int is = static_cast<int>(std::lround((config.screen_x - g.origin.x) / g.dx));
    if (is < 0 || is + 1 >= g.nx) throw InvariantViolation("screen outside grid");
    res.profile.x.resize(g.ny);
    res.profile.intensity.assign(g.ny, 0.0);
    for (int j = 0; j < g.ny; ++j) res.profile.x[j] = g.y(j);

    double crossed = 0.0;
    const int limit = fixed_steps > 0 ? fixed_steps : config.max_steps;
    int step_count = 0;
    for (; step_count < limit; ++step_count) {
        prop.step(state);
        // time-integrated probability current through the screen column
        double flux = 0.0;
        for (int j = 0; j < g.ny; ++j) {
            const std::size_t e = static_cast<std::size_t>(j) * (g.nx - 1) + is;
            const Complex hop = std::conj(state.psi[g.idx(is, j)]) *
                                std::polar(1.0, -links.theta_x[e]) *
                                state.psi[g.idx(is + 1, j)];
            const double jx = hop.imag() / (config.mass * g.dx);
            res.profile.intensity[j] += jx * g.dt;
            flux += jx * g.dt * g.dy;
        }
        crossed += flux;

        if (config.snapshot_every > 0 && (step_count + 1) % config.snapshot_every == 0) {
            Snapshot s;
            s.time = state.time;
            s.density.resize(g.nodes());
            for (std::size_t n = 0; n < g.nodes(); ++n) s.density[n] = std::norm(state.psi[n]);
            res.snapshots.push_back(std::move(s));
        }
        if (step_count % 50 == 0) res.metadata.norm_history.push_back(state.norm2());
        if (fixed_steps == 0 && step_count % 10 == 9) {
            const double norm = state.norm2();
            const double absorbed_elsewhere = std::max(0.0, 1.0 - norm - crossed);
            if (crossed >= config.stop_fraction * (1.0 - absorbed_elsewhere)) {
                ++step_count;
                break;
            }
        }
    }

    res.metadata.steps = step_count;
    res.metadata.final_time = state.time;
    res.metadata.final_norm = state.norm2();
    res.metadata.crossed_fraction = crossed;
    if (crossed < 0.5 && !config.closed_box)
        res.metadata.warnings.push_back("probability trapped: less than 50% reached the screen");
    for (double& v : res.profile.intensity) v = std::max(0.0, v);
    return res;
}

AuditReport gauge_audit(const ScenarioConfig& config, const std::vector<GaugeSpec>& gauges) {
    if (gauges.empty()) throw ConfigError("gauge_audit: at least one gauge required");
    AuditReport report;

    ScenarioConfig cfg = config;
    if (cfg.snapshot_every <= 0) cfg.snapshot_every = std::max(1, cfg.max_steps / 1000) * 100;

    const double q = cfg.charge;
    const double energy = cfg.packet_energy();
    const Vec4 k0v{energy, cfg.k0.x, cfg.k0.y, 0.0};
    const Vec2 source = cfg.packet_center;
    const Vec2 probe =
        cfg.kind == ScenarioKind::ToroidalChannel
            ? Vec2{cfg.barrier_x + cfg.barrier_thickness + 0.5 * cfg.channel_length,
                   cfg.center_y + 0.5 * cfg.slit_separation}
            : Vec2{cfg.screen_x, cfg.center_y};
    const PotentialField base_field = cfg.build_potential();
    const Vec2 a_source_base = base_field.a(source.x, source.y, 0.0);
    const double phi_source_base = base_field.phi(source.x, source.y, 0.0);

    SimulationResult identity_run;
    try {
        identity_run = run_scenario(cfg);
    } catch (const std::exception& e) {
        report.failed = true;
        report.failure = std::string("identity branch: ") + e.what();
        return report;
    }
    report.steps = identity_run.metadata.steps;

    auto fixedgauge_track = [&](const PotentialField& f, AuditBranch& b) {
        b.wavevector = fixed_gauge_wavevector(f, source, probe, k0v, q);
        const Vec2 a_probe = f.a(probe.x, probe.y, 0.0);
        b.wavevector_frozen_ref = {k0v.t - q * (f.phi(probe.x, probe.y, 0.0) - phi_source_base),
                                   k0v.x - q * (a_probe.x - a_source_base.x),
                                   k0v.y - q * (a_probe.y - a_source_base.y), 0.0};
        if (cfg.kind != ScenarioKind::Free)
            b.loop_phase = ab_phase_difference(cfg.arm_path(true), cfg.arm_path(false), f, energy,
                                               q, cfg.mass);
    };

    AuditBranch ident;
    ident.gauge_name = "identity";
    fixedgauge_track(base_field, ident);
    report.branches.push_back(ident);

    for (const auto& spec : gauges) {
        if (spec.is_identity()) continue;
        AuditBranch b;
        b.gauge_name = spec.name;
        const GaugeFunction gf = spec.make();
        try {
            const SimulationResult run = run_scenario(cfg, &gf, identity_run.metadata.steps);
            for (std::size_t s = 0;
                 s < std::min(run.snapshots.size(), identity_run.snapshots.size()); ++s) {
                for (std::size_t n = 0; n < run.snapshots[s].density.size(); ++n)
                    b.snapshot_max_dev =
                        std::max(b.snapshot_max_dev, std::abs(run.snapshots[s].density[n] -
                                                              identity_run.snapshots[s].density[n]));
            }
            const ProfileComparison cmp = compare_profiles(identity_run.profile, run.profile);
            b.profile_max_dev = cmp.max_abs_dev;
            b.profile_rms_dev = cmp.rms_dev;
            fixedgauge_track(apply_gauge(base_field, gf), b);
        } catch (const std::exception& e) {
            report.failed = true;
            report.failure = spec.name + ": " + e.what();
        }
        report.branches.push_back(b);
    }
    return report;
}

EffectReport toroidal_effect_experiment(const ScenarioConfig& base,
                                        const std::vector<double>& a_values) {
    if (base.kind != ScenarioKind::ToroidalChannel)
        throw ConfigError("toroidal_effect_experiment: scenario must be toroidal_channel");
    if (std::none_of(a_values.begin(), a_values.end(), [](double a) { return a == 0.0; }))
        throw ConfigError("toroidal_effect_experiment: a_values must include 0");

    const double q = base.charge;
    const double k = base.k0.norm();
    const double energy = base.packet_energy();
    const double arm_length = base.screen_x - (base.barrier_x + 0.5 * base.barrier_thickness);
    // the corridor exit acts as the diffracting aperture; window just the
    // central three maxima (edge-absorber reflections contaminate further out)
    const double exit_length =
        base.screen_x - (base.barrier_x + base.barrier_thickness + base.channel_length);
    const double spacing0 = (2.0 * M_PI / k) * exit_length / base.slit_separation;

    ScenarioConfig cfg = base;
    cfg.channel_upper_a = 0.0;
    cfg.channel_lower_a = 0.0;
    const SimulationResult baseline = run_scenario(cfg);
    const double wlo = base.center_y - 1.45 * spacing0;
    const double whi = base.center_y + 1.45 * spacing0;
    const FringeReport base_rep = fringe_extract(baseline.profile, wlo, whi);

    EffectReport report;
    report.baseline_spacing = base_rep.fringe_spacing;

    Profile prev_profile = baseline.profile;
    double prev_shift = 0.0;
    for (const double a : a_values) {
        EffectRow row;
        row.a = a;
        // single-arm run (the proposal under test: one arm through the bore)
        cfg.channel_upper_a = a;
        cfg.channel_lower_a = 0.0;

        // fixed-gauge prescription evaluated mid-channel on the charged arm
        const Vec2 mid{base.barrier_x + base.barrier_thickness + 0.5 * base.channel_length,
                       base.center_y + 0.5 * base.slit_separation};
        const Vec4 k_track = fixed_gauge_wavevector(cfg.build_potential(), base.packet_center, mid,
                                                    {energy, base.k0.x, base.k0.y, 0.0}, q);
        row.fixedgauge_wavelength = 2.0 * M_PI / k_track.spatial_norm();
        row.fixedgauge_spacing = row.fixedgauge_wavelength * arm_length / base.slit_separation;

        const SimulationResult run = run_scenario(cfg);
        const FringeReport rep = fringe_extract(run.profile, wlo, whi, &base_rep);
        row.fullwave_spacing = rep.fringe_spacing;
        row.fullwave_shift = prev_shift + fringe_phase_shift(prev_profile, run.profile,
                                                             base_rep.fringe_spacing, wlo, whi);
        row.eikonal_shift =
            ab_phase_difference(cfg.arm_path(true), cfg.arm_path(false), cfg.build_potential(),
                                energy, q, cfg.mass) /
            (2.0 * M_PI);

        // control: identical channels on both arms, common phase cancels
        cfg.channel_upper_a = a;
        cfg.channel_lower_a = a;
        const SimulationResult both = run_scenario(cfg);
        row.botharm_profile_dev = compare_profiles(baseline.profile, both.profile).max_abs_dev;
        row.botharm_spacing = fringe_extract(both.profile, wlo, whi).fringe_spacing;

        prev_profile = run.profile;
        prev_shift = row.fullwave_shift;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace abwave
