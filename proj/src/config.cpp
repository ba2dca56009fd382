#include "abwave/config.hpp"

#include "abwave/errors.hpp"

#include <fstream>
#include <sstream>

namespace abwave {

namespace {

using nlohmann::json;

const std::map<std::string, ScenarioKind> kKinds = {
    {"free", ScenarioKind::Free},
    {"double_slit", ScenarioKind::DoubleSlit},
    {"ab_solenoid", ScenarioKind::AbSolenoid},
    {"toroidal_channel", ScenarioKind::ToroidalChannel},
};

std::string kind_name(ScenarioKind k) {
    for (const auto& [name, kind] : kKinds)
        if (kind == k) return name;
    return "free";
}

} // namespace

ScenarioConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    ScenarioConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "kind") {
                const auto it = kKinds.find(value.get<std::string>());
                if (it == kKinds.end()) throw ConfigError("config: unknown kind " + value.dump());
                cfg.kind = it->second;
            } else if (key == "nx") cfg.nx = value.get<int>();
            else if (key == "ny") cfg.ny = value.get<int>();
            else if (key == "dx") cfg.dx = value.get<double>();
            else if (key == "dy") cfg.dy = value.get<double>();
            else if (key == "dt") cfg.dt = value.get<double>();
            else if (key == "packet_center")
                cfg.packet_center = {value.at(0).get<double>(), value.at(1).get<double>()};
            else if (key == "sigma") cfg.sigma = value.get<double>();
            else if (key == "sigma_y") cfg.sigma_y = value.get<double>();
            else if (key == "k0")
                cfg.k0 = {value.at(0).get<double>(), value.at(1).get<double>()};
            else if (key == "charge") cfg.charge = value.get<double>();
            else if (key == "mass") cfg.mass = value.get<double>();
            else if (key == "center_y") cfg.center_y = value.get<double>();
            else if (key == "slit_separation") cfg.slit_separation = value.get<double>();
            else if (key == "slit_width") cfg.slit_width = value.get<double>();
            else if (key == "barrier_x") cfg.barrier_x = value.get<double>();
            else if (key == "barrier_thickness") cfg.barrier_thickness = value.get<double>();
            else if (key == "screen_x") cfg.screen_x = value.get<double>();
            else if (key == "solenoid_flux") cfg.solenoid_flux = value.get<double>();
            else if (key == "channel_length") cfg.channel_length = value.get<double>();
            else if (key == "channel_upper_a") cfg.channel_upper_a = value.get<double>();
            else if (key == "channel_lower_a") cfg.channel_lower_a = value.get<double>();
            else if (key == "closed_box") cfg.closed_box = value.get<bool>();
            else if (key == "absorber_strength") cfg.absorber_strength = value.get<double>();
            else if (key == "absorber_cells") cfg.absorber_cells = value.get<int>();
            else if (key == "max_steps") cfg.max_steps = value.get<int>();
            else if (key == "snapshot_every") cfg.snapshot_every = value.get<int>();
            else if (key == "stop_fraction") cfg.stop_fraction = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "gauges") {
                for (const auto& gj : value) {
                    GaugeSpec spec;
                    spec.name = gj.at("name").get<std::string>();
                    if (gj.contains("ct")) spec.ct = gj["ct"].get<double>();
                    if (gj.contains("terms"))
                        for (const auto& t : gj["terms"])
                            spec.terms.push_back({t.at(0).get<int>(), t.at(1).get<int>(),
                                                  t.at(2).get<double>()});
                    cfg.gauges.push_back(std::move(spec));
                }
            } else {
                throw ConfigError("config: unknown key \"" + key + "\"");
            }
        } catch (const json::exception& e) {
            throw ConfigError("config: bad value for \"" + key + "\": " + e.what());
        }
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config: parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["kind"] = kind_name(cfg.kind);
    j["nx"] = cfg.nx;
    j["ny"] = cfg.ny;
    j["dx"] = cfg.dx;
    j["dy"] = cfg.dy;
    j["dt"] = cfg.dt;
    j["packet_center"] = {cfg.packet_center.x, cfg.packet_center.y};
    j["sigma"] = cfg.sigma;
    j["sigma_y"] = cfg.sigma_y;
    j["k0"] = {cfg.k0.x, cfg.k0.y};
    j["charge"] = cfg.charge;
    j["mass"] = cfg.mass;
    j["center_y"] = cfg.center_y;
    j["slit_separation"] = cfg.slit_separation;
    j["slit_width"] = cfg.slit_width;
    j["barrier_x"] = cfg.barrier_x;
    j["barrier_thickness"] = cfg.barrier_thickness;
    j["screen_x"] = cfg.screen_x;
    j["solenoid_flux"] = cfg.solenoid_flux;
    j["channel_length"] = cfg.channel_length;
    j["channel_upper_a"] = cfg.channel_upper_a;
    j["channel_lower_a"] = cfg.channel_lower_a;
    j["closed_box"] = cfg.closed_box;
    j["absorber_strength"] = cfg.absorber_strength;
    j["absorber_cells"] = cfg.absorber_cells;
    j["max_steps"] = cfg.max_steps;
    j["snapshot_every"] = cfg.snapshot_every;
    j["stop_fraction"] = cfg.stop_fraction;
    j["seed"] = cfg.seed;
    json gauges = json::array();
    for (const auto& g : cfg.gauges) {
        json gj;
        gj["name"] = g.name;
        gj["ct"] = g.ct;
        json terms = json::array();
        for (const auto& t : g.terms) terms.push_back({t.ix, t.iy, t.c});
        gj["terms"] = terms;
        gauges.push_back(gj);
    }
    j["gauges"] = gauges;
    return j;
}

} // namespace abwave
