#include "qklink/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qklink/errors.hpp"

namespace qklink {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw parse_error(context + ": " + message);
}

void check_keys(const json& obj, const std::string& context,
                const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            fail(context, "unknown key '" + item.key() + "'");
        }
    }
}

double get_number(const json& obj, const std::string& context, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(context, "'" + key + "' must be a number");
    return obj[key].get<double>();
}

std::string get_string(const json& obj, const std::string& context, const std::string& key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) fail(context, "'" + key + "' must be a string");
    return obj[key].get<std::string>();
}

bool get_bool(const json& obj, const std::string& context, const std::string& key,
              bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) fail(context, "'" + key + "' must be a boolean");
    return obj[key].get<bool>();
}

const json& get_object(const json& obj, const std::string& context, const std::string& key) {
    if (!obj.contains(key)) fail(context, "missing required object '" + key + "'");
    if (!obj[key].is_object()) fail(context, "'" + key + "' must be an object");
    return obj[key];
}

FibreSpec parse_fibre(const json& j) {
    const std::string ctx = "fibre";
    check_keys(j, ctx, {"length_km", "attenuation_db_per_km", "gamma_per_w_km",
                        "zero_dispersion_wavelength_nm"});
    FibreSpec f;
    f.length_km = get_number(j, ctx, "length_km", f.length_km);
    f.attenuation_db_per_km = get_number(j, ctx, "attenuation_db_per_km", f.attenuation_db_per_km);
    f.gamma_per_w_km = get_number(j, ctx, "gamma_per_w_km", f.gamma_per_w_km);
    if (j.contains("zero_dispersion_wavelength_nm") &&
        !j["zero_dispersion_wavelength_nm"].is_null()) {
        f.zero_dispersion_wavelength_nm =
            get_number(j, ctx, "zero_dispersion_wavelength_nm", 0.0);
    }
    return f;
}

ChannelPlan parse_plan(const json& j) {
    const std::string ctx = "plan";
    check_keys(j, ctx, {"quantum_wavelength_nm", "quantum_passband_nm", "grid_spacing_ghz",
                        "channels", "isolation_adjacent_db", "isolation_nonadjacent_db",
                        "dwdm_insertion_loss_db", "quantum_path_insertion_db"});
    ChannelPlan p;
    p.quantum_wavelength_nm = get_number(j, ctx, "quantum_wavelength_nm", p.quantum_wavelength_nm);
    p.quantum_passband_nm = get_number(j, ctx, "quantum_passband_nm", p.quantum_passband_nm);
    p.grid_spacing_ghz = get_number(j, ctx, "grid_spacing_ghz", p.grid_spacing_ghz);
    p.isolation_adjacent_db = get_number(j, ctx, "isolation_adjacent_db", p.isolation_adjacent_db);
    p.isolation_nonadjacent_db =
        get_number(j, ctx, "isolation_nonadjacent_db", p.isolation_nonadjacent_db);
    p.dwdm_insertion_loss_db =
        get_number(j, ctx, "dwdm_insertion_loss_db", p.dwdm_insertion_loss_db);
    p.quantum_path_insertion_db =
        get_number(j, ctx, "quantum_path_insertion_db", p.quantum_path_insertion_db);
    if (j.contains("channels")) {
        if (!j["channels"].is_array()) fail(ctx, "'channels' must be an array");
        std::size_t index = 0;
        for (const json& cj : j["channels"]) {
            const std::string cctx = "plan.channels[" + std::to_string(index++) + "]";
            if (!cj.is_object()) fail(cctx, "must be an object");
            check_keys(cj, cctx, {"offset_ghz", "direction", "receiver_power_dbm",
                                  "extra_launch_offset_db"});
            ClassicalChannel ch;
            if (!cj.contains("offset_ghz")) fail(cctx, "missing 'offset_ghz'");
            ch.offset_ghz = get_number(cj, cctx, "offset_ghz", 0.0);
            ch.direction = direction_from_string(get_string(cj, cctx, "direction", "toward_bob"));
            ch.receiver_power_dbm = get_number(cj, cctx, "receiver_power_dbm", ch.receiver_power_dbm);
            ch.extra_launch_offset_db =
                get_number(cj, cctx, "extra_launch_offset_db", ch.extra_launch_offset_db);
            p.channels.push_back(ch);
        }
    }
    return p;
}

DetectorSpec parse_detector(const json& j) {
    const std::string ctx = "detector";
    check_keys(j, ctx, {"efficiency", "dark_count_prob_per_ns", "gate_width_ns", "dead_time_us",
                        "afterpulse_prob"});
    DetectorSpec d;
    d.efficiency = get_number(j, ctx, "efficiency", d.efficiency);
    d.dark_count_prob_per_ns = get_number(j, ctx, "dark_count_prob_per_ns", d.dark_count_prob_per_ns);
    d.gate_width_ns = get_number(j, ctx, "gate_width_ns", d.gate_width_ns);
    d.dead_time_us = get_number(j, ctx, "dead_time_us", d.dead_time_us);
    d.afterpulse_prob = get_number(j, ctx, "afterpulse_prob", d.afterpulse_prob);
    return d;
}

ProtocolConfig parse_protocol(const json& j) {
    const std::string ctx = "protocol";
    check_keys(j, ctx, {"protocol", "visibility", "pulse_rate_hz", "storage_line_km",
                        "bob_internal_loss_db", "error_correction_inefficiency",
                        "mean_photon_override"});
    ProtocolConfig p;
    p.protocol = protocol_from_string(get_string(j, ctx, "protocol", "bb84"));
    p.visibility = get_number(j, ctx, "visibility", p.visibility);
    p.pulse_rate_hz = get_number(j, ctx, "pulse_rate_hz", p.pulse_rate_hz);
    p.storage_line_km = get_number(j, ctx, "storage_line_km", p.storage_line_km);
    p.bob_internal_loss_db = get_number(j, ctx, "bob_internal_loss_db", p.bob_internal_loss_db);
    p.error_correction_inefficiency =
        get_number(j, ctx, "error_correction_inefficiency", p.error_correction_inefficiency);
    if (j.contains("mean_photon_override") && !j["mean_photon_override"].is_null()) {
        p.mean_photon_override = get_number(j, ctx, "mean_photon_override", 0.0);
    }
    return p;
}

FilterSpec parse_filter(const json& j) {
    const std::string ctx = "filter";
    check_keys(j, ctx, {"enabled", "passband_pm", "extinction_db", "insertion_loss_db",
                        "noise_rejection_fraction"});
    FilterSpec f;
    f.enabled = get_bool(j, ctx, "enabled", f.enabled);
    f.passband_pm = get_number(j, ctx, "passband_pm", f.passband_pm);
    f.extinction_db = get_number(j, ctx, "extinction_db", f.extinction_db);
    f.insertion_loss_db = get_number(j, ctx, "insertion_loss_db", f.insertion_loss_db);
    f.noise_rejection_fraction =
        get_number(j, ctx, "noise_rejection_fraction", f.noise_rejection_fraction);
    return f;
}

}  // namespace

void LinkConfig::validate() const {
    if (schema_version != config_schema_version) {
        throw validation_error("unsupported schema_version " + std::to_string(schema_version) +
                               " (expected " + std::to_string(config_schema_version) + ")");
    }
    fibre.validate();
    plan.validate();
    detector.validate();
    protocol.validate();
    if (filter) filter->validate();
    if (raman_profile_path.empty()) {
        throw validation_error("raman_profile_path must not be empty");
    }
    if (!(raman_scale > 0.0) || !std::isfinite(raman_scale)) {
        throw validation_error("raman_scale must be positive and finite");
    }
}

const FilterSpec* LinkConfig::active_filter() const {
    if (filter && filter->enabled) return &*filter;
    return nullptr;
}

LinkConfig config_from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(origin + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw parse_error(origin + ": top level must be an object");
    check_keys(j, origin, {"schema_version", "raman_profile_path", "raman_scale", "fibre", "plan",
                           "detector", "protocol", "filter"});

    LinkConfig config;
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
        fail(origin, "missing integer 'schema_version'");
    }
    config.schema_version = j["schema_version"].get<int>();
    config.raman_profile_path = get_string(j, origin, "raman_profile_path", "");
    config.raman_scale = get_number(j, origin, "raman_scale", 1.0);
    config.fibre = parse_fibre(get_object(j, origin, "fibre"));
    config.plan = parse_plan(get_object(j, origin, "plan"));
    config.detector = parse_detector(get_object(j, origin, "detector"));
    config.protocol = parse_protocol(get_object(j, origin, "protocol"));
    if (j.contains("filter") && !j["filter"].is_null()) {
        config.filter = parse_filter(j["filter"]);
    }
    config.validate();
    return config;
}

LinkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return config_from_json_text(buffer.str(), path);
}

std::string config_to_json_text(const LinkConfig& config) {
    json j;
    j["schema_version"] = config.schema_version;
    j["raman_profile_path"] = config.raman_profile_path;
    j["raman_scale"] = config.raman_scale;

    json fibre;
    fibre["length_km"] = config.fibre.length_km;
    fibre["attenuation_db_per_km"] = config.fibre.attenuation_db_per_km;
    fibre["gamma_per_w_km"] = config.fibre.gamma_per_w_km;
    if (config.fibre.zero_dispersion_wavelength_nm) {
        fibre["zero_dispersion_wavelength_nm"] = *config.fibre.zero_dispersion_wavelength_nm;
    }
    j["fibre"] = fibre;

    json plan;
    plan["quantum_wavelength_nm"] = config.plan.quantum_wavelength_nm;
    plan["quantum_passband_nm"] = config.plan.quantum_passband_nm;
    plan["grid_spacing_ghz"] = config.plan.grid_spacing_ghz;
    plan["isolation_adjacent_db"] = config.plan.isolation_adjacent_db;
    plan["isolation_nonadjacent_db"] = config.plan.isolation_nonadjacent_db;
    plan["dwdm_insertion_loss_db"] = config.plan.dwdm_insertion_loss_db;
    plan["quantum_path_insertion_db"] = config.plan.quantum_path_insertion_db;
    plan["channels"] = json::array();
    for (const ClassicalChannel& ch : config.plan.channels) {
        json cj;
        cj["offset_ghz"] = ch.offset_ghz;
        cj["direction"] = to_string(ch.direction);
        cj["receiver_power_dbm"] = ch.receiver_power_dbm;
        cj["extra_launch_offset_db"] = ch.extra_launch_offset_db;
        plan["channels"].push_back(cj);
    }
    j["plan"] = plan;

    json detector;
    detector["efficiency"] = config.detector.efficiency;
    detector["dark_count_prob_per_ns"] = config.detector.dark_count_prob_per_ns;
    detector["gate_width_ns"] = config.detector.gate_width_ns;
    detector["dead_time_us"] = config.detector.dead_time_us;
    detector["afterpulse_prob"] = config.detector.afterpulse_prob;
    j["detector"] = detector;

    json protocol;
    protocol["protocol"] = to_string(config.protocol.protocol);
    protocol["visibility"] = config.protocol.visibility;
    protocol["pulse_rate_hz"] = config.protocol.pulse_rate_hz;
    protocol["storage_line_km"] = config.protocol.storage_line_km;
    protocol["bob_internal_loss_db"] = config.protocol.bob_internal_loss_db;
    protocol["error_correction_inefficiency"] = config.protocol.error_correction_inefficiency;
    if (config.protocol.mean_photon_override) {
        protocol["mean_photon_override"] = *config.protocol.mean_photon_override;
    }
    j["protocol"] = protocol;

    if (config.filter) {
        json filter;
        filter["enabled"] = config.filter->enabled;
        filter["passband_pm"] = config.filter->passband_pm;
        filter["extinction_db"] = config.filter->extinction_db;
        filter["insertion_loss_db"] = config.filter->insertion_loss_db;
        filter["noise_rejection_fraction"] = config.filter->noise_rejection_fraction;
        j["filter"] = filter;
    }

    return j.dump(2) + "\n";
}

void save_config(const LinkConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write config '" + path + "'");
    out << config_to_json_text(config);
}

}  // namespace qklink
