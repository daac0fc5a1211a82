#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qklink/config.hpp"
#include "qklink/constants.hpp"
#include "qklink/errors.hpp"
#include "qklink/interference.hpp"
#include "qklink/keyrate.hpp"
#include "qklink/montecarlo.hpp"
#include "qklink/raman_profile.hpp"
#include "qklink/scenario.hpp"
#include "qklink/units.hpp"

namespace {

constexpr const char* tool_version = "1.0.0";

constexpr int exit_ok = 0;
constexpr int exit_plan_violation = 1;
constexpr int exit_usage = 2;
constexpr int exit_config = 3;

struct Loaded {
    qklink::LinkConfig config;
    qklink::RamanProfile profile;
};

Loaded load(const std::string& config_path) {
    Loaded l;
    l.config = qklink::load_config(config_path);
    l.profile = qklink::load_raman_profile(l.config.raman_profile_path);
    return l;
}

void force_filters(qklink::LinkConfig& config) {
    if (config.filter) {
        config.filter->enabled = true;
    } else {
        qklink::FilterSpec filter;
        filter.enabled = true;
        config.filter = filter;
    }
}

std::vector<double> length_grid(double min_km, double max_km, double step_km) {
    if (step_km <= 0.0) throw CLI::ValidationError("--step must be positive");
    if (min_km < 0.0) throw CLI::ValidationError("--min must be non-negative");
    if (min_km > max_km) throw CLI::ValidationError("--min must not exceed --max");
    std::vector<double> lengths;
    for (double l = min_km; l <= max_km + step_km * 1e-9; l += step_km) {
        lengths.push_back(l);
    }
    return lengths;
}

void print_budget_report(const qklink::LinkBudget& b) {
    std::printf("link budget at %.3f km (%s, filters %s)\n", b.length_km,
                qklink::to_string(b.protocol).c_str(), b.filtered ? "on" : "off");
    std::printf("  mean photon number mu     %.6g\n", b.mu);
    std::printf("  transmission t            %.6g (%.2f dB)\n", b.transmission,
                qklink::linear_to_db(b.transmission));
    std::printf("  p_mu per gate             %.6e\n", b.p_mu);
    std::printf("  p_raman fwd / bwd         %.6e / %.6e\n", b.p_ram_f, b.p_ram_b);
    std::printf("  p_crosstalk per gate      %.6e\n", b.p_ct);
    std::printf("  p_dark per gate           %.6e\n", b.p_dc_per_gate);
    std::printf("  p_afterpulse per gate     %.6e\n", b.p_ap);
    std::printf("  QBER                      %.4f%%\n", 100.0 * b.qber_total);
    std::printf("    optical / detector / wdm  %.4f%% / %.4f%% / %.4f%%\n",
                100.0 * b.qber_opt, 100.0 * b.qber_det, 100.0 * b.qber_wdm);
    std::printf("  sifted rate               %.4f bps\n", b.r_sift_hz);
    std::printf("  I_AB / I_AE               %.6f / %.6f\n", b.i_ab, b.i_ae);
    std::printf("  secret rate               %.4f bps\n", b.r_sec_hz);
    std::printf("  effective r_ec / r_pa     %.6f / %.6f\n", b.r_ec_eff, b.r_pa_eff);
    if (b.qber_total > qklink::constants::qber_distillation_limit) {
        std::printf("  note: QBER above the %.0f%% distillation ceiling, secret rate forced to 0\n",
                    100.0 * qklink::constants::qber_distillation_limit);
    }
    if (b.clamped) std::printf("  warning: a detection probability was clamped to 1\n");
}

int run_budget(const std::string& config_path, double length_km, const std::string& protocol,
               bool filters) {
    Loaded l = load(config_path);
    if (!protocol.empty()) {
        l.config.protocol.protocol = qklink::protocol_from_string(protocol);
    }
    if (filters) force_filters(l.config);
    print_budget_report(qklink::link_budget(l.config, l.profile, length_km));
    return exit_ok;
}

int run_sweep(const std::string& config_path, double min_km, double max_km, double step_km,
              const std::string& out_path) {
    Loaded l = load(config_path);
    const std::vector<double> lengths = length_grid(min_km, max_km, step_km);
    const std::vector<qklink::LinkBudget> rows = qklink::sweep_length(l.config, l.profile, lengths);
    std::ofstream out(out_path);
    if (!out) throw qklink::error("cannot write '" + out_path + "'");
    qklink::write_sweep_csv(out, rows);
    std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
    return exit_ok;
}

int run_plan_check(const std::string& config_path) {
    Loaded l = load(config_path);
    const qklink::ChannelPlan& plan = l.config.plan;
    const qklink::FilterSpec* filter = l.config.active_filter();

    std::printf("channel plan: quantum %.2f nm, passband %.3f nm, grid %.0f GHz, %zu channels\n",
                plan.quantum_wavelength_nm, plan.quantum_passband_nm, plan.grid_spacing_ghz,
                plan.channels.size());
    for (std::size_t i = 0; i < plan.channels.size(); ++i) {
        const qklink::ClassicalChannel& ch = plan.channels[i];
        const long slots = std::lround(std::abs(ch.offset_ghz) / plan.grid_spacing_ghz);
        const double iso =
            slots <= 1 ? plan.isolation_adjacent_db : plan.isolation_nonadjacent_db;
        std::printf("  [%zu] %+9.1f GHz %-12s %7.2f dBm at receiver, %s tier (%.0f dB)\n", i,
                    ch.offset_ghz, qklink::to_string(ch.direction).c_str(), ch.receiver_power_dbm,
                    slots <= 1 ? "adjacent" : "non-adjacent", iso);
    }

    const double p_ct = qklink::crosstalk_probability(plan, l.config.detector,
                                                      l.config.protocol.bob_internal_loss_db,
                                                      filter);
    std::printf("crosstalk: %.6e per gate (dark counts: %.6e per gate)\n", p_ct,
                l.config.detector.dark_count_prob_per_gate());
    const double needed = qklink::required_isolation_db(
        -28.0, plan.quantum_wavelength_nm, l.config.detector.dark_count_prob_per_gate(),
        l.config.detector.efficiency, l.config.protocol.bob_internal_loss_db,
        l.config.detector.gate_width_ns);
    std::printf("isolation needed to push a -28 dBm channel below dark counts: %.1f dB\n", needed);

    const qklink::FwmReport report = qklink::check_plan_fwm(plan, l.config.fibre);
    std::printf("four-wave mixing: gamma P0 L_eff = %.4e (P0 %.4e W, L_eff %.2f km), "
                "spontaneous %s\n",
                report.gamma_p0_l, report.p0_launch_w, report.effective_length_km,
                report.spontaneous_negligible ? "negligible" : "NOT negligible");
    if (report.violations.empty()) {
        std::printf("no degenerate products inside the quantum passband\n");
        return exit_ok;
    }
    for (const qklink::FwmViolation& v : report.violations) {
        std::printf("VIOLATION: channels %zu and %zu (offsets %+.1f, %+.1f GHz) mix to "
                    "%+.2f GHz, %.2f GHz inside the quantum passband\n",
                    v.first_channel, v.second_channel, v.f1_offset_ghz, v.f2_offset_ghz,
                    v.product_offset_ghz, v.distance_into_passband_ghz);
    }
    return exit_plan_violation;
}

int run_mc(const std::string& config_path, double length_km, std::uint64_t gates,
           std::uint64_t seed, unsigned chunks, bool poisson) {
    Loaded l = load(config_path);
    const qklink::LinkBudget analytic = qklink::link_budget(l.config, l.profile, length_km);
    const qklink::McResult mc =
        qklink::simulate(l.config, l.profile, length_km, gates, seed, chunks,
                         poisson ? qklink::McMode::poisson : qklink::McMode::matched);

    std::printf("monte carlo: %llu gates, seed %llu, %u chunk(s), %s mode\n",
                static_cast<unsigned long long>(mc.gates_simulated),
                static_cast<unsigned long long>(seed), chunks, poisson ? "poisson" : "matched");
    std::printf("  detections %llu, sifted %llu, errors %llu\n",
                static_cast<unsigned long long>(mc.detections),
                static_cast<unsigned long long>(mc.sifted),
                static_cast<unsigned long long>(mc.errors));
    const double dq = mc.empirical_qber - analytic.qber_total;
    const double dr = mc.empirical_r_sift_hz - analytic.r_sift_hz;
    std::printf("  QBER    empirical %.6f +- %.6f | analytic %.6f | diff %+.2f SE\n",
                mc.empirical_qber, mc.se_qber, analytic.qber_total,
                mc.se_qber > 0.0 ? dq / mc.se_qber : 0.0);
    std::printf("  R_sift  empirical %.4f +- %.4f bps | analytic %.4f bps | diff %+.2f SE\n",
                mc.empirical_r_sift_hz, mc.se_r_sift_hz, analytic.r_sift_hz,
                mc.se_r_sift_hz > 0.0 ? dr / mc.se_r_sift_hz : 0.0);
    return exit_ok;
}

int run_compare_bands(const std::string& path_1550, const std::string& path_1310,
                      double min_km, double max_km, double step_km, const std::string& out_path) {
    Loaded l1550 = load(path_1550);
    Loaded l1310 = load(path_1310);
    const std::vector<double> lengths = length_grid(min_km, max_km, step_km);
    const qklink::BandComparison cmp =
        qklink::compare_bands(l1550.config, l1550.profile, l1310.config, l1310.profile, lengths);

    std::ofstream out(out_path);
    if (!out) throw qklink::error("cannot write '" + out_path + "'");
    out << qklink::sweep_csv_header() << '\n';
    out << "# band=" << l1550.config.plan.quantum_wavelength_nm << "nm\n";
    for (const qklink::LinkBudget& row : cmp.band_1550) qklink::write_sweep_csv_row(out, row);
    out << "# band=" << l1310.config.plan.quantum_wavelength_nm << "nm\n";
    for (const qklink::LinkBudget& row : cmp.band_1310) qklink::write_sweep_csv_row(out, row);

    std::printf("phonon occupation ratio %.1f at %.0f GHz detuning\n", cmp.ratio_used,
                cmp.detuning_ghz_used);
    std::printf("max distance with positive secret rate: %.1f km (first band) vs %.1f km "
                "(second band)\n",
                cmp.max_distance_1550_km, cmp.max_distance_1310_km);
    std::printf("wrote %zu rows to %s\n", cmp.band_1550.size() + cmp.band_1310.size(),
                out_path.c_str());
    return exit_ok;
}

int run_calibrate(const std::string& config_path, double qber, double length_km,
                  const std::string& out_path) {
    Loaded l = load(config_path);
    const double scale = qklink::calibrate_rho(l.config, l.profile, qber, length_km);
    qklink::LinkConfig calibrated = l.config;
    calibrated.raman_scale = scale;
    const qklink::LinkBudget check = qklink::link_budget(calibrated, l.profile, length_km);
    std::printf("raman_scale = %.12g (model QBER %.6f at %.3f km, target %.6f)\n", scale,
                check.qber_total, length_km, qber);
    if (!out_path.empty()) {
        qklink::save_config(calibrated, out_path);
        std::printf("wrote calibrated config to %s\n", out_path.c_str());
    }
    return exit_ok;
}

int run_preset(const std::string& name, const std::string& out_path,
               const std::string& data_dir) {
    const qklink::LinkConfig config = qklink::preset(name, data_dir);
    qklink::save_config(config, out_path);
    std::printf("wrote preset '%s' to %s\n", name.c_str(), out_path.c_str());
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QKD link performance model for fibres shared with classical DWDM channels"};
    app.set_version_flag("--version", std::string("qklink ") + tool_version +
                                          " (config schema " +
                                          std::to_string(qklink::config_schema_version) + ")");
    app.require_subcommand(1);

    std::string config_path;
    std::string protocol;
    std::string out_path;
    std::string data_dir = "data";
    std::string path_1550;
    std::string path_1310;
    double length_km = 25.0;
    double min_km = 1.0;
    double max_km = 80.0;
    double step_km = 1.0;
    double qber_target = 0.0;
    std::uint64_t gates = 10000000;
    std::uint64_t seed = 0;
    unsigned chunks = 1;
    bool filters = false;
    bool poisson = false;

    CLI::App* budget = app.add_subcommand("budget", "Evaluate the link budget at one length");
    budget->add_option("--config", config_path, "Config JSON path")->required();
    budget->add_option("--length", length_km, "Fibre length in km")->required();
    budget->add_option("--protocol", protocol, "Override protocol (bb84|sarg)");
    budget->add_flag("--filters", filters, "Force the narrowband filter on");

    CLI::App* sweep = app.add_subcommand("sweep", "Sweep fibre length and write CSV");
    sweep->add_option("--config", config_path, "Config JSON path")->required();
    sweep->add_option("--min", min_km, "Start length in km")->required();
    sweep->add_option("--max", max_km, "End length in km")->required();
    sweep->add_option("--step", step_km, "Step in km")->required();
    sweep->add_option("--out", out_path, "Output CSV path")->required();

    CLI::App* plan = app.add_subcommand("plan", "Channel plan tools");
    plan->require_subcommand(1);
    CLI::App* plan_check =
        plan->add_subcommand("check", "Check FWM products, crosstalk and isolation");
    plan_check->add_option("--config", config_path, "Config JSON path")->required();

    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo gate simulation vs analytic model");
    mc->add_option("--config", config_path, "Config JSON path")->required();
    mc->add_option("--length", length_km, "Fibre length in km")->required();
    mc->add_option("--gates", gates, "Number of detector gates")->required();
    mc->add_option("--seed", seed, "RNG seed")->required();
    mc->add_option("--chunks", chunks, "Parallel classification chunks");
    mc->add_flag("--poisson", poisson, "Poissonian signal statistics (exploratory)");

    CLI::App* compare = app.add_subcommand("compare-bands",
                                           "Compare quantum channel wavelengths over a sweep");
    compare->add_option("--config1550", path_1550, "Config JSON for the first band")->required();
    compare->add_option("--config1310", path_1310, "Config JSON for the second band")->required();
    compare->add_option("--min", min_km, "Start length in km");
    compare->add_option("--max", max_km, "End length in km");
    compare->add_option("--step", step_km, "Step in km");
    compare->add_option("--out", out_path, "Output CSV path")->required();

    CLI::App* calibrate = app.add_subcommand("calibrate",
                                             "Fit the profile scale to an observed QBER");
    calibrate->add_option("--config", config_path, "Config JSON path")->required();
    calibrate->add_option("--qber", qber_target, "Observed QBER (fraction)")->required();
    calibrate->add_option("--length", length_km, "Fibre length in km")->required();
    calibrate->add_option("--out", out_path, "Write the calibrated config here");

    CLI::App* preset_cmd = app.add_subcommand("preset", "Write a named preset config");
    std::string preset_name;
    preset_cmd->add_option("name", preset_name, "Preset name")->required();
    preset_cmd->add_option("--out", out_path, "Output config path")->required();
    preset_cmd->add_option("--data-dir", data_dir, "Directory holding the bundled Raman profile");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (budget->parsed()) return run_budget(config_path, length_km, protocol, filters);
        if (sweep->parsed()) return run_sweep(config_path, min_km, max_km, step_km, out_path);
        if (plan->parsed() && plan_check->parsed()) return run_plan_check(config_path);
        if (mc->parsed()) return run_mc(config_path, length_km, gates, seed, chunks, poisson);
        if (compare->parsed()) {
            return run_compare_bands(path_1550, path_1310, min_km, max_km, step_km, out_path);
        }
        if (calibrate->parsed()) {
            return run_calibrate(config_path, qber_target, length_km, out_path);
        }
        if (preset_cmd->parsed()) return run_preset(preset_name, out_path, data_dir);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const qklink::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
    std::cerr << "error: no subcommand given\n";
    return exit_usage;
}
