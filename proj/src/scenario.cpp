#include "qklink/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "qklink/constants.hpp"
#include "qklink/errors.hpp"
#include "qklink/units.hpp"

namespace qklink {

namespace {

// Anchors the bundled synthetic profile to the measured operating point
// (4.53% QBER at 25 km, BB84, no filter); see calibrate_rho.
constexpr double calibrated_profile_scale = 1.3122406817092136;

std::string join_path(const std::string& dir, const std::string& file) {
    if (dir.empty()) return file;
    if (dir.back() == '/') return dir + file;
    return dir + "/" + file;
}

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace

std::vector<LinkBudget> sweep_length(const LinkConfig& config, const RamanProfile& profile,
                                     const std::vector<double>& lengths_km) {
    if (lengths_km.empty()) throw validation_error("sweep needs at least one length");
    std::vector<LinkBudget> rows(lengths_km.size());

    unsigned n_threads = std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    if (n_threads > lengths_km.size()) n_threads = static_cast<unsigned>(lengths_km.size());

    if (n_threads <= 1) {
        for (std::size_t i = 0; i < lengths_km.size(); ++i) {
            rows[i] = link_budget(config, profile, lengths_km[i]);
        }
        return rows;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(n_threads);
    auto worker = [&](unsigned w) {
        try {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= lengths_km.size()) return;
                rows[i] = link_budget(config, profile, lengths_km[i]);
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker, w);
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : failures) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

double phonon_occupation(double shift_thz, double temperature_k) {
    if (!(shift_thz > 0.0)) throw model_domain_error("phonon shift must be positive");
    if (!(temperature_k > 0.0)) throw model_domain_error("temperature must be positive");
    const double x = constants::planck_j_s * shift_thz * 1e12 /
                     (constants::boltzmann_j_k * temperature_k);
    return 1.0 / std::expm1(x);
}

double band_noise_ratio(double detuning_ghz, double temperature_k) {
    if (!(detuning_ghz > 0.0)) throw model_domain_error("detuning must be positive");
    const double delta_1310_thz =
        (wavelength_nm_to_hz(1310.0) - wavelength_nm_to_hz(1550.0)) / 1e12;
    return phonon_occupation(detuning_ghz * 1e-3, temperature_k) /
           phonon_occupation(delta_1310_thz, temperature_k);
}

namespace {

// Mean absolute channel detuning from the plan's quantum channel, in GHz;
// zero when the plan carries no classical channels.
double mean_detuning_ghz(const ChannelPlan& plan) {
    if (plan.channels.empty()) return 0.0;
    double sum = 0.0;
    for (const ClassicalChannel& ch : plan.channels) sum += std::abs(ch.offset_ghz);
    return sum / static_cast<double>(plan.channels.size());
}

}  // namespace

BandComparison compare_bands(const LinkConfig& config_1550, const RamanProfile& profile_1550,
                             const LinkConfig& config_1310, const RamanProfile& profile_1310,
                             const std::vector<double>& lengths_km) {
    BandComparison cmp;

    // Occupation ratio between the two bands' pump detunings. Identical plans
    // give ratio 1, so identical configs produce identical tables; plans
    // without channels have no Raman to scale and also use ratio 1.
    const double detuning_a = mean_detuning_ghz(config_1550.plan);
    const double detuning_b = mean_detuning_ghz(config_1310.plan);
    cmp.detuning_ghz_used = detuning_a;
    if (detuning_a > 0.0 && detuning_b > 0.0) {
        cmp.ratio_used = phonon_occupation(detuning_a * 1e-3, profile_1550.temperature_k) /
                         phonon_occupation(detuning_b * 1e-3, profile_1550.temperature_k);
    } else {
        cmp.ratio_used = 1.0;
    }

    cmp.band_1550 = sweep_length(config_1550, profile_1550, lengths_km);
    cmp.band_1310.reserve(lengths_km.size());
    for (std::size_t i = 0; i < lengths_km.size(); ++i) {
        const std::pair<double, double> scaled_raman{
            cmp.band_1550[i].p_ram_f / cmp.ratio_used,
            cmp.band_1550[i].p_ram_b / cmp.ratio_used};
        cmp.band_1310.push_back(
            link_budget(config_1310, profile_1310, lengths_km[i], &scaled_raman));
    }

    for (const LinkBudget& row : cmp.band_1550) {
        if (row.r_sec_hz > 0.0 && row.length_km > cmp.max_distance_1550_km) {
            cmp.max_distance_1550_km = row.length_km;
        }
    }
    for (const LinkBudget& row : cmp.band_1310) {
        if (row.r_sec_hz > 0.0 && row.length_km > cmp.max_distance_1310_km) {
            cmp.max_distance_1310_km = row.length_km;
        }
    }
    return cmp;
}

double calibrate_rho(const LinkConfig& config, const RamanProfile& profile,
                     double observed_qber, double length_km) {
    if (!(observed_qber > 0.0) || !(observed_qber < 0.5)) {
        throw validation_error("observed QBER must lie in (0, 0.5)");
    }
    LinkConfig trial = config;
    auto qber_at = [&](double scale) {
        trial.raman_scale = scale;
        return link_budget(trial, profile, length_km).qber_total;
    };

    const double floor = qber_at(0.0);
    if (observed_qber < floor) {
        throw validation_error("observed QBER " + std::to_string(observed_qber) +
                               " is below the Raman-free floor " + std::to_string(floor) +
                               "; no scale can reproduce it");
    }
    double lo = 0.0;
    double hi = 1.0;
    while (qber_at(hi) < observed_qber) {
        hi *= 2.0;
        if (hi > 1e12) {
            throw validation_error("observed QBER " + std::to_string(observed_qber) +
                                   " cannot be bracketed by scaling the profile");
        }
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (qber_at(mid) < observed_qber) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LinkConfig preset(const std::string& name, const std::string& data_dir) {
    LinkConfig config;
    config.raman_profile_path = join_path(data_dir, "raman_profile_synthetic.csv");
    config.raman_scale = calibrated_profile_scale;
    config.plan.channels = {
        {200.0, Direction::toward_bob, -28.0, 0.0},
        {300.0, Direction::toward_bob, -28.0, 0.0},
        {400.0, Direction::toward_alice, -28.0, 0.0},
        {500.0, Direction::toward_alice, -28.0, 0.0},
    };
    FilterSpec filter;
    filter.enabled = false;

    if (name == "paper-default") {
        config.filter = filter;
    } else if (name == "paper-default-filters") {
        filter.enabled = true;
        config.filter = filter;
    } else if (name == "dark-fibre") {
        config.plan.channels.clear();
        config.plan.dwdm_insertion_loss_db = 0.0;
        config.plan.quantum_path_insertion_db = 0.0;
    } else if (name == "10gbps-sfp") {
        // The two encryption channels run 10 Gbps SFP transceivers whose
        // receivers need -23 dBm, raising total classical power by ~3.2 dB.
        config.plan.channels[1].receiver_power_dbm = -23.0;
        config.plan.channels[3].receiver_power_dbm = -23.0;
        filter.enabled = true;
        config.filter = filter;
    } else if (name == "low-dark-count-1310") {
        // Quantum channel moved to 1310 nm; classical channels stay at their
        // absolute C-band frequencies, so offsets grow by the band separation.
        const double band_shift_ghz =
            (wavelength_nm_to_hz(1310.0) - wavelength_nm_to_hz(config.plan.quantum_wavelength_nm)) /
            1e9;
        for (ClassicalChannel& ch : config.plan.channels) {
            ch.offset_ghz += band_shift_ghz;
        }
        const double passband_ghz = passband_width_ghz(config.plan.quantum_wavelength_nm,
                                                       config.plan.quantum_passband_nm);
        config.plan.quantum_wavelength_nm = 1310.0;
        config.plan.quantum_passband_nm = passband_width_nm(1310.0, passband_ghz);
        config.plan.isolation_adjacent_db = 100.0;
        config.plan.isolation_nonadjacent_db = 100.0;
        config.fibre.attenuation_db_per_km = 0.35;
        config.detector.dark_count_prob_per_ns = 5e-8;
        config.filter = filter;
    } else {
        throw validation_error("unknown preset '" + name + "'");
    }
    config.validate();
    return config;
}

std::vector<std::string> preset_names() {
    return {"paper-default", "paper-default-filters", "dark-fibre", "10gbps-sfp",
            "low-dark-count-1310"};
}

std::string sweep_csv_header() {
    return "length_km,protocol,filters,p_mu,p_ram_f,p_ram_b,p_ct,p_dc_gate,p_ap,qber,qber_opt,"
           "qber_det,qber_wdm,r_sift_hz,i_ab,i_ae,r_sec_hz";
}

void write_sweep_csv_row(std::ostream& out, const LinkBudget& row) {
    out << sci(row.length_km) << ',' << to_string(row.protocol) << ','
        << (row.filtered ? "on" : "off") << ',' << sci(row.p_mu) << ',' << sci(row.p_ram_f) << ','
        << sci(row.p_ram_b) << ',' << sci(row.p_ct) << ',' << sci(row.p_dc_per_gate) << ','
        << sci(row.p_ap) << ',' << sci(row.qber_total) << ',' << sci(row.qber_opt) << ','
        << sci(row.qber_det) << ',' << sci(row.qber_wdm) << ',' << sci(row.r_sift_hz) << ','
        << sci(row.i_ab) << ',' << sci(row.i_ae) << ',' << sci(row.r_sec_hz) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<LinkBudget>& rows) {
    out << sweep_csv_header() << '\n';
    for (const LinkBudget& row : rows) write_sweep_csv_row(out, row);
}

}  // namespace qklink
