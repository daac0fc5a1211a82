#ifndef QKLINK_TYPES_HPP
#define QKLINK_TYPES_HPP

#include <optional>
#include <string>
#include <vector>

namespace qklink {

enum class Direction { toward_bob, toward_alice };
enum class Protocol { bb84, sarg };

std::string to_string(Direction d);
std::string to_string(Protocol p);
Direction direction_from_string(const std::string& s);
Protocol protocol_from_string(const std::string& s);

struct FibreSpec {
    double length_km = 25.0;
    double attenuation_db_per_km = 0.21;
    double gamma_per_w_km = 2.0;  // Kerr nonlinearity for the FWM estimate
    std::optional<double> zero_dispersion_wavelength_nm;

    void validate() const;
};

struct ClassicalChannel {
    // Signed frequency offset from the quantum channel; positive offsets are
    // lower optical frequencies (longer wavelengths).
    double offset_ghz = 0.0;
    Direction direction = Direction::toward_bob;
    double receiver_power_dbm = -28.0;
    double extra_launch_offset_db = 0.0;  // extra power above the sensitivity budget
};

struct ChannelPlan {
    double quantum_wavelength_nm = 1551.72;
    double quantum_passband_nm = 0.8;
    double grid_spacing_ghz = 100.0;
    std::vector<ClassicalChannel> channels;
    double isolation_adjacent_db = 59.0;
    double isolation_nonadjacent_db = 82.0;
    double dwdm_insertion_loss_db = 1.95;
    // Mux/demux loss on the quantum path itself; kept out of the fibre
    // transmission t and zeroed in the dark-fibre scenario.
    double quantum_path_insertion_db = 0.0;

    void validate() const;
};

struct DetectorSpec {
    double efficiency = 0.07;
    double dark_count_prob_per_ns = 5e-6;
    double gate_width_ns = 1.5;
    double dead_time_us = 10.0;
    double afterpulse_prob = 0.008;

    void validate() const;
    double dark_count_prob_per_gate() const { return dark_count_prob_per_ns * gate_width_ns; }
};

struct ProtocolConfig {
    Protocol protocol = Protocol::bb84;
    double visibility = 0.994;
    double pulse_rate_hz = 5e6;
    double storage_line_km = 10.0;
    double bob_internal_loss_db = 2.65;
    double error_correction_inefficiency = 1.2;  // eta_ec >= 1
    std::optional<double> mean_photon_override;

    void validate() const;
};

struct FilterSpec {
    bool enabled = true;
    double passband_pm = 45.0;
    double extinction_db = 14.0;
    double insertion_loss_db = 2.0;
    double noise_rejection_fraction = 0.85;

    void validate() const;
};

// Per-gate detection probabilities feeding the QBER / rate formulas.
struct GateProbabilities {
    double p_mu = 0.0;
    double p_dc_per_gate = 0.0;
    double p_ap = 0.0;
    double p_ram = 0.0;
    double p_ct = 0.0;

    // Noise detections per gate (everything but the signal).
    double noise() const { return 2.0 * p_dc_per_gate + p_ap + p_ram + p_ct; }
    // Total detection probability per gate.
    double total() const { return p_mu + noise(); }
};

// Full evaluation of one fibre length.
struct LinkBudget {
    double length_km = 0.0;
    Protocol protocol = Protocol::bb84;
    bool filtered = false;

    double mu = 0.0;           // mean photon number used
    double transmission = 0.0; // fibre (and filter insertion) transmission t

    double p_mu = 0.0;
    double p_ram_f = 0.0;
    double p_ram_b = 0.0;
    double p_ct = 0.0;
    double p_dc_per_gate = 0.0;
    double p_ap = 0.0;

    double qber_total = 0.0;
    double qber_opt = 0.0;
    double qber_det = 0.0;
    double qber_wdm = 0.0;

    double r_sift_hz = 0.0;
    double i_ab = 0.0;
    double i_ae = 0.0;
    double r_sec_hz = 0.0;

    // Effective distillation fractions derived from the information terms.
    double r_ec_eff = 0.0;
    double r_pa_eff = 0.0;

    bool clamped = false;  // some probability was clamped to 1
};

}  // namespace qklink

#endif
