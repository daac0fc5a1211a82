#include "qklink/types.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "qklink/errors.hpp"
#include "qklink/units.hpp"

namespace qklink {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw validation_error(message);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

std::string to_string(Direction d) {
    return d == Direction::toward_bob ? "toward_bob" : "toward_alice";
}

std::string to_string(Protocol p) {
    return p == Protocol::bb84 ? "bb84" : "sarg";
}

Direction direction_from_string(const std::string& s) {
    if (s == "toward_bob") return Direction::toward_bob;
    if (s == "toward_alice") return Direction::toward_alice;
    throw validation_error("unknown direction '" + s + "' (expected toward_bob or toward_alice)");
}

Protocol protocol_from_string(const std::string& s) {
    if (s == "bb84") return Protocol::bb84;
    if (s == "sarg") return Protocol::sarg;
    throw validation_error("unknown protocol '" + s + "' (expected bb84 or sarg)");
}

void FibreSpec::validate() const {
    require(finite(length_km) && length_km >= 0.0, "fibre.length_km must be finite and >= 0");
    require(finite(attenuation_db_per_km) && attenuation_db_per_km > 0.0 &&
                attenuation_db_per_km <= 5.0,
            "fibre.attenuation_db_per_km must lie in (0, 5]");
    require(finite(gamma_per_w_km) && gamma_per_w_km >= 0.0,
            "fibre.gamma_per_w_km must be finite and >= 0");
    if (zero_dispersion_wavelength_nm) {
        require(finite(*zero_dispersion_wavelength_nm) && *zero_dispersion_wavelength_nm > 0.0,
                "fibre.zero_dispersion_wavelength_nm must be positive");
    }
}

void ChannelPlan::validate() const {
    require(finite(quantum_wavelength_nm) && quantum_wavelength_nm > 0.0,
            "plan.quantum_wavelength_nm must be positive");
    require(finite(quantum_passband_nm) && quantum_passband_nm > 0.0,
            "plan.quantum_passband_nm must be positive");
    require(finite(grid_spacing_ghz) && grid_spacing_ghz > 0.0,
            "plan.grid_spacing_ghz must be positive");
    const double grid_equivalent_nm =
        passband_width_nm(quantum_wavelength_nm, grid_spacing_ghz);
    require(quantum_passband_nm <= grid_equivalent_nm + 1e-12,
            "plan.quantum_passband_nm exceeds the grid spacing equivalent width");
    require(isolation_adjacent_db >= 0.0 && isolation_nonadjacent_db >= 0.0,
            "plan isolation values must be >= 0");
    require(finite(dwdm_insertion_loss_db) && dwdm_insertion_loss_db >= 0.0,
            "plan.dwdm_insertion_loss_db must be >= 0");
    require(finite(quantum_path_insertion_db) && quantum_path_insertion_db >= 0.0,
            "plan.quantum_path_insertion_db must be >= 0");
    std::set<std::pair<double, int>> seen;
    for (const ClassicalChannel& ch : channels) {
        require(finite(ch.offset_ghz) && ch.offset_ghz != 0.0,
                "channel offset_ghz must be nonzero");
        require(std::fabs(ch.offset_ghz) >= grid_spacing_ghz - 1e-9,
                "channel offset magnitude must be at least the grid spacing");
        require(ch.receiver_power_dbm >= -40.0 && ch.receiver_power_dbm <= 5.0,
                "channel receiver_power_dbm outside the [-40, 5] dBm sanity range");
        require(finite(ch.extra_launch_offset_db) && ch.extra_launch_offset_db >= 0.0,
                "channel extra_launch_offset_db must be >= 0");
        const bool inserted =
            seen.insert({ch.offset_ghz, static_cast<int>(ch.direction)}).second;
        require(inserted, "two channels share an offset and direction");
    }
}

void DetectorSpec::validate() const {
    require(finite(efficiency) && efficiency > 0.0 && efficiency <= 1.0,
            "detector.efficiency must lie in (0, 1]");
    require(finite(dark_count_prob_per_ns) && dark_count_prob_per_ns >= 0.0,
            "detector.dark_count_prob_per_ns must be >= 0");
    require(finite(gate_width_ns) && gate_width_ns > 0.0,
            "detector.gate_width_ns must be positive");
    require(dark_count_prob_per_gate() <= 1.0,
            "detector dark count probability exceeds 1 per gate");
    require(finite(dead_time_us) && dead_time_us >= 0.0,
            "detector.dead_time_us must be >= 0");
    require(finite(afterpulse_prob) && afterpulse_prob >= 0.0 && afterpulse_prob < 1.0,
            "detector.afterpulse_prob must lie in [0, 1)");
}

void ProtocolConfig::validate() const {
    require(finite(visibility) && visibility > 0.0 && visibility <= 1.0,
            "protocol.visibility must lie in (0, 1]");
    require(finite(pulse_rate_hz) && pulse_rate_hz > 0.0,
            "protocol.pulse_rate_hz must be positive");
    require(finite(storage_line_km) && storage_line_km >= 0.0,
            "protocol.storage_line_km must be >= 0");
    require(finite(bob_internal_loss_db) && bob_internal_loss_db >= 0.0,
            "protocol.bob_internal_loss_db must be >= 0");
    require(finite(error_correction_inefficiency) && error_correction_inefficiency >= 1.0,
            "protocol.error_correction_inefficiency must be >= 1");
    if (mean_photon_override) {
        require(finite(*mean_photon_override) && *mean_photon_override > 0.0,
                "protocol.mean_photon_override must be positive");
    }
}

void FilterSpec::validate() const {
    require(finite(passband_pm) && passband_pm > 0.0, "filter.passband_pm must be positive");
    require(finite(extinction_db) && extinction_db >= 0.0, "filter.extinction_db must be >= 0");
    require(finite(insertion_loss_db) && insertion_loss_db >= 0.0,
            "filter.insertion_loss_db must be >= 0");
    require(finite(noise_rejection_fraction) && noise_rejection_fraction >= 0.0 &&
                noise_rejection_fraction < 1.0,
            "filter.noise_rejection_fraction must lie in [0, 1)");
}

}  // namespace qklink
