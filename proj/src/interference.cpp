#include "qklink/interference.hpp"

#include <cmath>

#include "qklink/errors.hpp"
#include "qklink/units.hpp"

namespace qklink {

double photon_rate_per_ns(double power_dbm, double wavelength_nm) {
    return dbm_to_watts(power_dbm) / photon_energy_j(wavelength_nm) * 1e-9;
}

double required_isolation_db(double receiver_power_dbm, double wavelength_nm,
                             double target_prob_per_gate, double efficiency,
                             double internal_loss_db, double gate_ns) {
    if (!(target_prob_per_gate > 0.0)) {
        throw validation_error("target probability must be positive");
    }
    const double unattenuated = photon_rate_per_ns(receiver_power_dbm, wavelength_nm) *
                                efficiency * db_to_linear(-internal_loss_db) * gate_ns;
    if (unattenuated <= target_prob_per_gate) return 0.0;
    return 10.0 * std::log10(unattenuated / target_prob_per_gate);
}

double crosstalk_probability(const ChannelPlan& plan, const DetectorSpec& detector,
                             double bob_internal_loss_db, const FilterSpec* filter) {
    double filter_factor = 1.0;
    if (filter) {
        filter_factor = db_to_linear(-filter->extinction_db) *
                        db_to_linear(-filter->insertion_loss_db);
    }
    double total = 0.0;
    for (const ClassicalChannel& ch : plan.channels) {
        if (ch.direction != Direction::toward_bob) continue;
        const long slots = std::lround(std::abs(ch.offset_ghz) / plan.grid_spacing_ghz);
        const double isolation_db =
            slots <= 1 ? plan.isolation_adjacent_db : plan.isolation_nonadjacent_db;
        const double channel_nm = offset_wavelength_nm(plan.quantum_wavelength_nm, ch.offset_ghz);
        total += photon_rate_per_ns(ch.receiver_power_dbm, channel_nm) *
                 db_to_linear(-isolation_db) * detector.efficiency *
                 db_to_linear(-bob_internal_loss_db) * detector.gate_width_ns * filter_factor;
    }
    return total;
}

std::pair<double, double> degenerate_fwm_products(double f1_offset_ghz, double f2_offset_ghz) {
    if (f1_offset_ghz == f2_offset_ghz) {
        throw model_domain_error("degenerate FWM products need two distinct frequencies");
    }
    return {2.0 * f1_offset_ghz - f2_offset_ghz, 2.0 * f2_offset_ghz - f1_offset_ghz};
}

double nonlinear_phase_product(double gamma_per_w_km, double p0_w, double length_km,
                               double alpha_per_km, bool use_effective_length) {
    double l_km = length_km;
    if (use_effective_length && alpha_per_km > 0.0) {
        l_km = (1.0 - std::exp(-alpha_per_km * length_km)) / alpha_per_km;
    }
    return gamma_per_w_km * p0_w * l_km;
}

FwmReport check_plan_fwm(const ChannelPlan& plan, const FibreSpec& fibre) {
    FwmReport report;
    const double half_passband_ghz =
        passband_width_ghz(plan.quantum_wavelength_nm, plan.quantum_passband_nm) / 2.0;

    for (std::size_t i = 0; i < plan.channels.size(); ++i) {
        for (std::size_t j = 0; j < plan.channels.size(); ++j) {
            if (i == j) continue;
            const ClassicalChannel& a = plan.channels[i];
            const ClassicalChannel& b = plan.channels[j];
            if (a.direction != b.direction) continue;
            const double product = 2.0 * a.offset_ghz - b.offset_ghz;
            if (std::abs(product) <= half_passband_ghz) {
                FwmViolation v;
                v.first_channel = i;
                v.second_channel = j;
                v.f1_offset_ghz = a.offset_ghz;
                v.f2_offset_ghz = b.offset_ghz;
                v.product_offset_ghz = product;
                v.distance_into_passband_ghz = half_passband_ghz - std::abs(product);
                report.violations.push_back(v);
            }
        }
    }

    const double alpha = alpha_db_to_per_km(fibre.attenuation_db_per_km);
    double p0_w = 0.0;
    for (const ClassicalChannel& ch : plan.channels) {
        p0_w += dbm_to_watts(ch.receiver_power_dbm + plan.dwdm_insertion_loss_db +
                             ch.extra_launch_offset_db +
                             fibre.attenuation_db_per_km * fibre.length_km);
    }
    report.p0_launch_w = p0_w;
    if (alpha > 0.0) {
        report.effective_length_km = (1.0 - std::exp(-alpha * fibre.length_km)) / alpha;
    } else {
        report.effective_length_km = fibre.length_km;
    }
    report.gamma_p0_l =
        nonlinear_phase_product(fibre.gamma_per_w_km, p0_w, fibre.length_km, alpha, true);
    report.spontaneous_negligible = report.gamma_p0_l < 0.1;
    return report;
}

}  // namespace qklink
