#include "qklink/raman.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qklink/errors.hpp"
#include "qklink/units.hpp"

namespace qklink {

double cross_section_at(const RamanProfile& profile, double wavelength_nm) {
    const auto& samples = profile.samples;
    if (samples.size() < 2) {
        throw model_domain_error("raman profile needs at least two samples");
    }
    if (wavelength_nm < samples.front().wavelength_nm ||
        wavelength_nm > samples.back().wavelength_nm) {
        throw model_domain_error("wavelength " + std::to_string(wavelength_nm) +
                                 " nm outside raman profile span [" +
                                 std::to_string(samples.front().wavelength_nm) + ", " +
                                 std::to_string(samples.back().wavelength_nm) + "] nm");
    }
    auto upper = std::lower_bound(samples.begin(), samples.end(), wavelength_nm,
                                  [](const RamanSample& s, double w) { return s.wavelength_nm < w; });
    if (upper == samples.begin()) return upper->rho_per_km_per_nm;
    if (upper == samples.end()) return samples.back().rho_per_km_per_nm;
    const RamanSample& hi = *upper;
    const RamanSample& lo = *(upper - 1);
    if (hi.wavelength_nm == lo.wavelength_nm) return lo.rho_per_km_per_nm;
    const double f = (wavelength_nm - lo.wavelength_nm) / (hi.wavelength_nm - lo.wavelength_nm);
    return lo.rho_per_km_per_nm + f * (hi.rho_per_km_per_nm - lo.rho_per_km_per_nm);
}

double raman_power_forward(double p_out_w, double length_km, double rho_per_km_per_nm,
                           double passband_nm) {
    return p_out_w * length_km * rho_per_km_per_nm * passband_nm;
}

double raman_power_backward(double p_out_w, double length_km, double alpha_per_km,
                            double rho_per_km_per_nm, double passband_nm) {
    // sinh(aL)/a -> L as a -> 0; switch to the limit to avoid 0/0.
    double effective_km;
    if (alpha_per_km * length_km < 1e-9) {
        effective_km = length_km;
    } else {
        effective_km = std::sinh(alpha_per_km * length_km) / alpha_per_km;
    }
    return p_out_w * effective_km * rho_per_km_per_nm * passband_nm;
}

double count_probability(double power_w, double wavelength_nm, double efficiency,
                         double gate_ns, double extra_loss_db, bool* clamped) {
    const double rate_per_s =
        power_w / photon_energy_j(wavelength_nm) * efficiency * db_to_linear(-extra_loss_db);
    double prob = rate_per_s * gate_ns * 1e-9;
    if (clamped) *clamped = false;
    if (prob > 1.0) {
        prob = 1.0;
        if (clamped) *clamped = true;
    }
    return prob;
}

RamanResult total_raman_probability(const ChannelPlan& plan, const FibreSpec& fibre,
                                    const DetectorSpec& detector, double bob_internal_loss_db,
                                    const RamanProfile& profile, double scale,
                                    const FilterSpec* filter) {
    const double alpha = alpha_db_to_per_km(fibre.attenuation_db_per_km);
    RamanResult result;
    for (const ClassicalChannel& ch : plan.channels) {
        const double channel_nm = offset_wavelength_nm(plan.quantum_wavelength_nm, ch.offset_ghz);
        // Translate the (channel pump -> quantum passband) shift onto the
        // profile's own pump wavelength before sampling.
        const double query_nm =
            profile.pump_wavelength_nm + (plan.quantum_wavelength_nm - channel_nm);
        const double rho = cross_section_at(profile, query_nm) * scale;
        const double p_out_w = dbm_to_watts(ch.receiver_power_dbm + plan.dwdm_insertion_loss_db +
                                            ch.extra_launch_offset_db);
        if (ch.direction == Direction::toward_bob) {
            result.power_forward_w +=
                raman_power_forward(p_out_w, fibre.length_km, rho, plan.quantum_passband_nm);
        } else {
            result.power_backward_w += raman_power_backward(p_out_w, fibre.length_km, alpha, rho,
                                                            plan.quantum_passband_nm);
        }
    }

    double noise_factor = 1.0;
    if (filter) {
        noise_factor = (1.0 - filter->noise_rejection_fraction) *
                       db_to_linear(-filter->insertion_loss_db);
    }
    bool clamped_f = false;
    bool clamped_b = false;
    result.prob_forward_per_gate =
        count_probability(result.power_forward_w * noise_factor, plan.quantum_wavelength_nm,
                          detector.efficiency, detector.gate_width_ns, bob_internal_loss_db,
                          &clamped_f);
    result.prob_backward_per_gate =
        count_probability(result.power_backward_w * noise_factor, plan.quantum_wavelength_nm,
                          detector.efficiency, detector.gate_width_ns, bob_internal_loss_db,
                          &clamped_b);
    result.clamped = clamped_f || clamped_b;
    return result;
}

}  // namespace qklink
