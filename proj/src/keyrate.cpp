#include "qklink/keyrate.hpp"

#include <cmath>
#include <string>

#include "qklink/constants.hpp"
#include "qklink/errors.hpp"
#include "qklink/interference.hpp"
#include "qklink/raman.hpp"
#include "qklink/units.hpp"

namespace qklink {

double optimal_mu(Protocol protocol, double transmission_t) {
    if (!(transmission_t > 0.0)) {
        throw model_domain_error("transmission must be positive to pick a mean photon number");
    }
    switch (protocol) {
        case Protocol::bb84:
            return transmission_t;
        case Protocol::sarg:
            return 2.0 * std::sqrt(transmission_t);
    }
    throw model_domain_error("unknown protocol");
}

double sifting_factor(Protocol protocol, double visibility) {
    switch (protocol) {
        case Protocol::bb84:
            return 1.0;
        case Protocol::sarg:
            return (2.0 - visibility) / 2.0;
    }
    throw model_domain_error("unknown protocol");
}

double signal_detection_prob(double mu, double transmission_t, double efficiency,
                             double bob_loss_db, bool* clamped) {
    double p = mu * transmission_t * efficiency * db_to_linear(-bob_loss_db);
    if (clamped) *clamped = false;
    if (p > 1.0) {
        p = 1.0;
        if (clamped) *clamped = true;
    }
    return p;
}

QberParts qber(const GateProbabilities& probs, double visibility, double beta) {
    const double denominator = beta * probs.p_mu + probs.noise();
    if (denominator <= 0.0) {
        throw validation_error("no detections: every gate probability is zero");
    }
    QberParts parts;
    parts.optical = 0.5 * probs.p_mu * (1.0 - visibility) / denominator;
    parts.detector = 0.5 * (2.0 * probs.p_dc_per_gate + probs.p_ap) / denominator;
    parts.wdm = 0.5 * (probs.p_ram + probs.p_ct) / denominator;
    parts.total = parts.optical + parts.detector + parts.wdm;
    return parts;
}

double sifted_rate(const GateProbabilities& probs, double beta, double pulse_rate_hz,
                   double dead_time_s, double length_km, double storage_km) {
    if (length_km == 0.0 && storage_km == 0.0) {
        throw validation_error("duty cycle undefined: link and storage line both zero length");
    }
    const double duty = storage_km / (length_km + 2.0 * storage_km);
    const double accepted = 0.5 * (beta * probs.p_mu + probs.noise());
    const double detected = probs.total();
    return accepted * pulse_rate_hz * duty / (1.0 + dead_time_s * detected * pulse_rate_hz);
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) {
        throw model_domain_error("binary entropy argument " + std::to_string(p) +
                                 " outside [0, 1]");
    }
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double mutual_info_ab(double qber_value, double eta_ec) {
    const double info = 1.0 - eta_ec * binary_entropy(qber_value);
    return info > 0.0 ? info : 0.0;
}

double i_ae_bb84(double mu, double transmission_t, double visibility,
                 double p_dc_per_gate, double efficiency) {
    if (!(transmission_t > 0.0)) {
        throw model_domain_error("transmission must be positive");
    }
    const double ratio = mu / transmission_t;
    if (ratio > 2.0) {
        throw model_domain_error("eavesdropper bound undefined: mu exceeds twice the transmission");
    }
    const double d = (1.0 - visibility) / (2.0 - ratio);
    const double p = 0.5 + std::sqrt(d * (1.0 - d));
    const double numerator = (1.0 - ratio / 2.0) * (1.0 - binary_entropy(p)) + ratio / 2.0;
    if (p_dc_per_gate <= 0.0) return numerator;
    const double signal = mu * transmission_t * efficiency;
    if (signal <= 0.0) return 0.0;
    return numerator / (1.0 + 2.0 * p_dc_per_gate / signal);
}

double i_pns(int k) {
    if (k < 1) throw model_domain_error("storage attack order must be at least 1");
    const double p = 0.5 + 0.5 * std::sqrt(1.0 - std::pow(2.0, -k));
    return 1.0 - binary_entropy(p);
}

double i_ae_sarg(double mu, double transmission_t) {
    if (!(transmission_t > 0.0)) {
        throw model_domain_error("transmission must be positive");
    }
    const double base = i_pns(1);
    return base + (1.0 / 12.0) * (mu * mu / transmission_t) * std::exp(-mu) * (1.0 - base);
}

double secret_rate(double r_sift_hz, double i_ab, double i_ae) {
    const double rate = r_sift_hz * (i_ab - i_ae);
    return rate > 0.0 ? rate : 0.0;
}

LinkBudget link_budget(const LinkConfig& config, const RamanProfile& profile,
                       double length_km,
                       const std::pair<double, double>* raman_override) {
    if (length_km < 0.0) throw validation_error("length must be non-negative");
    const FilterSpec* filter = config.active_filter();

    double transmission = db_to_linear(-config.fibre.attenuation_db_per_km * length_km);
    if (filter) transmission *= db_to_linear(-filter->insertion_loss_db);

    const double mu = config.protocol.mean_photon_override
                          ? *config.protocol.mean_photon_override
                          : optimal_mu(config.protocol.protocol, transmission);

    LinkBudget budget;
    budget.length_km = length_km;
    budget.protocol = config.protocol.protocol;
    budget.filtered = filter != nullptr;
    budget.mu = mu;
    budget.transmission = transmission;

    bool clamped_signal = false;
    budget.p_mu = signal_detection_prob(
        mu, transmission, config.detector.efficiency,
        config.protocol.bob_internal_loss_db + config.plan.quantum_path_insertion_db,
        &clamped_signal);

    bool clamped_raman = false;
    if (raman_override) {
        budget.p_ram_f = raman_override->first;
        budget.p_ram_b = raman_override->second;
    } else {
        FibreSpec fibre = config.fibre;
        fibre.length_km = length_km;
        const RamanResult raman =
            total_raman_probability(config.plan, fibre, config.detector,
                                    config.protocol.bob_internal_loss_db, profile,
                                    config.raman_scale, filter);
        budget.p_ram_f = raman.prob_forward_per_gate;
        budget.p_ram_b = raman.prob_backward_per_gate;
        clamped_raman = raman.clamped;
    }

    budget.p_ct = crosstalk_probability(config.plan, config.detector,
                                        config.protocol.bob_internal_loss_db, filter);
    budget.p_dc_per_gate = config.detector.dark_count_prob_per_gate();

    GateProbabilities probs;
    probs.p_mu = budget.p_mu;
    probs.p_dc_per_gate = budget.p_dc_per_gate;
    probs.p_ram = budget.p_ram_f + budget.p_ram_b;
    probs.p_ct = budget.p_ct;
    probs.p_ap = config.detector.afterpulse_prob *
                 (probs.p_mu + 2.0 * probs.p_dc_per_gate + probs.p_ram + probs.p_ct);
    budget.p_ap = probs.p_ap;

    const double beta = sifting_factor(config.protocol.protocol, config.protocol.visibility);
    const QberParts parts = qber(probs, config.protocol.visibility, beta);
    budget.qber_total = parts.total;
    budget.qber_opt = parts.optical;
    budget.qber_det = parts.detector;
    budget.qber_wdm = parts.wdm;

    budget.r_sift_hz =
        sifted_rate(probs, beta, config.protocol.pulse_rate_hz,
                    config.detector.dead_time_us * 1e-6, length_km,
                    config.protocol.storage_line_km);

    budget.i_ab = mutual_info_ab(parts.total, config.protocol.error_correction_inefficiency);
    if (config.protocol.protocol == Protocol::bb84) {
        budget.i_ae = i_ae_bb84(mu, transmission, config.protocol.visibility,
                                budget.p_dc_per_gate, config.detector.efficiency);
    } else {
        budget.i_ae = i_ae_sarg(mu, transmission);
    }

    budget.r_sec_hz = secret_rate(budget.r_sift_hz, budget.i_ab, budget.i_ae);
    if (parts.total > constants::qber_distillation_limit) budget.r_sec_hz = 0.0;

    budget.r_ec_eff = config.protocol.error_correction_inefficiency * binary_entropy(parts.total);
    if (1.0 - budget.r_ec_eff <= 0.0) {
        budget.r_pa_eff = 1.0;
    } else {
        budget.r_pa_eff = 1.0 - (budget.i_ab - budget.i_ae) / (1.0 - budget.r_ec_eff);
    }

    budget.clamped = clamped_signal || clamped_raman;
    return budget;
}

}  // namespace qklink
