#ifndef QKLINK_KEYRATE_HPP
#define QKLINK_KEYRATE_HPP

#include "qklink/config.hpp"
#include "qklink/raman_profile.hpp"
#include "qklink/types.hpp"

namespace qklink {

// Rate-optimal mean photon number: t for BB84, 2 sqrt(t) for SARG.
double optimal_mu(Protocol protocol, double transmission_t);

// Sifting acceptance factor beta: 1 for BB84, (2 - V)/2 for SARG.
double sifting_factor(Protocol protocol, double visibility);

// p_mu = mu * t * eta * 10^(-bob_loss/10), clamped to 1 with optional flag.
double signal_detection_prob(double mu, double transmission_t, double efficiency,
                             double bob_loss_db, bool* clamped = nullptr);

struct QberParts {
    double total = 0.0;
    double optical = 0.0;   // p_mu (1 - V) share
    double detector = 0.0;  // 2 p_dc + p_AP share
    double wdm = 0.0;       // p_ram + p_ct share
};

// QBER = (1/2) [p_mu(1-V) + 2 p_dc + p_AP + p_ram + p_ct] /
//              [beta p_mu + 2 p_dc + p_AP + p_ram + p_ct],
// decomposed over the common denominator so parts sum exactly to the total.
// Throws validation_error when every probability is zero (no detections).
QberParts qber(const GateProbabilities& probs, double visibility, double beta);

// R_sift = (1/2)(beta p_mu + noise) f_rep eta_duty / (1 + tau_dead (p_mu + noise) f_rep)
// with eta_duty = L_S / (L + 2 L_S). Throws validation_error when both lengths
// are zero (undefined duty cycle).
double sifted_rate(const GateProbabilities& probs, double beta, double pulse_rate_hz,
                   double dead_time_s, double length_km, double storage_km);

double binary_entropy(double p);

// I_AB = 1 - eta_ec H(QBER), floored at 0.
double mutual_info_ab(double qber_value, double eta_ec);

// Optimal coherent attack bound for BB84. Requires mu <= 2 t (else
// model_domain_error): D = (1-V)/(2 - mu/t), P = 1/2 + sqrt(D(1-D)),
// I_AE = [(1 - mu/2t)(1 - H(P)) + mu/2t] / [1 + 2 p_dc / (mu t eta)].
double i_ae_bb84(double mu, double transmission_t, double visibility,
                 double p_dc_per_gate, double efficiency);

// I_pns(k) = 1 - H(1/2 + 1/2 sqrt(1 - 2^-k)), k >= 1.
double i_pns(int k);

// Photon-number-splitting bound for SARG:
// I_AE = I_pns(1) + (1/12)(mu^2/t) e^(-mu) (1 - I_pns(1)).
double i_ae_sarg(double mu, double transmission_t);

// R_sec = max(0, R_sift (I_AB - I_AE)).
double secret_rate(double r_sift_hz, double i_ab, double i_ae);

// Full analytic chain for one fibre length. Optional Raman override
// (forward, backward per-gate probabilities) replaces the profile-driven
// computation; used by the band comparison.
LinkBudget link_budget(const LinkConfig& config, const RamanProfile& profile,
                       double length_km,
                       const std::pair<double, double>* raman_override = nullptr);

}  // namespace qklink

#endif
