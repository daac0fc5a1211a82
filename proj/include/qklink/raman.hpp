#ifndef QKLINK_RAMAN_HPP
#define QKLINK_RAMAN_HPP

#include "qklink/raman_profile.hpp"
#include "qklink/types.hpp"

namespace qklink {

// Linear interpolation of rho(lambda); exact at sample points. Throws
// model_domain_error when the wavelength is outside the sampled span.
double cross_section_at(const RamanProfile& profile, double wavelength_nm);

// Scattered power collected in a passband at the far fibre end from a
// co-propagating channel whose power at that end is p_out_w.
//   P_f = P_out * L * rho * dlambda
double raman_power_forward(double p_out_w, double length_km, double rho_per_km_per_nm,
                           double passband_nm);

// Backscattered power collected at the near (input) fibre end from a
// counter-propagating observer's viewpoint; p_out_w is the channel power at
// its far (output) end.
//   P_b = P_out * sinh(alpha L) / alpha * rho * dlambda
double raman_power_backward(double p_out_w, double length_km, double alpha_per_km,
                            double rho_per_km_per_nm, double passband_nm);

// Detection probability per gate for broadband noise power hitting the
// detector: P/(h nu) * eta * 10^(-extra_loss/10) * gate. Clamped to 1; the
// optional flag reports whether clamping occurred.
double count_probability(double power_w, double wavelength_nm, double efficiency,
                         double gate_ns, double extra_loss_db, bool* clamped = nullptr);

struct RamanResult {
    double power_forward_w = 0.0;
    double power_backward_w = 0.0;
    double prob_forward_per_gate = 0.0;
    double prob_backward_per_gate = 0.0;
    bool clamped = false;
};

// Sums Raman noise over all classical channels: toward_bob channels scatter
// forward into Bob's gate, toward_alice channels scatter backward. Each
// channel's fibre-end power is reconstructed from its receiver power plus the
// DWDM insertion loss (plus any extra launch offset). `scale` multiplies the
// profile (calibration), `filter` (nullable) applies noise rejection and
// insertion loss to the noise path.
RamanResult total_raman_probability(const ChannelPlan& plan, const FibreSpec& fibre,
                                    const DetectorSpec& detector, double bob_internal_loss_db,
                                    const RamanProfile& profile, double scale,
                                    const FilterSpec* filter);

}  // namespace qklink

#endif
