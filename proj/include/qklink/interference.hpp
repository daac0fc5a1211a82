#ifndef QKLINK_INTERFERENCE_HPP
#define QKLINK_INTERFERENCE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "qklink/types.hpp"

namespace qklink {

double photon_rate_per_ns(double power_dbm, double wavelength_nm);

// Smallest attenuation such that the detected leak rate per gate drops to the
// target probability. Never negative.
double required_isolation_db(double receiver_power_dbm, double wavelength_nm,
                             double target_prob_per_gate, double efficiency,
                             double internal_loss_db, double gate_ns);

// Classical light leaking through finite DWDM isolation into the quantum
// port, per gate. Only co-propagating (toward_bob) channels reach Bob's
// demultiplexer; isolation tier is chosen by grid adjacency.
double crosstalk_probability(const ChannelPlan& plan, const DetectorSpec& detector,
                             double bob_internal_loss_db, const FilterSpec* filter);

// Degenerate four-wave mixing products of a channel pair, in the same
// offset-from-quantum coordinates: (2 f1 - f2, 2 f2 - f1).
// Throws model_domain_error when f1 == f2.
std::pair<double, double> degenerate_fwm_products(double f1_offset_ghz, double f2_offset_ghz);

struct FwmViolation {
    std::size_t first_channel = 0;   // indices into plan.channels
    std::size_t second_channel = 0;
    double f1_offset_ghz = 0.0;
    double f2_offset_ghz = 0.0;
    double product_offset_ghz = 0.0;
    // Depth of the product inside the quantum passband (>= 0 for violations).
    double distance_into_passband_ghz = 0.0;
};

struct FwmReport {
    std::vector<FwmViolation> violations;
    double gamma_p0_l = 0.0;          // gamma * P0 * L_eff
    bool spontaneous_negligible = true;
    double p0_launch_w = 0.0;         // total classical launch power
    double effective_length_km = 0.0;
};

// gamma * P0 * L nonlinear phase estimate; uses the effective length
// (1 - e^(-alpha L))/alpha by default since launch power decays along the span.
double nonlinear_phase_product(double gamma_per_w_km, double p0_w, double length_km,
                               double alpha_per_km, bool use_effective_length = true);

// Enumerates ordered co-propagating channel pairs and flags every degenerate
// product that lands within half the quantum passband of the quantum channel.
// Also evaluates the spontaneous-FWM negligibility scalar (threshold 0.1)
// from the summed launch power of all classical channels.
FwmReport check_plan_fwm(const ChannelPlan& plan, const FibreSpec& fibre);

}  // namespace qklink

#endif
