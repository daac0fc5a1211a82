#ifndef QKLINK_SCENARIO_HPP
#define QKLINK_SCENARIO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qklink/config.hpp"
#include "qklink/keyrate.hpp"
#include "qklink/raman_profile.hpp"

namespace qklink {

// One budget per length, evaluated independently (parallel, input order kept).
std::vector<LinkBudget> sweep_length(const LinkConfig& config, const RamanProfile& profile,
                                     const std::vector<double>& lengths_km);

// Mean thermal phonon occupation n = 1/(e^(h nu / k T) - 1).
double phonon_occupation(double shift_thz, double temperature_k);

// Anti-Stokes occupation ratio between a quantum channel detuned by
// `detuning_ghz` from 1550 nm band pumps and one at 1310 nm:
// n(detuning) / n(c/1310nm - c/1550nm).
double band_noise_ratio(double detuning_ghz, double temperature_k);

struct BandComparison {
    std::vector<LinkBudget> band_1550;
    std::vector<LinkBudget> band_1310;
    double ratio_used = 0.0;          // phonon occupation ratio applied to Raman
    double detuning_ghz_used = 0.0;
    // Largest swept length with r_sec > 0, per band (0 when none).
    double max_distance_1550_km = 0.0;
    double max_distance_1310_km = 0.0;
};

// Sweeps both configurations over the same grid. The 1310 rows reuse the 1550
// configuration's Raman count probability scaled by the phonon occupation
// ratio between the two plans' mean channel detunings (1 for identical
// plans); crosstalk and dark counts come from the 1310 configuration itself.
BandComparison compare_bands(const LinkConfig& config_1550, const RamanProfile& profile_1550,
                             const LinkConfig& config_1310, const RamanProfile& profile_1310,
                             const std::vector<double>& lengths_km);

// Scale factor s such that link_budget with rho -> s * rho reproduces
// observed_qber at length_km (|qber - target| <= 1e-6), found by bisection.
// Throws validation_error when the target cannot be bracketed.
double calibrate_rho(const LinkConfig& config, const RamanProfile& profile,
                     double observed_qber, double length_km);

// Named complete configurations. `data_dir` prefixes the bundled profile path.
// Names: paper-default, paper-default-filters, dark-fibre, 10gbps-sfp,
// low-dark-count-1310. Throws validation_error for unknown names.
LinkConfig preset(const std::string& name, const std::string& data_dir = "data");
std::vector<std::string> preset_names();

// CSV emission (schema shared by sweep and compare-bands outputs).
std::string sweep_csv_header();
void write_sweep_csv_row(std::ostream& out, const LinkBudget& row);
void write_sweep_csv(std::ostream& out, const std::vector<LinkBudget>& rows);

}  // namespace qklink

#endif
