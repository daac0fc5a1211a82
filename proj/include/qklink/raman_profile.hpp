#ifndef QKLINK_RAMAN_PROFILE_HPP
#define QKLINK_RAMAN_PROFILE_HPP

#include <string>
#include <vector>

namespace qklink {

struct RamanSample {
    double wavelength_nm = 0.0;
    double rho_per_km_per_nm = 0.0;
};

// Tabulated effective Raman cross-section rho(lambda) for one pump wavelength.
// Samples are strictly increasing in wavelength; rho is non-negative.
struct RamanProfile {
    double pump_wavelength_nm = 1550.0;
    double temperature_k = 293.0;
    std::vector<RamanSample> samples;
    // Set when the pump wavelength lies outside the sampled span (warning, not error).
    bool pump_outside_span = false;

    double min_wavelength_nm() const;
    double max_wavelength_nm() const;

    // Throws validation_error on invariant violations; sets pump_outside_span.
    void validate();
};

// Loads the CSV schema: optional '#' comment lines (with `# pump_nm=` and
// `# temperature_K=` metadata), a `wavelength_nm,rho_per_km_per_nm` header,
// then numeric rows. Throws parse_error (with line number) or validation_error.
RamanProfile load_raman_profile(const std::string& path);

}  // namespace qklink

#endif
