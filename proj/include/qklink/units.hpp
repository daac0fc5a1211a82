#ifndef QKLINK_UNITS_HPP
#define QKLINK_UNITS_HPP

#include <cmath>

#include "qklink/constants.hpp"

namespace qklink {

inline double dbm_to_watts(double power_dbm) {
    return std::pow(10.0, power_dbm / 10.0) * 1e-3;
}

inline double watts_to_dbm(double power_w) {
    return 10.0 * std::log10(power_w * 1e3);
}

inline double db_to_linear(double x_db) {
    return std::pow(10.0, x_db / 10.0);
}

inline double linear_to_db(double ratio) {
    return 10.0 * std::log10(ratio);
}

// dB/km attenuation to the exponential coefficient alpha [1/km].
inline double alpha_db_to_per_km(double attenuation_db_per_km) {
    return std::log(10.0) / 10.0 * attenuation_db_per_km;
}

inline double wavelength_nm_to_hz(double wavelength_nm) {
    return constants::speed_of_light_m_s / (wavelength_nm * 1e-9);
}

inline double hz_to_wavelength_nm(double frequency_hz) {
    return constants::speed_of_light_m_s / frequency_hz * 1e9;
}

inline double photon_energy_j(double wavelength_nm) {
    return constants::planck_j_s * wavelength_nm_to_hz(wavelength_nm);
}

// Wavelength of a channel at a signed frequency offset from a reference
// wavelength. Positive offsets are lower optical frequencies (longer
// wavelengths); conversions are exact, not first order.
inline double offset_wavelength_nm(double reference_nm, double offset_ghz) {
    return hz_to_wavelength_nm(wavelength_nm_to_hz(reference_nm) - offset_ghz * 1e9);
}

// Full width in GHz of a wavelength passband centered on `center_nm`.
inline double passband_width_ghz(double center_nm, double width_nm) {
    return (wavelength_nm_to_hz(center_nm - 0.5 * width_nm) -
            wavelength_nm_to_hz(center_nm + 0.5 * width_nm)) * 1e-9;
}

// Full width in nm of a frequency passband centered on `center_nm`.
inline double passband_width_nm(double center_nm, double width_ghz) {
    const double f = wavelength_nm_to_hz(center_nm);
    return hz_to_wavelength_nm(f - 0.5e9 * width_ghz) -
           hz_to_wavelength_nm(f + 0.5e9 * width_ghz);
}

}  // namespace qklink

#endif
