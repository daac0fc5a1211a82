#ifndef QKLINK_CONSTANTS_HPP
#define QKLINK_CONSTANTS_HPP

namespace qklink {
namespace constants {

// CODATA 2018 exact values.
inline constexpr double speed_of_light_m_s = 299792458.0;
inline constexpr double planck_j_s = 6.62607015e-34;
inline constexpr double boltzmann_j_k = 1.380649e-23;

// Distillation policy: above this QBER the post-processing chain yields no key.
inline constexpr double qber_distillation_limit = 0.09;

// Minimum secret key rate considered useful by the encryptor (bps).
inline constexpr double min_secret_rate_bps = 8.6;

}  // namespace constants
}  // namespace qklink

#endif
