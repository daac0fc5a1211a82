#ifndef QKLINK_MONTECARLO_HPP
#define QKLINK_MONTECARLO_HPP

#include <cstdint>

#include "qklink/config.hpp"
#include "qklink/keyrate.hpp"
#include "qklink/raman_profile.hpp"

namespace qklink {

enum class McMode {
    matched,  // Bernoulli per gate, mirrors the analytic formulas
    poisson   // Poissonian signal statistics, for exploration only
};

struct McResult {
    std::uint64_t gates_simulated = 0;
    std::uint64_t detections = 0;
    std::uint64_t sifted = 0;
    std::uint64_t errors = 0;
    double empirical_qber = 0.0;
    double empirical_r_sift_hz = 0.0;
    double se_qber = 0.0;
    double se_r_sift_hz = 0.0;
};

// Deterministic, collision-resistant stream derivation. Chunked runs
// partition the gate-index range and derive per-gate randomness from
// split_seed(seed, gate_index), so statistics are bit-identical for any
// chunk count.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream_index);

// Gate-by-gate detection oracle on the same per-gate probabilities as the
// analytic chain. Dead time vetoes the following tau_dead * f_rep gates after
// every detection; the duty cycle enters as a deterministic factor.
McResult simulate(const LinkConfig& config, const RamanProfile& profile, double length_km,
                  std::uint64_t n_gates, std::uint64_t seed, unsigned chunks = 1,
                  McMode mode = McMode::matched);

}  // namespace qklink

#endif
