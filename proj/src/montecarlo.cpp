#include "qklink/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "qklink/errors.hpp"

namespace qklink {

namespace {

// SplitMix64 finalizer; statistically independent streams for consecutive
// indices, stable across platforms.
std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

double to_unit_double(std::uint64_t u) {
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

// Outcome codes per gate before the dead-time pass.
enum : std::uint8_t { gate_none = 0, gate_unsifted = 1, gate_sifted_ok = 2, gate_sifted_err = 3 };

struct GateModel {
    double t_signal = 0.0;  // cumulative category thresholds for u1
    double t_dark = 0.0;
    double t_raman = 0.0;
    double t_crosstalk = 0.0;
    double t_afterpulse = 0.0;
    double signal_sift = 0.0;  // u2 thresholds
    double signal_err = 0.0;
    double noise_sift = 0.5;
    double noise_err = 0.25;
};

std::uint8_t classify_gate(const GateModel& m, std::uint64_t seed, std::uint64_t gate) {
    const std::uint64_t gate_seed = split_seed(seed, gate);
    const double u1 = to_unit_double(split_seed(gate_seed, 0));
    if (u1 >= m.t_afterpulse) return gate_none;
    const double u2 = to_unit_double(split_seed(gate_seed, 1));
    if (u1 < m.t_signal) {
        if (u2 < m.signal_err) return gate_sifted_err;
        if (u2 < m.signal_sift) return gate_sifted_ok;
        return gate_unsifted;
    }
    // Dark, Raman, crosstalk and afterpulse detections share random sifting.
    if (u2 < m.noise_err) return gate_sifted_err;
    if (u2 < m.noise_sift) return gate_sifted_ok;
    return gate_unsifted;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream_index) {
    return mix(seed + (stream_index + 1) * 0x9E3779B97F4A7C15ULL);
}

McResult simulate(const LinkConfig& config, const RamanProfile& profile, double length_km,
                  std::uint64_t n_gates, std::uint64_t seed, unsigned chunks, McMode mode) {
    if (n_gates == 0) throw validation_error("gate count must be positive");
    if (chunks == 0) chunks = 1;
    if (chunks > n_gates) chunks = static_cast<unsigned>(n_gates);

    const LinkBudget budget = link_budget(config, profile, length_km);

    GateModel model;
    const double p_signal =
        mode == McMode::matched ? budget.p_mu : 1.0 - std::exp(-budget.p_mu);
    model.t_signal = p_signal;
    model.t_dark = model.t_signal + 2.0 * budget.p_dc_per_gate;
    model.t_raman = model.t_dark + budget.p_ram_f + budget.p_ram_b;
    model.t_crosstalk = model.t_raman + budget.p_ct;
    model.t_afterpulse = model.t_crosstalk + budget.p_ap;

    const double visibility = config.protocol.visibility;
    const double beta = sifting_factor(config.protocol.protocol, visibility);
    if (config.protocol.protocol == Protocol::bb84) {
        model.signal_sift = 0.5;
    } else {
        model.signal_sift = beta / 2.0;
    }
    model.signal_err = (1.0 - visibility) / 4.0;

    // Phase 1: classify every gate independently (embarrassingly parallel).
    std::vector<std::uint8_t> codes(n_gates);
    auto classify_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t g = begin; g < end; ++g) {
            codes[g] = classify_gate(model, seed, g);
        }
    };
    if (chunks == 1) {
        classify_range(0, n_gates);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(chunks);
        for (unsigned c = 0; c < chunks; ++c) {
            const std::uint64_t begin = n_gates * c / chunks;
            const std::uint64_t end = n_gates * (c + 1) / chunks;
            workers.emplace_back(classify_range, begin, end);
        }
        for (std::thread& w : workers) w.join();
    }

    // Phase 2: sequential dead-time veto. A detection disables the detector
    // for the next dead_time * pulse_rate gates regardless of chunking.
    const std::uint64_t dead_gates = static_cast<std::uint64_t>(
        std::llround(config.detector.dead_time_us * 1e-6 * config.protocol.pulse_rate_hz));

    const std::uint64_t n_batches = n_gates >= 200 ? 100 : 1;
    const std::uint64_t batch_size = n_gates / n_batches;
    std::vector<std::uint64_t> batch_sifted(n_batches, 0);
    std::vector<std::uint64_t> batch_gates(n_batches, 0);

    McResult result;
    result.gates_simulated = n_gates;
    std::uint64_t veto = 0;
    for (std::uint64_t g = 0; g < n_gates; ++g) {
        const std::uint64_t b = std::min(g / batch_size, n_batches - 1);
        ++batch_gates[b];
        if (veto > 0) {
            --veto;
            continue;
        }
        const std::uint8_t code = codes[g];
        if (code == gate_none) continue;
        ++result.detections;
        veto = dead_gates;
        if (code == gate_unsifted) continue;
        ++result.sifted;
        ++batch_sifted[b];
        if (code == gate_sifted_err) ++result.errors;
    }

    const double storage = config.protocol.storage_line_km;
    if (length_km == 0.0 && storage == 0.0) {
        throw validation_error("duty cycle undefined: link and storage line both zero length");
    }
    const double duty = storage / (length_km + 2.0 * storage);
    const double elapsed_s = static_cast<double>(n_gates) / config.protocol.pulse_rate_hz;
    result.empirical_r_sift_hz = static_cast<double>(result.sifted) / elapsed_s * duty;

    if (result.sifted > 0) {
        const double q = static_cast<double>(result.errors) / static_cast<double>(result.sifted);
        result.empirical_qber = q;
        result.se_qber = std::sqrt(q * (1.0 - q) / static_cast<double>(result.sifted));
    }

    if (n_batches > 1) {
        // Batch means absorb the dead-time correlation between nearby gates.
        std::vector<double> rates(n_batches);
        double mean = 0.0;
        for (std::uint64_t b = 0; b < n_batches; ++b) {
            const double t_b = static_cast<double>(batch_gates[b]) / config.protocol.pulse_rate_hz;
            rates[b] = static_cast<double>(batch_sifted[b]) / t_b * duty;
            mean += rates[b];
        }
        mean /= static_cast<double>(n_batches);
        double ss = 0.0;
        for (double r : rates) ss += (r - mean) * (r - mean);
        result.se_r_sift_hz =
            std::sqrt(ss / static_cast<double>(n_batches * (n_batches - 1)));
    }
    return result;
}

}  // namespace qklink
