#include "qklink/raman_profile.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qklink/errors.hpp"

namespace qklink {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& text, double* out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) return false;
    *out = v;
    return true;
}

// Metadata comments look like `# pump_nm=1550.0`.
void parse_metadata(const std::string& comment, RamanProfile* profile) {
    const std::string body = trim(comment.substr(1));
    const auto eq = body.find('=');
    if (eq == std::string::npos) return;
    const std::string key = trim(body.substr(0, eq));
    double value = 0.0;
    if (!parse_double(body.substr(eq + 1), &value)) return;
    if (key == "pump_nm") profile->pump_wavelength_nm = value;
    if (key == "temperature_K") profile->temperature_k = value;
}

}  // namespace

double RamanProfile::min_wavelength_nm() const {
    return samples.empty() ? 0.0 : samples.front().wavelength_nm;
}

double RamanProfile::max_wavelength_nm() const {
    return samples.empty() ? 0.0 : samples.back().wavelength_nm;
}

void RamanProfile::validate() {
    if (samples.size() < 2) {
        throw validation_error("raman profile needs at least 2 samples, got " +
                               std::to_string(samples.size()));
    }
    double previous = -1.0;
    for (const RamanSample& s : samples) {
        if (!std::isfinite(s.wavelength_nm) || !std::isfinite(s.rho_per_km_per_nm)) {
            throw validation_error("raman profile contains non-finite values");
        }
        if (s.rho_per_km_per_nm < 0.0) {
            throw validation_error("negative cross-section at " +
                                   std::to_string(s.wavelength_nm) + " nm");
        }
        if (s.wavelength_nm <= previous) {
            throw validation_error("unsorted profile: wavelengths must be strictly increasing");
        }
        previous = s.wavelength_nm;
    }
    if (!std::isfinite(pump_wavelength_nm) || pump_wavelength_nm <= 0.0) {
        throw validation_error("raman profile pump wavelength must be positive");
    }
    if (!std::isfinite(temperature_k) || temperature_k <= 0.0) {
        throw validation_error("raman profile temperature must be positive");
    }
    // Pump outside the sampled span is suspicious but permitted.
    pump_outside_span = pump_wavelength_nm < min_wavelength_nm() ||
                        pump_wavelength_nm > max_wavelength_nm();
}

RamanProfile load_raman_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open raman profile '" + path + "'");

    RamanProfile profile;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            parse_metadata(t, &profile);
            continue;
        }
        if (!header_seen) {
            if (t != "wavelength_nm,rho_per_km_per_nm") {
                throw parse_error(path + ":" + std::to_string(line_no) +
                                  ": expected header 'wavelength_nm,rho_per_km_per_nm'");
            }
            header_seen = true;
            continue;
        }
        const auto comma = t.find(',');
        double lambda = 0.0;
        double rho = 0.0;
        if (comma == std::string::npos || !parse_double(t.substr(0, comma), &lambda) ||
            !parse_double(t.substr(comma + 1), &rho)) {
            throw parse_error(path + ":" + std::to_string(line_no) +
                              ": expected 'wavelength_nm,rho' numeric row, got '" + t + "'");
        }
        profile.samples.push_back({lambda, rho});
    }
    if (!header_seen) throw parse_error(path + ": missing CSV header");
    profile.validate();
    return profile;
}

}  // namespace qklink
