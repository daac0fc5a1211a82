#ifndef QKLINK_CONFIG_HPP
#define QKLINK_CONFIG_HPP

#include <string>

#include "qklink/types.hpp"

namespace qklink {

inline constexpr int config_schema_version = 1;

// Aggregate link configuration as stored in the JSON document.
struct LinkConfig {
    int schema_version = config_schema_version;
    FibreSpec fibre;
    ChannelPlan plan;
    DetectorSpec detector;
    ProtocolConfig protocol;
    std::optional<FilterSpec> filter;
    std::string raman_profile_path;
    double raman_scale = 1.0;

    void validate() const;
    // Filter spec to apply for this evaluation, or nullptr when disabled/absent.
    const FilterSpec* active_filter() const;
};

// Strict JSON (de)serialization. Unknown keys are rejected; missing optional
// fields take the documented defaults. load throws parse_error /
// validation_error; save emits the canonical field order so that
// load-then-save is idempotent.
LinkConfig load_config(const std::string& path);
LinkConfig config_from_json_text(const std::string& text, const std::string& origin);
std::string config_to_json_text(const LinkConfig& config);
void save_config(const LinkConfig& config, const std::string& path);

}  // namespace qklink

#endif
