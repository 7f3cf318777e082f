#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shadowblade {

enum class PortState { Open, Closed, Filtered };

std::string_view to_string(PortState state) noexcept;
std::optional<PortState> parse_port_state(std::string_view text) noexcept;

struct PortEntry {
    int port_number = 0;
    std::string protocol;  // "tcp" | "udp"
    PortState state = PortState::Open;
    std::optional<std::string> service_name;
    std::optional<std::string> product;
    std::optional<std::string> version;
    std::optional<std::string> extra_info;
    std::optional<std::string> banner;

    bool has_service_info() const noexcept {
        return service_name.has_value() || product.has_value();
    }

    bool operator==(const PortEntry&) const = default;
};

/// Tool-agnostic result of a port scan against one host.
struct PortScanResult {
    std::string host;
    // Other names the scanner reported for the same host (addresses and
    // hostnames). Used when matching the result against a registered target.
    std::vector<std::string> aliases;
    std::vector<PortEntry> ports;

    bool operator==(const PortScanResult&) const = default;
};

struct PathEntry {
    std::string url_path;
    int http_status = 0;
    long long content_length = 0;
    std::optional<std::string> redirect_location;

    bool operator==(const PathEntry&) const = default;
};

/// Tool-agnostic result of a web path discovery run.
struct PathScanResult {
    std::string base_url;
    std::vector<PathEntry> entries;

    bool operator==(const PathScanResult&) const = default;
};

} // namespace shadowblade
