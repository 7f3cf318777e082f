#include <charconv>
#include <cstdlib>
#include <stdexcept>

#include "shadowblade/service.hpp"

namespace shadowblade {

namespace {

std::optional<std::string> env(const char* name) {
    const char* value = std::getenv(name);
    if (!value || !*value) return std::nullopt;
    return std::string(value);
}

int parse_positive(const std::string& text, const char* variable) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1) {
        throw std::invalid_argument(std::string(variable) + " must be a positive integer");
    }
    return value;
}

} // namespace

ServiceConfig ServiceConfig::from_environment() {
    ServiceConfig config;
    if (auto v = env("SHADOWBLADE_DATA_DIR")) config.data_dir = *v;
    if (auto v = env("SHADOWBLADE_BIND")) {
        const auto colon = v->rfind(':');
        if (colon == std::string::npos || colon == 0) {
            throw std::invalid_argument("SHADOWBLADE_BIND must look like host:port");
        }
        config.bind_host = v->substr(0, colon);
        config.bind_port = parse_positive(v->substr(colon + 1), "SHADOWBLADE_BIND port");
        if (config.bind_port > 65535) throw std::invalid_argument("SHADOWBLADE_BIND port out of range");
    }
    if (auto v = env("SHADOWBLADE_TOOL_MODE")) {
        if (*v == "live") config.tool_mode = ToolMode::Live;
        else if (*v == "replay") config.tool_mode = ToolMode::Replay;
        else throw std::invalid_argument("SHADOWBLADE_TOOL_MODE must be 'live' or 'replay'");
    }
    if (auto v = env("SHADOWBLADE_FIXTURES_DIR")) config.fixtures_dir = *v;
    if (auto v = env("SHADOWBLADE_WORDLIST")) config.wordlist = *v;
    if (auto v = env("SHADOWBLADE_MAX_CONCURRENT_SCANS")) {
        config.max_concurrent_scans = parse_positive(*v, "SHADOWBLADE_MAX_CONCURRENT_SCANS");
    }
    if (auto v = env("SHADOWBLADE_UI_DIR")) config.ui_dir = *v;
    return config;
}

std::shared_ptr<ExecutionBackend> make_backend(const ServiceConfig& config) {
    std::shared_ptr<ExecutionBackend> inner;
    if (config.tool_mode == ToolMode::Live) {
        std::optional<std::filesystem::path> record;
        if (auto v = env("SHADOWBLADE_RECORD_DIR")) record = *v;
        inner = std::make_shared<LiveBackend>(record);
    } else {
        inner = std::make_shared<ReplayBackend>(config.fixtures_dir);
    }
    return std::make_shared<LimitedBackend>(std::move(inner), config.max_concurrent_scans);
}

} // namespace shadowblade
