#include "shadowblade/grammar.hpp"

namespace shadowblade {

namespace {

bool is_alnum(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_hex(char c) noexcept {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

bool is_valid_label(std::string_view label) noexcept {
    if (label.empty() || label.size() > 63) return false;
    if (!is_alnum(label.front()) || !is_alnum(label.back())) return false;
    for (char c : label) {
        if (!is_alnum(c) && c != '-') return false;
    }
    return true;
}

} // namespace

bool is_valid_ipv4(std::string_view text) noexcept {
    int octets = 0;
    std::size_t pos = 0;
    while (true) {
        std::size_t end = text.find('.', pos);
        std::string_view part = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
        if (part.empty() || part.size() > 3) return false;
        if (part.size() > 1 && part.front() == '0') return false;
        int value = 0;
        for (char c : part) {
            if (c < '0' || c > '9') return false;
            value = value * 10 + (c - '0');
        }
        if (value > 255) return false;
        ++octets;
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return octets == 4;
}

bool is_valid_hostname(std::string_view text) noexcept {
    if (text.empty() || text.size() > 253) return false;
    std::size_t pos = 0;
    bool all_numeric = true;
    while (true) {
        std::size_t end = text.find('.', pos);
        std::string_view label = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
        if (!is_valid_label(label)) return false;
        for (char c : label) {
            if (c < '0' || c > '9') all_numeric = false;
        }
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    // "999.1.1.1" or "10.0.0" must not slip through as a hostname.
    return !all_numeric;
}

bool is_valid_host(std::string_view text) noexcept {
    return is_valid_ipv4(text) || is_valid_hostname(text);
}

bool is_valid_url_path(std::string_view text) noexcept {
    if (text.empty() || text.front() != '/') return false;
    std::size_t pos = 1;
    while (pos <= text.size()) {
        std::size_t end = text.find('/', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view segment = text.substr(pos, end - pos);
        if (segment == "." || segment == "..") return false;
        for (std::size_t i = 0; i < segment.size(); ++i) {
            char c = segment[i];
            if (is_alnum(c) || c == '.' || c == '_' || c == '~' || c == '-') continue;
            if (c == '%' && i + 2 < segment.size() && is_hex(segment[i + 1]) &&
                is_hex(segment[i + 2])) {
                i += 2;
                continue;
            }
            return false;
        }
        // An empty segment is only allowed as the trailing one ("/js/").
        if (segment.empty() && end != text.size()) return false;
        pos = end + 1;
    }
    return true;
}

} // namespace shadowblade
