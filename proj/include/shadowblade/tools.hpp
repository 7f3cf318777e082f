#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "shadowblade/scan_results.hpp"

namespace shadowblade {

struct NmapOptions {
    bool banner_grabbing = false;
    bool hosts_online = false;
    bool default_scripts = false;

    bool operator==(const NmapOptions&) const = default;
};

struct FfufOptions {
    bool path_recursion = false;
    bool follow_redirect = false;
    std::vector<int> ignore_status_codes;

    bool operator==(const FfufOptions&) const = default;
};

// Option sets travel through the HTTP API and job records as JSON objects
// with exactly the field names above. Missing fields take their defaults;
// wrong types, unknown fields and out-of-range status codes are rejected
// with InvalidOptions.
nlohmann::json to_json(const NmapOptions& opts);
nlohmann::json to_json(const FfufOptions& opts);
NmapOptions nmap_options_from_json(const nlohmann::json& doc);
FfufOptions ffuf_options_from_json(const nlohmann::json& doc);

inline constexpr std::chrono::seconds kNmapTimeout{600};
inline constexpr std::chrono::seconds kFfufTimeout{900};

/// External command as a program name plus an argument vector. The argv is
/// handed to process creation verbatim; nothing is ever joined into a shell
/// command line.
struct Invocation {
    std::string program;
    std::vector<std::string> argv;
    std::chrono::seconds timeout{600};
    // Set when the tool writes its result document to a file instead of stdout.
    std::optional<std::string> output_path;

    bool operator==(const Invocation&) const = default;
};

/// nmap argv: [-sV] [-sC] [-Pn] -oX - <host>.
Invocation build_nmap_invocation(std::string_view host, const NmapOptions& opts);

/// ffuf argv: -u <base_url><anchor_path>FUZZ -w <wordlist> -of json -o <output>
/// [-r] [-recursion] [-fc c1,c2,...].
///
/// `base_url` is http(s)://host[:port]; `anchor_path` starts with "/" and gets
/// a trailing "/" appended when missing. The four-argument form writes the
/// results to a temp file whose name is derived from the other arguments.
Invocation build_ffuf_invocation(std::string_view base_url, std::string_view anchor_path,
                                 const FfufOptions& opts, std::string_view wordlist_path);
Invocation build_ffuf_invocation(std::string_view base_url, std::string_view anchor_path,
                                 const FfufOptions& opts, std::string_view wordlist_path,
                                 std::string_view output_path);

/// Parses nmap's XML output (-oX). Only the first <host> is read.
/// Throws MalformedXml or NoHostFound.
PortScanResult parse_nmap_xml(std::string_view data);

/// Parses ffuf's JSON results document (-of json).
/// Throws MalformedJson or MissingResultsField.
PathScanResult parse_ffuf_json(std::string_view data);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

} // namespace shadowblade
