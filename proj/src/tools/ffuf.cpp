#include <filesystem>
#include <regex>
#include <unordered_set>

#include "shadowblade/error.hpp"
#include "shadowblade/grammar.hpp"
#include "shadowblade/tools.hpp"

namespace shadowblade {

using nlohmann::json;

namespace {

struct UrlParts {
    std::string scheme;
    std::string authority;  // host[:port]
    std::string path;       // always starts with "/"
};

std::optional<UrlParts> split_url(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
    UrlParts parts;
    parts.scheme = std::string(url.substr(0, scheme_end));
    std::string_view rest = url.substr(scheme_end + 3);
    const auto path_start = rest.find_first_of("/?#");
    parts.authority = std::string(rest.substr(0, path_start));
    if (parts.authority.empty()) return std::nullopt;
    std::string_view path = path_start == std::string_view::npos ? std::string_view{} : rest.substr(path_start);
    path = path.substr(0, path.find_first_of("?#"));
    parts.path = path.empty() ? "/" : std::string(path);
    return parts;
}

// http(s)://host[:port] with an optional trailing "/", returned without it.
std::string validate_base_url(std::string_view base_url) {
    static const std::regex pattern(R"(^(https?)://([^/:?#]+)(?::([0-9]{1,5}))?/?$)");
    std::cmatch match;
    const std::string text(base_url);
    if (!std::regex_match(text.c_str(), match, pattern)) {
        throw Error(ErrorCode::InvalidUrl, "base URL must be http(s)://host[:port]: '" + text + "'");
    }
    if (!is_valid_host(match[2].str())) {
        throw Error(ErrorCode::InvalidUrl, "base URL host fails the host grammar: '" + text + "'");
    }
    if (match[3].matched) {
        const int port = std::stoi(match[3].str());
        if (port < 1 || port > 65535) throw Error(ErrorCode::InvalidUrl, "base URL port out of range");
    }
    std::string normalized = text;
    if (normalized.back() == '/') normalized.pop_back();
    return normalized;
}

std::string validate_anchor_path(std::string_view anchor_path) {
    if (!is_valid_url_path(anchor_path)) {
        throw Error(ErrorCode::InvalidUrl, "invalid anchor path: '" + std::string(anchor_path) + "'");
    }
    std::string path(anchor_path);
    if (path.back() != '/') path += '/';
    return path;
}

void validate_wordlist(std::string_view wordlist) {
    if (wordlist.empty()) throw Error(ErrorCode::InvalidWordlist, "wordlist path must not be empty");
    if (wordlist.front() == '-') {
        throw Error(ErrorCode::InvalidWordlist, "wordlist path must not start with '-'");
    }
    for (unsigned char c : wordlist) {
        if (c < 0x20 || c == 0x7f) {
            throw Error(ErrorCode::InvalidWordlist, "wordlist path contains control characters");
        }
    }
}

std::string join_codes(const std::vector<int>& codes) {
    std::string out;
    for (int code : codes) {
        if (code < 100 || code > 599) {
            throw Error(ErrorCode::InvalidOptions, "status code " + std::to_string(code) + " out of range");
        }
        if (!out.empty()) out += ',';
        out += std::to_string(code);
    }
    return out;
}

} // namespace

Invocation build_ffuf_invocation(std::string_view base_url, std::string_view anchor_path,
                                 const FfufOptions& opts, std::string_view wordlist_path,
                                 std::string_view output_path) {
    const std::string base = validate_base_url(base_url);
    const std::string anchor = validate_anchor_path(anchor_path);
    validate_wordlist(wordlist_path);
    if (output_path.empty() || output_path.front() == '-') {
        throw Error(ErrorCode::InvalidOptions, "output path must be non-empty and not start with '-'");
    }
    const std::string codes = join_codes(opts.ignore_status_codes);

    Invocation inv;
    inv.program = "ffuf";
    inv.timeout = kFfufTimeout;
    inv.output_path = std::string(output_path);
    inv.argv = {"-u", base + anchor + "FUZZ", "-w", std::string(wordlist_path),
                "-of", "json", "-o", std::string(output_path)};
    if (opts.follow_redirect) inv.argv.emplace_back("-r");
    if (opts.path_recursion) inv.argv.emplace_back("-recursion");
    if (!codes.empty()) {
        inv.argv.emplace_back("-fc");
        inv.argv.push_back(codes);
    }
    return inv;
}

Invocation build_ffuf_invocation(std::string_view base_url, std::string_view anchor_path,
                                 const FfufOptions& opts, std::string_view wordlist_path) {
    // Validate first so the derived file name never mixes in hostile input.
    const std::string base = validate_base_url(base_url);
    const std::string anchor = validate_anchor_path(anchor_path);
    validate_wordlist(wordlist_path);
    const std::string seed = base + "\n" + anchor + "\n" + std::string(wordlist_path) + "\n" +
                             to_json(opts).dump();
    const auto path = std::filesystem::temp_directory_path() /
                      ("shadowblade-ffuf-" + sha256_hex(seed).substr(0, 16) + ".json");
    return build_ffuf_invocation(base_url, anchor_path, opts, wordlist_path, path.string());
}

PathScanResult parse_ffuf_json(std::string_view data) {
    json doc = json::parse(data, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw Error(ErrorCode::MalformedJson, "ffuf output is not valid JSON");
    if (!doc.is_object()) throw Error(ErrorCode::MalformedJson, "ffuf output must be a JSON object");
    if (!doc.contains("results")) {
        throw Error(ErrorCode::MissingResultsField, "ffuf output has no 'results' field");
    }
    const auto& results = doc["results"];
    if (!results.is_array()) throw Error(ErrorCode::MalformedJson, "'results' must be an array");

    PathScanResult out;
    std::string anchor_path = "/";
    if (doc.contains("config") && doc["config"].is_object() && doc["config"].contains("url") &&
        doc["config"]["url"].is_string()) {
        if (auto url = split_url(doc["config"]["url"].get<std::string>())) {
            out.base_url = url->scheme + "://" + url->authority;
            const auto fuzz = url->path.find("FUZZ");
            anchor_path = url->path.substr(0, fuzz == std::string::npos ? url->path.size() : fuzz);
            if (anchor_path.empty() || anchor_path.back() != '/') anchor_path += '/';
        }
    }

    std::unordered_set<std::string> seen;
    for (const auto& item : results) {
        if (!item.is_object()) throw Error(ErrorCode::MalformedJson, "result entries must be objects");
        if (!item.contains("status") || !item["status"].is_number_integer()) {
            throw Error(ErrorCode::MalformedJson, "result entry lacks an integer 'status'");
        }
        PathEntry entry;
        entry.http_status = item["status"].get<int>();
        if (entry.http_status < 100 || entry.http_status > 599) {
            throw Error(ErrorCode::MalformedJson, "status " + std::to_string(entry.http_status) + " out of range");
        }
        if (item.contains("length") && item["length"].is_number_integer()) {
            entry.content_length = item["length"].get<long long>();
        }
        if (item.contains("redirectlocation") && item["redirectlocation"].is_string() &&
            !item["redirectlocation"].get_ref<const std::string&>().empty()) {
            entry.redirect_location = item["redirectlocation"].get<std::string>();
        }

        std::optional<std::string> fuzz_value;
        if (item.contains("input") && item["input"].is_object() && item["input"].contains("FUZZ") &&
            item["input"]["FUZZ"].is_string()) {
            fuzz_value = item["input"]["FUZZ"].get<std::string>();
        }
        // The reported URL already carries the prefix of recursion jobs; the
        // anchor-plus-input form is the fallback for documents without it.
        std::optional<UrlParts> url;
        if (item.contains("url") && item["url"].is_string()) url = split_url(item["url"].get<std::string>());
        if (url) {
            entry.url_path = url->path;
            if (out.base_url.empty()) out.base_url = url->scheme + "://" + url->authority;
        } else if (fuzz_value) {
            std::string value = *fuzz_value;
            while (!value.empty() && value.front() == '/') value.erase(value.begin());
            entry.url_path = anchor_path + value;
        } else {
            throw Error(ErrorCode::MalformedJson, "result entry has neither 'url' nor 'input.FUZZ'");
        }

        if (seen.insert(entry.url_path).second) out.entries.push_back(std::move(entry));
    }
    return out;
}

} // namespace shadowblade
