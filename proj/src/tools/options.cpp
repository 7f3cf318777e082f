#include <set>

#include "shadowblade/error.hpp"
#include "shadowblade/tools.hpp"

namespace shadowblade {

using nlohmann::json;

namespace {

void reject_unknown(const json& doc, const std::set<std::string>& known) {
    if (!doc.is_object()) throw Error(ErrorCode::InvalidOptions, "options must be a JSON object");
    for (const auto& item : doc.items()) {
        if (!known.count(item.key())) {
            throw Error(ErrorCode::InvalidOptions, "unknown option '" + item.key() + "'");
        }
    }
}

bool flag(const json& doc, const char* key) {
    if (!doc.contains(key)) return false;
    if (!doc[key].is_boolean()) {
        throw Error(ErrorCode::InvalidOptions, std::string("option '") + key + "' must be a boolean");
    }
    return doc[key].get<bool>();
}

} // namespace

json to_json(const NmapOptions& opts) {
    return json{{"banner_grabbing", opts.banner_grabbing},
                {"hosts_online", opts.hosts_online},
                {"default_scripts", opts.default_scripts}};
}

json to_json(const FfufOptions& opts) {
    return json{{"path_recursion", opts.path_recursion},
                {"follow_redirect", opts.follow_redirect},
                {"ignore_status_codes", opts.ignore_status_codes}};
}

NmapOptions nmap_options_from_json(const json& doc) {
    if (doc.is_null()) return {};
    reject_unknown(doc, {"banner_grabbing", "hosts_online", "default_scripts"});
    return NmapOptions{flag(doc, "banner_grabbing"), flag(doc, "hosts_online"),
                       flag(doc, "default_scripts")};
}

FfufOptions ffuf_options_from_json(const json& doc) {
    if (doc.is_null()) return {};
    reject_unknown(doc, {"path_recursion", "follow_redirect", "ignore_status_codes"});
    FfufOptions opts{flag(doc, "path_recursion"), flag(doc, "follow_redirect"), {}};
    if (doc.contains("ignore_status_codes")) {
        const auto& codes = doc["ignore_status_codes"];
        if (!codes.is_array()) {
            throw Error(ErrorCode::InvalidOptions, "ignore_status_codes must be an array");
        }
        for (const auto& code : codes) {
            if (!code.is_number_integer() || code.get<long long>() < 100 || code.get<long long>() > 599) {
                throw Error(ErrorCode::InvalidOptions,
                            "ignore_status_codes entries must be integers in [100, 599]");
            }
            opts.ignore_status_codes.push_back(code.get<int>());
        }
    }
    return opts;
}

} // namespace shadowblade
