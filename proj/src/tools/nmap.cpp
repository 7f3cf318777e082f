#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cstring>
#include <limits>
#include <memory>
#include <set>

#include "shadowblade/error.hpp"
#include "shadowblade/grammar.hpp"
#include "shadowblade/tools.hpp"

namespace shadowblade {

Invocation build_nmap_invocation(std::string_view host, const NmapOptions& opts) {
    if (!is_valid_host(host)) {
        throw Error(ErrorCode::InvalidHost, "invalid host: '" + std::string(host) + "'");
    }
    Invocation inv;
    inv.program = "nmap";
    inv.timeout = kNmapTimeout;
    if (opts.banner_grabbing) inv.argv.emplace_back("-sV");
    if (opts.default_scripts) inv.argv.emplace_back("-sC");
    if (!opts.hosts_online) inv.argv.emplace_back("-Pn");
    inv.argv.emplace_back("-oX");
    inv.argv.emplace_back("-");
    inv.argv.emplace_back(host);
    return inv;
}

namespace {

// Streaming state for one nmap XML document. Only the first <host> element
// is collected; everything outside the handful of elements below is ignored.
struct NmapXmlState {
    enum class Phase { BeforeHost, InHost, Done };
    Phase phase = Phase::BeforeHost;
    int depth = 0;
    int host_depth = -1;
    bool in_port = false;
    bool saw_host = false;

    std::vector<std::string> addresses;
    std::vector<std::string> hostnames;
    std::string user_hostname;
    std::vector<PortEntry> ports;
    std::set<std::pair<int, std::string>> seen;
    PortEntry current;
    bool current_valid = false;
};

const char* find_attr(const XML_Char** attrs, const char* name) {
    for (int i = 0; attrs[i]; i += 2) {
        if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
    }
    return nullptr;
}

std::optional<std::string> non_empty(const char* value) {
    if (!value || !*value) return std::nullopt;
    return std::string(value);
}

PortState map_state(std::string_view state) {
    if (state == "open") return PortState::Open;
    if (state == "closed") return PortState::Closed;
    // filtered, open|filtered, closed|filtered, unfiltered
    return PortState::Filtered;
}

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto& st = *static_cast<NmapXmlState*>(user);
    ++st.depth;
    if (st.phase == NmapXmlState::Phase::Done) return;

    if (st.phase == NmapXmlState::Phase::BeforeHost) {
        if (std::strcmp(name, "host") == 0) {
            st.phase = NmapXmlState::Phase::InHost;
            st.host_depth = st.depth;
            st.saw_host = true;
        }
        return;
    }

    if (std::strcmp(name, "address") == 0) {
        if (auto addr = non_empty(find_attr(attrs, "addr"))) {
            const char* type = find_attr(attrs, "addrtype");
            if (!type || std::strcmp(type, "mac") != 0) st.addresses.push_back(*addr);
        }
    } else if (std::strcmp(name, "hostname") == 0) {
        if (auto host = non_empty(find_attr(attrs, "name"))) {
            const char* type = find_attr(attrs, "type");
            if (type && std::strcmp(type, "user") == 0 && st.user_hostname.empty()) st.user_hostname = *host;
            st.hostnames.push_back(*host);
        }
    } else if (std::strcmp(name, "port") == 0) {
        st.in_port = true;
        st.current = PortEntry{};
        st.current_valid = false;
        const char* proto = find_attr(attrs, "protocol");
        const char* portid = find_attr(attrs, "portid");
        if (proto && portid) {
            int number = 0;
            const auto len = std::strlen(portid);
            auto [ptr, ec] = std::from_chars(portid, portid + len, number);
            if (ec == std::errc{} && ptr == portid + len && number >= 1 && number <= 65535 &&
                (std::strcmp(proto, "tcp") == 0 || std::strcmp(proto, "udp") == 0)) {
                st.current.port_number = number;
                st.current.protocol = proto;
                st.current_valid = true;
            }
        }
    } else if (st.in_port && std::strcmp(name, "state") == 0) {
        if (const char* state = find_attr(attrs, "state")) st.current.state = map_state(state);
    } else if (st.in_port && std::strcmp(name, "service") == 0) {
        st.current.service_name = non_empty(find_attr(attrs, "name"));
        st.current.product = non_empty(find_attr(attrs, "product"));
        st.current.version = non_empty(find_attr(attrs, "version"));
        st.current.extra_info = non_empty(find_attr(attrs, "extrainfo"));
    } else if (st.in_port && std::strcmp(name, "script") == 0) {
        const char* id = find_attr(attrs, "id");
        if (id && std::strcmp(id, "banner") == 0) st.current.banner = non_empty(find_attr(attrs, "output"));
    }
}

void XMLCALL on_end(void* user, const XML_Char* name) {
    auto& st = *static_cast<NmapXmlState*>(user);
    if (st.phase == NmapXmlState::Phase::InHost) {
        if (st.in_port && std::strcmp(name, "port") == 0) {
            st.in_port = false;
            if (st.current_valid && st.seen.emplace(st.current.port_number, st.current.protocol).second) {
                // Service details only mean something for ports that answered.
                if (st.current.state != PortState::Open) {
                    st.current.service_name.reset();
                    st.current.product.reset();
                    st.current.version.reset();
                    st.current.extra_info.reset();
                    st.current.banner.reset();
                }
                st.ports.push_back(std::move(st.current));
            }
        } else if (st.depth == st.host_depth && std::strcmp(name, "host") == 0) {
            st.phase = NmapXmlState::Phase::Done;
        }
    }
    --st.depth;
}

} // namespace

PortScanResult parse_nmap_xml(std::string_view data) {
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate(nullptr), XML_ParserFree);
    NmapXmlState state;
    XML_SetUserData(parser.get(), &state);
    XML_SetElementHandler(parser.get(), on_start, on_end);

    if (data.size() > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
        throw Error(ErrorCode::MalformedXml, "document too large");
    }
    if (XML_Parse(parser.get(), data.data(), static_cast<int>(data.size()), XML_TRUE) == XML_STATUS_ERROR) {
        throw Error(ErrorCode::MalformedXml,
                    std::string("nmap XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())) +
                        " at line " + std::to_string(XML_GetCurrentLineNumber(parser.get())));
    }
    if (!state.saw_host) throw Error(ErrorCode::NoHostFound, "nmap XML contains no <host> element");

    PortScanResult result;
    // The name the scan was run against: a user-supplied hostname, else the address.
    if (!state.user_hostname.empty()) result.host = state.user_hostname;
    else if (!state.addresses.empty()) result.host = state.addresses.front();
    else if (!state.hostnames.empty()) result.host = state.hostnames.front();

    for (const auto& name : state.addresses) {
        if (name != result.host && std::find(result.aliases.begin(), result.aliases.end(), name) == result.aliases.end())
            result.aliases.push_back(name);
    }
    for (const auto& name : state.hostnames) {
        if (name != result.host && std::find(result.aliases.begin(), result.aliases.end(), name) == result.aliases.end())
            result.aliases.push_back(name);
    }
    result.ports = std::move(state.ports);
    return result;
}

} // namespace shadowblade
