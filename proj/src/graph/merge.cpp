#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "shadowblade/error.hpp"
#include "shadowblade/graph.hpp"

namespace shadowblade {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
    });
}

bool result_matches_host(const PortScanResult& result, std::string_view host) {
    if (iequals(result.host, host)) return true;
    return std::any_of(result.aliases.begin(), result.aliases.end(),
                       [&](const std::string& alias) { return iequals(alias, host); });
}

std::string port_key(std::string_view port_number, std::string_view protocol) {
    return std::string(port_number) + "/" + std::string(protocol);
}

std::string service_label(const PortEntry& entry) {
    if (entry.product) {
        return entry.version ? *entry.product + " " + *entry.version : *entry.product;
    }
    return entry.service_name.value_or("unknown");
}

Attributes service_attrs(const PortEntry& entry) {
    Attributes attrs;
    if (entry.service_name) attrs["service_name"] = *entry.service_name;
    if (entry.product) attrs["product"] = *entry.product;
    if (entry.version) attrs["version"] = *entry.version;
    if (entry.extra_info) attrs["extrainfo"] = *entry.extra_info;
    if (entry.banner) attrs["banner"] = *entry.banner;
    return attrs;
}

const AttackEdge* child_of_kind(const AttackGraph& graph, std::string_view parent, NodeKind kind) {
    for (const auto* edge : graph.out_edges(parent)) {
        if (graph.node(edge->to).kind == kind) return edge;
    }
    return nullptr;
}

std::string normalize_path(std::string path) {
    while (path.size() > 1 && path.back() == '/') path.pop_back();
    return path;
}

std::size_t path_depth(std::string_view path) {
    return static_cast<std::size_t>(std::count(path.begin(), path.end(), '/'));
}

} // namespace

MergeReport merge_port_scan(AttackGraph& graph, const PortScanResult& result) {
    if (!result_matches_host(result, graph.target().host)) {
        throw Error(ErrorCode::HostMismatch, "scan result for '" + result.host +
                                                 "' does not belong to target host '" +
                                                 graph.target().host + "'");
    }
    // Validate everything up front so a bad entry never leaves a half-merged graph.
    for (const auto& entry : result.ports) {
        if (entry.port_number < 1 || entry.port_number > 65535) {
            throw Error(ErrorCode::InvalidNodeAttrs,
                        "port number " + std::to_string(entry.port_number) + " out of range");
        }
        if (entry.protocol != "tcp" && entry.protocol != "udp") {
            throw Error(ErrorCode::InvalidNodeAttrs, "unsupported protocol '" + entry.protocol + "'");
        }
    }

    std::unordered_map<std::string, std::string> port_nodes;
    for (const auto& node : graph.nodes()) {
        if (node.kind != NodeKind::Port) continue;
        port_nodes.emplace(port_key(node.attrs.at("port_number"), node.attrs.at("protocol")), node.id);
    }

    MergeReport report;
    const std::string root = graph.root().id;
    for (const auto& entry : result.ports) {
        const std::string number = std::to_string(entry.port_number);
        Attributes attrs{{"port_number", number},
                         {"protocol", entry.protocol},
                         {"state", std::string(to_string(entry.state))}};
        const std::string key = port_key(number, entry.protocol);

        std::string port_id;
        if (auto it = port_nodes.find(key); it != port_nodes.end()) {
            port_id = it->second;
            graph.update_attrs(port_id, attrs);
            ++report.nodes_updated;
        } else {
            port_id = graph.add_node(root, NodeKind::Port, key, std::move(attrs), edge_labels::open_port);
            port_nodes.emplace(key, port_id);
            ++report.nodes_added;
            ++report.edges_added;
        }

        if (entry.state != PortState::Open || !entry.has_service_info()) continue;

        if (const auto* existing = child_of_kind(graph, port_id, NodeKind::Service)) {
            graph.update_attrs(existing->to, service_attrs(entry));
            graph.set_label(existing->to, service_label(entry));
        } else {
            graph.add_node(port_id, NodeKind::Service, service_label(entry), service_attrs(entry),
                           edge_labels::runs_service);
            ++report.nodes_added;
            ++report.edges_added;
        }
    }
    return report;
}

MergeReport merge_path_scan(AttackGraph& graph, std::string_view anchor_node,
                            const PathScanResult& result) {
    const AttackNode& anchor = graph.node(anchor_node);
    if (anchor.kind != NodeKind::Service && anchor.kind != NodeKind::HttpPath) {
        throw Error(ErrorCode::WrongNodeKind, "path scans anchor at a Service or HttpPath node, not " +
                                                  std::string(to_string(anchor.kind)));
    }
    const std::string anchor_id = anchor.id;

    std::vector<PathEntry> entries;
    std::unordered_set<std::string> seen;
    for (const auto& raw : result.entries) {
        if (raw.url_path.empty() || raw.url_path.front() != '/') {
            throw Error(ErrorCode::InvalidNodeAttrs, "url_path '" + raw.url_path + "' must start with '/'");
        }
        if (raw.http_status < 100 || raw.http_status > 599) {
            throw Error(ErrorCode::InvalidNodeAttrs,
                        "http_status " + std::to_string(raw.http_status) + " out of range");
        }
        PathEntry entry = raw;
        entry.url_path = normalize_path(entry.url_path);
        if (seen.insert(entry.url_path).second) entries.push_back(std::move(entry));
    }
    // Parents before children, so "/js" exists by the time "/js/app.js" looks for it.
    std::stable_sort(entries.begin(), entries.end(), [](const PathEntry& a, const PathEntry& b) {
        return path_depth(a.url_path) < path_depth(b.url_path);
    });

    // HttpPath nodes already in the anchor's subtree, keyed by url_path.
    std::unordered_map<std::string, std::string> known;
    {
        std::unordered_set<std::string> visited{anchor_id};
        std::vector<std::string> queue{anchor_id};
        for (std::size_t i = 0; i < queue.size(); ++i) {
            const AttackNode& n = graph.node(queue[i]);
            if (n.kind == NodeKind::HttpPath) known.emplace(normalize_path(n.attrs.at("url_path")), n.id);
            for (const auto* edge : graph.out_edges(n.id)) {
                if (visited.insert(edge->to).second) queue.push_back(edge->to);
            }
        }
    }

    MergeReport report;
    for (auto& entry : entries) {
        Attributes attrs{{"url_path", entry.url_path},
                         {"http_status", std::to_string(entry.http_status)},
                         {"content_length", std::to_string(entry.content_length)}};
        if (entry.redirect_location) attrs["redirect_location"] = *entry.redirect_location;

        if (auto it = known.find(entry.url_path); it != known.end()) {
            graph.update_attrs(it->second, attrs);
            ++report.nodes_updated;
            continue;
        }

        std::string parent = anchor_id;
        std::string prefix = entry.url_path;
        while (true) {
            const auto slash = prefix.rfind('/');
            if (slash == 0 || slash == std::string::npos) break;
            prefix.resize(slash);
            if (auto it = known.find(prefix); it != known.end()) {
                parent = it->second;
                break;
            }
        }
        if (parent == anchor_id && entry.url_path != "/") {
            if (auto it = known.find("/"); it != known.end()) parent = it->second;
        }

        std::string id = graph.add_node(parent, NodeKind::HttpPath, entry.url_path, std::move(attrs),
                                        edge_labels::serves_path);
        known.emplace(entry.url_path, std::move(id));
        ++report.nodes_added;
        ++report.edges_added;
    }
    return report;
}

} // namespace shadowblade
