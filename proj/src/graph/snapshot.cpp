#include "shadowblade/snapshot.hpp"

#include <cstdio>
#include <set>

#include "shadowblade/error.hpp"

namespace shadowblade {

using nlohmann::json;

json snapshot(const AttackGraph& graph) {
    json nodes = json::array();
    for (const auto& n : graph.nodes()) {
        nodes.push_back({{"id", n.id},
                         {"kind", std::string(to_string(n.kind))},
                         {"label", n.label},
                         {"attrs", n.attrs},
                         {"success", n.success}});
    }
    json edges = json::array();
    for (const auto& e : graph.edges()) {
        edges.push_back({{"id", e.id},
                         {"from", e.from},
                         {"to", e.to},
                         {"label", e.label},
                         {"weight", e.weight ? json(*e.weight) : json(nullptr)}});
    }
    return json{{"version", kSnapshotSchemaVersion},
                {"graph_id", graph.graph_id()},
                {"target", {{"name", graph.target().name}, {"host", graph.target().host}}},
                {"revision", graph.revision()},
                {"nodes", std::move(nodes)},
                {"edges", std::move(edges)}};
}

namespace {

[[noreturn]] void malformed(const std::string& message) {
    throw Error(ErrorCode::MalformedDocument, "malformed snapshot: " + message);
}

void expect_keys(const json& object, const std::set<std::string>& keys, const std::string& where) {
    if (!object.is_object()) malformed(where + " must be an object");
    for (const auto& key : keys) {
        if (!object.contains(key)) malformed(where + " lacks field '" + key + "'");
    }
    for (const auto& item : object.items()) {
        if (!keys.count(item.key())) malformed(where + " has unknown field '" + item.key() + "'");
    }
}

const std::string& string_field(const json& object, const char* key, const std::string& where) {
    const auto& value = object.at(key);
    if (!value.is_string()) malformed(where + "." + key + " must be a string");
    return value.get_ref<const std::string&>();
}

} // namespace

AttackGraph restore(const json& document) {
    if (!document.is_object()) malformed("document must be an object");
    if (!document.contains("version") || !document["version"].is_number_integer()) {
        malformed("missing integer 'version'");
    }
    if (document["version"].get<long long>() != kSnapshotSchemaVersion) {
        throw Error(ErrorCode::SchemaVersionMismatch,
                    "unsupported snapshot version " + document["version"].dump() + " (expected 1)");
    }
    expect_keys(document, {"version", "graph_id", "target", "revision", "nodes", "edges"}, "document");
    expect_keys(document["target"], {"name", "host"}, "target");
    if (!document["revision"].is_number_unsigned()) malformed("revision must be a non-negative integer");
    if (!document["nodes"].is_array()) malformed("nodes must be an array");
    if (!document["edges"].is_array()) malformed("edges must be an array");

    std::vector<AttackNode> nodes;
    for (const auto& item : document["nodes"]) {
        expect_keys(item, {"id", "kind", "label", "attrs", "success"}, "node");
        AttackNode node;
        node.id = string_field(item, "id", "node");
        auto kind = parse_node_kind(string_field(item, "kind", "node"));
        if (!kind) malformed("node '" + node.id + "' has unknown kind");
        node.kind = *kind;
        node.label = string_field(item, "label", "node");
        if (!item["attrs"].is_object()) malformed("node attrs must be an object");
        for (const auto& attr : item["attrs"].items()) {
            if (!attr.value().is_string()) malformed("attribute '" + attr.key() + "' must be a string");
            node.attrs.emplace(attr.key(), attr.value().get<std::string>());
        }
        if (!item["success"].is_boolean()) malformed("node success must be a boolean");
        node.success = item["success"].get<bool>();
        nodes.push_back(std::move(node));
    }

    std::vector<AttackEdge> edges;
    for (const auto& item : document["edges"]) {
        expect_keys(item, {"id", "from", "to", "label", "weight"}, "edge");
        AttackEdge edge;
        edge.id = string_field(item, "id", "edge");
        edge.from = string_field(item, "from", "edge");
        edge.to = string_field(item, "to", "edge");
        edge.label = string_field(item, "label", "edge");
        const auto& weight = item["weight"];
        if (weight.is_number()) {
            edge.weight = weight.get<double>();
        } else if (!weight.is_null()) {
            malformed("edge weight must be a number or null");
        }
        edges.push_back(std::move(edge));
    }

    return AttackGraph::assemble(string_field(document, "graph_id", "document"),
                                 TargetDescriptor{string_field(document["target"], "name", "target"),
                                                  string_field(document["target"], "host", "target")},
                                 document["revision"].get<std::uint64_t>(), std::move(nodes),
                                 std::move(edges));
}

AttackGraph restore(std::string_view document_text) {
    json document = json::parse(document_text, nullptr, /*allow_exceptions=*/false);
    if (document.is_discarded()) malformed("not valid JSON");
    return restore(document);
}

namespace {

std::string dot_quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string_view dot_shape(NodeKind kind) {
    switch (kind) {
    case NodeKind::Target: return "doublecircle";
    case NodeKind::Port: return "box";
    case NodeKind::Service: return "ellipse";
    case NodeKind::HttpPath: return "note";
    case NodeKind::Custom: return "diamond";
    }
    return "ellipse";
}

} // namespace

std::string to_dot(const AttackGraph& graph) {
    std::string out = "digraph " + dot_quote(graph.graph_id()) + " {\n";
    out += "  rankdir=LR;\n";
    for (const auto& n : graph.nodes()) {
        out += "  " + dot_quote(n.id) + " [label=" + dot_quote(n.label) + ", shape=" +
               std::string(dot_shape(n.kind));
        if (n.success) out += ", style=bold, color=red";
        out += "];\n";
    }
    for (const auto& e : graph.edges()) {
        std::string label = e.label;
        if (e.weight) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%.2f", *e.weight);
            label += label.empty() ? buf : std::string(" ") + buf;
        }
        out += "  " + dot_quote(e.from) + " -> " + dot_quote(e.to) + " [label=" + dot_quote(label) + "];\n";
    }
    out += "}\n";
    return out;
}

} // namespace shadowblade
