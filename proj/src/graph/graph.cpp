#include "shadowblade/graph.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "../common/ids.hpp"
#include "shadowblade/error.hpp"
#include "shadowblade/grammar.hpp"

namespace shadowblade {

std::string_view to_string(NodeKind kind) noexcept {
    switch (kind) {
    case NodeKind::Target: return "Target";
    case NodeKind::Port: return "Port";
    case NodeKind::Service: return "Service";
    case NodeKind::HttpPath: return "HttpPath";
    case NodeKind::Custom: return "Custom";
    }
    return "Custom";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) noexcept {
    for (NodeKind k : {NodeKind::Target, NodeKind::Port, NodeKind::Service, NodeKind::HttpPath,
                       NodeKind::Custom}) {
        if (to_string(k) == text) return k;
    }
    return std::nullopt;
}

std::string_view to_string(PortState state) noexcept {
    switch (state) {
    case PortState::Open: return "open";
    case PortState::Closed: return "closed";
    case PortState::Filtered: return "filtered";
    }
    return "filtered";
}

std::optional<PortState> parse_port_state(std::string_view text) noexcept {
    if (text == "open") return PortState::Open;
    if (text == "closed") return PortState::Closed;
    if (text == "filtered") return PortState::Filtered;
    return std::nullopt;
}

namespace {

std::optional<long> parse_int(std::string_view text) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::string_view attr_or_empty(const Attributes& attrs, const std::string& key) {
    auto it = attrs.find(key);
    return it == attrs.end() ? std::string_view{} : std::string_view{it->second};
}

void validate_attrs(NodeKind kind, const Attributes& attrs) {
    if (kind == NodeKind::Port) {
        auto port = parse_int(attr_or_empty(attrs, "port_number"));
        if (!port || *port < 1 || *port > 65535) {
            throw Error(ErrorCode::InvalidNodeAttrs, "Port node needs port_number in [1, 65535]");
        }
        auto proto = attr_or_empty(attrs, "protocol");
        if (proto != "tcp" && proto != "udp") {
            throw Error(ErrorCode::InvalidNodeAttrs, "Port node needs protocol tcp or udp");
        }
    } else if (kind == NodeKind::HttpPath) {
        auto path = attr_or_empty(attrs, "url_path");
        if (path.empty() || path.front() != '/') {
            throw Error(ErrorCode::InvalidNodeAttrs, "HttpPath node needs a url_path starting with '/'");
        }
        auto status = parse_int(attr_or_empty(attrs, "http_status"));
        if (!status || *status < 100 || *status > 599) {
            throw Error(ErrorCode::InvalidNodeAttrs, "HttpPath node needs http_status in [100, 599]");
        }
    }
}

// Largest N among ids shaped "<prefix>N", so freshly generated ids never
// collide with restored ones.
template <typename Range, typename Proj>
std::uint64_t next_sequence(const Range& items, char prefix, Proj id_of) {
    std::uint64_t max_seen = 0;
    for (const auto& item : items) {
        std::string_view id = id_of(item);
        if (id.size() < 2 || id.front() != prefix) continue;
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), value);
        if (ec == std::errc{} && ptr == id.data() + id.size()) max_seen = std::max(max_seen, value);
    }
    return max_seen + 1;
}

} // namespace

AttackGraph AttackGraph::create(std::string_view target_name, std::string_view host) {
    if (target_name.empty()) {
        throw Error(ErrorCode::InvalidTargetName, "target name must not be empty");
    }
    if (!is_valid_host(host)) {
        throw Error(ErrorCode::InvalidHost, "invalid host: '" + std::string(host) + "'");
    }
    AttackGraph g;
    g.graph_id_ = detail::random_id("g-");
    g.target_ = TargetDescriptor{std::string(target_name), std::string(host)};
    g.nodes_.push_back(AttackNode{"n1", NodeKind::Target, std::string(host), {}, false});
    g.next_node_seq_ = 2;
    g.revision_ = 1;
    g.reindex();
    return g;
}

AttackGraph AttackGraph::assemble(std::string graph_id, TargetDescriptor target,
                                  std::uint64_t revision, std::vector<AttackNode> nodes,
                                  std::vector<AttackEdge> edges) {
    auto fail = [](const std::string& msg) -> void {
        throw Error(ErrorCode::MalformedDocument, msg);
    };
    if (graph_id.empty()) fail("graph_id must not be empty");
    if (target.name.empty()) fail("target name must not be empty");
    if (!is_valid_host(target.host)) fail("target host fails the host grammar");
    if (revision < 1) fail("revision must be >= 1");
    if (nodes.empty() || nodes.front().kind != NodeKind::Target) {
        fail("first node must be the Target root");
    }

    AttackGraph g;
    g.graph_id_ = std::move(graph_id);
    g.target_ = std::move(target);
    g.revision_ = revision;

    std::unordered_set<std::string> node_ids;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (n.id.empty() || !node_ids.insert(n.id).second) fail("duplicate or empty node id '" + n.id + "'");
        if (i > 0 && n.kind == NodeKind::Target) fail("more than one Target node");
        if (i == 0 && n.success) fail("root node cannot be a success state");
        try {
            validate_attrs(n.kind, n.attrs);
        } catch (const Error& e) {
            fail("node '" + n.id + "': " + e.what());
        }
    }
    g.nodes_ = std::move(nodes);
    g.reindex();

    for (auto& e : edges) {
        if (e.id.empty() || g.edge_by_id_.count(e.id)) fail("duplicate or empty edge id '" + e.id + "'");
        if (!g.find_node(e.from) || !g.find_node(e.to)) fail("edge '" + e.id + "' references an unknown node");
        if (e.from == e.to) fail("edge '" + e.id + "' is a self-loop");
        if (e.to == g.root().id) fail("edge '" + e.id + "' points into the root");
        if (g.find_edge_between(e.from, e.to)) fail("duplicate edge " + e.from + "->" + e.to);
        if (e.weight && !(*e.weight >= 0.01 && *e.weight <= 0.99)) {
            fail("edge '" + e.id + "' weight outside [0.01, 0.99]");
        }
        if (g.reachable(e.to, e.from)) fail("edge '" + e.id + "' closes a cycle");
        const std::size_t idx = g.edges_.size();
        g.edge_by_id_.emplace(e.id, idx);
        g.out_[e.from].push_back(idx);
        g.in_[e.to].push_back(idx);
        g.edges_.push_back(std::move(e));
    }

    // Rootedness: a BFS from the root must cover every node.
    std::unordered_set<std::string> seen{g.root().id};
    std::vector<std::string> frontier{g.root().id};
    while (!frontier.empty()) {
        std::string current = std::move(frontier.back());
        frontier.pop_back();
        for (const auto* edge : g.out_edges(current)) {
            if (seen.insert(edge->to).second) frontier.push_back(edge->to);
        }
    }
    if (seen.size() != g.nodes_.size()) fail("graph has nodes unreachable from the root");

    g.next_node_seq_ = next_sequence(g.nodes_, 'n', [](const AttackNode& n) -> std::string_view { return n.id; });
    g.next_edge_seq_ = next_sequence(g.edges_, 'e', [](const AttackEdge& e) -> std::string_view { return e.id; });
    return g;
}

void AttackGraph::reindex() {
    node_by_id_.clear();
    edge_by_id_.clear();
    out_.clear();
    in_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) node_by_id_.emplace(nodes_[i].id, i);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        edge_by_id_.emplace(edges_[i].id, i);
        out_[edges_[i].from].push_back(i);
        in_[edges_[i].to].push_back(i);
    }
}

const AttackNode* AttackGraph::find_node(std::string_view id) const noexcept {
    auto it = node_by_id_.find(std::string(id));
    return it == node_by_id_.end() ? nullptr : &nodes_[it->second];
}

std::size_t AttackGraph::node_index(std::string_view id) const {
    auto it = node_by_id_.find(std::string(id));
    if (it == node_by_id_.end()) {
        throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(id) + "'");
    }
    return it->second;
}

const AttackNode& AttackGraph::node(std::string_view id) const { return nodes_[node_index(id)]; }

const AttackEdge* AttackGraph::find_edge(std::string_view id) const noexcept {
    auto it = edge_by_id_.find(std::string(id));
    return it == edge_by_id_.end() ? nullptr : &edges_[it->second];
}

const AttackEdge* AttackGraph::find_edge_between(std::string_view from,
                                                 std::string_view to) const noexcept {
    auto it = out_.find(std::string(from));
    if (it == out_.end()) return nullptr;
    for (std::size_t idx : it->second) {
        if (edges_[idx].to == to) return &edges_[idx];
    }
    return nullptr;
}

std::vector<const AttackEdge*> AttackGraph::out_edges(std::string_view node_id) const {
    std::vector<const AttackEdge*> result;
    if (auto it = out_.find(std::string(node_id)); it != out_.end()) {
        for (std::size_t idx : it->second) result.push_back(&edges_[idx]);
    }
    return result;
}

std::vector<const AttackEdge*> AttackGraph::in_edges(std::string_view node_id) const {
    std::vector<const AttackEdge*> result;
    if (auto it = in_.find(std::string(node_id)); it != in_.end()) {
        for (std::size_t idx : it->second) result.push_back(&edges_[idx]);
    }
    return result;
}

bool AttackGraph::is_leaf(std::string_view node_id) const {
    auto it = out_.find(std::string(node_id));
    return it == out_.end() || it->second.empty();
}

std::vector<std::string> AttackGraph::marked_success() const {
    std::vector<std::string> ids;
    for (const auto& n : nodes_) {
        if (n.success) ids.push_back(n.id);
    }
    return ids;
}

bool AttackGraph::reachable(std::string_view from, std::string_view to) const {
    if (from == to) return true;
    std::unordered_set<std::string> seen{std::string(from)};
    std::vector<std::string> stack{std::string(from)};
    while (!stack.empty()) {
        std::string current = std::move(stack.back());
        stack.pop_back();
        auto it = out_.find(current);
        if (it == out_.end()) continue;
        for (std::size_t idx : it->second) {
            const std::string& next = edges_[idx].to;
            if (next == to) return true;
            if (seen.insert(next).second) stack.push_back(next);
        }
    }
    return false;
}

std::string AttackGraph::add_node(std::string_view parent_id, NodeKind kind, std::string label,
                                  Attributes attrs, std::string_view edge_label) {
    // parent_id may point into nodes_, which the push_back below can move.
    const std::string parent(parent_id);
    node_index(parent);
    if (kind == NodeKind::Target) {
        throw Error(ErrorCode::WrongNodeKind, "a graph has exactly one Target node");
    }
    validate_attrs(kind, attrs);

    std::string id = "n" + std::to_string(next_node_seq_++);
    while (node_by_id_.count(id)) id = "n" + std::to_string(next_node_seq_++);
    nodes_.push_back(AttackNode{id, kind, std::move(label), std::move(attrs), false});
    node_by_id_.emplace(id, nodes_.size() - 1);

    std::string edge_id = "e" + std::to_string(next_edge_seq_++);
    while (edge_by_id_.count(edge_id)) edge_id = "e" + std::to_string(next_edge_seq_++);
    const std::size_t idx = edges_.size();
    edges_.push_back(AttackEdge{edge_id, parent, id, std::string(edge_label), std::nullopt});
    edge_by_id_.emplace(edge_id, idx);
    out_[parent].push_back(idx);
    in_[id].push_back(idx);

    bump();
    return id;
}

std::string AttackGraph::add_edge(std::string_view from, std::string_view to, std::string_view label) {
    node_index(from);
    node_index(to);
    if (from == to) throw Error(ErrorCode::InvalidEdge, "self-loops are not allowed");
    if (to == root().id) throw Error(ErrorCode::InvalidEdge, "the root cannot have incoming edges");
    if (find_edge_between(from, to)) {
        throw Error(ErrorCode::InvalidEdge,
                    "edge " + std::string(from) + "->" + std::string(to) + " already exists");
    }
    if (reachable(to, from)) {
        throw Error(ErrorCode::CycleRejected,
                    "edge " + std::string(from) + "->" + std::string(to) + " would create a cycle");
    }
    std::string edge_id = "e" + std::to_string(next_edge_seq_++);
    while (edge_by_id_.count(edge_id)) edge_id = "e" + std::to_string(next_edge_seq_++);
    const std::size_t idx = edges_.size();
    edges_.push_back(AttackEdge{edge_id, std::string(from), std::string(to), std::string(label), std::nullopt});
    edge_by_id_.emplace(edge_id, idx);
    out_[std::string(from)].push_back(idx);
    in_[std::string(to)].push_back(idx);
    bump();
    return edge_id;
}

bool AttackGraph::update_attrs(std::string_view node_id, const Attributes& attrs) {
    AttackNode& n = nodes_[node_index(node_id)];
    Attributes merged = n.attrs;
    for (const auto& [key, value] : attrs) merged[key] = value;
    if (merged == n.attrs) return false;
    validate_attrs(n.kind, merged);
    n.attrs = std::move(merged);
    bump();
    return true;
}

bool AttackGraph::set_label(std::string_view node_id, std::string label) {
    AttackNode& n = nodes_[node_index(node_id)];
    if (n.label == label) return false;
    n.label = std::move(label);
    bump();
    return true;
}

void AttackGraph::set_success(std::string_view node_id, bool flag) {
    const std::size_t idx = node_index(node_id);
    if (idx == 0) throw Error(ErrorCode::RootNotMarkable, "the root cannot be a success state");
    nodes_[idx].success = flag;
    bump();
}

void AttackGraph::set_edge_weight(std::string_view edge_id, std::optional<double> weight) {
    auto it = edge_by_id_.find(std::string(edge_id));
    if (it == edge_by_id_.end()) {
        throw Error(ErrorCode::InvalidEdge, "unknown edge '" + std::string(edge_id) + "'");
    }
    if (weight && !(*weight >= 0.01 && *weight <= 0.99)) {
        throw Error(ErrorCode::InvalidEdge, "edge weight outside [0.01, 0.99]");
    }
    edges_[it->second].weight = weight;
}

AttackGraph new_graph(std::string_view target_name, std::string_view host) {
    return AttackGraph::create(target_name, host);
}

std::string add_custom_node(AttackGraph& graph, std::string_view parent, std::string label,
                            Attributes attrs) {
    return graph.add_node(parent, NodeKind::Custom, std::move(label), std::move(attrs),
                          edge_labels::manual);
}

void mark_success(AttackGraph& graph, std::string_view node_id, bool flag) {
    graph.set_success(node_id, flag);
}

} // namespace shadowblade
