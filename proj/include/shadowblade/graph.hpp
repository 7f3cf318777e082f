#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shadowblade/scan_results.hpp"

namespace shadowblade {

enum class NodeKind { Target, Port, Service, HttpPath, Custom };

std::string_view to_string(NodeKind kind) noexcept;
std::optional<NodeKind> parse_node_kind(std::string_view text) noexcept;

using Attributes = std::map<std::string, std::string>;

struct AttackNode {
    std::string id;
    NodeKind kind = NodeKind::Custom;
    std::string label;
    Attributes attrs;
    bool success = false;

    bool operator==(const AttackNode&) const = default;
};

struct AttackEdge {
    std::string id;
    std::string from;
    std::string to;
    std::string label;
    std::optional<double> weight;

    bool operator==(const AttackEdge&) const = default;
};

struct TargetDescriptor {
    std::string name;
    std::string host;

    bool operator==(const TargetDescriptor&) const = default;
};

namespace edge_labels {
inline constexpr std::string_view open_port = "open-port";
inline constexpr std::string_view runs_service = "runs-service";
inline constexpr std::string_view serves_path = "serves-path";
inline constexpr std::string_view manual = "manual";
} // namespace edge_labels

/// Rooted directed acyclic graph of reconnaissance findings.
///
/// The Target root is the only initial state; success states are nodes with
/// `success == true`. Every mutation keeps the graph acyclic and every node
/// reachable from the root, and bumps `revision()` when something changed.
/// Values are copyable and hold no shared state, so a snapshot can be handed
/// to another thread.
class AttackGraph {
public:
    /// Fresh graph with a single Target node labelled with `host`.
    static AttackGraph create(std::string_view target_name, std::string_view host);

    /// Rebuilds a graph from already-identified parts, validating every
    /// invariant. Throws Error on the first violation.
    static AttackGraph assemble(std::string graph_id, TargetDescriptor target,
                                std::uint64_t revision, std::vector<AttackNode> nodes,
                                std::vector<AttackEdge> edges);

    const std::string& graph_id() const noexcept { return graph_id_; }
    const TargetDescriptor& target() const noexcept { return target_; }
    std::uint64_t revision() const noexcept { return revision_; }
    const std::vector<AttackNode>& nodes() const noexcept { return nodes_; }
    const std::vector<AttackEdge>& edges() const noexcept { return edges_; }

    const AttackNode& root() const noexcept { return nodes_.front(); }
    const AttackNode* find_node(std::string_view id) const noexcept;
    const AttackNode& node(std::string_view id) const;  // throws UnknownNode
    const AttackEdge* find_edge(std::string_view id) const noexcept;
    const AttackEdge* find_edge_between(std::string_view from, std::string_view to) const noexcept;

    std::vector<const AttackEdge*> out_edges(std::string_view node_id) const;
    std::vector<const AttackEdge*> in_edges(std::string_view node_id) const;
    bool is_leaf(std::string_view node_id) const;

    /// Node ids whose success flag is set, in insertion order.
    std::vector<std::string> marked_success() const;

    // Mutations.

    /// Adds a node of `kind` as a child of `parent` and links them with an
    /// edge labelled `edge_label`. Returns the new node id.
    std::string add_node(std::string_view parent, NodeKind kind, std::string label,
                         Attributes attrs, std::string_view edge_label);

    /// Adds an edge between two existing nodes. Rejects self-loops, duplicate
    /// pairs, edges into the root and edges that would close a cycle.
    std::string add_edge(std::string_view from, std::string_view to, std::string_view label);

    /// Overwrites the listed attributes. Returns true when any value changed.
    bool update_attrs(std::string_view node_id, const Attributes& attrs);

    bool set_label(std::string_view node_id, std::string label);

    void set_success(std::string_view node_id, bool flag);

    /// Sets or clears an edge weight. Weights are derived data, so this does
    /// not bump the revision.
    void set_edge_weight(std::string_view edge_id, std::optional<double> weight);

    friend bool operator==(const AttackGraph& a, const AttackGraph& b) noexcept {
        return a.graph_id_ == b.graph_id_ && a.target_ == b.target_ &&
               a.revision_ == b.revision_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    AttackGraph() = default;

    std::size_t node_index(std::string_view id) const;  // throws UnknownNode
    bool reachable(std::string_view from, std::string_view to) const;
    void reindex();
    void bump() noexcept { ++revision_; }

    std::string graph_id_;
    TargetDescriptor target_;
    std::uint64_t revision_ = 0;
    std::vector<AttackNode> nodes_;
    std::vector<AttackEdge> edges_;

    std::unordered_map<std::string, std::size_t> node_by_id_;
    std::unordered_map<std::string, std::size_t> edge_by_id_;
    std::unordered_map<std::string, std::vector<std::size_t>> out_;
    std::unordered_map<std::string, std::vector<std::size_t>> in_;
    std::uint64_t next_node_seq_ = 1;
    std::uint64_t next_edge_seq_ = 1;
};

struct MergeReport {
    std::size_t nodes_added = 0;
    std::size_t nodes_updated = 0;
    std::size_t edges_added = 0;

    bool operator==(const MergeReport&) const = default;
};

/// Simple root-to-success path.
struct AttackVector {
    std::vector<std::string> node_ids;
    std::vector<std::string> edge_ids;
    std::optional<double> score;

    std::size_t length() const noexcept { return edge_ids.size(); }

    bool operator==(const AttackVector&) const = default;
};

AttackGraph new_graph(std::string_view target_name, std::string_view host);

MergeReport merge_port_scan(AttackGraph& graph, const PortScanResult& result);

MergeReport merge_path_scan(AttackGraph& graph, std::string_view anchor_node,
                            const PathScanResult& result);

std::string add_custom_node(AttackGraph& graph, std::string_view parent, std::string label,
                            Attributes attrs = {});

void mark_success(AttackGraph& graph, std::string_view node_id, bool flag);

/// Node ids that vectors terminate at: the marked nodes when any exist,
/// otherwise every non-root leaf.
std::vector<std::string> effective_success_set(const AttackGraph& graph);

/// Every simple path from the root to a node of the effective success set.
///
/// Ordering: when every edge of the graph carries a weight, vectors are
/// scored and sorted by descending score; then by ascending length; then by
/// lexicographic comparison of the node labels along the path; node ids
/// break any remaining tie.
std::vector<AttackVector> enumerate_vectors(const AttackGraph& graph);

/// Strict-weak "comes first" relation used by enumerate_vectors and
/// rank_vectors.
bool vector_precedes(const AttackGraph& graph, const AttackVector& a, const AttackVector& b);

} // namespace shadowblade
