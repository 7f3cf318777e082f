#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "shadowblade/graph.hpp"

namespace shadowblade {

std::vector<std::string> effective_success_set(const AttackGraph& graph) {
    auto marked = graph.marked_success();
    if (!marked.empty()) return marked;
    std::vector<std::string> leaves;
    for (const auto& node : graph.nodes()) {
        if (node.id != graph.root().id && graph.is_leaf(node.id)) leaves.push_back(node.id);
    }
    return leaves;
}

namespace {

std::vector<std::string_view> labels_of(const AttackGraph& graph, const AttackVector& v) {
    std::vector<std::string_view> labels;
    labels.reserve(v.node_ids.size());
    for (const auto& id : v.node_ids) labels.push_back(graph.node(id).label);
    return labels;
}

struct Walker {
    const AttackGraph& graph;
    const std::unordered_set<std::string>& goals;
    bool weighted;
    std::vector<AttackVector>& out;

    std::vector<std::string> nodes;
    std::vector<std::string> edges;
    std::unordered_set<std::string> on_path;

    void visit(const std::string& node_id) {
        if (!edges.empty() && goals.count(node_id)) {
            AttackVector v{nodes, edges, std::nullopt};
            if (weighted) {
                double score = 1.0;
                for (const auto& eid : edges) score *= *graph.find_edge(eid)->weight;
                v.score = score;
            }
            out.push_back(std::move(v));
        }
        for (const auto* edge : graph.out_edges(node_id)) {
            if (on_path.count(edge->to)) continue;
            nodes.push_back(edge->to);
            edges.push_back(edge->id);
            on_path.insert(edge->to);
            visit(edge->to);
            on_path.erase(edge->to);
            edges.pop_back();
            nodes.pop_back();
        }
    }
};

} // namespace

namespace {

// Products of the same weights taken in a different order can differ in the
// last bits; those count as ties so the label order decides.
bool scores_tied(double a, double b) {
    return std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

} // namespace

bool vector_precedes(const AttackGraph& graph, const AttackVector& a, const AttackVector& b) {
    if (a.score && b.score) {
        if (!scores_tied(*a.score, *b.score)) return *a.score > *b.score;
    } else if (a.score.has_value() != b.score.has_value()) {
        return a.score.has_value();
    }
    if (a.length() != b.length()) return a.length() < b.length();
    const auto la = labels_of(graph, a);
    const auto lb = labels_of(graph, b);
    if (la != lb) return la < lb;
    return a.node_ids < b.node_ids;
}

std::vector<AttackVector> enumerate_vectors(const AttackGraph& graph) {
    const auto success = effective_success_set(graph);
    if (success.empty()) return {};
    const std::unordered_set<std::string> goals(success.begin(), success.end());
    const bool weighted = !graph.edges().empty() &&
                          std::all_of(graph.edges().begin(), graph.edges().end(),
                                      [](const AttackEdge& e) { return e.weight.has_value(); });

    std::vector<AttackVector> vectors;
    Walker walker{graph, goals, weighted, vectors, {graph.root().id}, {}, {graph.root().id}};
    walker.visit(graph.root().id);

    std::sort(vectors.begin(), vectors.end(), [&](const AttackVector& a, const AttackVector& b) {
        return vector_precedes(graph, a, b);
    });
    return vectors;
}

} // namespace shadowblade
