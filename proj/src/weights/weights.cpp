#include "shadowblade/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "shadowblade/error.hpp"

namespace shadowblade {

ScoringTable ScoringTable::scaled(double factor) const {
    ScoringTable t = *this;
    for (double* entry : {&t.port_open, &t.port_filtered, &t.port_closed, &t.service_versioned,
                          &t.service_unversioned, &t.http_success, &t.http_redirect, &t.http_denied,
                          &t.http_other, &t.custom}) {
        *entry *= factor;
    }
    return t;
}

double clamp_weight(double value) noexcept {
    if (std::isnan(value)) return kMinWeight;
    return std::clamp(value, kMinWeight, kMaxWeight);
}

namespace {

const std::string* find_attr(const AttackNode& node, const char* key) {
    auto it = node.attrs.find(key);
    return it == node.attrs.end() ? nullptr : &it->second;
}

double http_weight(const AttackNode& node, const ScoringTable& table) {
    int status = 0;
    if (const auto* text = find_attr(node, "http_status")) {
        std::from_chars(text->data(), text->data() + text->size(), status);
    }
    if (status >= 200 && status < 300) return table.http_success;
    if (status >= 300 && status < 400) return table.http_redirect;
    if (status == 401 || status == 403) return table.http_denied;
    return table.http_other;
}

double custom_weight(const AttackNode& node, const ScoringTable& table) {
    if (const auto* hint = find_attr(node, "weight_hint"); hint && !hint->empty()) {
        char* end = nullptr;
        const double value = std::strtod(hint->c_str(), &end);
        if (end == hint->c_str() + hint->size() && std::isfinite(value)) return value;
    }
    return table.custom;
}

} // namespace

double destination_weight(const AttackNode& node, const ScoringTable& table) {
    double raw = table.custom;
    switch (node.kind) {
    case NodeKind::Port: {
        const auto* state = find_attr(node, "state");
        if (!state || *state == "open") raw = table.port_open;
        else if (*state == "closed") raw = table.port_closed;
        else raw = table.port_filtered;
        break;
    }
    case NodeKind::Service: {
        const auto* version = find_attr(node, "version");
        raw = (version && !version->empty()) ? table.service_versioned : table.service_unversioned;
        break;
    }
    case NodeKind::HttpPath: raw = http_weight(node, table); break;
    case NodeKind::Custom: raw = custom_weight(node, table); break;
    case NodeKind::Target: raw = table.custom; break;
    }
    return clamp_weight(raw);
}

WeightAssignment compute_weights(const AttackGraph& graph, const ScoringTable& table) {
    WeightAssignment result;
    result.graph_revision = graph.revision();
    for (const auto& edge : graph.edges()) {
        result.edge_weights.emplace(edge.id, destination_weight(graph.node(edge.to), table));
    }
    return result;
}

void apply_weights(AttackGraph& graph, const WeightAssignment& weights) {
    if (weights.graph_revision != graph.revision()) {
        throw Error(ErrorCode::StaleWeights, "weights computed at revision " +
                                                 std::to_string(weights.graph_revision) +
                                                 ", graph is at " + std::to_string(graph.revision()));
    }
    for (const auto& edge : graph.edges()) {
        auto it = weights.edge_weights.find(edge.id);
        if (it == weights.edge_weights.end()) {
            throw Error(ErrorCode::MissingWeight, "no weight for edge '" + edge.id + "'");
        }
    }
    for (const auto& [edge_id, weight] : weights.edge_weights) {
        if (graph.find_edge(edge_id)) graph.set_edge_weight(edge_id, weight);
    }
}

double score_vector(const AttackVector& vector, const WeightAssignment& weights) {
    double score = 1.0;
    for (const auto& edge_id : vector.edge_ids) {
        auto it = weights.edge_weights.find(edge_id);
        if (it == weights.edge_weights.end()) {
            throw Error(ErrorCode::MissingWeight, "no weight for edge '" + edge_id + "'");
        }
        score *= it->second;
    }
    return score;
}

std::vector<RankedVector> rank_vectors(const AttackGraph& graph, const ScoringTable& table) {
    const WeightAssignment weights = compute_weights(graph, table);
    std::vector<AttackVector> vectors = enumerate_vectors(graph);
    for (auto& v : vectors) v.score = score_vector(v, weights);
    std::sort(vectors.begin(), vectors.end(), [&](const AttackVector& a, const AttackVector& b) {
        return vector_precedes(graph, a, b);
    });

    std::vector<RankedVector> ranked;
    ranked.reserve(vectors.size());
    for (auto& v : vectors) {
        const double score = *v.score;
        ranked.push_back(RankedVector{std::move(v), score});
    }
    return ranked;
}

} // namespace shadowblade
