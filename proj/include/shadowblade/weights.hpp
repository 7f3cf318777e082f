#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shadowblade/graph.hpp"

namespace shadowblade {

inline constexpr double kMinWeight = 0.01;
inline constexpr double kMaxWeight = 0.99;

/// Exploitability probability assigned to an edge by the kind and state of
/// its destination node. Custom nodes may override their entry through a
/// numeric `weight_hint` attribute.
struct ScoringTable {
    double port_open = 0.50;
    double port_filtered = 0.10;
    double port_closed = 0.01;
    double service_versioned = 0.60;
    double service_unversioned = 0.40;
    double http_success = 0.70;   // 2xx
    double http_redirect = 0.60;  // 3xx
    double http_denied = 0.20;    // 401, 403
    double http_other = 0.30;
    double custom = 0.50;

    /// Every entry multiplied by `factor`.
    ScoringTable scaled(double factor) const;
};

struct WeightAssignment {
    std::map<std::string, double> edge_weights;
    std::uint64_t graph_revision = 0;

    bool operator==(const WeightAssignment&) const = default;
};

double clamp_weight(double value) noexcept;

/// Weight of any edge ending at `node`, clamped to [0.01, 0.99].
double destination_weight(const AttackNode& node, const ScoringTable& table = {});

/// One entry per edge of `graph`. Pure; the graph is left untouched.
WeightAssignment compute_weights(const AttackGraph& graph, const ScoringTable& table = {});

/// Writes the assignment onto the graph's edges. Throws StaleWeights when the
/// assignment was computed against another revision.
void apply_weights(AttackGraph& graph, const WeightAssignment& weights);

/// Product of the vector's edge weights. Throws MissingWeight.
double score_vector(const AttackVector& vector, const WeightAssignment& weights);

struct RankedVector {
    AttackVector vector;
    double score = 0.0;
};

/// enumerate_vectors scored with fresh weights, best first. Ties fall back to
/// shorter paths, then node labels along the path.
std::vector<RankedVector> rank_vectors(const AttackGraph& graph, const ScoringTable& table = {});

} // namespace shadowblade
