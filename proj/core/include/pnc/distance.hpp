#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pnc/hypercube.hpp"

namespace pnc {

struct DistanceReport {
    double value = 0.0;  // +infinity when no qualifying pair exists
    std::optional<std::pair<std::vector<int>, std::vector<int>>> argmin_pair;
};

// Minimum distance of the effective MA-phase constellation:
// min |sum H_i (x_i - x'_i)| over all distinct tuple pairs. Exhaustive over
// M^(2n) ordered pairs; refuses sweeps beyond the guard (default 1e8).
DistanceReport d_min_fade(const FadeState& H, int n, int M);

bool is_singular(const FadeState& H, int n, int M, double tol = 1e-9);

// Minimum distance between two specific clusters (labels must differ).
DistanceReport cluster_distance(const ClusterMap& map, const FadeState& H, std::int32_t label_i,
                                std::int32_t label_j);

// Minimum over all cross-cluster pairs; +infinity when every cell shares one
// label.
DistanceReport min_cluster_distance(const ClusterMap& map, const FadeState& H);

struct MapCandidate {
    SubspaceKey key;
    ClusterMap map;
};

// All removable subspaces' maps for (n, M) in canonical key order, truncated
// to max_candidates.
std::vector<MapCandidate> build_removable_candidates(
    int n, int M, std::size_t max_candidates = static_cast<std::size_t>(-1));

// The candidate maximizing min_cluster_distance(map, H); ties go to the
// earliest candidate, which is canonical key order when the list comes from
// build_removable_candidates.
std::size_t select_map_index(const FadeState& H, std::span<const MapCandidate> candidates);
const MapCandidate& select_map(const FadeState& H, std::span<const MapCandidate> candidates);

}  // namespace pnc
