#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pnc/fadespace.hpp"

namespace pnc {

// The relay's network-coding map: a dense M x ... x M (n-fold) array of
// cluster labels in [1, t]. Cell (x_1, ..., x_n) lives at the lexicographic
// flat index with x_1 slowest and x_n fastest.
struct ClusterMap {
    int n = 0;
    int M = 0;
    int t = 0;
    std::vector<std::int32_t> labels;

    std::size_t cell_count() const { return labels.size(); }
    std::size_t flat_index(std::span<const int> cell) const;
    std::vector<int> cell_of(std::size_t flat) const;
    std::int32_t label_at(std::span<const int> cell) const { return labels[flat_index(cell)]; }

    bool operator==(const ClusterMap&) const = default;
};

// Disjoint groups of cells that must share a label; singletons are omitted.
struct ConstraintPartition {
    int n = 0;
    int M = 0;
    std::vector<std::vector<std::size_t>> groups;  // flat indices, each group sorted
};

struct SliceViolation {
    int dim = 0;          // 0-based dimension
    int value = 0;        // fixed coordinate value of the offending slice
    std::int32_t label = 0;
    std::size_t cell_a = 0;
    std::size_t cell_b = 0;
};

// The map satisfies the exclusive law iff no label repeats within any
// axis-aligned slice x_k = v; equivalently the array is an n-fold Latin
// hyper-cube of side M.
bool exclusive_law_holds(const ClusterMap& map);
std::optional<SliceViolation> exclusive_law_check(const ClusterMap& map);

// Union-find closure over all cell pairs whose difference vector is
// proportional to the key's representative.
ConstraintPartition removal_constraints(const SubspaceKey& key);

// Pre-assigns labels 1..|groups| to the constraint groups (ordered by their
// lexicographically smallest cell), then fills remaining cells in
// lexicographic order with the smallest label absent from all n slices
// through the cell. Throws NonRemovableConstraint when a group contains two
// cells agreeing in some coordinate.
ClusterMap fill_greedy(const ConstraintPartition& constraints);

ClusterMap build_map_for_subspace(const SubspaceKey& key);

// Fixed non-adaptive map: the label encodes ((x_2-x_1) mod M, ...,
// (x_n-x_1) mod M) as an integer in [1, M^(n-1)].
ClusterMap baseline_map(int n, int M);

// The unique other-user symbols (x_1,...,x_{k-1},x_{k+1},...,x_n) such that
// the cell with x_k = own carries `label`; nullopt when the label does not
// occur in that slice. k is 0-based.
std::optional<std::vector<int>> decode_others(const ClusterMap& map, int k, int own,
                                              std::int32_t label);

// Text map format:
//   line 1: "pncmap v1"
//   line 2: "n=<n> M=<M> t=<t>"
//   then M^n labels in [1, t], lexicographic cell order, whitespace-separated;
//   lines starting with '#' are comments.
std::string serialize_map(const ClusterMap& map);
ClusterMap parse_map(std::string_view text);

}  // namespace pnc
