#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "pnc/constellation.hpp"

namespace pnc {

// Channel gains (H_1, ..., H_n) of the user-to-relay links.
using FadeState = std::vector<Complex>;

// An n-tuple over the difference constellation; at least one component
// nonzero wherever a subspace is derived from it.
struct DifferenceVector {
    int M = 0;
    std::vector<DeltaValue> components;

    std::vector<Complex> values() const;
};

// Canonical name of a singular fade subspace <v>^perp: two difference
// vectors produce the same key exactly when they are complex-scalar
// multiples of one another. Magnitude classes collapse to Uniform when all
// nonzero chords are equal; relative phases are taken against the first
// support component, so the leading entry is always 0.
struct SubspaceKey {
    int n = 0;
    int M = 0;
    std::vector<int> support;     // ascending indices of nonzero components
    bool uniform_mags = false;
    std::vector<int> mags;        // chord classes over support; empty when uniform
    std::vector<int> rel_phases;  // (p_i - p_ref) mod 2M over support

    auto operator<=>(const SubspaceKey&) const = default;

    // An exact member of the key's proportionality class (uniform keys use
    // chord class 1).
    DifferenceVector representative() const;
};

SubspaceKey canonicalize(const DifferenceVector& v);

// Exhaustive sweep of (difference set)^n minus the zero vector, canonicalized
// and deduplicated; returned sorted. Refuses sweeps larger than the guard
// (default 1e8 vectors).
std::vector<SubspaceKey> enumerate_subspaces(int n, int M);

// Closed-form subspace count: sum over k of C(n,k) [(M/2)^k - M/2 + 1] M^(k-1).
std::uint64_t count_formula(int n, int M);

struct RemovableCounts {
    std::uint64_t removable = 0;
    std::uint64_t non_removable = 0;
};

RemovableCounts removable_count_formula(int n, int M);

// A subspace is removable exactly when every component of its difference
// vectors is nonzero (full support).
bool is_removable(const SubspaceKey& key);

// Membership test: |sum H_i v_i| <= tol * ||H|| * ||v|| for a representative
// v (plain dot product, no conjugation).
bool subspace_contains(const FadeState& H, const SubspaceKey& key, double tol = 1e-9);

}  // namespace pnc
