#include "pnc/fadespace.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pnc {

std::vector<Complex> DifferenceVector::values() const {
    std::vector<Complex> out;
    out.reserve(components.size());
    for (const auto& d : components) out.push_back(delta_value(d, M));
    return out;
}

SubspaceKey canonicalize(const DifferenceVector& v) {
    const int n = static_cast<int>(v.components.size());
    if (n < 1) throw InvalidParameter("difference vector is empty");
    SubspaceKey key;
    key.n = n;
    key.M = v.M;
    for (int i = 0; i < n; ++i)
        if (!v.components[static_cast<std::size_t>(i)].is_zero()) key.support.push_back(i);
    if (key.support.empty())
        throw InvalidParameter("all-zero difference vector has no perp subspace");

    const int two_m = 2 * v.M;
    const int p_ref = v.components[static_cast<std::size_t>(key.support.front())].p;
    key.uniform_mags = true;
    const int l_ref = v.components[static_cast<std::size_t>(key.support.front())].l;
    for (int i : key.support) {
        const DeltaValue& d = v.components[static_cast<std::size_t>(i)];
        if (d.l != l_ref) key.uniform_mags = false;
        key.rel_phases.push_back(((d.p - p_ref) % two_m + two_m) % two_m);
    }
    if (!key.uniform_mags)
        for (int i : key.support) key.mags.push_back(v.components[static_cast<std::size_t>(i)].l);
    return key;
}

DifferenceVector SubspaceKey::representative() const {
    DifferenceVector v;
    v.M = M;
    v.components.assign(static_cast<std::size_t>(n), DeltaValue{});
    const int two_m = 2 * M;
    for (std::size_t s = 0; s < support.size(); ++s) {
        const int l = uniform_mags ? 1 : mags[s];
        // Reference phase picked so every component lands on its chord's
        // admissible phase grid (parity of p must match parity of l + M/2).
        const int p_ref = ((uniform_mags ? 1 : mags[0]) + M / 2) & 1;
        const int p = ((p_ref + rel_phases[s]) % two_m + two_m) % two_m;
        v.components[static_cast<std::size_t>(support[s])] = DeltaValue{l, p};
    }
    return v;
}

std::vector<SubspaceKey> enumerate_subspaces(int n, int M) {
    if (n < 2) throw InvalidParameter("n must be >= 2");
    const std::vector<DeltaValue> deltas = difference_set(M);
    const std::uint64_t limit = guard_limit(100'000'000ull);
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        if (total > limit / deltas.size())
            throw GuardExceeded("difference-vector sweep exceeds guard limit");
        total *= deltas.size();
    }

    std::set<SubspaceKey> keys;
    DifferenceVector v;
    v.M = M;
    v.components.assign(static_cast<std::size_t>(n), DeltaValue{});
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    for (std::uint64_t count = 0; count < total; ++count) {
        bool all_zero = true;
        for (int i = 0; i < n; ++i) {
            v.components[static_cast<std::size_t>(i)] = deltas[idx[static_cast<std::size_t>(i)]];
            all_zero &= v.components[static_cast<std::size_t>(i)].is_zero();
        }
        if (!all_zero) keys.insert(canonicalize(v));
        for (int i = n - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < deltas.size()) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return {keys.begin(), keys.end()};
}

static std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw GuardExceeded("count overflows 64 bits");
    return r;
}

static std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw GuardExceeded("count overflows 64 bits");
    return r;
}

static std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = checked_mul(r, static_cast<std::uint64_t>(n - k + i));
        r /= static_cast<std::uint64_t>(i);
    }
    return r;
}

static std::uint64_t ipow(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, base);
    return r;
}

// One summand: C(n,k) [(M/2)^k - M/2 + 1] M^(k-1).
static std::uint64_t count_term(int n, int k, int M) {
    const std::uint64_t half = static_cast<std::uint64_t>(M) / 2;
    const std::uint64_t bracket = ipow(half, k) - half + 1;
    return checked_mul(checked_mul(binomial(n, k), bracket),
                       ipow(static_cast<std::uint64_t>(M), k - 1));
}

std::uint64_t count_formula(int n, int M) {
    if (n < 1) throw InvalidParameter("n must be >= 1");
    make_constellation(M);  // validates M
    std::uint64_t total = 0;
    for (int k = 1; k <= n; ++k) total = checked_add(total, count_term(n, k, M));
    return total;
}

RemovableCounts removable_count_formula(int n, int M) {
    if (n < 2) throw InvalidParameter("n must be >= 2");
    make_constellation(M);
    RemovableCounts rc;
    rc.removable = count_term(n, n, M);
    for (int k = 1; k <= n - 1; ++k)
        rc.non_removable = checked_add(rc.non_removable, count_term(n, k, M));
    return rc;
}

bool is_removable(const SubspaceKey& key) {
    return static_cast<int>(key.support.size()) == key.n;
}

bool subspace_contains(const FadeState& H, const SubspaceKey& key, double tol) {
    if (static_cast<int>(H.size()) != key.n)
        throw InvalidParameter("fade state dimension does not match key");
    const std::vector<Complex> v = key.representative().values();
    Complex dot(0.0, 0.0);
    double norm_h = 0.0, norm_v = 0.0;
    for (std::size_t i = 0; i < H.size(); ++i) {
        dot += H[i] * v[i];
        norm_h += std::norm(H[i]);
        norm_v += std::norm(v[i]);
    }
    return std::abs(dot) <= tol * std::sqrt(norm_h) * std::sqrt(norm_v);
}

}  // namespace pnc
