#include "pnc/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t cells_of(int n, int M) {
    std::size_t c = 1;
    for (int i = 0; i < n; ++i) c *= static_cast<std::size_t>(M);
    return c;
}

void check_pair_guard(int n, int M) {
    const std::uint64_t limit = guard_limit(100'000'000ull);
    std::uint64_t pairs = 1;
    for (int i = 0; i < 2 * n; ++i) {
        if (pairs > limit / static_cast<std::uint64_t>(M))
            throw GuardExceeded("pair sweep M^(2n) exceeds guard limit");
        pairs *= static_cast<std::uint64_t>(M);
    }
}

// Effective MA-phase constellation: E[cell] = sum_i H_i * point[x_i].
std::vector<Complex> effective_points(const FadeState& H, int n, int M) {
    const PskConstellation c = make_constellation(M);
    const std::size_t cells = cells_of(n, M);
    std::vector<Complex> eff(cells, Complex(0.0, 0.0));
    std::size_t block = cells;
    for (int i = 0; i < n; ++i) {
        block /= static_cast<std::size_t>(M);
        for (std::size_t flat = 0; flat < cells; ++flat) {
            const int digit = static_cast<int>(flat / block % static_cast<std::size_t>(M));
            eff[flat] += H[static_cast<std::size_t>(i)] * c.points[static_cast<std::size_t>(digit)];
        }
    }
    return eff;
}

std::vector<int> unflatten(std::size_t flat, int n, int M) {
    std::vector<int> cell(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        cell[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(M));
        flat /= static_cast<std::size_t>(M);
    }
    return cell;
}

void validate_fade_state(const FadeState& H, int n) {
    if (static_cast<int>(H.size()) != n)
        throw InvalidParameter("fade state dimension does not match n");
    for (const Complex& h : H)
        if (!std::isfinite(h.real()) || !std::isfinite(h.imag()))
            throw InvalidParameter("fade state has non-finite component");
}

}  // namespace

DistanceReport d_min_fade(const FadeState& H, int n, int M) {
    validate_fade_state(H, n);
    check_pair_guard(n, M);
    const std::vector<Complex> eff = effective_points(H, n, M);
    const std::size_t cells = eff.size();
    DistanceReport report;
    report.value = kInf;
    std::size_t best_a = 0, best_b = 0;
    for (std::size_t a = 0; a < cells; ++a) {
        for (std::size_t b = a + 1; b < cells; ++b) {
            const double d = std::abs(eff[a] - eff[b]);
            if (d < report.value) {
                report.value = d;
                best_a = a;
                best_b = b;
            }
        }
    }
    if (std::isfinite(report.value))
        report.argmin_pair = {unflatten(best_a, n, M), unflatten(best_b, n, M)};
    return report;
}

bool is_singular(const FadeState& H, int n, int M, double tol) {
    double norm_h = 0.0;
    for (const Complex& h : H) norm_h += std::norm(h);
    return d_min_fade(H, n, M).value <= tol * std::sqrt(norm_h);
}

DistanceReport cluster_distance(const ClusterMap& map, const FadeState& H, std::int32_t label_i,
                                std::int32_t label_j) {
    validate_fade_state(H, map.n);
    if (label_i == label_j) throw InvalidParameter("cluster distance needs two distinct clusters");
    auto check_label = [&](std::int32_t lab) {
        if (lab < 1 || lab > map.t ||
            std::find(map.labels.begin(), map.labels.end(), lab) == map.labels.end())
            throw InvalidParameter("unknown cluster label " + std::to_string(lab));
    };
    check_label(label_i);
    check_label(label_j);
    check_pair_guard(map.n, map.M);

    const std::vector<Complex> eff = effective_points(H, map.n, map.M);
    DistanceReport report;
    report.value = kInf;
    std::size_t best_a = 0, best_b = 0;
    for (std::size_t a = 0; a < eff.size(); ++a) {
        if (map.labels[a] != label_i) continue;
        for (std::size_t b = 0; b < eff.size(); ++b) {
            if (map.labels[b] != label_j) continue;
            const double d = std::abs(eff[a] - eff[b]);
            if (d < report.value) {
                report.value = d;
                best_a = a;
                best_b = b;
            }
        }
    }
    if (std::isfinite(report.value))
        report.argmin_pair = {unflatten(best_a, map.n, map.M), unflatten(best_b, map.n, map.M)};
    return report;
}

DistanceReport min_cluster_distance(const ClusterMap& map, const FadeState& H) {
    validate_fade_state(H, map.n);
    check_pair_guard(map.n, map.M);
    const std::vector<Complex> eff = effective_points(H, map.n, map.M);
    DistanceReport report;
    report.value = kInf;
    std::size_t best_a = 0, best_b = 0;
    for (std::size_t a = 0; a < eff.size(); ++a) {
        for (std::size_t b = a + 1; b < eff.size(); ++b) {
            if (map.labels[a] == map.labels[b]) continue;
            const double d = std::abs(eff[a] - eff[b]);
            if (d < report.value) {
                report.value = d;
                best_a = a;
                best_b = b;
            }
        }
    }
    if (std::isfinite(report.value))
        report.argmin_pair = {unflatten(best_a, map.n, map.M), unflatten(best_b, map.n, map.M)};
    return report;
}

std::vector<MapCandidate> build_removable_candidates(int n, int M, std::size_t max_candidates) {
    std::vector<MapCandidate> out;
    for (const SubspaceKey& key : enumerate_subspaces(n, M)) {
        if (!is_removable(key)) continue;
        if (out.size() >= max_candidates) break;
        out.push_back({key, build_map_for_subspace(key)});
    }
    return out;
}

std::size_t select_map_index(const FadeState& H, std::span<const MapCandidate> candidates) {
    if (candidates.empty()) throw InvalidParameter("candidate list is empty");
    const int n = candidates.front().map.n;
    const int M = candidates.front().map.M;
    validate_fade_state(H, n);
    check_pair_guard(n, M);

    // All candidates share one pair-distance table; each candidate's minimum
    // cluster distance is the first cross-cluster pair in ascending order.
    const std::vector<Complex> eff = effective_points(H, n, M);
    const std::size_t cells = eff.size();
    struct PairDist {
        double d;
        std::uint32_t a, b;
    };
    std::vector<PairDist> pairs;
    pairs.reserve(cells * (cells - 1) / 2);
    for (std::size_t a = 0; a < cells; ++a)
        for (std::size_t b = a + 1; b < cells; ++b)
            pairs.push_back({std::abs(eff[a] - eff[b]), static_cast<std::uint32_t>(a),
                             static_cast<std::uint32_t>(b)});
    std::sort(pairs.begin(), pairs.end(), [](const PairDist& x, const PairDist& y) {
        if (x.d != y.d) return x.d < y.d;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const ClusterMap& map = candidates[i].map;
        if (map.n != n || map.M != M)
            throw InvalidParameter("candidate maps disagree on (n, M)");
        double value = kInf;
        for (const PairDist& p : pairs) {
            if (map.labels[p.a] != map.labels[p.b]) {
                value = p.d;
                break;
            }
        }
        if (value > best_value) {
            best_value = value;
            best = i;
        }
    }
    return best;
}

const MapCandidate& select_map(const FadeState& H, std::span<const MapCandidate> candidates) {
    return candidates[select_map_index(H, candidates)];
}

}  // namespace pnc
