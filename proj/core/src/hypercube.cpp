#include "pnc/hypercube.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cstdio>
#include <numeric>

namespace pnc {

namespace {

std::vector<std::size_t> strides_of(int n, int M) {
    std::vector<std::size_t> s(static_cast<std::size_t>(n));
    std::size_t acc = 1;
    for (int i = n - 1; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = acc;
        acc *= static_cast<std::size_t>(M);
    }
    return s;
}

std::size_t cells_of(int n, int M) {
    std::size_t c = 1;
    for (int i = 0; i < n; ++i) c *= static_cast<std::size_t>(M);
    return c;
}

int digit_of(std::size_t flat, int k, int n, int M) {
    int shift = n - 1 - k;
    std::size_t v = flat;
    for (int i = 0; i < shift; ++i) v /= static_cast<std::size_t>(M);
    return static_cast<int>(v % static_cast<std::size_t>(M));
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void merge(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Allocation-free test of canonicalize(difference vector of (x, y)) == key.
// dtab holds delta_of(a, b, M) at a * M + b.
bool pair_matches_key(const SubspaceKey& key, std::size_t x, std::size_t y,
                      const std::vector<DeltaValue>& dtab, int n, int M) {
    const int two_m = 2 * M;
    std::size_t s = 0;
    int p_ref = 0;
    int l_ref = 0;
    for (int i = 0; i < n; ++i) {
        const int a = digit_of(x, i, n, M);
        const int b = digit_of(y, i, n, M);
        const DeltaValue& d = dtab[static_cast<std::size_t>(a) * static_cast<std::size_t>(M) +
                                   static_cast<std::size_t>(b)];
        if (d.is_zero()) {
            if (s < key.support.size() && key.support[s] == i) return false;
            continue;
        }
        if (s >= key.support.size() || key.support[s] != i) return false;
        if (s == 0) {
            p_ref = d.p;
            l_ref = d.l;
        }
        if (key.uniform_mags) {
            if (d.l != l_ref) return false;
        } else if (d.l != key.mags[s]) {
            return false;
        }
        const int rel = ((d.p - p_ref) % two_m + two_m) % two_m;
        if (rel != key.rel_phases[s]) return false;
        ++s;
    }
    return s == key.support.size();
}

}  // namespace

std::size_t ClusterMap::flat_index(std::span<const int> cell) const {
    if (static_cast<int>(cell.size()) != n) throw InvalidParameter("cell has wrong dimension");
    std::size_t flat = 0;
    for (int i = 0; i < n; ++i) {
        if (cell[static_cast<std::size_t>(i)] < 0 || cell[static_cast<std::size_t>(i)] >= M)
            throw InvalidParameter("cell coordinate out of range");
        flat = flat * static_cast<std::size_t>(M) +
               static_cast<std::size_t>(cell[static_cast<std::size_t>(i)]);
    }
    return flat;
}

std::vector<int> ClusterMap::cell_of(std::size_t flat) const {
    std::vector<int> cell(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        cell[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(M));
        flat /= static_cast<std::size_t>(M);
    }
    return cell;
}

std::optional<SliceViolation> exclusive_law_check(const ClusterMap& map) {
    const std::size_t cells = map.cell_count();
    std::vector<std::size_t> first_seen(static_cast<std::size_t>(map.t) + 1, 0);
    std::vector<int> stamp(static_cast<std::size_t>(map.t) + 1, -1);
    int epoch = 0;
    for (int k = 0; k < map.n; ++k) {
        for (int v = 0; v < map.M; ++v) {
            ++epoch;
            for (std::size_t c = 0; c < cells; ++c) {
                if (digit_of(c, k, map.n, map.M) != v) continue;
                const std::int32_t lab = map.labels[c];
                if (lab < 1 || lab > map.t) throw InvalidParameter("label out of range in map");
                if (stamp[static_cast<std::size_t>(lab)] == epoch)
                    return SliceViolation{k, v, lab, first_seen[static_cast<std::size_t>(lab)], c};
                stamp[static_cast<std::size_t>(lab)] = epoch;
                first_seen[static_cast<std::size_t>(lab)] = c;
            }
        }
    }
    return std::nullopt;
}

bool exclusive_law_holds(const ClusterMap& map) { return !exclusive_law_check(map).has_value(); }

ConstraintPartition removal_constraints(const SubspaceKey& key) {
    const int n = key.n;
    const int M = key.M;
    make_constellation(M);
    if (n < 2) throw InvalidParameter("key dimension must be >= 2");
    const std::size_t cells = cells_of(n, M);

    std::vector<DeltaValue> dtab(static_cast<std::size_t>(M) * static_cast<std::size_t>(M));
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b)
            dtab[static_cast<std::size_t>(a) * static_cast<std::size_t>(M) +
                 static_cast<std::size_t>(b)] = delta_of(a, b, M);

    UnionFind uf(cells);
    for (std::size_t x = 0; x < cells; ++x)
        for (std::size_t y = x + 1; y < cells; ++y)
            if (pair_matches_key(key, x, y, dtab, n, M)) uf.merge(x, y);

    std::vector<std::vector<std::size_t>> by_root(cells);
    for (std::size_t c = 0; c < cells; ++c) by_root[uf.find(c)].push_back(c);

    ConstraintPartition part;
    part.n = n;
    part.M = M;
    for (std::size_t r = 0; r < cells; ++r)
        if (by_root[r].size() >= 2) part.groups.push_back(std::move(by_root[r]));
    // Roots are the smallest member of each class, so groups are already
    // ordered by their lexicographically smallest cell.
    return part;
}

ClusterMap fill_greedy(const ConstraintPartition& constraints) {
    const int n = constraints.n;
    const int M = constraints.M;
    make_constellation(M);
    if (n < 2) throw InvalidParameter("n must be >= 2");
    const std::size_t cells = cells_of(n, M);
    const std::size_t max_labels = cells + 1;

    std::vector<std::int32_t> labels(cells, 0);

    // Validate the partition: in-range, disjoint, and no group with two cells
    // agreeing in a coordinate (the unsatisfiable case).
    std::vector<char> seen_cell(cells, 0);
    for (const auto& group : constraints.groups) {
        for (std::size_t c : group) {
            if (c >= cells) throw InvalidParameter("constraint cell index out of range");
            if (seen_cell[c]) throw InvalidParameter("constraint groups are not disjoint");
            seen_cell[c] = 1;
        }
        for (int k = 0; k < n; ++k) {
            std::vector<char> used(static_cast<std::size_t>(M), 0);
            for (std::size_t c : group) {
                const int v = digit_of(c, k, n, M);
                if (used[static_cast<std::size_t>(v)])
                    throw NonRemovableConstraint(
                        "constraint group forces two cells agreeing in coordinate " +
                            std::to_string(k + 1) + " into one cluster",
                        k);
                used[static_cast<std::size_t>(v)] = 1;
            }
        }
    }

    // used_in_slice[k][v][lab]: label already present in the slice x_k = v.
    std::vector<std::vector<std::vector<char>>> used_in_slice(
        static_cast<std::size_t>(n),
        std::vector<std::vector<char>>(static_cast<std::size_t>(M),
                                       std::vector<char>(max_labels, 0)));
    auto place = [&](std::size_t c, std::int32_t lab) {
        labels[c] = lab;
        for (int k = 0; k < n; ++k)
            used_in_slice[static_cast<std::size_t>(k)]
                         [static_cast<std::size_t>(digit_of(c, k, n, M))]
                         [static_cast<std::size_t>(lab)] = 1;
    };

    // Groups ordered by smallest member; removal_constraints emits them that
    // way already, but the contract holds for arbitrary callers.
    std::vector<std::size_t> order(constraints.groups.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *std::min_element(constraints.groups[a].begin(), constraints.groups[a].end()) <
               *std::min_element(constraints.groups[b].begin(), constraints.groups[b].end());
    });
    std::int32_t next = 1;
    for (std::size_t g : order) {
        for (std::size_t c : constraints.groups[g]) place(c, next);
        ++next;
    }

    std::int32_t t = next - 1;
    for (std::size_t c = 0; c < cells; ++c) {
        if (labels[c] != 0) continue;
        std::int32_t lab = 1;
        for (;; ++lab) {
            bool free = true;
            for (int k = 0; k < n && free; ++k)
                free = !used_in_slice[static_cast<std::size_t>(k)]
                                     [static_cast<std::size_t>(digit_of(c, k, n, M))]
                                     [static_cast<std::size_t>(lab)];
            if (free) break;
        }
        place(c, lab);
        t = std::max(t, lab);
    }

    ClusterMap map{n, M, t, std::move(labels)};
    assert(exclusive_law_holds(map));
    return map;
}

ClusterMap build_map_for_subspace(const SubspaceKey& key) {
    return fill_greedy(removal_constraints(key));
}

ClusterMap baseline_map(int n, int M) {
    make_constellation(M);
    if (n < 2) throw InvalidParameter("n must be >= 2");
    const std::size_t cells = cells_of(n, M);
    ClusterMap map;
    map.n = n;
    map.M = M;
    map.t = static_cast<int>(cells / static_cast<std::size_t>(M));
    map.labels.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        const int x1 = digit_of(c, 0, n, M);
        std::int32_t code = 0;
        for (int i = 1; i < n; ++i) {
            const int d = ((digit_of(c, i, n, M) - x1) % M + M) % M;
            code = code * M + d;
        }
        map.labels[c] = code + 1;
    }
    return map;
}

std::optional<std::vector<int>> decode_others(const ClusterMap& map, int k, int own,
                                              std::int32_t label) {
    if (k < 0 || k >= map.n) throw InvalidParameter("dimension index out of range");
    if (own < 0 || own >= map.M) throw InvalidParameter("own symbol out of range");
    const std::size_t cells = map.cell_count();
    for (std::size_t c = 0; c < cells; ++c) {
        if (digit_of(c, k, map.n, map.M) != own) continue;
        if (map.labels[c] != label) continue;
        std::vector<int> others;
        others.reserve(static_cast<std::size_t>(map.n - 1));
        for (int i = 0; i < map.n; ++i)
            if (i != k) others.push_back(digit_of(c, i, map.n, map.M));
        return others;
    }
    return std::nullopt;
}

std::string serialize_map(const ClusterMap& map) {
    std::string out = "pncmap v1\n";
    out += "n=" + std::to_string(map.n) + " M=" + std::to_string(map.M) +
           " t=" + std::to_string(map.t) + "\n";
    const std::size_t cells = map.cell_count();
    const std::size_t row = static_cast<std::size_t>(map.M);
    for (std::size_t c = 0; c < cells; ++c) {
        out += std::to_string(map.labels[c]);
        out += (c % row == row - 1) ? '\n' : ' ';
    }
    return out;
}

namespace {

struct LineReader {
    std::string_view text;
    std::size_t pos = 0;
    int line_no = 0;

    std::optional<std::string_view> next() {
        if (pos >= text.size()) return std::nullopt;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return line;
    }
};

bool is_comment_or_blank(std::string_view line) {
    for (char ch : line) {
        if (ch == ' ' || ch == '\t') continue;
        return ch == '#';
    }
    return true;
}

}  // namespace

ClusterMap parse_map(std::string_view text) {
    LineReader reader{text};
    auto header = reader.next();
    if (!header || *header != "pncmap v1")
        throw MapParseError("expected header 'pncmap v1'", reader.line_no == 0 ? 1 : reader.line_no);
    auto dims = reader.next();
    if (!dims) throw MapParseError("missing dimension line", reader.line_no + 1);
    int n = 0, M = 0, t = 0;
    char trailing = '\0';
    if (std::sscanf(std::string(*dims).c_str(), "n=%d M=%d t=%d %c", &n, &M, &t, &trailing) != 3)
        throw MapParseError("malformed dimension line, expected 'n=<n> M=<M> t=<t>'",
                            reader.line_no);
    if (n < 2) throw MapParseError("n must be >= 2", reader.line_no);
    if (M < 2 || (M & (M - 1)) != 0) throw MapParseError("M must be a power of two", reader.line_no);
    if (t < 1) throw MapParseError("t must be >= 1", reader.line_no);
    std::uint64_t cells64 = 1;
    for (int i = 0; i < n; ++i) {
        cells64 *= static_cast<std::uint64_t>(M);
        if (cells64 > guard_limit(100'000'000ull))
            throw MapParseError("map dimensions exceed guard limit", reader.line_no);
    }
    const std::size_t cells = static_cast<std::size_t>(cells64);

    ClusterMap map{n, M, t, {}};
    map.labels.reserve(cells);
    while (auto line = reader.next()) {
        if (is_comment_or_blank(*line)) continue;
        const char* it = line->data();
        const char* end = it + line->size();
        while (it != end) {
            while (it != end && (*it == ' ' || *it == '\t')) ++it;
            if (it == end) break;
            std::int32_t value = 0;
            auto [ptr, ec] = std::from_chars(it, end, value);
            if (ec != std::errc() || (ptr != end && *ptr != ' ' && *ptr != '\t'))
                throw MapParseError("malformed label token", reader.line_no);
            if (map.labels.size() >= cells)
                throw MapParseError("more than " + std::to_string(cells) + " labels",
                                    reader.line_no);
            if (value < 1 || value > t)
                throw MapParseError("label " + std::to_string(value) + " out of range [1, " +
                                        std::to_string(t) + "]",
                                    reader.line_no);
            map.labels.push_back(value);
            it = ptr;
        }
    }
    if (map.labels.size() != cells)
        throw MapParseError("expected " + std::to_string(cells) + " labels, found " +
                                std::to_string(map.labels.size()),
                            reader.line_no);
    std::vector<char> present(static_cast<std::size_t>(t) + 1, 0);
    for (std::int32_t lab : map.labels) present[static_cast<std::size_t>(lab)] = 1;
    for (int lab = 1; lab <= t; ++lab)
        if (!present[static_cast<std::size_t>(lab)])
            throw MapParseError("label " + std::to_string(lab) + " never occurs", 2);
    return map;
}

}  // namespace pnc
