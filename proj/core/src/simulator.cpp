#include "pnc/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace pnc {

const char* scheme_name(Scheme s) { return s == Scheme::Adaptive ? "adaptive" : "nonadaptive"; }

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::pair<double, double> Rng::normal_pair() {
    // (0, 1] for the log, [0, 1) for the angle.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

std::uint32_t Rng::below(std::uint32_t bound) {
    if (bound == 0) throw InvalidParameter("bound must be positive");
    if ((bound & (bound - 1)) == 0) return static_cast<std::uint32_t>(next_u64() & (bound - 1));
    const std::uint64_t span = (~std::uint64_t{0} / bound) * bound;
    std::uint64_t x = next_u64();
    while (x >= span) x = next_u64();
    return static_cast<std::uint32_t>(x % bound);
}

Complex Rng::cnormal() {
    const auto [g1, g2] = normal_pair();
    return Complex(g1, g2) * std::numbers::sqrt2 / 2.0;
}

std::uint64_t frame_stream_seed(std::uint64_t seed, std::uint64_t frame_index) {
    std::uint64_t sm = seed ^ (0xD1B54A32D192ED03ull * (frame_index + 1));
    std::uint64_t out = splitmix64(sm);
    out ^= splitmix64(sm);
    return out;
}

Complex sample_rician(double K_db, Rng& rng) {
    const double K = std::pow(10.0, K_db / 10.0);
    const double los = std::sqrt(K / (K + 1.0));
    const double scatter = std::sqrt(1.0 / (2.0 * (K + 1.0)));
    const auto [gr, gi] = rng.normal_pair();
    return Complex(los + scatter * gr, scatter * gi);
}

Complex ma_phase(std::span<const int> symbols, const FadeState& H, const PskConstellation& c,
                 double sigma, Rng& rng) {
    if (symbols.size() != H.size()) throw InvalidParameter("symbol count does not match n");
    Complex y(0.0, 0.0);
    for (std::size_t i = 0; i < H.size(); ++i) {
        const int s = symbols[i];
        if (s < 0 || s >= c.M) throw InvalidParameter("symbol index out of range");
        y += H[i] * c.points[static_cast<std::size_t>(s)];
    }
    if (sigma > 0.0) y += sigma * rng.cnormal();
    return y;
}

std::vector<int> ml_joint_decode(Complex y, const FadeState& H, int n, int M) {
    if (static_cast<int>(H.size()) != n) throw InvalidParameter("fade state dimension mismatch");
    const PskConstellation c = make_constellation(M);
    const std::uint64_t limit = guard_limit(10'000'000ull);
    std::uint64_t cells64 = 1;
    for (int i = 0; i < n; ++i) {
        if (cells64 > limit / static_cast<std::uint64_t>(M))
            throw GuardExceeded("tuple sweep M^n exceeds guard limit");
        cells64 *= static_cast<std::uint64_t>(M);
    }
    const std::size_t cells = static_cast<std::size_t>(cells64);

    std::vector<int> tuple(static_cast<std::size_t>(n), 0);
    std::vector<int> best = tuple;
    double best_metric = std::numeric_limits<double>::infinity();
    for (std::size_t flat = 0; flat < cells; ++flat) {
        Complex e(0.0, 0.0);
        for (int i = 0; i < n; ++i)
            e += H[static_cast<std::size_t>(i)] *
                 c.points[static_cast<std::size_t>(tuple[static_cast<std::size_t>(i)])];
        const double metric = std::norm(y - e);
        if (metric < best_metric) {
            best_metric = metric;
            best = tuple;
        }
        for (int i = n - 1; i >= 0; --i) {
            if (++tuple[static_cast<std::size_t>(i)] < M) break;
            tuple[static_cast<std::size_t>(i)] = 0;
        }
    }
    return best;
}

int bc_round(int label, int t, Complex h_prime, double sigma, Rng& rng) {
    if (t < 1 || label < 1 || label > t) throw InvalidParameter("label out of range [1, t]");
    const double step = 2.0 * std::numbers::pi / t;
    auto point = [&](int m) { return Complex(std::cos(step * m), std::sin(step * m)); };
    Complex y = h_prime * point(label - 1);
    if (sigma > 0.0) y += sigma * rng.cnormal();
    int best = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    for (int m = 0; m < t; ++m) {
        const double metric = std::norm(y - h_prime * point(m));
        if (metric < best_metric) {
            best_metric = metric;
            best = m;
        }
    }
    return best + 1;
}

double sigma_squared_for_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

namespace {

// O(1) decode_others lookup: packed other-user symbols per (dimension, own
// symbol, label), -1 where the label does not occur in the slice.
struct DecodeTable {
    int n = 0, M = 0, t = 0;
    std::vector<std::int32_t> packed;  // ((k * M) + own) * t + (label - 1)

    explicit DecodeTable(const ClusterMap& map) : n(map.n), M(map.M), t(map.t) {
        packed.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(M) *
                          static_cast<std::size_t>(t),
                      -1);
        const std::size_t cells = map.cell_count();
        for (std::size_t c = 0; c < cells; ++c) {
            std::size_t rest = c;
            std::vector<int> cell(static_cast<std::size_t>(n));
            for (int i = n - 1; i >= 0; --i) {
                cell[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(M));
                rest /= static_cast<std::size_t>(M);
            }
            for (int k = 0; k < n; ++k) {
                std::int32_t code = 0;
                for (int i = 0; i < n; ++i)
                    if (i != k) code = code * M + cell[static_cast<std::size_t>(i)];
                at(k, cell[static_cast<std::size_t>(k)], map.labels[c]) = code;
            }
        }
    }

    std::int32_t& at(int k, int own, std::int32_t label) {
        return packed[(static_cast<std::size_t>(k) * static_cast<std::size_t>(M) +
                       static_cast<std::size_t>(own)) *
                          static_cast<std::size_t>(t) +
                      static_cast<std::size_t>(label - 1)];
    }
    std::int32_t get(int k, int own, std::int32_t label) const {
        return packed[(static_cast<std::size_t>(k) * static_cast<std::size_t>(M) +
                       static_cast<std::size_t>(own)) *
                          static_cast<std::size_t>(t) +
                      static_cast<std::size_t>(label - 1)];
    }
};

void validate_config(const SimConfig& cfg) {
    const PskConstellation c = make_constellation(cfg.M);
    if (cfg.n < 2) throw InvalidParameter("n must be >= 2");
    if (cfg.frame_bits < 1 || cfg.frame_bits % c.bits_per_symbol != 0)
        throw InvalidParameter("frame_bits must be a positive multiple of bits per symbol");
    if (cfg.frames_per_point < 1) throw InvalidParameter("frames_per_point must be >= 1");
    if (cfg.snr_db_list.empty()) throw InvalidParameter("snr_db_list must not be empty");
}

struct FrameCounters {
    std::uint64_t bit_errors = 0;
};

}  // namespace

std::vector<BerRecord> run_simulation(const SimConfig& cfg, int workers) {
    validate_config(cfg);
    if (workers < 1) throw InvalidParameter("workers must be >= 1");

    const PskConstellation cst = make_constellation(cfg.M);
    const int n = cfg.n;
    const int M = cfg.M;
    const int lambda = cst.bits_per_symbol;
    const int nsym = cfg.frame_bits / lambda;

    // Read-only candidate set shared by every frame.
    std::vector<MapCandidate> candidates;
    if (cfg.scheme == Scheme::Adaptive) {
        candidates = build_removable_candidates(n, M, cfg.max_candidates);
        if (candidates.empty())
            throw InvalidParameter("adaptive scheme needs at least one removable-subspace map");
    } else {
        candidates.push_back({SubspaceKey{}, baseline_map(n, M)});
    }
    std::vector<DecodeTable> tables;
    tables.reserve(candidates.size());
    for (const MapCandidate& cand : candidates) tables.emplace_back(cand.map);

    const std::size_t points = cfg.snr_db_list.size();
    const std::uint64_t frames = static_cast<std::uint64_t>(cfg.frames_per_point);
    const std::size_t cells = [&] {
        std::size_t c = 1;
        for (int i = 0; i < n; ++i) c *= static_cast<std::size_t>(M);
        return c;
    }();

    auto run_frame = [&](std::size_t point, std::uint64_t frame, FrameCounters& out) {
        Rng rng(frame_stream_seed(cfg.seed, static_cast<std::uint64_t>(point) * frames + frame));
        const double sigma = std::sqrt(sigma_squared_for_snr_db(cfg.snr_db_list[point]));

        FadeState H(static_cast<std::size_t>(n));
        for (auto& h : H) h = sample_rician(cfg.rician_K_db, rng);
        FadeState Hp(static_cast<std::size_t>(n));
        for (auto& h : Hp) h = sample_rician(cfg.rician_K_db, rng);

        const std::size_t chosen =
            cfg.scheme == Scheme::Adaptive ? select_map_index(H, candidates) : 0;
        const ClusterMap& map = candidates[chosen].map;
        const DecodeTable& table = tables[chosen];
        const int t = map.t;

        // Block fading: per-frame symbol streams, user-major.
        std::vector<int> sym(static_cast<std::size_t>(n) * static_cast<std::size_t>(nsym));
        for (auto& s : sym) s = static_cast<int>(rng.below(static_cast<std::uint32_t>(M)));

        // Effective MA constellation and per-user BC constellations.
        std::vector<Complex> eff(cells, Complex(0.0, 0.0));
        {
            std::size_t block = cells;
            for (int i = 0; i < n; ++i) {
                block /= static_cast<std::size_t>(M);
                for (std::size_t flat = 0; flat < cells; ++flat) {
                    const int digit = static_cast<int>(flat / block % static_cast<std::size_t>(M));
                    eff[flat] +=
                        H[static_cast<std::size_t>(i)] * cst.points[static_cast<std::size_t>(digit)];
                }
            }
        }
        const double step = 2.0 * std::numbers::pi / t;
        std::vector<Complex> bc(static_cast<std::size_t>(n) * static_cast<std::size_t>(t));
        for (int k = 0; k < n; ++k)
            for (int m = 0; m < t; ++m)
                bc[static_cast<std::size_t>(k) * static_cast<std::size_t>(t) +
                   static_cast<std::size_t>(m)] =
                    Hp[static_cast<std::size_t>(k)] * Complex(std::cos(step * m), std::sin(step * m));

        std::vector<std::size_t> strides(static_cast<std::size_t>(n));
        {
            std::size_t acc = 1;
            for (int i = n - 1; i >= 0; --i) {
                strides[static_cast<std::size_t>(i)] = acc;
                acc *= static_cast<std::size_t>(M);
            }
        }

        for (int slot = 0; slot < nsym; ++slot) {
            std::size_t tx_flat = 0;
            for (int i = 0; i < n; ++i)
                tx_flat += static_cast<std::size_t>(
                               sym[static_cast<std::size_t>(i) * static_cast<std::size_t>(nsym) +
                                   static_cast<std::size_t>(slot)]) *
                           strides[static_cast<std::size_t>(i)];

            const Complex y = eff[tx_flat] + sigma * rng.cnormal();
            std::size_t ml_flat = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t flat = 0; flat < cells; ++flat) {
                const double metric = std::norm(y - eff[flat]);
                if (metric < best) {
                    best = metric;
                    ml_flat = flat;
                }
            }
            const std::int32_t label = map.labels[ml_flat];

            for (int k = 0; k < n; ++k) {
                const Complex yk = bc[static_cast<std::size_t>(k) * static_cast<std::size_t>(t) +
                                      static_cast<std::size_t>(label - 1)] +
                                   sigma * rng.cnormal();
                int lhat = 0;
                double best_bc = std::numeric_limits<double>::infinity();
                for (int m = 0; m < t; ++m) {
                    const double metric =
                        std::norm(yk - bc[static_cast<std::size_t>(k) * static_cast<std::size_t>(t) +
                                          static_cast<std::size_t>(m)]);
                    if (metric < best_bc) {
                        best_bc = metric;
                        lhat = m;
                    }
                }
                const int own = sym[static_cast<std::size_t>(k) * static_cast<std::size_t>(nsym) +
                                    static_cast<std::size_t>(slot)];
                const std::int32_t code = table.get(k, own, lhat + 1);
                if (code < 0) {
                    // BC decoding landed on a label absent from this slice;
                    // every bit of the n-1 recovered messages is charged.
                    out.bit_errors += static_cast<std::uint64_t>(lambda) *
                                      static_cast<std::uint64_t>(n - 1);
                    continue;
                }
                std::int32_t rest = code;
                for (int pos = n - 2; pos >= 0; --pos) {
                    const int user = pos < k ? pos : pos + 1;
                    const int decoded = rest % M;
                    rest /= M;
                    const int truth =
                        sym[static_cast<std::size_t>(user) * static_cast<std::size_t>(nsym) +
                            static_cast<std::size_t>(slot)];
                    out.bit_errors += static_cast<std::uint64_t>(
                        std::popcount(static_cast<std::uint32_t>(decoded ^ truth)));
                }
            }
        }
    };

    const std::uint64_t total_frames = static_cast<std::uint64_t>(points) * frames;
    std::vector<std::vector<FrameCounters>> per_worker(
        static_cast<std::size_t>(workers), std::vector<FrameCounters>(points));

    auto worker_body = [&](int w) {
        for (std::uint64_t g = static_cast<std::uint64_t>(w); g < total_frames;
             g += static_cast<std::uint64_t>(workers)) {
            const std::size_t point = static_cast<std::size_t>(g / frames);
            run_frame(point, g % frames, per_worker[static_cast<std::size_t>(w)][point]);
        }
    };

    if (workers == 1) {
        worker_body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_body, w);
        for (auto& th : pool) th.join();
    }

    std::vector<BerRecord> records;
    records.reserve(points);
    for (std::size_t point = 0; point < points; ++point) {
        BerRecord rec;
        rec.snr_db = cfg.snr_db_list[point];
        rec.scheme = cfg.scheme;
        for (int w = 0; w < workers; ++w)
            rec.bit_errors += per_worker[static_cast<std::size_t>(w)][point].bit_errors;
        rec.bits_total = frames * static_cast<std::uint64_t>(cfg.frame_bits) *
                         static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1);
        rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits_total);
        records.push_back(rec);
    }
    return records;
}

}  // namespace pnc
