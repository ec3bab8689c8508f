// Acceptance harness: one line of output per criterion, nonzero exit if any
// fails. Expected to run in minutes on a single desktop core.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "pnc/distance.hpp"
#include "pnc/hypercube.hpp"
#include "pnc/simulator.hpp"

using namespace pnc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Harness {
    int failures = 0;

    void run(int index, const std::string& name, const std::function<void()>& body) {
        const auto start = Clock::now();
        try {
            body();
            std::printf("[PASS] criterion %d: %s (%.1f ms)\n", index, name.c_str(),
                        ms_since(start));
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] criterion %d: %s: %s\n", index, name.c_str(), e.what());
        }
        std::fflush(stdout);
    }
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

DifferenceVector vector_from_complex(const std::vector<Complex>& values, int M) {
    DifferenceVector v;
    v.M = M;
    for (const Complex& z : values) v.components.push_back(delta_from_complex(z, M));
    return v;
}

FadeState random_state_in_subspace(const SubspaceKey& key, Rng& rng) {
    const auto vals = key.representative().values();
    const int n = key.n;
    const int first = key.support.front();
    FadeState w(static_cast<std::size_t>(n), Complex(0, 0));
    for (int k = 0; k < n; ++k) {
        if (k == first) continue;
        const auto [gr, gi] = rng.normal_pair();
        const Complex coeff(gr, gi);
        w[static_cast<std::size_t>(k)] += coeff;
        w[static_cast<std::size_t>(first)] -=
            coeff * vals[static_cast<std::size_t>(k)] / vals[static_cast<std::size_t>(first)];
    }
    double norm = 0;
    for (const Complex& x : w) norm += std::norm(x);
    norm = std::sqrt(norm);
    require(norm > 0, "degenerate subspace sample");
    for (Complex& x : w) x /= norm;
    return w;
}

std::vector<SubspaceKey> removable_keys(int n, int M) {
    std::vector<SubspaceKey> out;
    for (const auto& key : enumerate_subspaces(n, M))
        if (is_removable(key)) out.push_back(key);
    return out;
}

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double binomial_se(double p, double bits) { return std::sqrt(p * (1.0 - p) / bits); }

}  // namespace

int main() {
    Harness h;

    h.run(1, "closed-form subspace count for five-way 4-PSK", [] {
        const auto start = Clock::now();
        const std::uint64_t total = count_formula(5, 4);
        const double elapsed = ms_since(start);
        require(total == 13981, "count_formula(5,4) = " + std::to_string(total) + ", want 13981");
        require(elapsed < 1.0,
                "formula evaluation took " + std::to_string(elapsed) + " ms, budget 1 ms");
    });

    h.run(2, "closed-form removability split", [] {
        const RemovableCounts counts = removable_count_formula(5, 4);
        require(counts.removable == 7936,
                "removable = " + std::to_string(counts.removable) + ", want 7936");
        require(count_formula(5, 4) - counts.removable == 6045, "subtraction disagrees");
        // direct k = 1..4 summation, written out independently
        std::uint64_t direct = 0;
        const std::uint64_t binom[6] = {1, 5, 10, 10, 5, 1};
        for (int k = 1; k <= 4; ++k) {
            std::uint64_t pow2 = 1, pow4 = 1;
            for (int i = 0; i < k; ++i) pow2 *= 2;
            for (int i = 0; i < k - 1; ++i) pow4 *= 4;
            direct += binom[k] * (pow2 - 2 + 1) * pow4;
        }
        require(direct == 6045, "direct sum = " + std::to_string(direct) + ", want 6045");
        require(counts.non_removable == direct, "formula non-removable disagrees with direct sum");
    });

    h.run(3, "formula-enumeration equivalence over seven configurations", [] {
        const auto start = Clock::now();
        const std::vector<std::pair<int, int>> configs = {{2, 2}, {2, 4}, {3, 2}, {3, 4},
                                                          {4, 2}, {2, 8}, {5, 2}};
        for (auto [n, M] : configs) {
            const std::size_t enumerated = enumerate_subspaces(n, M).size();
            const std::uint64_t formula = count_formula(n, M);
            require(enumerated == formula,
                    "(" + std::to_string(n) + "," + std::to_string(M) + "): enumerated " +
                        std::to_string(enumerated) + " != formula " + std::to_string(formula));
        }
        require(ms_since(start) < 60'000.0, "enumeration sweep exceeded 60 s");
    });

    h.run(4, "five-way 4-PSK worked example constraints and map", [] {
        const auto start = Clock::now();
        const DifferenceVector v = vector_from_complex(
            {{-1, -1}, {0, -2}, {0, -2}, {1, -1}, {1, 1}}, 4);
        const SubspaceKey key = canonicalize(v);
        require(is_removable(key), "worked-example key should be removable");

        const ConstraintPartition part = removal_constraints(key);
        const ClusterMap probe{5, 4, 1, std::vector<std::int32_t>(1024, 1)};
        auto flat = [&](std::vector<int> cell) { return probe.flat_index(cell); };
        auto group_of = [&](std::size_t cell) -> int {
            for (std::size_t g = 0; g < part.groups.size(); ++g)
                for (std::size_t c : part.groups[g])
                    if (c == cell) return static_cast<int>(g);
            return -1;
        };
        // The eight constrained tuple pairs: every combination of the two
        // realizations of the first, fourth and fifth components.
        const std::vector<std::pair<std::vector<int>, std::vector<int>>> expected = {
            {{2, 3, 3, 0, 0}, {1, 1, 1, 1, 3}}, {{2, 3, 3, 3, 0}, {1, 1, 1, 2, 3}},
            {{2, 3, 3, 0, 1}, {1, 1, 1, 1, 2}}, {{2, 3, 3, 3, 1}, {1, 1, 1, 2, 2}},
            {{3, 3, 3, 0, 0}, {0, 1, 1, 1, 3}}, {{3, 3, 3, 3, 0}, {0, 1, 1, 2, 3}},
            {{3, 3, 3, 0, 1}, {0, 1, 1, 1, 2}}, {{3, 3, 3, 3, 1}, {0, 1, 1, 2, 2}},
        };
        for (const auto& [a, b] : expected) {
            const int ga = group_of(flat(a));
            const int gb = group_of(flat(b));
            require(ga >= 0 && ga == gb, "tuple pair not co-clustered");
        }
        // a near-miss pair must stay separated
        require(group_of(flat({2, 3, 3, 0, 0})) != group_of(flat({1, 1, 1, 3, 1})),
                "unrelated pair was co-clustered");

        const ClusterMap map = fill_greedy(part);
        require(exclusive_law_holds(map), "worked-example map violates the exclusive law");
        require(map.t >= 256 && map.t <= 1024, "label count t out of [256, 1024]");
        for (const auto& [a, b] : expected)
            require(map.label_at(a) == map.label_at(b), "constraint pair not monochromatic");
        require(ms_since(start) < 300'000.0, "worked example exceeded 5 min");
    });

    h.run(5, "removal property over removable subspaces", [] {
        Rng rng(501);
        auto check_key = [&](const SubspaceKey& key) {
            const ClusterMap map = build_map_for_subspace(key);
            const FadeState H = random_state_in_subspace(key, rng);
            const double dmin = d_min_fade(H, key.n, key.M).value;
            require(dmin < 1e-9, "singular state has d_min " + std::to_string(dmin));
            const double cluster = min_cluster_distance(map, H).value;
            require(cluster > 1e-6, "built map leaves cluster distance " + std::to_string(cluster));
        };
        for (int M : {2, 4})
            for (const auto& key : removable_keys(2, M)) check_key(key);
        const auto keys34 = removable_keys(3, 4);
        for (int pick = 0; pick < 10; ++pick)
            check_key(keys34[rng.below(static_cast<std::uint32_t>(keys34.size()))]);
    });

    h.run(6, "exclusive-law property suite, 200 randomized fills", [] {
        Rng rng(601);
        const std::vector<std::pair<int, int>> configs = {{2, 2}, {2, 4}, {3, 2},
                                                          {3, 4}, {4, 2}, {4, 4}};
        std::vector<std::vector<SubspaceKey>> pools;
        for (auto [n, M] : configs) pools.push_back(removable_keys(n, M));
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t which = trial % configs.size();
            const auto& pool = pools[which];
            const SubspaceKey& key = pool[rng.below(static_cast<std::uint32_t>(pool.size()))];
            const ConstraintPartition part = removal_constraints(key);
            const ClusterMap map = fill_greedy(part);
            require(exclusive_law_holds(map), "fill_greedy output violates the exclusive law");
            for (const auto& group : part.groups) {
                const std::int32_t lab = map.labels[group.front()];
                for (std::size_t c : group)
                    require(map.labels[c] == lab, "constraint group not monochromatic");
            }
            if (key.n <= 3) {
                for (std::size_t c = 0; c < map.cell_count(); ++c) {
                    const auto cell = map.cell_of(c);
                    for (int k = 0; k < key.n; ++k) {
                        const auto rec =
                            decode_others(map, k, cell[static_cast<std::size_t>(k)], map.labels[c]);
                        require(rec.has_value(), "decode_others missed an existing label");
                        std::vector<int> expect;
                        for (int i = 0; i < key.n; ++i)
                            if (i != k) expect.push_back(cell[static_cast<std::size_t>(i)]);
                        require(*rec == expect, "decode_others round trip failed");
                    }
                }
            }
        }
    });

    h.run(7, "adaptive vs non-adaptive BER crossover, three-way 4-PSK", [] {
        const auto start = Clock::now();
        SimConfig cfg;
        cfg.n = 3;
        cfg.M = 4;
        cfg.snr_db_list = {0.0, 45.0};
        cfg.rician_K_db = 20.0;
        cfg.frame_bits = 256;
        cfg.frames_per_point = 10000;
        cfg.seed = 2026;

        cfg.scheme = Scheme::Adaptive;
        const auto adaptive = run_simulation(cfg, 1);
        cfg.scheme = Scheme::NonAdaptive;
        const auto fixed = run_simulation(cfg, 1);

        const BerRecord& a_low = adaptive[0];
        const BerRecord& a_high = adaptive[1];
        const BerRecord& f_low = fixed[0];
        const BerRecord& f_high = fixed[1];
        std::printf("  snr=0dB  adaptive ber=%.4e  nonadaptive ber=%.4e\n", a_low.ber, f_low.ber);
        std::printf("  snr=45dB adaptive ber=%.4e  nonadaptive ber=%.4e\n", a_high.ber, f_high.ber);

        require(a_high.ber < f_high.ber, "adaptive BER not below non-adaptive at 45 dB");
        const double se = std::sqrt(
            binomial_se(a_high.ber, static_cast<double>(a_high.bits_total)) *
                binomial_se(a_high.ber, static_cast<double>(a_high.bits_total)) +
            binomial_se(f_high.ber, static_cast<double>(f_high.bits_total)) *
                binomial_se(f_high.ber, static_cast<double>(f_high.bits_total)));
        require(f_high.ber - a_high.ber > 2.0 * se, "45 dB gap under 2 combined standard errors");

        const double lo = std::min(a_low.ber, f_low.ber);
        const double hi = std::max(a_low.ber, f_low.ber);
        require(hi < 2.0 * lo, "low-SNR BERs differ by a factor of 2 or more");
        require(ms_since(start) < 1'800'000.0, "simulation exceeded 30 min");
    });

    h.run(8, "BC-phase BPSK link matches Q(sqrt(2 SNR))", [] {
        Rng rng(801);
        for (double snr_db : {0.0, 4.0, 8.0}) {
            const double snr = std::pow(10.0, snr_db / 10.0);
            const double sigma = std::sqrt(sigma_squared_for_snr_db(snr_db));
            const double p = q_func(std::sqrt(2.0 * snr));
            const long bits = 1'000'000;
            long errors = 0;
            for (long i = 0; i < bits; ++i) {
                const int label = 1 + static_cast<int>(rng.below(2));
                if (bc_round(label, 2, Complex(1, 0), sigma, rng) != label) ++errors;
            }
            const double observed = static_cast<double>(errors) / static_cast<double>(bits);
            const double se = binomial_se(p, static_cast<double>(bits));
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "snr %.0f dB: observed %.6e vs theory %.6e exceeds 3 se (%.2e)", snr_db,
                          observed, p, se);
            require(std::abs(observed - p) <= 3.0 * se, msg);
        }
    });

    h.run(9, "byte-identical CSV across 1-worker and 8-worker runs", [] {
        const fs::path dir = fs::temp_directory_path() / "pnc_acceptance";
        fs::create_directories(dir);
        auto run_with = [&](int workers, const fs::path& path) {
            fs::remove(path);
            pnc::cli::SimulateOptions opt;
            opt.n = 3;
            opt.M = 4;
            opt.snr_list = "0,20,45";
            opt.frames_per_point = 200;
            opt.seed = 42;
            opt.scheme = "both";
            opt.workers = workers;
            opt.out_path = path.string();
            std::ostringstream out, err;
            const int code = pnc::cli::cmd_simulate(opt, out, err);
            require(code == 0, "cmd_simulate failed: " + err.str());
            std::ifstream f(path);
            std::stringstream ss;
            ss << f.rdbuf();
            return ss.str();
        };
        const std::string one = run_with(1, dir / "w1.csv");
        const std::string eight = run_with(8, dir / "w8.csv");
        require(!one.empty(), "empty CSV output");
        require(one == eight, "CSV bytes differ between 1 and 8 workers");
    });

    std::printf("%d of 9 criteria passed\n", 9 - h.failures);
    return h.failures == 0 ? 0 : 1;
}
