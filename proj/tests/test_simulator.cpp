#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "pnc/simulator.hpp"

using namespace pnc;

namespace {

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("rng streams are reproducible and frame-decorrelated") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(frame_stream_seed(1, 0) != frame_stream_seed(1, 1));
    CHECK(frame_stream_seed(1, 0) != frame_stream_seed(2, 0));
    CHECK(frame_stream_seed(7, 123) == frame_stream_seed(7, 123));
}

TEST_CASE("rng normals have the expected first moments") {
    Rng rng(404);
    const int N = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < N / 2; ++i) {
        const auto [g1, g2] = rng.normal_pair();
        sum += g1 + g2;
        sum2 += g1 * g1 + g2 * g2;
    }
    CHECK(std::abs(sum / N) < 0.01);
    CHECK(sum2 / N == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("sample_rician is unit power at K = 20 dB") {
    Rng rng(1);
    const int N = 100000;
    double power = 0;
    for (int i = 0; i < N; ++i) power += std::norm(sample_rician(20.0, rng));
    power /= N;
    CHECK(power >= 0.99);
    CHECK(power <= 1.01);
}

TEST_CASE("sample_rician limits: pure LOS and Rayleigh") {
    Rng rng(2);
    for (int i = 0; i < 100; ++i) CHECK(std::abs(sample_rician(300.0, rng) - Complex(1, 0)) < 1e-10);

    // K -> 0: |H|^2 is Exp(1). One-sample Kolmogorov-Smirnov sanity check.
    const int N = 4000;
    std::vector<double> samples(N);
    for (auto& s : samples) s = std::norm(sample_rician(-300.0, rng));
    std::sort(samples.begin(), samples.end());
    double mean = 0, dstat = 0;
    for (int i = 0; i < N; ++i) {
        mean += samples[static_cast<std::size_t>(i)];
        const double cdf = 1.0 - std::exp(-samples[static_cast<std::size_t>(i)]);
        dstat = std::max(dstat, std::abs(cdf - static_cast<double>(i + 1) / N));
        dstat = std::max(dstat, std::abs(cdf - static_cast<double>(i) / N));
    }
    CHECK(mean / N == doctest::Approx(1.0).epsilon(0.05));
    CHECK(dstat < 1.95 / std::sqrt(static_cast<double>(N)));  // ~alpha 0.001
}

TEST_CASE("ma_phase: exact superposition at sigma = 0") {
    const PskConstellation c = make_constellation(2);
    Rng rng(3);
    const FadeState H{Complex(1, 0), Complex(1, 0)};
    const std::vector<int> x{0, 1};  // symbols (1, -1)
    CHECK(std::abs(ma_phase(x, H, c, 0.0, rng)) < 1e-12);

    const FadeState H2{Complex(0.5, 0.25), Complex(-1, 2)};
    const std::vector<int> x2{1, 1};
    CHECK(std::abs(ma_phase(x2, H2, c, 0.0, rng) - (-H2[0] - H2[1])) < 1e-12);
}

TEST_CASE("ma_phase noise variance tracks sigma^2") {
    const PskConstellation c = make_constellation(4);
    Rng rng(4);
    const FadeState H{Complex(1, 0), Complex(0, 1)};
    const std::vector<int> x{2, 3};
    const Complex clean = H[0] * c.points[2] + H[1] * c.points[3];
    const double sigma2 = 0.49;
    const int N = 100000;
    double var = 0;
    for (int i = 0; i < N; ++i)
        var += std::norm(ma_phase(x, H, c, std::sqrt(sigma2), rng) - clean);
    var /= N;
    CHECK(var == doctest::Approx(sigma2).epsilon(0.02));
}

TEST_CASE("ml_joint_decode recovers noiseless transmissions") {
    Rng rng(5);
    const FadeState H{Complex(1, 0.2), Complex(-0.4, 1.1), Complex(0.9, -0.6)};
    const PskConstellation c = make_constellation(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> x(3);
        for (auto& s : x) s = static_cast<int>(rng.below(4));
        const Complex y = ma_phase(x, H, c, 0.0, rng);
        CHECK(ml_joint_decode(y, H, 3, 4) == x);
    }
}

TEST_CASE("ml_joint_decode breaks singular ties lexicographically") {
    // H = (1,1) superposes (1,-1) and (-1,1) onto 0; the smaller index tuple
    // (0,1) must win.
    const FadeState H{Complex(1, 0), Complex(1, 0)};
    CHECK(ml_joint_decode(Complex(0, 0), H, 2, 2) == std::vector<int>{0, 1});
}

TEST_CASE("ml_joint_decode agrees with a reversed-order oracle") {
    Rng rng(6);
    const PskConstellation c = make_constellation(4);
    for (int trial = 0; trial < 1000; ++trial) {
        FadeState H(2);
        for (auto& h : H) {
            const auto [gr, gi] = rng.normal_pair();
            h = Complex(gr, gi);
        }
        const Complex y(rng.normal_pair().first, rng.normal_pair().second);
        const auto got = ml_joint_decode(y, H, 2, 4);
        // reversed iteration order, ties resolved toward the smaller tuple
        std::vector<int> best;
        double best_metric = std::numeric_limits<double>::infinity();
        for (int a = 3; a >= 0; --a) {
            for (int b = 3; b >= 0; --b) {
                const double m = std::norm(y - H[0] * c.points[static_cast<std::size_t>(a)] -
                                           H[1] * c.points[static_cast<std::size_t>(b)]);
                if (m < best_metric || (m == best_metric && std::vector<int>{a, b} < best)) {
                    best_metric = m;
                    best = {a, b};
                }
            }
        }
        CHECK(got == best);
    }
}

TEST_CASE("bc_round is the identity at sigma = 0") {
    Rng rng(8);
    for (int t : {2, 4, 7, 16}) {
        for (int label = 1; label <= t; ++label)
            CHECK(bc_round(label, t, Complex(0.8, -0.3), 0.0, rng) == label);
    }
    CHECK_THROWS_AS(bc_round(0, 4, Complex(1, 0), 0.0, rng), InvalidParameter);
    CHECK_THROWS_AS(bc_round(5, 4, Complex(1, 0), 0.0, rng), InvalidParameter);
}

TEST_CASE("bc_round BPSK error rate matches Q(sqrt(2 SNR))") {
    Rng rng(9);
    for (double snr_db : {0.0, 4.0}) {
        const double sigma = std::sqrt(sigma_squared_for_snr_db(snr_db));
        const double p = q_func(std::sqrt(2.0 * std::pow(10.0, snr_db / 10.0)));
        const int N = 200000;
        int errors = 0;
        for (int i = 0; i < N; ++i) {
            const int label = 1 + static_cast<int>(rng.below(2));
            if (bc_round(label, 2, Complex(1, 0), sigma, rng) != label) ++errors;
        }
        const double se = std::sqrt(p * (1 - p) / N);
        CHECK(std::abs(static_cast<double>(errors) / N - p) < 4 * se);
    }
}

TEST_CASE("bc_round QPSK symbol error rate sits in the union-bound window") {
    Rng rng(10);
    const double snr_db = 7.0;
    const double sigma = std::sqrt(sigma_squared_for_snr_db(snr_db));
    const double q = q_func(std::sqrt(std::pow(10.0, snr_db / 10.0)));
    const int N = 200000;
    int errors = 0;
    for (int i = 0; i < N; ++i) {
        const int label = 1 + static_cast<int>(rng.below(4));
        if (bc_round(label, 4, Complex(1, 0), sigma, rng) != label) ++errors;
    }
    const double ser = static_cast<double>(errors) / N;
    CHECK(ser > 0.8 * q);    // below the single-neighbour bound is impossible
    CHECK(ser < 2.2 * q);    // union bound with slack
}

TEST_CASE("snr mapping: doubling the noise variance costs 3 dB") {
    const double shift = 10.0 * std::log10(2.0);
    for (double s : {0.0, 20.0}) {
        CHECK(sigma_squared_for_snr_db(s - shift) ==
              doctest::Approx(2.0 * sigma_squared_for_snr_db(s)).epsilon(1e-12));
    }
}

TEST_CASE("run_simulation validates its configuration") {
    SimConfig cfg;
    cfg.n = 2;
    cfg.M = 4;
    cfg.snr_db_list = {10.0};
    cfg.frames_per_point = 1;
    cfg.frame_bits = 255;  // not divisible by lambda = 2
    CHECK_THROWS_AS(run_simulation(cfg), InvalidParameter);
    cfg.frame_bits = 256;
    cfg.frames_per_point = 0;
    CHECK_THROWS_AS(run_simulation(cfg), InvalidParameter);
    cfg.frames_per_point = 1;
    cfg.snr_db_list.clear();
    CHECK_THROWS_AS(run_simulation(cfg), InvalidParameter);
    cfg.snr_db_list = {10.0};
    CHECK_THROWS_AS(run_simulation(cfg, 0), InvalidParameter);
}

TEST_CASE("run_simulation is deterministic and worker-count invariant") {
    SimConfig cfg;
    cfg.n = 2;
    cfg.M = 2;
    cfg.scheme = Scheme::Adaptive;
    cfg.snr_db_list = {0.0, 12.0};
    cfg.frames_per_point = 60;
    cfg.frame_bits = 64;
    cfg.seed = 99;
    const auto a = run_simulation(cfg, 1);
    const auto b = run_simulation(cfg, 1);
    const auto c = run_simulation(cfg, 3);
    const auto d = run_simulation(cfg, 8);
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].bit_errors == b[i].bit_errors);
        CHECK(a[i].bit_errors == c[i].bit_errors);
        CHECK(a[i].bit_errors == d[i].bit_errors);
        CHECK(a[i].bits_total == d[i].bits_total);
        CHECK(a[i].bits_total == 60ull * 64 * 2 * 1);
    }
}

TEST_CASE("run_simulation: near-noiseless sanity bound") {
    SimConfig cfg;
    cfg.n = 2;
    cfg.M = 2;
    cfg.scheme = Scheme::Adaptive;
    cfg.snr_db_list = {60.0};
    cfg.frames_per_point = 200;
    cfg.frame_bits = 256;
    cfg.seed = 5;
    const auto records = run_simulation(cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].ber < 1e-3);
}

TEST_CASE("run_simulation BER is non-increasing in SNR") {
    for (Scheme scheme : {Scheme::Adaptive, Scheme::NonAdaptive}) {
        SimConfig cfg;
        cfg.n = 2;
        cfg.M = 2;
        cfg.scheme = scheme;
        cfg.snr_db_list = {0.0, 6.0, 12.0, 18.0, 24.0};
        cfg.frames_per_point = 10000;
        cfg.frame_bits = 64;
        cfg.seed = 17;
        const auto records = run_simulation(cfg);
        int inversions = 0;
        for (std::size_t i = 1; i < records.size(); ++i) {
            if (records[i].ber <= records[i - 1].ber) continue;
            const auto se = [](const BerRecord& r) {
                return std::sqrt(std::max(r.ber, 1e-12) * (1 - r.ber) /
                                 static_cast<double>(r.bits_total));
            };
            const double combined = std::sqrt(se(records[i]) * se(records[i]) +
                                              se(records[i - 1]) * se(records[i - 1]));
            if (records[i].ber - records[i - 1].ber > 2 * combined) ++inversions;
        }
        CHECK(inversions == 0);
    }
}

TEST_CASE("adaptive runs reuse maps that co-cluster the ambiguous tuples") {
    // At a fade state inside a removable subspace the selected map must keep
    // the superposing tuple pair in one cluster.
    const auto candidates = build_removable_candidates(2, 4);
    Rng rng(33);
    for (int trial = 0; trial < 6; ++trial) {
        const auto& key = candidates[static_cast<std::size_t>(trial) * 2 % candidates.size()].key;
        const auto vals = key.representative().values();
        FadeState H{-vals[1], vals[0]};
        const auto& chosen = select_map(H, candidates);
        const auto report = d_min_fade(H, 2, 4);
        REQUIRE(report.argmin_pair.has_value());
        const auto& [a, b] = *report.argmin_pair;
        CHECK(chosen.map.label_at(a) == chosen.map.label_at(b));
    }
}
