#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pnc/distance.hpp"

namespace pnc {

enum class Scheme { Adaptive, NonAdaptive };

const char* scheme_name(Scheme s);

struct SimConfig {
    int n = 3;
    int M = 4;
    Scheme scheme = Scheme::Adaptive;
    std::vector<double> snr_db_list;
    double rician_K_db = 20.0;
    int frame_bits = 256;
    int frames_per_point = 1000;
    std::uint64_t seed = 1;
    std::size_t max_candidates = static_cast<std::size_t>(-1);
};

struct BerRecord {
    double snr_db = 0.0;
    Scheme scheme = Scheme::Adaptive;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0.0;
};

// xoshiro256++ with splitmix64 seeding and Box-Muller normals; the whole
// simulation draws from this so results are bit-reproducible across
// platforms and worker counts.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next_u64();
    double uniform01();                       // [0, 1)
    std::pair<double, double> normal_pair();  // two independent N(0, 1)
    std::uint32_t below(std::uint32_t bound);
    Complex cnormal();  // circularly symmetric, E|Z|^2 = 1

  private:
    std::uint64_t s_[4];
};

// Stream seed for one frame, decorrelated from neighbouring frames.
std::uint64_t frame_stream_seed(std::uint64_t seed, std::uint64_t frame_index);

// Unit-power Rician gain: sqrt(K/(K+1)) + sqrt(1/(2(K+1))) (g_r + j g_i).
Complex sample_rician(double K_db, Rng& rng);

// MA-phase superposition sum_i H_i x_i plus complex Gaussian noise of total
// variance sigma^2.
Complex ma_phase(std::span<const int> symbols, const FadeState& H, const PskConstellation& c,
                 double sigma, Rng& rng);

// Joint ML estimate: exhaustive argmin over the M^n transmit tuples,
// lexicographic tie-break. Guarded at M^n <= 1e7 by default.
std::vector<int> ml_joint_decode(Complex y, const FadeState& H, int n, int M);

// One BC-phase use: the relay sends point label-1 of a t-ary PSK set, the
// user ML-decodes it under known gain h_prime. Labels are 1-based.
int bc_round(int label, int t, Complex h_prime, double sigma, Rng& rng);

double sigma_squared_for_snr_db(double snr_db);

// Two-phase Monte-Carlo sweep; one record per SNR point. Identical records
// for any worker count.
std::vector<BerRecord> run_simulation(const SimConfig& cfg, int workers = 1);

}  // namespace pnc
