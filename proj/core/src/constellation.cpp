#include "pnc/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace pnc {

std::uint64_t guard_limit(std::uint64_t default_limit) {
    static const std::uint64_t env_value = [] {
        const char* s = std::getenv("PNC_GUARD_LIMIT");
        if (s == nullptr) return std::uint64_t{0};
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end == s || (end != nullptr && *end != '\0')) return std::uint64_t{0};
        return static_cast<std::uint64_t>(v);
    }();
    return env_value > 0 ? env_value : default_limit;
}

static bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

PskConstellation make_constellation(int M) {
    if (M < 2 || !is_power_of_two(M))
        throw InvalidParameter("M must be a power of two, M >= 2; got " + std::to_string(M));
    PskConstellation c;
    c.M = M;
    c.bits_per_symbol = 0;
    for (int m = M; m > 1; m >>= 1) ++c.bits_per_symbol;
    c.points.resize(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / M;
        c.points[static_cast<std::size_t>(k)] = Complex(std::cos(phi), std::sin(phi));
    }
    return c;
}

static void check_symbol_index(int a, int M) {
    if (a < 0 || a >= M)
        throw InvalidParameter("symbol index out of range: " + std::to_string(a));
}

DeltaValue delta_of(int a, int b, int M) {
    if (M < 2 || !is_power_of_two(M))
        throw InvalidParameter("invalid M: " + std::to_string(M));
    check_symbol_index(a, M);
    check_symbol_index(b, M);
    if (a == b) return DeltaValue{};
    // point[a] - point[b] = 2 sin(pi (a-b)/M) * j * exp(j pi (a+b)/M); folding
    // j into the phase and flipping the sign of sin when a < b gives a chord
    // radius index d in [1, M-1] and a phase step on the pi/M grid.
    const int d = ((a - b) % M + M) % M;
    int p = a + b + M / 2 + (a < b ? M : 0);
    p = ((p % (2 * M)) + 2 * M) % (2 * M);
    const int l = std::min(d, M - d);
    return DeltaValue{l, p};
}

Complex delta_value(const DeltaValue& d, int M) {
    if (d.is_zero()) return Complex(0.0, 0.0);
    const double r = 2.0 * std::sin(std::numbers::pi * d.l / M);
    const double phi = std::numbers::pi * d.p / M;
    return Complex(r * std::cos(phi), r * std::sin(phi));
}

static bool valid_delta(const DeltaValue& d, int M) {
    if (d.is_zero()) return d.p == 0;
    if (d.l < 1 || d.l > M / 2) return false;
    if (d.p < 0 || d.p >= 2 * M) return false;
    // Chords of class l only occur at phases whose parity matches l + M/2.
    return ((d.p ^ (d.l + M / 2)) & 1) == 0;
}

DeltaValue delta_from_complex(Complex z, int M, double tol) {
    if (M < 2 || !is_power_of_two(M))
        throw InvalidParameter("invalid M: " + std::to_string(M));
    if (std::abs(z) <= tol) return DeltaValue{};
    int best_l = 0;
    double best_err = std::abs(z);
    for (int l = 1; l <= M / 2; ++l) {
        const double err = std::abs(std::abs(z) - 2.0 * std::sin(std::numbers::pi * l / M));
        if (err < best_err) {
            best_err = err;
            best_l = l;
        }
    }
    double phi = std::arg(z) * M / std::numbers::pi;
    int p = static_cast<int>(std::lround(phi));
    p = ((p % (2 * M)) + 2 * M) % (2 * M);
    const DeltaValue d{best_l, p};
    if (!valid_delta(d, M) || std::abs(delta_value(d, M) - z) > tol * std::max(1.0, std::abs(z)))
        throw InvalidParameter("value is not an element of the difference constellation");
    return d;
}

std::vector<DeltaValue> difference_set(int M) {
    const PskConstellation c = make_constellation(M);
    std::vector<DeltaValue> out;
    out.reserve(static_cast<std::size_t>(M) * M);
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) out.push_back(delta_of(a, b, M));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::pair<int, int>> pairs_realizing(const DeltaValue& d, int M) {
    if (M < 2 || !is_power_of_two(M))
        throw InvalidParameter("invalid M: " + std::to_string(M));
    if (!valid_delta(d, M))
        throw InvalidParameter("delta is not an element of the difference constellation");
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b)
            if (delta_of(a, b, M) == d) out.emplace_back(a, b);
    return out;
}

}  // namespace pnc
