#pragma once

#include <compare>
#include <complex>
#include <utility>
#include <vector>

#include "pnc/errors.hpp"

namespace pnc {

using Complex = std::complex<double>;

// Symmetric M-PSK: point[k] = exp(j*2*pi*k/M), natural-binary bit labels
// (symbol index k <-> the lambda-bit word k).
struct PskConstellation {
    int M = 0;
    int bits_per_symbol = 0;
    std::vector<Complex> points;
};

PskConstellation make_constellation(int M);

// One element of the difference constellation. A nonzero difference of two
// M-PSK points is a chord 2*sin(pi*l/M) * exp(j*p*pi/M); storing the two
// integers keeps deduplication and subspace bookkeeping exact, floats only
// appear when a complex value is actually needed.
struct DeltaValue {
    int l = 0;  // 0 marks the zero difference, otherwise chord class in [1, M/2]
    int p = 0;  // phase in units of pi/M, reduced to [0, 2M)

    bool is_zero() const { return l == 0; }
    auto operator<=>(const DeltaValue&) const = default;
};

// point[a] - point[b] as an exact DeltaValue.
DeltaValue delta_of(int a, int b, int M);

// Complex value of a DeltaValue.
Complex delta_value(const DeltaValue& d, int M);

// Nearest exact element of the difference constellation; throws if z is not
// within tol of any element.
DeltaValue delta_from_complex(Complex z, int M, double tol = 1e-9);

// The full difference constellation, deduplicated and sorted; size M^2/2 + 1.
std::vector<DeltaValue> difference_set(int M);

// All ordered index pairs (a, b) with point[a] - point[b] == d. The zero
// difference yields the M pairs (a, a); a nonzero one yields 1 or 2 pairs.
std::vector<std::pair<int, int>> pairs_realizing(const DeltaValue& d, int M);

}  // namespace pnc
