#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pnc {

inline constexpr const char* kVersion = "0.1.0";

struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GuardExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A constraint group forces two cells that agree in `dimension` (0-based)
// into one cluster, which no Latin hyper-cube can satisfy.
struct NonRemovableConstraint : std::runtime_error {
    int dimension;
    NonRemovableConstraint(const std::string& msg, int dim)
        : std::runtime_error(msg), dimension(dim) {}
};

struct MapParseError : std::runtime_error {
    int line;
    MapParseError(const std::string& msg, int line_no)
        : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"),
          line(line_no) {}
};

// Brute-force size guard. PNC_GUARD_LIMIT, when set to a positive integer,
// overrides every default limit.
std::uint64_t guard_limit(std::uint64_t default_limit);

}  // namespace pnc
