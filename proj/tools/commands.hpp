#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pnc/simulator.hpp"

// Command implementations behind the pnc binary. Each returns the process
// exit code: 0 success, 1 verification failure, 2 input error,
// 3 non-removable constraint.
namespace pnc::cli {

struct EnumerateOptions {
    int n = 0;
    int M = 0;
    bool brute = false;
};

struct BuildMapOptions {
    int n = 0;
    int M = 0;
    std::optional<std::size_t> key_index;       // into the removable keys, canonical order
    std::optional<std::string> vector_literal;  // e.g. "-1-1j,-2j,-2j,1-1j,1+1j"
    std::string out_path;
};

struct VerifyOptions {
    std::string map_path;
};

struct MindistOptions {
    int n = 0;
    int M = 0;
    std::string fade_literal;  // comma-separated complex gains
    std::optional<std::string> map_path;
    double tol = 1e-9;
};

struct SimulateOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> preset;
    std::string out_path;
    std::optional<std::string> scheme;  // adaptive | nonadaptive | both
    std::optional<int> n, M, frame_bits, frames_per_point;
    std::optional<double> rician_K_db;
    std::optional<std::string> snr_list;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_candidates;
    int workers = 1;
};

int cmd_enumerate(const EnumerateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_build_map(const BuildMapOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);
int cmd_mindist(const MindistOptions& opt, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);

// "1+2j, -3j, 2" -> complex values; throws InvalidParameter on bad syntax.
std::vector<Complex> parse_complex_list(const std::string& text);

// CSV with the fixed column set; one row per (snr_db, scheme).
std::string csv_header();
std::string csv_row(const BerRecord& rec, int n, int M, int frames, std::uint64_t seed);

}  // namespace pnc::cli
