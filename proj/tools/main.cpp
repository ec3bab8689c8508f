#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

using namespace pnc::cli;

int main(int argc, char** argv) {
    CLI::App app{"pnc: adaptive physical-layer network coding toolkit for n-way relaying"};
    app.require_subcommand(1);

    EnumerateOptions en;
    auto* enumerate = app.add_subcommand(
        "enumerate", "Count singular fade subspaces and their removability split");
    enumerate->add_option("--n", en.n, "number of user nodes")->required();
    enumerate->add_option("--M", en.M, "PSK order (power of two)")->required();
    enumerate->add_flag("--brute", en.brute, "cross-check formulas by exhaustive enumeration");

    BuildMapOptions bm;
    std::size_t key_index = 0;
    std::string vector_literal;
    auto* build =
        app.add_subcommand("build-map", "Construct the Latin hyper-cube removing one subspace");
    build->add_option("--n", bm.n, "number of user nodes")->required();
    build->add_option("--M", bm.M, "PSK order (power of two)")->required();
    auto* key_opt = build->add_option("--key-index", key_index,
                                      "removable-subspace index in canonical order");
    auto* vec_opt = build->add_option(
        "--vector", vector_literal, "difference vector, e.g. \"-1-1j,-2j,-2j,1-1j,1+1j\"");
    build->add_option("--out", bm.out_path, "output map file")->required();

    VerifyOptions vf;
    auto* verify = app.add_subcommand("verify", "Check the exclusive law on a serialized map");
    verify->add_option("map", vf.map_path, "map file to check")->required();

    MindistOptions md;
    std::string map_path;
    auto* mindist = app.add_subcommand(
        "mindist", "Distances of the effective constellation at a fade state");
    mindist->add_option("--n", md.n, "number of user nodes")->required();
    mindist->add_option("--M", md.M, "PSK order (power of two)")->required();
    mindist->add_option("--H", md.fade_literal, "fade state, e.g. \"1+0j,0.5+0.1j\"")->required();
    auto* md_map = mindist->add_option("--map", map_path, "optional map file for cluster distances");
    mindist->add_option("--tol", md.tol, "singularity tolerance (default 1e-9)");

    SimulateOptions sim;
    std::string config_path, preset, scheme, snr_list;
    int sim_n = 0, sim_m = 0, frame_bits = 0, frames = 0;
    double k_db = 0;
    std::uint64_t seed = 0;
    std::size_t max_candidates = 0;
    auto* simulate = app.add_subcommand("simulate", "Two-phase Monte-Carlo BER sweep to CSV");
    auto* cfg_opt = simulate->add_option("--config", config_path, "flat key = value config file");
    auto* preset_opt = simulate->add_option(
        "--preset", preset, "three-way-4psk | four-way-2psk | five-way-2psk");
    simulate->add_option("--out", sim.out_path, "CSV output path")->required();
    auto* scheme_opt =
        simulate->add_option("--scheme", scheme, "adaptive | nonadaptive | both (default both)");
    auto* n_opt = simulate->add_option("--n", sim_n, "number of user nodes");
    auto* m_opt = simulate->add_option("--M", sim_m, "PSK order (power of two)");
    auto* snr_opt = simulate->add_option("--snr", snr_list, "comma-separated SNR points in dB");
    auto* fb_opt = simulate->add_option("--frame-bits", frame_bits, "bits per frame (default 256)");
    auto* fr_opt = simulate->add_option("--frames", frames, "frames per SNR point");
    auto* k_opt = simulate->add_option("--K-db", k_db, "Rician K-factor in dB (default 20)");
    auto* seed_opt = simulate->add_option("--seed", seed, "RNG seed");
    auto* cand_opt = simulate->add_option("--max-candidates", max_candidates,
                                          "truncate the adaptive candidate set");
    simulate->add_option("--workers", sim.workers, "worker threads (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (enumerate->parsed()) return cmd_enumerate(en, std::cout, std::cerr);
    if (build->parsed()) {
        if (*key_opt) bm.key_index = key_index;
        if (*vec_opt) bm.vector_literal = vector_literal;
        return cmd_build_map(bm, std::cout, std::cerr);
    }
    if (verify->parsed()) return cmd_verify(vf, std::cout, std::cerr);
    if (mindist->parsed()) {
        if (*md_map) md.map_path = map_path;
        return cmd_mindist(md, std::cout, std::cerr);
    }
    if (simulate->parsed()) {
        if (*cfg_opt) sim.config_path = config_path;
        if (*preset_opt) sim.preset = preset;
        if (*scheme_opt) sim.scheme = scheme;
        if (*n_opt) sim.n = sim_n;
        if (*m_opt) sim.M = sim_m;
        if (*snr_opt) sim.snr_list = snr_list;
        if (*fb_opt) sim.frame_bits = frame_bits;
        if (*fr_opt) sim.frames_per_point = frames;
        if (*k_opt) sim.rician_K_db = k_db;
        if (*seed_opt) sim.seed = seed;
        if (*cand_opt) sim.max_candidates = max_candidates;
        return cmd_simulate(sim, std::cout, std::cerr);
    }
    return 2;
}
