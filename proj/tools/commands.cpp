#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "pnc/distance.hpp"
#include "pnc/hypercube.hpp"

namespace pnc::cli {

namespace {

std::string iso8601_utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::string& artifact_path, const std::string& subcommand,
                    const std::vector<std::pair<std::string, std::string>>& entries,
                    const std::string& started) {
    std::ofstream f(artifact_path + ".manifest", std::ios::trunc);
    f << "tool = pnc " << kVersion << "\n";
    f << "subcommand = " << subcommand << "\n";
    f << "artifact = " << artifact_path << "\n";
    for (const auto& [k, v] : entries) f << k << " = " << v << "\n";
    f << "started = " << started << "\n";
    f << "finished = " << iso8601_utc_now() << "\n";
}

std::string trimmed(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidParameter("not a number: '" + s + "'");
    }
    if (used != s.size()) throw InvalidParameter("not a number: '" + s + "'");
    return v;
}

Complex parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw InvalidParameter("empty complex literal");
    if (s.back() != 'j' && s.back() != 'J') return Complex(parse_double(s), 0.0);

    s.pop_back();  // drop the j
    // find the sign splitting real and imaginary parts (not leading, not an
    // exponent sign)
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        if (s.empty() || s == "+") return Complex(0.0, 1.0);
        if (s == "-") return Complex(0.0, -1.0);
        return Complex(0.0, parse_double(s));
    }
    const std::string re = s.substr(0, split);
    std::string im = s.substr(split);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return Complex(parse_double(re), parse_double(im));
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<SubspaceKey> removable_keys(int n, int M) {
    std::vector<SubspaceKey> keys;
    for (const auto& key : enumerate_subspaces(n, M))
        if (is_removable(key)) keys.push_back(key);
    return keys;
}

std::string format_cell(const std::vector<int>& cell) {
    std::string s = "(";
    for (std::size_t i = 0; i < cell.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(cell[i]);
    }
    return s + ")";
}

std::string format_complex(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g%+.6gj", z.real(), z.imag());
    return buf;
}

}  // namespace

std::vector<Complex> parse_complex_list(const std::string& text) {
    std::vector<Complex> out;
    for (const std::string& item : split_csv(text)) out.push_back(parse_complex(trimmed(item)));
    return out;
}

std::string csv_header() { return "snr_db,scheme,n,M,frames,bits_total,bit_errors,ber,seed\n"; }

std::string csv_row(const BerRecord& rec, int n, int M, int frames, std::uint64_t seed) {
    char buf[192];
    std::snprintf(buf, sizeof buf, "%g,%s,%d,%d,%d,%" PRIu64 ",%" PRIu64 ",%.10e,%" PRIu64 "\n",
                  rec.snr_db, scheme_name(rec.scheme), n, M, frames, rec.bits_total,
                  rec.bit_errors, rec.ber, seed);
    return buf;
}

int cmd_enumerate(const EnumerateOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const std::uint64_t total = count_formula(opt.n, opt.M);
        const RemovableCounts counts = removable_count_formula(opt.n, opt.M);
        out << "n=" << opt.n << " M=" << opt.M << "\n";
        out << "total_formula=" << total << "\n";
        out << "removable_formula=" << counts.removable << "\n";
        out << "non_removable_formula=" << counts.non_removable << "\n";
        if (opt.brute) {
            const auto keys = enumerate_subspaces(opt.n, opt.M);
            std::size_t removable = 0;
            for (const auto& key : keys)
                if (is_removable(key)) ++removable;
            out << "total_brute=" << keys.size() << "\n";
            out << "removable_brute=" << removable << "\n";
            out << "non_removable_brute=" << keys.size() - removable << "\n";
            if (keys.size() != total || removable != counts.removable) {
                err << "enumeration disagrees with the closed-form counts\n";
                return 1;
            }
            out << "brute_matches_formula=yes\n";
        }
        return 0;
    } catch (const GuardExceeded& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_build_map(const BuildMapOptions& opt, std::ostream& out, std::ostream& err) {
    const std::string started = iso8601_utc_now();
    try {
        if (opt.key_index.has_value() == opt.vector_literal.has_value()) {
            err << "error: give exactly one of --key-index or --vector\n";
            return 2;
        }
        SubspaceKey key;
        if (opt.key_index) {
            const auto keys = removable_keys(opt.n, opt.M);
            if (*opt.key_index >= keys.size()) {
                err << "error: key index " << *opt.key_index << " out of range (0.."
                    << keys.size() - 1 << ")\n";
                return 2;
            }
            key = keys[*opt.key_index];
        } else {
            const auto values = parse_complex_list(*opt.vector_literal);
            if (static_cast<int>(values.size()) != opt.n) {
                err << "error: vector has " << values.size() << " components, expected " << opt.n
                    << "\n";
                return 2;
            }
            DifferenceVector v;
            v.M = opt.M;
            for (const Complex& z : values) v.components.push_back(delta_from_complex(z, opt.M));
            key = canonicalize(v);
            if (!is_removable(key)) {
                err << "error: subspace is non-removable (a zero difference component pins a "
                       "user's symbol, so its constraints contradict the exclusive law)\n";
                return 3;
            }
        }

        const ConstraintPartition constraints = removal_constraints(key);
        const ClusterMap map = fill_greedy(constraints);
        std::ofstream f(opt.out_path, std::ios::trunc);
        if (!f) {
            err << "error: cannot open " << opt.out_path << " for writing\n";
            return 2;
        }
        f << serialize_map(map);
        f.close();

        std::vector<std::pair<std::string, std::string>> manifest;
        manifest.emplace_back("n", std::to_string(opt.n));
        manifest.emplace_back("M", std::to_string(opt.M));
        if (opt.key_index) manifest.emplace_back("key_index", std::to_string(*opt.key_index));
        if (opt.vector_literal) manifest.emplace_back("vector", *opt.vector_literal);
        manifest.emplace_back("t", std::to_string(map.t));
        manifest.emplace_back("constraint_groups", std::to_string(constraints.groups.size()));
        write_manifest(opt.out_path, "build-map", manifest, started);

        out << "wrote " << opt.out_path << "\n";
        out << "t=" << map.t << "\n";
        out << "constraint_groups=" << constraints.groups.size() << "\n";
        return 0;
    } catch (const NonRemovableConstraint& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const GuardExceeded& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        std::ifstream f(opt.map_path);
        if (!f) {
            err << "error: cannot open " << opt.map_path << "\n";
            return 2;
        }
        std::stringstream buffer;
        buffer << f.rdbuf();
        const ClusterMap map = parse_map(buffer.str());
        const auto violation = exclusive_law_check(map);
        if (!violation) {
            out << "PASS: exclusive law holds (n=" << map.n << " M=" << map.M << " t=" << map.t
                << ")\n";
            return 0;
        }
        out << "FAIL: label " << violation->label << " repeats in slice x_"
            << violation->dim + 1 << "=" << violation->value << " at cells "
            << format_cell(map.cell_of(violation->cell_a)) << " and "
            << format_cell(map.cell_of(violation->cell_b)) << "\n";
        return 1;
    } catch (const MapParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_mindist(const MindistOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const auto gains = parse_complex_list(opt.fade_literal);
        if (static_cast<int>(gains.size()) != opt.n) {
            err << "error: fade state has " << gains.size() << " gains, expected " << opt.n << "\n";
            return 2;
        }
        const FadeState H(gains.begin(), gains.end());
        const DistanceReport rep = d_min_fade(H, opt.n, opt.M);
        out << "d_min=" << rep.value << "\n";
        if (rep.argmin_pair)
            out << "argmin_pair=" << format_cell(rep.argmin_pair->first) << " "
                << format_cell(rep.argmin_pair->second) << "\n";
        out << "singular=" << (is_singular(H, opt.n, opt.M, opt.tol) ? "yes" : "no") << "\n";

        if (opt.map_path) {
            std::ifstream f(*opt.map_path);
            if (!f) {
                err << "error: cannot open " << *opt.map_path << "\n";
                return 2;
            }
            std::stringstream buffer;
            buffer << f.rdbuf();
            const ClusterMap map = parse_map(buffer.str());
            if (map.n != opt.n || map.M != opt.M) {
                err << "error: map is n=" << map.n << " M=" << map.M << ", query is n=" << opt.n
                    << " M=" << opt.M << "\n";
                return 2;
            }
            const DistanceReport mc = min_cluster_distance(map, H);
            out << "min_cluster_distance=" << mc.value << "\n";
            if (mc.argmin_pair)
                out << "cluster_argmin_pair=" << format_cell(mc.argmin_pair->first) << " "
                    << format_cell(mc.argmin_pair->second) << "\n";
        }
        return 0;
    } catch (const MapParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const GuardExceeded& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

namespace {

struct ResolvedSim {
    SimConfig base;
    std::vector<Scheme> schemes;
};

void apply_preset(const std::string& name, SimConfig& cfg, std::string& scheme) {
    const std::map<std::string, std::pair<int, int>> presets = {
        {"three-way-4psk", {3, 4}},
        {"four-way-2psk", {4, 2}},
        {"five-way-2psk", {5, 2}},
    };
    const auto it = presets.find(name);
    if (it == presets.end())
        throw InvalidParameter("unknown preset '" + name +
                               "' (have: three-way-4psk, four-way-2psk, five-way-2psk)");
    cfg.n = it->second.first;
    cfg.M = it->second.second;
    cfg.snr_db_list.clear();
    for (int s = 0; s <= 45; s += 5) cfg.snr_db_list.push_back(s);
    cfg.rician_K_db = 20.0;
    cfg.frame_bits = 256;
    cfg.frames_per_point = 10000;
    scheme = "both";
}

void apply_config_file(const std::string& path, SimConfig& cfg, std::string& scheme) {
    std::ifstream f(path);
    if (!f) throw InvalidParameter("cannot open config file " + path);
    std::string line;
    std::vector<std::string> unknown;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config line " + std::to_string(line_no) +
                                   " is not 'key = value'");
        const std::string key = trimmed(t.substr(0, eq));
        const std::string value = trimmed(t.substr(eq + 1));
        if (key == "n")
            cfg.n = static_cast<int>(parse_double(value));
        else if (key == "M")
            cfg.M = static_cast<int>(parse_double(value));
        else if (key == "scheme")
            scheme = value;
        else if (key == "snr_db_list") {
            cfg.snr_db_list.clear();
            for (const auto& item : split_csv(value))
                cfg.snr_db_list.push_back(parse_double(trimmed(item)));
        } else if (key == "rician_K_db")
            cfg.rician_K_db = parse_double(value);
        else if (key == "frame_bits")
            cfg.frame_bits = static_cast<int>(parse_double(value));
        else if (key == "frames_per_point")
            cfg.frames_per_point = static_cast<int>(parse_double(value));
        else if (key == "seed")
            cfg.seed = static_cast<std::uint64_t>(parse_double(value));
        else if (key == "max_candidates")
            cfg.max_candidates = static_cast<std::size_t>(parse_double(value));
        else
            unknown.push_back(key);
    }
    if (!unknown.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw InvalidParameter(msg);
    }
}

std::vector<Scheme> schemes_from(const std::string& scheme) {
    if (scheme == "adaptive") return {Scheme::Adaptive};
    if (scheme == "nonadaptive") return {Scheme::NonAdaptive};
    if (scheme == "both") return {Scheme::Adaptive, Scheme::NonAdaptive};
    throw InvalidParameter("scheme must be adaptive, nonadaptive or both; got '" + scheme + "'");
}

}  // namespace

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    const std::string started = iso8601_utc_now();
    try {
        SimConfig cfg;
        cfg.snr_db_list = {0, 5, 10, 15, 20, 25, 30, 35, 40, 45};
        std::string scheme = "both";
        if (opt.preset) apply_preset(*opt.preset, cfg, scheme);
        if (opt.config_path) apply_config_file(*opt.config_path, cfg, scheme);
        if (opt.n) cfg.n = *opt.n;
        if (opt.M) cfg.M = *opt.M;
        if (opt.frame_bits) cfg.frame_bits = *opt.frame_bits;
        if (opt.frames_per_point) cfg.frames_per_point = *opt.frames_per_point;
        if (opt.rician_K_db) cfg.rician_K_db = *opt.rician_K_db;
        if (opt.seed) cfg.seed = *opt.seed;
        if (opt.max_candidates) cfg.max_candidates = *opt.max_candidates;
        if (opt.snr_list) {
            cfg.snr_db_list.clear();
            for (const auto& item : split_csv(*opt.snr_list))
                cfg.snr_db_list.push_back(parse_double(trimmed(item)));
        }
        if (opt.scheme) scheme = *opt.scheme;
        const std::vector<Scheme> schemes = schemes_from(scheme);

        const bool wants_adaptive =
            std::find(schemes.begin(), schemes.end(), Scheme::Adaptive) != schemes.end();
        if (wants_adaptive && cfg.max_candidates == static_cast<std::size_t>(-1)) {
            const RemovableCounts counts = removable_count_formula(cfg.n, cfg.M);
            if (counts.removable > 2000) {
                err << "error: adaptive n=" << cfg.n << " M=" << cfg.M << " has "
                    << counts.removable
                    << " removable subspaces; this configuration is experimental, set "
                       "--max-candidates to truncate the candidate set\n";
                return 2;
            }
        }

        std::vector<std::string> rows;
        for (Scheme s : schemes) {
            SimConfig run_cfg = cfg;
            run_cfg.scheme = s;
            const auto records = run_simulation(run_cfg, opt.workers);
            for (const auto& rec : records)
                rows.push_back(csv_row(rec, cfg.n, cfg.M, cfg.frames_per_point, cfg.seed));
        }

        namespace fs = std::filesystem;
        const bool fresh = !fs::exists(opt.out_path) || fs::file_size(opt.out_path) == 0;
        std::ofstream f(opt.out_path, std::ios::app);
        if (!f) {
            err << "error: cannot open " << opt.out_path << " for writing\n";
            return 2;
        }
        if (fresh) f << csv_header();
        for (const auto& row : rows) f << row;
        f.close();

        std::vector<std::pair<std::string, std::string>> manifest;
        manifest.emplace_back("n", std::to_string(cfg.n));
        manifest.emplace_back("M", std::to_string(cfg.M));
        manifest.emplace_back("scheme", scheme);
        {
            std::string snrs;
            for (std::size_t i = 0; i < cfg.snr_db_list.size(); ++i) {
                if (i) snrs += ",";
                char buf[32];
                std::snprintf(buf, sizeof buf, "%g", cfg.snr_db_list[i]);
                snrs += buf;
            }
            manifest.emplace_back("snr_db_list", snrs);
        }
        manifest.emplace_back("rician_K_db", std::to_string(cfg.rician_K_db));
        manifest.emplace_back("frame_bits", std::to_string(cfg.frame_bits));
        manifest.emplace_back("frames_per_point", std::to_string(cfg.frames_per_point));
        manifest.emplace_back("seed", std::to_string(cfg.seed));
        if (cfg.max_candidates != static_cast<std::size_t>(-1))
            manifest.emplace_back("max_candidates", std::to_string(cfg.max_candidates));
        manifest.emplace_back("workers", std::to_string(opt.workers));
        write_manifest(opt.out_path, "simulate", manifest, started);

        out << "wrote " << rows.size() << " rows to " << opt.out_path << "\n";
        return 0;
    } catch (const GuardExceeded& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace pnc::cli
