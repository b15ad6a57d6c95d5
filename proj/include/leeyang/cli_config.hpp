#pragma once

// Parsed run configuration shared by the CLI and the drivers. A config
// canonicalizes to JSON and round-trips to an identical canonical form; every
// output file embeds it for re-runnability.

#include <cmath>
#include <string>
#include <vector>

#include "leeyang/errors.hpp"
#include "leeyang/highreal.hpp"
#include "leeyang/lattice.hpp"
#include "leeyang/serialize.hpp"

namespace leeyang {

struct RunConfig {
    std::string command;          // zeros | cumulants | verify | sweep | extrapolate
    int d = 1;
    std::string domain_kind;      // box | rect | chain | (empty for extrapolate)
    int box_n = -1;               // box radius; for sweep, the largest n
    std::vector<int> rect_sides;
    int chain_len = 0;
    std::vector<double> betas;
    int precision = kDefaultPrecision;
    double theta_tol = 0;         // 0 = derive 10^-(P-10)
    int k_max = 8;
    std::string out_path;         // empty = stdout
    std::string format = "json";  // json | csv
    int jobs = 0;                 // 0 = hardware concurrency
    std::string input_csv;        // extrapolate input

    double effective_theta_tol() const {
        return theta_tol > 0 ? theta_tol : std::pow(10.0, -(precision - 10));
    }

    void validate(const Caps& caps = {}) const {
        if (command != "zeros" && command != "cumulants" && command != "verify" &&
            command != "sweep" && command != "extrapolate")
            throw ConfigError("unknown command: " + command);
        if (precision < 1 || precision > kMaxPrecision)
            throw ConfigError("precision out of range [1, " + std::to_string(kMaxPrecision) + "]");
        if (k_max < 1 || k_max > caps.max_kmax) throw ConfigError("kmax out of range");
        if (theta_tol < 0) throw ConfigError("theta-tol must be positive");
        if (theta_tol > 0 &&
            (theta_tol < std::pow(10.0, -(precision - 8)) || theta_tol > 1e-12))
            throw ConfigError("theta-tol must lie in [10^-(P-8), 1e-12]");
        if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
        if (jobs < 0) throw ConfigError("jobs must be >= 0");
        for (double b : betas)
            if (!(b >= 0)) throw ConfigError("beta must be >= 0");

        if (command == "extrapolate") {
            if (input_csv.empty()) throw ConfigError("extrapolate requires an input CSV path");
            if (betas.size() != 1) throw ConfigError("extrapolate requires exactly one --beta");
            if (format != "json") throw ConfigError("extrapolate emits json");
            return;
        }
        if (command == "sweep") {
            if (domain_kind != "box" || box_n < 1)
                throw ConfigError("sweep requires --box <n_max> (largest box radius)");
            // an empty beta grid is legal and yields a header-only CSV
            if (k_max < 6) throw ConfigError("sweep requires --kmax >= 6 for the radius proxy");
            if (format != "csv") throw ConfigError("sweep emits csv");
            return;
        }
        if (format != "json") throw ConfigError(command + " emits json");
        // single-domain commands
        int specs = 0;
        if (domain_kind == "box") specs = box_n >= 0 ? 1 : 0;
        if (domain_kind == "rect") specs = rect_sides.empty() ? 0 : 1;
        if (domain_kind == "chain") specs = chain_len >= 1 ? 1 : 0;
        if (specs != 1)
            throw ConfigError(command + " requires exactly one of --box/--rect/--chain");
        if (betas.size() != 1) throw ConfigError(command + " requires exactly one beta");
    }

    SpinDomain build_domain(const Caps& caps = {}) const {
        if (domain_kind == "box") return make_box(d, box_n, caps);
        if (domain_kind == "rect")
            return make_rectangle(static_cast<int>(rect_sides.size()), rect_sides, caps);
        if (domain_kind == "chain") return make_rectangle(1, {chain_len}, caps);
        throw ConfigError("no domain specified");
    }

    // Canonical form carries only fields that influence the computed values;
    // scheduling (--jobs) and output routing (--out) are normalized away so a
    // re-run from the embedded config reproduces the file byte for byte.
    json to_json() const {
        json j{{"command", command},     {"d", d},
               {"precision", precision}, {"theta_tol", effective_theta_tol()},
               {"k_max", k_max},         {"format", format}};
        if (!domain_kind.empty()) j["domain_kind"] = domain_kind;
        if (domain_kind == "box") j["box_n"] = box_n;
        if (domain_kind == "rect") j["rect_sides"] = rect_sides;
        if (domain_kind == "chain") j["chain_len"] = chain_len;
        j["betas"] = betas;
        if (!input_csv.empty()) j["input_csv"] = input_csv;
        return j;
    }

    static RunConfig from_json(const json& j) {
        RunConfig c;
        c.command = j.at("command").get<std::string>();
        c.d = j.at("d").get<int>();
        c.precision = j.at("precision").get<int>();
        c.theta_tol = j.at("theta_tol").get<double>();
        c.k_max = j.at("k_max").get<int>();
        c.format = j.at("format").get<std::string>();
        if (j.contains("domain_kind")) c.domain_kind = j["domain_kind"].get<std::string>();
        if (j.contains("box_n")) c.box_n = j["box_n"].get<int>();
        if (j.contains("rect_sides")) c.rect_sides = j["rect_sides"].get<std::vector<int>>();
        if (j.contains("chain_len")) c.chain_len = j["chain_len"].get<int>();
        c.betas = j.at("betas").get<std::vector<double>>();
        if (j.contains("input_csv")) c.input_csv = j["input_csv"].get<std::string>();
        return c;
    }

    std::string canonical_json() const { return to_json().dump(); }
};

// "start:stop:step" inclusive, or a single value.
inline std::vector<double> parse_beta_grid(const std::string& spec) {
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) return {std::stod(spec)};
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("beta grid must be start:stop:step");
    const double start = std::stod(spec.substr(0, c1));
    const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (step <= 0) throw ConfigError("beta grid step must be > 0");
    if (stop < start) return {};
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> betas;
    for (int i = 0; i < count; ++i) betas.push_back(start + i * step);
    return betas;
}

// "AxBxC" -> side lengths.
inline std::vector<int> parse_rect_sides(const std::string& spec) {
    std::vector<int> sides;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const auto next = spec.find('x', pos);
        const std::string tok =
            spec.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (tok.empty()) throw ConfigError("bad --rect spec: " + spec);
        sides.push_back(std::stoi(tok));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (sides.empty()) throw ConfigError("bad --rect spec: " + spec);
    return sides;
}

}  // namespace leeyang
