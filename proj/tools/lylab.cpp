// lylab: exact Lee-Yang laboratory for finite ferromagnetic Ising models.
//
// Subcommands: zeros | cumulants | verify | sweep | extrapolate.
// Exit codes: 0 success, 1 check failure, 2 invalid config, 3 engine cap
// exceeded. Outputs are deterministic: identical configs produce byte-equal
// files, whatever the job count.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "leeyang/cli_config.hpp"
#include "leeyang/driver.hpp"
#include "leeyang/version.hpp"

namespace {

struct CommonFlags {
    int d = 1;
    int box_n = -1;
    std::string rect_spec;
    int chain_len = 0;
    double beta = -1;
    std::string beta_grid;
    int precision = leeyang::kDefaultPrecision;
    double theta_tol = 0;
    int k_max = 8;
    std::string out;
    std::string format;  // default depends on the command
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_domain) {
    cmd->add_option("--d", f.d, "lattice dimension");
    if (with_domain) {
        cmd->add_option("--box", f.box_n, "box radius n: domain [-n,n]^d (sweep: largest n)");
        cmd->add_option("--rect", f.rect_spec, "rectangle sides, e.g. 7x7 or 2x3x4");
        cmd->add_option("--chain", f.chain_len, "chain length (d=1)");
    }
    cmd->add_option("--beta", f.beta, "inverse temperature");
    cmd->add_option("--beta-grid", f.beta_grid, "beta grid start:stop:step (inclusive)");
    cmd->add_option("--precision", f.precision, "decimal precision P");
    cmd->add_option("--theta-tol", f.theta_tol, "zero refinement tolerance");
    cmd->add_option("--kmax", f.k_max, "highest cumulant order");
    cmd->add_option("--out", f.out, "output path (default: stdout)");
    cmd->add_option("--format", f.format, "output format: json | csv");
    cmd->add_option("--jobs", f.jobs, "worker threads (default: hardware)");
}

leeyang::RunConfig to_config(const std::string& command, const CommonFlags& f,
                             const std::string& input_csv = "") {
    leeyang::RunConfig cfg;
    cfg.command = command;
    cfg.d = f.d;
    if (f.box_n >= 0) cfg.domain_kind = "box", cfg.box_n = f.box_n;
    if (!f.rect_spec.empty()) {
        cfg.domain_kind = "rect";
        cfg.rect_sides = leeyang::parse_rect_sides(f.rect_spec);
        cfg.d = static_cast<int>(cfg.rect_sides.size());
    }
    if (f.chain_len > 0) {
        cfg.domain_kind = "chain";
        cfg.chain_len = f.chain_len;
        cfg.d = 1;
    }
    if (!f.beta_grid.empty())
        cfg.betas = leeyang::parse_beta_grid(f.beta_grid);
    else if (f.beta >= 0)
        cfg.betas = {f.beta};
    cfg.precision = f.precision;
    cfg.theta_tol = f.theta_tol;
    cfg.k_max = f.k_max;
    cfg.out_path = f.out;
    cfg.format = f.format.empty() ? (command == "sweep" ? "csv" : "json") : f.format;
    cfg.jobs = f.jobs;
    cfg.input_csv = input_csv;
    return cfg;
}

int emit(const leeyang::DriverResult& res, const std::string& out_path) {
    if (!res.message.empty()) std::cerr << res.message << "\n";
    if (res.exit_code == 2 || res.exit_code == 3) return res.exit_code;
    if (out_path.empty()) {
        std::cout << res.content;
    } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) {
            std::cerr << "cannot write " << out_path << "\n";
            return 2;
        }
        os << res.content;
    }
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Lee-Yang zero laboratory for finite Ising models"};
    app.set_version_flag("--version", leeyang::kEngineVersion);
    app.require_subcommand(1);
    // key=value file with a [subcommand] section; explicit flags override it
    app.set_config("--config", "", "config file (keys under a [subcommand] section)");

    CommonFlags fz, fc, fv, fs, fe;
    std::string extrapolate_input;

    auto* zeros = app.add_subcommand("zeros", "isolate all Lee-Yang zeros of one domain");
    add_common(zeros, fz, true);
    auto* cum = app.add_subcommand("cumulants", "magnetization cumulants of one domain");
    add_common(cum, fc, true);
    auto* verify = app.add_subcommand("verify", "run the identity suite on one domain");
    add_common(verify, fv, true);
    auto* sweep = app.add_subcommand("sweep", "box sweep over a beta grid, CSV out");
    add_common(sweep, fs, true);
    auto* extra = app.add_subcommand("extrapolate", "radius extrapolation from a sweep CSV");
    extra->add_option("input", extrapolate_input, "sweep CSV path")->required();
    add_common(extra, fe, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        leeyang::RunConfig cfg;
        if (zeros->parsed()) cfg = to_config("zeros", fz);
        if (cum->parsed()) cfg = to_config("cumulants", fc);
        if (verify->parsed()) cfg = to_config("verify", fv);
        if (sweep->parsed()) cfg = to_config("sweep", fs);
        if (extra->parsed()) cfg = to_config("extrapolate", fe, extrapolate_input);
        const auto res = leeyang::run_command(cfg);
        return emit(res, cfg.out_path);
    } catch (const leeyang::CapExceeded& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const leeyang::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
