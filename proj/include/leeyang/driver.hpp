#pragma once

// Command implementations behind the CLI subcommands. Each returns the output
// file content as a string plus an exit status, so the same code path serves
// the binary, the tests and the acceptance suite. Sweep cells execute on a
// worker pool; assembly is order-deterministic, so the produced bytes do not
// depend on the job count.

#include <atomic>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "leeyang/cli_config.hpp"
#include "leeyang/cumulants.hpp"
#include "leeyang/identities.hpp"
#include "leeyang/serialize.hpp"
#include "leeyang/thermo.hpp"
#include "leeyang/version.hpp"
#include "leeyang/zeros.hpp"

namespace leeyang {

struct DriverResult {
    std::string content;   // output file payload
    int exit_code = 0;     // 0 ok, 1 check failure, 2 bad config, 3 cap exceeded
    std::string message;   // diagnostic for the error stream
};

namespace detail {

template <class Real>
MagnetizationPolynomial<Real> build_polynomial(const SpinDomain& domain, double beta,
                                               int precision, const Caps& caps) {
    if (domain.is_rectangle()) return transfer_partition<Real>(domain, beta, precision, caps);
    return enumerate_partition<Real>(domain, beta, precision, caps);
}

inline json output_header(const RunConfig& cfg) {
    return json{{"engine_version", kEngineVersion}, {"config", cfg.to_json()}};
}

inline std::string dump_output(json j) {
    return j.dump(2) + "\n";
}

}  // namespace detail

template <class Real>
DriverResult run_zeros_t(const RunConfig& cfg, const Caps& caps) {
    const SpinDomain domain = cfg.build_domain(caps);
    const double beta = cfg.betas.at(0);
    const auto poly = detail::build_polynomial<Real>(domain, beta, cfg.precision, caps);
    const auto zs = find_zeros(poly, Real(cfg.effective_theta_tol()));
    json out = detail::output_header(cfg);
    out.update(zeroset_to_json(zs));
    return {detail::dump_output(out), 0, ""};
}

template <class Real>
DriverResult run_cumulants_t(const RunConfig& cfg, const Caps& caps) {
    const SpinDomain domain = cfg.build_domain(caps);
    const double beta = cfg.betas.at(0);
    const auto poly = detail::build_polynomial<Real>(domain, beta, cfg.precision, caps);
    const auto cum = cumulants(poly, cfg.k_max, caps);
    json out = detail::output_header(cfg);
    out.update(cumulants_to_json(cum));
    return {detail::dump_output(out), 0, ""};
}

// The full finite-volume verification suite on one domain: zero-count
// certificate and endpoint signs, the cumulant-zero identity and bound for
// k = 1..4, Taylor consistency, first-zero monotonicity along the nested
// family below the domain (boxes and chains), and the Ursell checks when the
// domain is small enough for tuple enumeration.
template <class Real>
DriverResult run_verify_t(const RunConfig& cfg, const Caps& caps) {
    const SpinDomain domain = cfg.build_domain(caps);
    const double beta = cfg.betas.at(0);
    const Real theta_tol(cfg.effective_theta_tol());
    std::vector<CheckReport> checks;

    const auto poly = detail::build_polynomial<Real>(domain, beta, cfg.precision, caps);
    const auto zs = find_zeros(poly, theta_tol);

    {
        CheckReport r;
        r.name = "zero_count_certificate";
        r.domain_label = describe_domain(domain);
        r.beta = beta;
        r.precision = cfg.precision;
        r.lhs = std::to_string(zs.total_multiplicity());
        r.rhs = std::to_string(domain.size());
        r.rel_gap = "0";
        r.tolerance = "exact";
        r.pass = zs.total_multiplicity() == domain.size();
        checks.push_back(std::move(r));
    }
    {
        const auto q = imaginary_axis_restriction(poly);
        const Real q0 = q.evaluate(Real(0));
        const Real qpi = q.evaluate(pi_const<Real>());
        CheckReport r;
        r.name = "endpoint_signs";
        r.domain_label = describe_domain(domain);
        r.beta = beta;
        r.precision = cfg.precision;
        r.lhs = to_decimal_string(q0, 20);
        r.rhs = to_decimal_string(qpi, 20);
        r.tolerance = "sign pattern";
        r.rel_gap = "0";
        r.pass = q0 > 0 && ((domain.size() % 2 == 0) ? qpi > 0 : qpi < 0);
        checks.push_back(std::move(r));
    }

    const int kpairs = (std::min)(4, cfg.k_max / 2);
    for (auto& r : check_cumulant_zero_identity(poly, zs, kpairs, Real(kDefaultCheckRelTol)))
        checks.push_back(std::move(r));
    for (auto& r : check_cumulant_bound(poly, zs, kpairs)) checks.push_back(std::move(r));

    if (cfg.k_max >= 8) {
        const Real a1 = first_zero(zs);
        const std::vector<Complex<Real>> samples{{Real("0.8") * a1, Real(0)},
                                                 {Real(0), Real("0.8") * a1}};
        for (auto& r : check_taylor_consistency(poly, zs, cfg.k_max - cfg.k_max % 2, samples))
            checks.push_back(std::move(r));
    }

    // Nested family below the configured domain, when one exists.
    std::vector<SpinDomain> nested;
    if (cfg.domain_kind == "box" && cfg.box_n >= 1) {
        for (int n = 0; n <= cfg.box_n; ++n) nested.push_back(make_box(cfg.d, n, caps));
    } else if (cfg.domain_kind == "chain" && cfg.chain_len >= 2) {
        for (int len = 1; len <= cfg.chain_len; ++len)
            nested.push_back(make_rectangle(1, {len}, caps));
    }
    if (nested.size() >= 2)
        checks.push_back(
            check_first_zero_monotonicity(nested, beta, cfg.precision, theta_tol, caps));

    if (domain.size() <= 9) {
        const auto sc = ursell_sum_check<Real>(domain, beta, 2, cfg.precision, caps);
        CheckReport r;
        r.name = "ursell_sum_k2";
        r.domain_label = describe_domain(domain);
        r.beta = beta;
        r.precision = cfg.precision;
        r.lhs = to_decimal_string(sc.lhs, 20);
        r.rhs = to_decimal_string(sc.rhs, 20);
        r.rel_gap = to_decimal_string(sc.rel_gap, 20);
        r.tolerance = to_decimal_string(pow10<Real>(-(cfg.precision - 10)), 8);
        r.pass = sc.rel_gap <= pow10<Real>(-(cfg.precision - 10));
        checks.push_back(std::move(r));
    }
    if (domain.size() <= 6) {
        const auto sc = ursell_sum_check<Real>(domain, beta, 4, cfg.precision, caps);
        CheckReport r;
        r.name = "ursell_sum_k4";
        r.domain_label = describe_domain(domain);
        r.beta = beta;
        r.precision = cfg.precision;
        r.lhs = to_decimal_string(sc.lhs, 20);
        r.rhs = to_decimal_string(sc.rhs, 20);
        r.rel_gap = to_decimal_string(sc.rel_gap, 20);
        r.tolerance = to_decimal_string(pow10<Real>(-(cfg.precision - 10)), 8);
        r.pass = sc.rel_gap <= pow10<Real>(-(cfg.precision - 10));
        checks.push_back(std::move(r));
    }
    if (nested.size() >= 2 && domain.size() <= 9)
        checks.push_back(
            check_ursell_signs_monotonicity<Real>(nested, beta, cfg.precision, caps));

    bool all = true;
    json arr = json::array();
    for (const auto& c : checks) {
        all = all && c.pass;
        arr.push_back(check_report_to_json(c));
    }
    json out = detail::output_header(cfg);
    out["checks"] = arr;
    out["all_pass"] = all;
    return {detail::dump_output(out), all ? 0 : 1, all ? "" : "one or more checks failed"};
}

namespace detail {

template <class Real>
struct SweepCell {
    bool ok = false;
    std::string error;
    int num_sites = 0;
    Real alpha1{};
    std::vector<Real> u_per_site;  // index k, 1..k_max
};

template <class Real>
SweepCell<Real> compute_sweep_cell(int d, double beta, int n, int precision, int k_max,
                                   double theta_tol, const Caps& caps) {
    SweepCell<Real> cell;
    try {
        const auto poly = transfer_partition<Real>(make_box(d, n, caps), beta, precision, caps);
        const auto zs = find_zeros(poly, Real(theta_tol));
        const auto cum = cumulants(poly, k_max, caps);
        cell.num_sites = poly.num_sites();
        cell.alpha1 = first_zero(zs);
        cell.u_per_site.assign(static_cast<std::size_t>(k_max) + 1, Real(0));
        for (int k = 1; k <= k_max; ++k)
            cell.u_per_site[static_cast<std::size_t>(k)] = cum[k] / poly.num_sites();
        cell.ok = true;
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    return cell;
}

}  // namespace detail

// CSV columns: d, beta, n, num_sites, alpha1, u2_per_site, u4_per_site,
// b2_est, radius_proxy, error. One row per (beta, n), betas in grid order,
// n ascending. b2_est and radius_proxy at row n use the data of rows 1..n of
// the same beta.
template <class Real>
DriverResult run_sweep_t(const RunConfig& cfg, const Caps& caps) {
    const int n_max = cfg.box_n;
    const int k_max = cfg.k_max;
    struct Task {
        double beta;
        int n;
    };
    std::vector<Task> tasks;
    for (double b : cfg.betas)
        for (int n = 1; n <= n_max; ++n) tasks.push_back({b, n});

    std::vector<detail::SweepCell<Real>> cells(tasks.size());
    std::atomic<std::size_t> cursor{0};
    int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    if (!tasks.empty() && static_cast<std::size_t>(jobs) > tasks.size())
        jobs = static_cast<int>(tasks.size());
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= tasks.size()) return;
            cells[i] = detail::compute_sweep_cell<Real>(cfg.d, tasks[i].beta, tasks[i].n,
                                                        cfg.precision, k_max,
                                                        cfg.effective_theta_tol(), caps);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    const int digits = cfg.precision + 5;
    std::ostringstream csv;
    csv << "# engine_version: " << kEngineVersion << "\n";
    csv << "# config: " << cfg.canonical_json() << "\n";
    csv << "d,beta,n,num_sites,alpha1,u2_per_site,u4_per_site,b2_est,radius_proxy,error\n";

    bool any_error = false;
    for (std::size_t ib = 0; ib < cfg.betas.size(); ++ib) {
        const double beta = cfg.betas[ib];
        std::vector<int> ns, sizes;
        std::vector<std::vector<Real>> u_rows;
        for (int n = 1; n <= n_max; ++n) {
            const auto& cell = cells[ib * static_cast<std::size_t>(n_max) +
                                     static_cast<std::size_t>(n - 1)];
            csv << cfg.d << "," << format_double(beta) << "," << n << ",";
            if (!cell.ok) {
                any_error = true;
                std::string msg = cell.error;
                for (char& ch : msg)
                    if (ch == ',' || ch == '\n') ch = ';';
                csv << ",,,,,," << msg << "\n";
                continue;
            }
            ns.push_back(n);
            sizes.push_back(cell.num_sites);
            u_rows.push_back(cell.u_per_site);
            csv << cell.num_sites << "," << to_decimal_string(cell.alpha1, digits) << ","
                << to_decimal_string(cell.u_per_site[2], digits) << ",";
            if (k_max >= 4)
                csv << to_decimal_string(cell.u_per_site[4], digits);
            csv << ",";

            // b_2 estimate and radius proxy from the prefix up to this n.
            std::vector<Real> u2_series;
            for (const auto& row : u_rows) u2_series.push_back(row[2]);
            const auto b2 = bk_from_series<Real>(cfg.d, beta, 2, ns, sizes, u2_series);
            csv << to_decimal_string(b2.extrapolated, digits) << ",";
            if (k_max >= 6) {
                std::vector<BkEstimate<Real>> bks;
                for (int k = 2; k <= k_max; k += 2) {
                    std::vector<Real> sk;
                    for (const auto& row : u_rows) sk.push_back(row[static_cast<std::size_t>(k)]);
                    bks.push_back(bk_from_series<Real>(cfg.d, beta, k, ns, sizes, sk));
                }
                const auto proxy = radius_from_bk(bks);
                if (proxy.infinite)
                    csv << "inf";
                else
                    csv << to_decimal_string(proxy.value, digits);
            }
            csv << ",\n";
        }
    }
    return {csv.str(), 0, any_error ? "some sweep cells failed; see error column" : ""};
}

namespace detail {

struct SweepRow {
    int d = 0;
    double beta = 0;
    int n = 0;
    int num_sites = 0;
    std::string alpha1;
};

inline std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
    std::vector<SweepRow> rows;
    std::istringstream is(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column header
            continue;
        }
        std::vector<std::string> f;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const auto c = line.find(',', pos);
            f.push_back(line.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
            if (c == std::string::npos) break;
            pos = c + 1;
        }
        if (f.size() < 5 || f[4].empty()) continue;  // errored cell
        SweepRow r;
        r.d = std::stoi(f[0]);
        r.beta = std::stod(f[1]);
        r.n = std::stoi(f[2]);
        r.num_sites = std::stoi(f[3]);
        r.alpha1 = f[4];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace detail

template <class Real>
DriverResult run_extrapolate_t(const RunConfig& cfg, const Caps& caps) {
    (void)caps;
    std::ifstream in(cfg.input_csv);
    if (!in) throw ConfigError("cannot open input CSV: " + cfg.input_csv);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto rows = detail::parse_sweep_csv(buf.str());

    const double beta = cfg.betas.at(0);
    std::vector<int> ns, sizes;
    std::vector<Real> alpha1;
    int d = 0;
    for (const auto& r : rows) {
        if (r.beta != beta) continue;
        ns.push_back(r.n);
        sizes.push_back(r.num_sites);
        alpha1.push_back(Real(r.alpha1));
        d = r.d;
    }
    if (ns.size() < 3)
        throw ConfigError("input contains fewer than 3 sizes for beta=" + format_double(beta));

    const auto est =
        radius_estimate_from_series<Real>(d, beta, cfg.precision, ns, sizes, alpha1);
    json out = detail::output_header(cfg);
    out.update(radius_estimate_to_json(est));
    return {detail::dump_output(out), 0, ""};
}

// Dispatch on command and precision; exceptions map to exit codes here.
inline DriverResult run_command(const RunConfig& cfg, const Caps& caps = {}) {
    try {
        cfg.validate(caps);
        return with_precision(cfg.precision, [&](auto tag) -> DriverResult {
            using Real = decltype(tag);
            if (cfg.command == "zeros") return run_zeros_t<Real>(cfg, caps);
            if (cfg.command == "cumulants") return run_cumulants_t<Real>(cfg, caps);
            if (cfg.command == "verify") return run_verify_t<Real>(cfg, caps);
            if (cfg.command == "sweep") return run_sweep_t<Real>(cfg, caps);
            if (cfg.command == "extrapolate") return run_extrapolate_t<Real>(cfg, caps);
            throw ConfigError("unknown command: " + cfg.command);
        });
    } catch (const CapExceeded& e) {
        return {"", 3, e.what()};
    } catch (const ConfigError& e) {
        return {"", 2, e.what()};
    } catch (const ZeroCountError& e) {
        return {"", 1, e.what()};
    }
}

}  // namespace leeyang
