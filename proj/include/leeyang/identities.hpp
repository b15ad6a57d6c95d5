#pragma once

// Executable checks for the quantitative identities and inequalities tying
// cumulants to Lee-Yang zeros at finite volume. Every check is deterministic
// and reproducible from the provenance recorded in its report.

#include <sstream>
#include <string>
#include <vector>

#include "leeyang/cumulants.hpp"
#include "leeyang/highreal.hpp"
#include "leeyang/lattice.hpp"
#include "leeyang/partition.hpp"
#include "leeyang/zeros.hpp"

namespace leeyang {

struct CheckReport {
    std::string name;
    std::string domain_label;
    double beta = 0;
    int precision = kDefaultPrecision;
    std::string lhs;
    std::string rhs;
    std::string rel_gap;
    std::string tolerance;
    bool pass = false;
    std::string note;
};

inline std::string describe_domain(const SpinDomain& d) {
    std::ostringstream os;
    if (d.is_rectangle()) {
        os << "rect d=" << d.dimension() << " ";
        const auto ext = d.extents();
        for (std::size_t i = 0; i < ext.size(); ++i) os << (i ? "x" : "") << ext[i];
    } else {
        os << "set d=" << d.dimension() << " N=" << d.size();
    }
    return os.str();
}

inline constexpr double kDefaultCheckRelTol = 1e-6;

namespace detail {

template <class Real>
Real rel_gap(const Real& a, const Real& b) {
    const Real denom = (std::max)(mp::fabs(a), mp::fabs(b));
    return denom.is_zero() ? Real(0) : mp::fabs(a - b) / denom;
}

template <class Real>
Real factorial_real(int n) {
    Real r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

template <class Real>
std::string disp(const Real& x) {
    return to_decimal_string(x, 20);
}

}  // namespace detail

// u_{2k}(M) = (-1)^{k-1} (2k)!/k * sum_j alpha_j^{-2k}, k = 1..k_max_pairs.
// The zero sum runs over all positive zeros including periodic images, with
// the tail certified below rel_tol / 10.
template <class Real>
std::vector<CheckReport> check_cumulant_zero_identity(const MagnetizationPolynomial<Real>& poly,
                                                      const ZeroSet<Real>& zs, int k_max_pairs,
                                                      const Real& rel_tol) {
    if (k_max_pairs < 1 || k_max_pairs > 4)
        throw ConfigError("cumulant-zero identity supports k = 1..4");
    const auto cum = cumulants(poly, 2 * k_max_pairs);
    std::vector<CheckReport> out;
    for (int k = 1; k <= k_max_pairs; ++k) {
        const auto zsum = periodic_zero_sum(zs, k, rel_tol / 10);
        const Real factor = detail::factorial_real<Real>(2 * k) / k;
        const Real rhs = ((k % 2 == 1) ? Real(1) : Real(-1)) * factor * zsum.value;
        const Real lhs = cum[2 * k];
        const Real gap = detail::rel_gap(lhs, rhs);
        CheckReport r;
        r.name = "cumulant_zero_identity_k" + std::to_string(k);
        r.domain_label = describe_domain(poly.domain);
        r.beta = poly.beta;
        r.precision = poly.precision;
        r.lhs = detail::disp(lhs);
        r.rhs = detail::disp(rhs);
        r.rel_gap = detail::disp(gap);
        r.tolerance = detail::disp(rel_tol);
        r.pass = gap <= rel_tol;
        r.note = "images=" + std::to_string(zsum.images_used) +
                 " tail_bound=" + detail::disp(zsum.tail_bound);
        out.push_back(std::move(r));
    }
    return out;
}

// |u_{2k}| <= (2k)!/k * 4 |Lambda| * alpha_1^{-2k}, strict, k = 1..k_max_pairs.
template <class Real>
std::vector<CheckReport> check_cumulant_bound(const MagnetizationPolynomial<Real>& poly,
                                              const ZeroSet<Real>& zs, int k_max_pairs) {
    if (k_max_pairs < 1 || k_max_pairs > 4)
        throw ConfigError("cumulant bound check supports k = 1..4");
    const Real a1 = first_zero(zs);
    const auto cum = cumulants(poly, 2 * k_max_pairs);
    std::vector<CheckReport> out;
    for (int k = 1; k <= k_max_pairs; ++k) {
        const Real lhs = mp::fabs(cum[2 * k]);
        const Real rhs = detail::factorial_real<Real>(2 * k) / k * 4 * poly.num_sites() *
                         mp::pow(a1, -2 * k);
        CheckReport r;
        r.name = "cumulant_bound_k" + std::to_string(k);
        r.domain_label = describe_domain(poly.domain);
        r.beta = poly.beta;
        r.precision = poly.precision;
        r.lhs = detail::disp(lhs);
        r.rhs = detail::disp(rhs);
        r.rel_gap = detail::disp(detail::rel_gap(lhs, rhs));
        r.tolerance = "strict inequality";
        r.pass = (a1 < 2 * pi_const<Real>()) && (lhs < rhs);
        out.push_back(std::move(r));
    }
    return out;
}

// alpha_1 is nonincreasing along a strictly nested domain sequence, within
// 10 * theta_tol.
template <class Real>
CheckReport check_first_zero_monotonicity(const std::vector<SpinDomain>& domains, double beta,
                                          int precision, const Real& theta_tol,
                                          const Caps& caps = {}) {
    if (domains.size() < 2) throw ConfigError("need at least two nested domains");
    CheckReport r;
    r.name = "first_zero_monotonicity";
    r.domain_label = describe_domain(domains.front()) + " .. " + describe_domain(domains.back());
    r.beta = beta;
    r.precision = precision;
    r.tolerance = detail::disp(10 * theta_tol);

    std::vector<Real> a1;
    for (std::size_t i = 0; i < domains.size(); ++i) {
        if (i > 0 && !(domains[i].contains_domain(domains[i - 1]) &&
                       domains[i].size() > domains[i - 1].size()))
            throw ConfigError("domains must be strictly nested");
        const auto poly = domains[i].is_rectangle()
                              ? transfer_partition<Real>(domains[i], beta, precision, caps)
                              : enumerate_partition<Real>(domains[i], beta, precision, caps);
        a1.push_back(first_zero(find_zeros(poly, theta_tol)));
    }
    bool ok = true;
    Real worst = 0;
    for (std::size_t i = 1; i < a1.size(); ++i) {
        const Real excess = a1[i] - a1[i - 1];  // should be <= 0
        worst = (std::max)(worst, excess);
        if (excess > 10 * theta_tol) ok = false;
    }
    r.lhs = detail::disp(a1.front());
    r.rhs = detail::disp(a1.back());
    r.rel_gap = detail::disp(worst);
    r.pass = ok;
    std::ostringstream os;
    os << "alpha1 sequence:";
    for (const auto& a : a1) os << " " << detail::disp(a);
    r.note = os.str();
    return r;
}

// Partial Taylor sums of f_Lambda from cumulants reproduce ln Z directly
// evaluated at |h| < alpha_1, within the geometric truncation envelope
//   |remainder| <= |h|^{2K+2} S_{K+1} / ((K+1)(1 - rho^2)),  rho = |h|/alpha_1,
// where S_{K+1} is the certified zero sum of order K+1 and 2K = k_max.
template <class Real>
std::vector<CheckReport> check_taylor_consistency(const MagnetizationPolynomial<Real>& poly,
                                                  const ZeroSet<Real>& zs, int k_max,
                                                  const std::vector<Complex<Real>>& h_samples) {
    if (k_max < 8 || k_max % 2 != 0)
        throw ConfigError("taylor consistency requires even k_max >= 8");
    const int n = poly.num_sites();
    const Real a1 = first_zero(zs);
    const auto cum = cumulants(poly, k_max);
    const int kk = k_max / 2;
    const auto ssum = periodic_zero_sum(zs, kk + 1, Real(kDefaultCheckRelTol));
    const Real s_upper = ssum.value + ssum.tail_bound;
    const Real z0 = mp::log(poly.coefficient_sum());

    std::vector<CheckReport> out;
    for (const auto& h : h_samples) {
        const Real habs = abs(h);
        CheckReport r;
        r.name = "taylor_consistency";
        r.domain_label = describe_domain(poly.domain);
        r.beta = poly.beta;
        r.precision = poly.precision;
        if (habs >= a1) throw ConfigError("taylor sample must satisfy |h| < alpha_1");

        Complex<Real> series{Real(0), Real(0)};
        Complex<Real> hp{Real(1), Real(0)};
        Real kfact = 1;
        for (int k = 1; k <= k_max; ++k) {
            hp = hp * h;
            kfact *= k;
            series += (cum[k] / (kfact * n)) * hp;
        }
        const Complex<Real> direct = log(evaluate(poly, h));
        const Complex<Real> diff{direct.re - z0 - Real(n) * series.re,
                                 direct.im - Real(n) * series.im};
        // gap per site
        const Real gap = abs(Complex<Real>(diff.re / n, diff.im / n));
        const Real rho = habs / a1;
        const Real envelope = mp::pow(habs, 2 * (kk + 1)) * s_upper /
                              ((kk + 1) * (1 - rho * rho) * n);
        const Real tol = envelope * Real("1.000001") + pow10<Real>(-(poly.precision - 10));
        r.lhs = detail::disp(gap);
        r.rhs = detail::disp(envelope);
        r.tolerance = detail::disp(tol);
        r.rel_gap = detail::disp(gap);
        r.pass = gap <= tol;
        r.note = "h=(" + detail::disp(h.re) + "," + detail::disp(h.im) + ") rho=" +
                 detail::disp(rho);
        out.push_back(std::move(r));
    }
    return out;
}

// Sign law and domain monotonicity of Ursell functions over nested domains:
// pair tuples always, quadruple tuples when the larger domain has <= 6 sites.
template <class Real>
CheckReport check_ursell_signs_monotonicity(const std::vector<SpinDomain>& domains, double beta,
                                            int precision = kDefaultPrecision,
                                            const Caps& caps = {}) {
    if (domains.size() < 2) throw ConfigError("need at least two nested domains");
    CheckReport r;
    r.name = "ursell_signs_monotonicity";
    r.domain_label = describe_domain(domains.front()) + " .. " + describe_domain(domains.back());
    r.beta = beta;
    r.precision = precision;
    const Real eps = pow10<Real>(-(precision - 10));
    r.tolerance = detail::disp(eps);

    bool ok = true;
    long pair_checks = 0, quad_checks = 0;
    Real worst_sign = 0, worst_mono = 0;

    std::vector<ExactMomentTable<Real>> tables;
    tables.reserve(domains.size());
    for (const auto& d : domains) tables.emplace_back(d, beta, Real(0), caps);

    for (std::size_t i = 0; i + 1 < domains.size(); ++i) {
        const SpinDomain& small = domains[i];
        const SpinDomain& big = domains[i + 1];
        if (!big.contains_domain(small)) throw ConfigError("domains must be nested");
        const int ns = small.size();
        // map small-domain indices to big-domain indices by coordinate
        std::vector<int> remap(static_cast<std::size_t>(ns));
        for (int v = 0; v < ns; ++v)
            remap[static_cast<std::size_t>(v)] = big.index_of(small.vertices()[static_cast<std::size_t>(v)]);

        for (int u = 0; u < ns; ++u) {
            for (int v = 0; v < ns; ++v) {
                const int tu[2] = {u, v};
                const int tb[2] = {remap[static_cast<std::size_t>(u)], remap[static_cast<std::size_t>(v)]};
                const Real us = ursell(tables[i], std::span<const int>(tu, 2));
                const Real ub = ursell(tables[i + 1], std::span<const int>(tb, 2));
                // k=1 pair: (+1) u_2 >= 0 and growth with the domain
                worst_sign = (std::max)(worst_sign, -us);
                worst_mono = (std::max)(worst_mono, us - ub);
                if (us < -eps || ub < -eps || us > ub + eps) ok = false;
                ++pair_checks;
            }
        }
        if (big.size() <= 6) {
            std::vector<int> t(4, 0);
            for (;;) {
                const int tb[4] = {remap[static_cast<std::size_t>(t[0])], remap[static_cast<std::size_t>(t[1])],
                                   remap[static_cast<std::size_t>(t[2])], remap[static_cast<std::size_t>(t[3])]};
                const Real us = ursell(tables[i], std::span<const int>(t.data(), 4));
                const Real ub = ursell(tables[i + 1], std::span<const int>(tb, 4));
                // k=2 quadruple: (-1) u_4 >= 0, |u_4| grows with the domain
                worst_sign = (std::max)(worst_sign, us);
                worst_mono = (std::max)(worst_mono, ub - us);
                if (us > eps || ub > eps || ub > us + eps) ok = false;
                ++quad_checks;
                int j = 3;
                while (j >= 0 && ++t[static_cast<std::size_t>(j)] == ns) t[static_cast<std::size_t>(j--)] = 0;
                if (j < 0) break;
            }
        }
    }
    r.pass = ok;
    r.lhs = detail::disp(worst_sign);
    r.rhs = detail::disp(worst_mono);
    r.rel_gap = detail::disp((std::max)(worst_sign, worst_mono));
    r.note = "pair_tuples=" + std::to_string(pair_checks) +
             " quad_tuples=" + std::to_string(quad_checks);
    return r;
}

}  // namespace leeyang
