#pragma once

// Thermodynamic-limit estimation: per-site cumulant sequences over growing
// boxes, the b_k and radius-of-analyticity proxies, first-zero extrapolation,
// and the exact references available in closed form (the d=1 limit and the
// d=2 critical coupling).

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "leeyang/cumulants.hpp"
#include "leeyang/errors.hpp"
#include "leeyang/highreal.hpp"
#include "leeyang/lattice.hpp"
#include "leeyang/partition.hpp"
#include "leeyang/zeros.hpp"

namespace leeyang {

template <class Real>
struct PowerFit {
    bool valid = false;
    Real p{};    // decay exponent in a + b * n^-p
    Real a{};    // extrapolated limit
    Real b{};
    Real rms{};  // root-mean-square residual over the fitted window
    std::string label;
};

// Least squares for y = a + b * n^-p at fixed p.
template <class Real>
PowerFit<Real> fit_fixed_p(const std::vector<int>& ns, const std::vector<Real>& ys, int p) {
    PowerFit<Real> f;
    f.p = p;
    f.label = "p=" + std::to_string(p);
    const std::size_t m = ns.size();
    if (m < 2) return f;
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const Real x = mp::pow(Real(ns[i]), -p);
        sx += x;
        sy += ys[i];
        sxx += x * x;
        sxy += x * ys[i];
    }
    const Real det = Real(m) * sxx - sx * sx;
    if (det.is_zero()) return f;
    f.b = (Real(m) * sxy - sx * sy) / det;
    f.a = (sy - f.b * sx) / Real(m);
    Real ss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const Real e = f.a + f.b * mp::pow(Real(ns[i]), -p) - ys[i];
        ss += e * e;
    }
    f.rms = mp::sqrt(ss / Real(m));
    f.valid = true;
    return f;
}

// Exact a + b * n^-p fit through the last three points, with p solved from
// the difference ratio by bisection. Captures the empirical decay exponent
// when it is not an integer, which free-boundary corrections usually are not
// at desk scales. Invalid when the tail is flat or not decelerating.
template <class Real>
PowerFit<Real> fit_free_p(const std::vector<int>& ns, const std::vector<Real>& ys) {
    PowerFit<Real> f;
    f.label = "free-p";
    const std::size_t m = ns.size();
    if (m < 3) return f;
    const int n1 = ns[m - 3], n2 = ns[m - 2], n3 = ns[m - 1];
    const Real d1 = ys[m - 3] - ys[m - 2];
    const Real d2 = ys[m - 2] - ys[m - 1];
    if (d2.is_zero() || d1.is_zero() || (d1 < 0) != (d2 < 0)) return f;
    const Real target = d1 / d2;

    auto g = [&](const Real& p) {
        return (mp::pow(Real(n1), -p) - mp::pow(Real(n2), -p)) /
               (mp::pow(Real(n2), -p) - mp::pow(Real(n3), -p));
    };
    Real lo = Real("0.05"), hi = Real(8);
    if (!(g(lo) < target && target < g(hi))) return f;
    for (int it = 0; it < 300; ++it) {
        const Real mid = (lo + hi) / 2;
        if (g(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    f.p = (lo + hi) / 2;
    f.b = d2 / (mp::pow(Real(n2), -f.p) - mp::pow(Real(n3), -f.p));
    f.a = ys[m - 1] - f.b * mp::pow(Real(n3), -f.p);
    f.rms = 0;  // interpolatory on its window
    f.valid = true;
    return f;
}

template <class Real>
struct BkEstimate {
    int k = 0;
    int d = 0;
    double beta = 0;
    std::vector<int> ns;
    std::vector<int> sizes;      // |B_n|
    std::vector<Real> per_site;  // u_k(M_{B_n}) / |B_n|
    bool monotone = false;       // |u_k|/|B_n| nondecreasing in n (even k)
    bool diverging = false;      // increments growing: superlinear trend
    Real extrapolated{};
    PowerFit<Real> fit;
};

namespace detail {

template <class Real>
MagnetizationPolynomial<Real> box_polynomial(int d, int n, double beta, int precision,
                                             const Caps& caps) {
    return transfer_partition<Real>(make_box(d, n, caps), beta, precision, caps);
}

template <class Real>
void analyze_trend(BkEstimate<Real>& est) {
    const Real eps = pow10<Real>(-(20));
    est.monotone = true;
    for (std::size_t i = 1; i < est.per_site.size(); ++i)
        if (mp::fabs(est.per_site[i]) + eps < mp::fabs(est.per_site[i - 1])) est.monotone = false;
    est.diverging = false;
    const std::size_t m = est.per_site.size();
    if (m >= 3) {
        const Real i1 = mp::fabs(est.per_site[m - 2]) - mp::fabs(est.per_site[m - 3]);
        const Real i2 = mp::fabs(est.per_site[m - 1]) - mp::fabs(est.per_site[m - 2]);
        est.diverging = (i2 > i1 && i2 > eps);
    }
}

}  // namespace detail

// Trend analysis and extrapolation of an already-computed per-site series.
template <class Real>
BkEstimate<Real> bk_from_series(int d, double beta, int k, std::vector<int> ns,
                                std::vector<int> sizes, std::vector<Real> per_site) {
    BkEstimate<Real> est;
    est.k = k;
    est.d = d;
    est.beta = beta;
    est.ns = std::move(ns);
    est.sizes = std::move(sizes);
    est.per_site = std::move(per_site);
    detail::analyze_trend(est);
    const auto ff = fit_free_p(est.ns, est.per_site);
    const auto f1 = fit_fixed_p(est.ns, est.per_site, 1);
    const auto f2 = fit_fixed_p(est.ns, est.per_site, 2);
    if (ff.valid && !est.diverging)
        est.fit = ff;
    else if (f1.valid && f2.valid)
        est.fit = (f1.rms <= f2.rms) ? f1 : f2;
    else
        est.fit = f1.valid ? f1 : f2;
    est.extrapolated =
        est.fit.valid ? est.fit.a : (est.per_site.empty() ? Real(0) : est.per_site.back());
    return est;
}

// u_k(M_{B_n})/|B_n| for n = 1..n_max, with the monotone-trend flags and an
// a + b * n^-p extrapolation of the limit b_k.
template <class Real>
BkEstimate<Real> bk_sequence(int d, double beta, int k, int n_max,
                             int precision = kDefaultPrecision, const Caps& caps = {}) {
    if (k < 1 || k > caps.max_kmax) throw ConfigError("k out of range");
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    std::vector<int> ns, sizes;
    std::vector<Real> per_site;
    for (int n = 1; n <= n_max; ++n) {
        const auto poly = detail::box_polynomial<Real>(d, n, beta, precision, caps);
        const auto cum = cumulants(poly, k, caps);
        ns.push_back(n);
        sizes.push_back(poly.num_sites());
        per_site.push_back(cum[k] / poly.num_sites());
    }
    return bk_from_series<Real>(d, beta, k, std::move(ns), std::move(sizes), std::move(per_site));
}

template <class Real>
struct RadiusProxy {
    Real value{};
    bool infinite = false;                     // all b_k vanish (degenerate input)
    std::vector<std::pair<int, Real>> per_k;   // (k, (|b_k|/k!)^{1/k}) trend, auditable
};

// Finite-k proxy for the radius of analyticity r(beta): 1 / max over the
// available even k of (|b_k|/k!)^{1/k}. A diverging b_k input forces the
// supercritical convention 1/inf = 0.
template <class Real>
RadiusProxy<Real> radius_from_bk(const std::vector<BkEstimate<Real>>& bks) {
    int kmax = 0;
    for (const auto& est : bks) {
        if (est.k % 2 != 0) throw ConfigError("radius_from_bk takes even-k entries only");
        kmax = (std::max)(kmax, est.k);
    }
    if (kmax < 6) throw ConfigError("radius_from_bk requires k_max >= 6");
    RadiusProxy<Real> out;
    bool any_diverging = false;
    Real best = 0;
    for (const auto& est : bks) {
        Real fac = 1;
        for (int i = 2; i <= est.k; ++i) fac *= i;
        const Real root = mp::pow(mp::fabs(est.extrapolated) / fac, Real(1) / est.k);
        out.per_k.emplace_back(est.k, root);
        if (est.diverging) any_diverging = true;
        best = (std::max)(best, root);
    }
    if (any_diverging) {
        out.value = 0;
        return out;
    }
    if (best.is_zero()) {
        out.infinite = true;
        out.value = std::numeric_limits<Real>::infinity();
        return out;
    }
    out.value = 1 / best;
    return out;
}

// alpha_1(Z, beta) for the infinite chain: the closed-form 1d free energy has
// its nearest complex-field singularity where the transfer eigenvalue branch
// root e^{2 beta} sinh^2 h + e^{-2 beta} vanishes, i.e. at h = i asin(e^{-2 beta}).
template <class Real>
Real exact_1d_radius(double beta) {
    if (beta < 0) throw ConfigError("beta must be >= 0");
    return mp::asin(mp::exp(Real(-2) * Real(beta)));
}

struct CriticalBeta {
    enum class Kind { Infinite, Exact, Unknown } kind;
    double value;  // meaningful only for Kind::Exact
};

// beta_c(1) = inf; beta_c(2) = ln(1 + sqrt 2)/2; unknown beyond (caller supplies).
inline CriticalBeta critical_beta(int d) {
    if (d < 1) throw ConfigError("dimension must be >= 1");
    if (d == 1) return {CriticalBeta::Kind::Infinite, 0};
    if (d == 2) return {CriticalBeta::Kind::Exact, 0.5 * std::log(1.0 + std::sqrt(2.0))};
    return {CriticalBeta::Kind::Unknown, 0};
}

template <class Real>
struct RadiusEstimate {
    int d = 0;
    double beta = 0;
    int precision = kDefaultPrecision;
    std::vector<int> ns;
    std::vector<int> sizes;
    std::vector<Real> alpha1;
    PowerFit<Real> fit_p1, fit_p2, fit_free;
    std::string chosen;
    Real extrapolated{};
    bool clamped = false;       // raw fit limit fell below 0
    bool has_reference = false;
    Real reference{};
    std::string reference_kind;
};

// Fits and reference assembly over an already-computed alpha_1 series. All
// three fits are reported; the free-exponent fit is preferred when its solve
// succeeds, otherwise the better of p = 1, 2 by residual.
template <class Real>
RadiusEstimate<Real> radius_estimate_from_series(int d, double beta, int precision,
                                                 std::vector<int> ns, std::vector<int> sizes,
                                                 std::vector<Real> alpha1) {
    if (ns.size() < 3) throw ConfigError("radius extrapolation needs at least 3 sizes");
    RadiusEstimate<Real> est;
    est.d = d;
    est.beta = beta;
    est.precision = precision;
    est.ns = std::move(ns);
    est.sizes = std::move(sizes);
    est.alpha1 = std::move(alpha1);
    est.fit_p1 = fit_fixed_p(est.ns, est.alpha1, 1);
    est.fit_p2 = fit_fixed_p(est.ns, est.alpha1, 2);
    est.fit_free = fit_free_p(est.ns, est.alpha1);

    const PowerFit<Real>* pick = nullptr;
    if (est.fit_free.valid) {
        pick = &est.fit_free;
    } else if (est.fit_p1.valid && est.fit_p2.valid) {
        pick = (est.fit_p1.rms <= est.fit_p2.rms) ? &est.fit_p1 : &est.fit_p2;
    } else {
        pick = est.fit_p1.valid ? &est.fit_p1 : &est.fit_p2;
    }
    est.chosen = pick->label;
    Real a = pick->a;
    if (a < 0) {
        a = 0;
        est.clamped = true;
    }
    Real amin = est.alpha1.front();
    for (const auto& v : est.alpha1) amin = (std::min)(amin, v);
    est.extrapolated = (std::min)(a, amin);

    if (d == 1) {
        est.has_reference = true;
        est.reference = exact_1d_radius<Real>(beta);
        est.reference_kind = "exact-1d-limit";
    } else if (beta == 0) {
        est.has_reference = true;
        est.reference = pi_const<Real>() / 2;
        est.reference_kind = "independent-spins";
    }
    return est;
}

// alpha_1(B_n) for n = 1..n_max plus the extrapolation above.
template <class Real>
RadiusEstimate<Real> alpha1_extrapolate(int d, double beta, int n_max,
                                        int precision = kDefaultPrecision,
                                        const Caps& caps = {}) {
    if (n_max < 3) throw ConfigError("alpha1_extrapolate needs n_max >= 3");
    std::vector<int> ns, sizes;
    std::vector<Real> alpha1;
    const Real tol = pow10<Real>(-(precision - 10));
    for (int n = 1; n <= n_max; ++n) {
        const auto poly = detail::box_polynomial<Real>(d, n, beta, precision, caps);
        ns.push_back(n);
        sizes.push_back(poly.num_sites());
        alpha1.push_back(first_zero(find_zeros(poly, tol)));
    }
    return radius_estimate_from_series<Real>(d, beta, precision, std::move(ns), std::move(sizes),
                                             std::move(alpha1));
}

template <class Real>
struct SusceptibilityTrend {
    int d = 0;
    double beta = 0;
    std::vector<int> ns;
    std::vector<int> sizes;
    std::vector<Real> u2_per_site;
    std::vector<Real> increments;
    std::string classification;  // "bounded-trend" or "growing-trend"
};

// u_2(M_{B_n})/|B_n| with a ratio diagnostic on the increments: shrinking
// increments indicate a bounded (subcritical) trend at accessible sizes,
// growing increments the supercritical divergence.
template <class Real>
SusceptibilityTrend<Real> susceptibility_trend(int d, double beta, int n_max,
                                               int precision = kDefaultPrecision,
                                               const Caps& caps = {}) {
    if (n_max < 2) throw ConfigError("susceptibility_trend needs n_max >= 2");
    SusceptibilityTrend<Real> tr;
    tr.d = d;
    tr.beta = beta;
    for (int n = 1; n <= n_max; ++n) {
        const auto poly = detail::box_polynomial<Real>(d, n, beta, precision, caps);
        const auto cum = cumulants(poly, 2, caps);
        tr.ns.push_back(n);
        tr.sizes.push_back(poly.num_sites());
        tr.u2_per_site.push_back(cum[2] / poly.num_sites());
    }
    for (std::size_t i = 1; i < tr.u2_per_site.size(); ++i)
        tr.increments.push_back(tr.u2_per_site[i] - tr.u2_per_site[i - 1]);
    bool growing = false;
    if (tr.increments.size() >= 2)
        growing = tr.increments.back() > tr.increments[tr.increments.size() - 2];
    tr.classification = growing ? "growing-trend" : "bounded-trend";
    return tr;
}

}  // namespace leeyang
