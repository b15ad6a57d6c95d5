#pragma once

// Cumulants of the total magnetization and Ursell (truncated correlation)
// functions of small vertex tuples, both from exact data: cumulants from the
// sector polynomial, Ursell functions from direct configuration enumeration
// (arbitrary vertex tuples do not factor through magnetization sectors).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "leeyang/errors.hpp"
#include "leeyang/highreal.hpp"
#include "leeyang/partition.hpp"

namespace leeyang {

// <M^p> for p = 0..p_max at h = 0. Odd moments vanish exactly: only m > 0
// sectors are summed, each with the even-power pairing weight 2 c_m m^p.
template <class Real>
std::vector<Real> raw_moments(const MagnetizationPolynomial<Real>& poly, int p_max,
                              const Caps& caps = {}) {
    if (p_max < 0 || p_max > 2 * caps.max_kmax)
        throw ConfigError("p_max must be in [0, " + std::to_string(2 * caps.max_kmax) + "]");
    const int n = poly.num_sites();
    const Real z = poly.coefficient_sum();
    std::vector<Real> mom(static_cast<std::size_t>(p_max) + 1, Real(0));
    mom[0] = 1;
    for (int p = 2; p <= p_max; p += 2) {
        Real acc = 0;
        for (int k = n / 2 + 1; k <= n; ++k) {
            const Real m = poly.m_of(k);
            acc += 2 * poly.coeffs[static_cast<std::size_t>(k)] * mp::pow(m, p);
        }
        mom[static_cast<std::size_t>(p)] = acc / z;
    }
    return mom;
}

template <class Real>
struct CumulantVector {
    SpinDomain domain;
    double beta = 0;
    int precision = kDefaultPrecision;
    int k_max = 0;
    std::vector<Real> u;  // u[k] for k = 1..k_max; u[0] unused

    const Real& operator[](int k) const { return u.at(static_cast<std::size_t>(k)); }
};

namespace detail {

inline std::uint64_t binomial_u64(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

}  // namespace detail

// Moment -> cumulant recursion: kappa_k = m_k - sum_{j<k} C(k-1, j-1) kappa_j m_{k-j}.
template <class Real>
CumulantVector<Real> cumulants_from_moments(const std::vector<Real>& moments,
                                            const SpinDomain& domain, double beta,
                                            int precision) {
    const int k_max = static_cast<int>(moments.size()) - 1;
    CumulantVector<Real> cv{domain, beta, precision, k_max,
                            std::vector<Real>(static_cast<std::size_t>(k_max) + 1, Real(0))};
    for (int k = 1; k <= k_max; ++k) {
        Real s = moments[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j)
            s -= Real(detail::binomial_u64(k - 1, j - 1)) * cv.u[static_cast<std::size_t>(j)] *
                 moments[static_cast<std::size_t>(k - j)];
        cv.u[static_cast<std::size_t>(k)] = s;
    }
    return cv;
}

template <class Real>
CumulantVector<Real> cumulants(const MagnetizationPolynomial<Real>& poly, int k_max,
                               const Caps& caps = {}) {
    if (k_max < 1 || k_max > caps.max_kmax)
        throw ConfigError("k_max must be in [1, " + std::to_string(caps.max_kmax) + "]");
    return cumulants_from_moments(raw_moments(poly, k_max, caps), poly.domain, poly.beta,
                                  poly.precision);
}

// Joint spin moments <prod_{v in S} sigma_v> by exact enumeration at field h,
// memoized per vertex subset. One per-configuration pass precomputes the
// (edge sum, magnetization) cell of every configuration; a moment query is
// then a signed table lookup per configuration.
template <class Real>
class ExactMomentTable {
public:
    ExactMomentTable(SpinDomain domain, double beta, const Real& h, const Caps& caps = {})
        : domain_(std::move(domain)) {
        const int n = domain_.size();
        if (n > caps.max_enum_log2 || n > 24)
            throw CapExceeded("moment_enum_sites", static_cast<std::uint64_t>(n), 24);
        const int ne = static_cast<int>(domain_.edges().size());
        const std::uint32_t nconf = std::uint32_t{1} << n;

        std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n));
        for (auto [a, b] : domain_.edges()) {
            nbr[static_cast<std::size_t>(a)].push_back(b);
            nbr[static_cast<std::size_t>(b)].push_back(a);
        }
        cell_.resize(nconf);
        std::vector<int> spin(static_cast<std::size_t>(n), +1);
        int mag = n, agr = ne;
        std::uint32_t cfg = 0;  // bit v set = spin v is -1
        for (std::uint64_t g = 0;;) {
            cell_[cfg] = static_cast<std::uint16_t>(((mag + n) / 2) * (ne + 1) + (agr + ne) / 2);
            if (++g >= nconf) break;
            const int site = std::countr_zero(g);
            int nsum = 0;
            for (int u : nbr[static_cast<std::size_t>(site)])
                nsum += spin[static_cast<std::size_t>(u)];
            spin[static_cast<std::size_t>(site)] = -spin[static_cast<std::size_t>(site)];
            cfg ^= std::uint32_t{1} << site;
            mag += 2 * spin[static_cast<std::size_t>(site)];
            agr += 2 * spin[static_cast<std::size_t>(site)] * nsum;
        }

        weight_.resize(static_cast<std::size_t>(n + 1) * (ne + 1));
        for (int mi = 0; mi <= n; ++mi)
            for (int ei = 0; ei <= ne; ++ei)
                weight_[static_cast<std::size_t>(mi) * (ne + 1) + ei] =
                    mp::exp(Real(beta) * (2 * ei - ne) + h * (2 * mi - n));
        norm_ = raw_sum(0);
    }

    const SpinDomain& domain() const { return domain_; }

    // <prod_{v in mask} sigma_v>
    Real moment(std::uint32_t vertex_mask) const {
        auto it = memo_.find(vertex_mask);
        if (it != memo_.end()) return it->second;
        const Real v = raw_sum(vertex_mask) / norm_;
        memo_.emplace(vertex_mask, v);
        return v;
    }

private:
    Real raw_sum(std::uint32_t mask) const {
        Real acc = 0;
        for (std::uint32_t cfg = 0; cfg < cell_.size(); ++cfg) {
            const Real& w = weight_[cell_[cfg]];
            // bits set in cfg are -1 spins; sign of the product over mask
            if (std::popcount(cfg & mask) & 1)
                acc -= w;
            else
                acc += w;
        }
        return acc;
    }

    SpinDomain domain_;
    std::vector<std::uint16_t> cell_;
    std::vector<Real> weight_;
    Real norm_{};
    mutable std::map<std::uint32_t, Real> memo_;
};

namespace detail {

// All set partitions of {0, .., k-1} as block lists, in a fixed recursive
// order (element i joins an existing block or opens a new one).
inline std::vector<std::vector<std::vector<int>>> set_partitions(int k) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> cur;
    auto rec = [&](auto&& self, int i) -> void {
        if (i == k) {
            out.push_back(cur);
            return;
        }
        const std::size_t nblocks = cur.size();  // recursion reallocates cur
        for (std::size_t b = 0; b < nblocks; ++b) {
            cur[b].push_back(i);
            self(self, i + 1);
            cur[b].pop_back();
        }
        cur.push_back({i});
        self(self, i + 1);
        cur.pop_back();
    };
    rec(rec, 0);
    return out;
}

inline std::uint64_t factorial_u64(int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

}  // namespace detail

// Ursell function of a vertex tuple (repeats allowed) via the set-partition
// expansion  sum_pi (-1)^{|pi|-1} (|pi|-1)! prod_{B in pi} <prod_{i in B} sigma_{v_i}>.
template <class Real>
Real ursell(const ExactMomentTable<Real>& table, std::span<const int> vertices) {
    const int k = static_cast<int>(vertices.size());
    if (k < 1 || k > 4) throw ConfigError("ursell supports tuples of 1..4 vertices");
    for (int v : vertices)
        if (v < 0 || v >= table.domain().size()) throw ConfigError("vertex index out of range");
    static const auto parts_by_k = [] {
        std::vector<std::vector<std::vector<std::vector<int>>>> p;
        for (int kk = 0; kk <= 4; ++kk) p.push_back(detail::set_partitions(kk));
        return p;
    }();
    Real acc = 0;
    for (const auto& partition : parts_by_k[static_cast<std::size_t>(k)]) {
        Real term = (partition.size() % 2 == 1) ? Real(1) : Real(-1);
        term *= Real(detail::factorial_u64(static_cast<int>(partition.size()) - 1));
        for (const auto& block : partition) {
            std::uint32_t mask = 0;
            for (int pos : block) mask ^= std::uint32_t{1} << vertices[static_cast<std::size_t>(pos)];
            term *= table.moment(mask);
        }
        acc += term;
    }
    return acc;
}

template <class Real>
Real ursell(const SpinDomain& domain, double beta, std::span<const int> vertices, const Real& h,
            const Caps& caps = {}) {
    ExactMomentTable<Real> table(domain, beta, h, caps);
    return ursell(table, vertices);
}

template <class Real>
struct UrsellSumCheck {
    Real lhs;  // u_k(M) from the moment-cumulant route
    Real rhs;  // sum of Ursell functions over all k-tuples
    Real rel_gap;
};

// Verifies u_k(M) = sum over all k-tuples of Ursell functions, k = 2 or 4.
template <class Real>
UrsellSumCheck<Real> ursell_sum_check(const SpinDomain& domain, double beta, int k,
                                      int precision = kDefaultPrecision, const Caps& caps = {}) {
    if (k != 2 && k != 4) throw ConfigError("ursell_sum_check supports k = 2 or 4");
    const int n = domain.size();
    if (k == 4 && n > 6)
        throw CapExceeded("ursell_sum_sites", static_cast<std::uint64_t>(n), 6);
    if (k == 2 && n > 12)
        throw CapExceeded("ursell_sum_sites", static_cast<std::uint64_t>(n), 12);

    const auto poly = enumerate_partition<Real>(domain, beta, precision, caps);
    const Real lhs = cumulants(poly, k, caps)[k];

    ExactMomentTable<Real> table(domain, beta, Real(0), caps);
    Real rhs = 0;
    std::vector<int> tuple(static_cast<std::size_t>(k), 0);
    for (;;) {
        rhs += ursell(table, std::span<const int>(tuple));
        int i = k - 1;
        while (i >= 0 && ++tuple[static_cast<std::size_t>(i)] == n) tuple[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
    }
    const Real denom = (std::max)(mp::fabs(lhs), mp::fabs(rhs));
    const Real gap = denom.is_zero() ? Real(0) : mp::fabs(lhs - rhs) / denom;
    return {lhs, rhs, gap};
}

}  // namespace leeyang
