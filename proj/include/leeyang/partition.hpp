#pragma once

// Exact partition function of the finite Ising model, organized as a
// polynomial over total-magnetization sectors:
//
//     Z(h) = sum_m c_m e^{m h},   m in {-N, -N+2, ..., N},  N = |Lambda|,
//
// with c_m the total Boltzmann weight of all configurations of magnetization
// m at field zero. Two routes produce the coefficients: brute-force
// enumeration (the oracle) and a column transfer dynamic program (the fast
// path for rectangles). Both enforce c_m = c_{-m} bit-exactly by mirroring
// the m >= 0 half.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "leeyang/errors.hpp"
#include "leeyang/highreal.hpp"
#include "leeyang/lattice.hpp"

namespace leeyang {

template <class Real>
struct MagnetizationPolynomial {
    SpinDomain domain;
    double beta = 0;
    int precision = kDefaultPrecision;  // requested decimal digits P
    std::vector<Real> coeffs;           // coeffs[k] = c_m with m = 2k - N

    int num_sites() const { return domain.size(); }
    int m_of(int k) const { return 2 * k - num_sites(); }

    const Real& coeff_of_m(int m) const { return coeffs.at(static_cast<std::size_t>((m + num_sites()) / 2)); }

    Real coefficient_sum() const {  // = Z at h = 0
        Real z = 0;
        for (const Real& c : coeffs) z += c;
        return z;
    }
};

// Count of configurations per (magnetization, edge-agreement) cell. The
// histogram is beta-independent, so one enumeration serves every coupling.
struct SectorHistogram {
    int num_sites = 0;
    int num_edges = 0;
    // counts[(m + N)/2 * (E + 1) + (e + E)/2], e = sum over edges of s_u s_v
    std::vector<std::uint64_t> counts;

    std::uint64_t at(int mi, int ei) const {
        return counts[static_cast<std::size_t>(mi) * (num_edges + 1) + ei];
    }
};

// Enumerates half the configuration space (first spin pinned to +1) in Gray
// code order, then mirrors. Cost is O(2^{N-1}) with O(degree) work per step.
inline SectorHistogram enumerate_sectors(const SpinDomain& domain, const Caps& caps = {}) {
    const int n = domain.size();
    if (n > caps.max_enum_log2)
        throw CapExceeded("enum_configs_log2", static_cast<std::uint64_t>(n),
                          static_cast<std::uint64_t>(caps.max_enum_log2));
    const int ne = static_cast<int>(domain.edges().size());

    std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n));
    for (auto [a, b] : domain.edges()) {
        nbr[static_cast<std::size_t>(a)].push_back(b);
        nbr[static_cast<std::size_t>(b)].push_back(a);
    }

    const std::size_t cols = static_cast<std::size_t>(ne) + 1;
    std::vector<std::uint64_t> half(static_cast<std::size_t>(n + 1) * cols, 0);

    std::vector<int> spin(static_cast<std::size_t>(n), +1);
    int mag = n;   // sum of spins
    int agr = ne;  // sum over edges of s_u s_v

    const std::uint64_t steps = (n == 0) ? 0 : (std::uint64_t{1} << (n - 1));
    for (std::uint64_t g = 0;;) {
        half[static_cast<std::size_t>((mag + n) / 2) * cols +
             static_cast<std::size_t>((agr + ne) / 2)]++;
        if (++g >= steps) break;
        // Gray code: flip one spin among sites 1..n-1; site 0 stays +1.
        const int site = std::countr_zero(g) + 1;
        int nsum = 0;
        for (int u : nbr[static_cast<std::size_t>(site)]) nsum += spin[static_cast<std::size_t>(u)];
        spin[static_cast<std::size_t>(site)] = -spin[static_cast<std::size_t>(site)];
        mag += 2 * spin[static_cast<std::size_t>(site)];
        agr += 2 * spin[static_cast<std::size_t>(site)] * nsum;
    }

    SectorHistogram h;
    h.num_sites = n;
    h.num_edges = ne;
    h.counts.assign(static_cast<std::size_t>(n + 1) * cols, 0);
    // Spin flip maps (m, e) -> (-m, e); summing the half histogram with its
    // mirror restores the full space and makes the symmetry exact.
    for (int mi = 0; mi <= n; ++mi)
        for (int ei = 0; ei <= ne; ++ei)
            h.counts[static_cast<std::size_t>(mi) * cols + ei] =
                half[static_cast<std::size_t>(mi) * cols + ei] +
                half[static_cast<std::size_t>(n - mi) * cols + ei];
    return h;
}

namespace detail {

// exp(beta * e) for e = 2*idx - num_edges, idx = 0..num_edges.
template <class Real>
std::vector<Real> edge_weight_table(int num_edges, double beta) {
    std::vector<Real> t(static_cast<std::size_t>(num_edges) + 1);
    for (int ei = 0; ei <= num_edges; ++ei)
        t[static_cast<std::size_t>(ei)] = mp::exp(Real(beta) * (2 * ei - num_edges));
    return t;
}

template <class Real>
void mirror_coefficients(std::vector<Real>& c) {
    const std::size_t n = c.size();
    for (std::size_t k = 0; k < n / 2; ++k) c[k] = c[n - 1 - k];
}

}  // namespace detail

template <class Real>
MagnetizationPolynomial<Real> assemble_from_histogram(const SpinDomain& domain,
                                                      const SectorHistogram& hist, double beta,
                                                      int precision) {
    const int n = hist.num_sites;
    const int ne = hist.num_edges;
    const auto wt = detail::edge_weight_table<Real>(ne, beta);

    MagnetizationPolynomial<Real> poly{domain, beta, precision, {}};
    poly.coeffs.assign(static_cast<std::size_t>(n) + 1, Real(0));
    for (int mi = (n + 1) / 2; mi <= n; ++mi) {  // m >= 0 sectors, ascending
        Real acc = 0;
        for (int ei = 0; ei <= ne; ++ei) {
            const std::uint64_t cnt = hist.at(mi, ei);
            if (cnt) acc += Real(cnt) * wt[static_cast<std::size_t>(ei)];
        }
        poly.coeffs[static_cast<std::size_t>(mi)] = acc;
    }
    detail::mirror_coefficients(poly.coeffs);
    return poly;
}

// Brute-force oracle: exact sector sums by configuration enumeration.
template <class Real>
MagnetizationPolynomial<Real> enumerate_partition(const SpinDomain& domain, double beta,
                                                  int precision = kDefaultPrecision,
                                                  const Caps& caps = {}) {
    if (beta < 0) throw ConfigError("beta must be >= 0");
    return assemble_from_histogram<Real>(domain, enumerate_sectors(domain, caps), beta, precision);
}

// Column transfer dynamic program over cross-section spin states. Requires an
// axis-aligned rectangle; the longest axis is swept column by column, each of
// the 2^w cross-section states carrying a magnetization-indexed weight vector.
// The column transition factors into a per-state vertical weight (intra-column
// edges) and a horizontal weight depending only on the number of disagreeing
// sites between consecutive columns, so the inner loop is table lookups.
template <class Real>
MagnetizationPolynomial<Real> transfer_partition(const SpinDomain& domain, double beta,
                                                 int precision = kDefaultPrecision,
                                                 const Caps& caps = {}) {
    if (beta < 0) throw ConfigError("beta must be >= 0");
    if (!domain.is_rectangle())
        throw ConfigError("transfer_partition requires an axis-aligned rectangle");

    const int d = domain.dimension();
    const std::vector<int> ext = domain.extents();
    int long_axis = 0;
    for (int a = 1; a < d; ++a)
        if (ext[static_cast<std::size_t>(a)] > ext[static_cast<std::size_t>(long_axis)]) long_axis = a;
    const int ncols = ext[static_cast<std::size_t>(long_axis)];

    // Cross-section sites in lex order of their reduced coordinates.
    std::vector<Coord> cross;
    for (const auto& v : domain.vertices()) {
        if (v[static_cast<std::size_t>(long_axis)] !=
            domain.vertices()[0][static_cast<std::size_t>(long_axis)])
            continue;
        Coord c;
        for (int a = 0; a < d; ++a)
            if (a != long_axis) c.push_back(v[static_cast<std::size_t>(a)]);
        cross.push_back(std::move(c));
    }
    std::sort(cross.begin(), cross.end());
    const int w = static_cast<int>(cross.size());
    if (w > caps.max_state_width)
        throw CapExceeded("transfer_state_width", static_cast<std::uint64_t>(w),
                          static_cast<std::uint64_t>(caps.max_state_width));
    const std::uint32_t nstates = std::uint32_t{1} << w;
    const int n = domain.size();

    // Intra-column edges between cross-section bits.
    std::vector<std::pair<int, int>> cedges;
    for (int i = 0; i < w; ++i)
        for (int j = i + 1; j < w; ++j) {
            int dist = 0;
            for (std::size_t a = 0; a < cross[static_cast<std::size_t>(i)].size(); ++a)
                dist += std::abs(cross[static_cast<std::size_t>(i)][a] -
                                 cross[static_cast<std::size_t>(j)][a]);
            if (dist == 1) cedges.emplace_back(i, j);
        }
    const int nce = static_cast<int>(cedges.size());

    const auto vtab = detail::edge_weight_table<Real>(nce, beta);  // vertical
    const auto htab = detail::edge_weight_table<Real>(w, beta);    // horizontal, by agreements

    std::vector<Real> vweight(nstates);
    std::vector<int> mag(nstates);
    for (std::uint32_t s = 0; s < nstates; ++s) {
        int agree = 0;
        for (auto [i, j] : cedges)
            agree += (((s >> i) ^ (s >> j)) & 1u) ? -1 : +1;
        vweight[s] = vtab[static_cast<std::size_t>((agree + nce) / 2)];
        mag[s] = 2 * std::popcount(s) - w;
    }

    // dp[s][j] = total weight of the processed columns with last column in
    // state s and magnetization m = 2j - c*w after c columns.
    std::vector<std::vector<Real>> dp(nstates);
    for (std::uint32_t s = 0; s < nstates; ++s) {
        dp[s].assign(static_cast<std::size_t>(w) + 1, Real(0));
        dp[s][static_cast<std::size_t>((mag[s] + w) / 2)] = vweight[s];
    }

    for (int col = 1; col < ncols; ++col) {
        const std::size_t size = static_cast<std::size_t>(col * w) + 1;
        const std::size_t nsize = static_cast<std::size_t>((col + 1) * w) + 1;
        std::vector<std::vector<Real>> next(nstates);
        for (std::uint32_t t = 0; t < nstates; ++t) {
            std::vector<Real> acc(size, Real(0));
            for (std::uint32_t s = 0; s < nstates; ++s) {
                const Real& hw = htab[static_cast<std::size_t>(w - std::popcount(s ^ t))];
                const auto& src = dp[s];
                for (std::size_t j = 0; j < size; ++j)
                    if (!src[j].is_zero()) acc[j] += src[j] * hw;
            }
            std::vector<Real> row(nsize, Real(0));
            const std::size_t off = static_cast<std::size_t>((mag[t] + w) / 2);
            for (std::size_t j = 0; j < size; ++j) row[j + off] = acc[j] * vweight[t];
            next[t] = std::move(row);
        }
        dp = std::move(next);
    }

    MagnetizationPolynomial<Real> poly{domain, beta, precision, {}};
    poly.coeffs.assign(static_cast<std::size_t>(n) + 1, Real(0));
    for (int k = (n + 1) / 2; k <= n; ++k) {
        Real acc = 0;
        for (std::uint32_t s = 0; s < nstates; ++s) acc += dp[s][static_cast<std::size_t>(k)];
        poly.coeffs[static_cast<std::size_t>(k)] = acc;
    }
    detail::mirror_coefficients(poly.coeffs);
    return poly;
}

// Z(h) for real h, via the symmetric pairing c_0 + sum_{m>0} c_m (x^m + x^-m).
template <class Real>
Real evaluate(const MagnetizationPolynomial<Real>& poly, const Real& h) {
    const int n = poly.num_sites();
    const Real x = mp::exp(h);
    const Real xinv = Real(1) / x;
    const Real x2 = x * x, xinv2 = xinv * xinv;
    Real acc = (n % 2 == 0) ? poly.coeffs[static_cast<std::size_t>(n / 2)] : Real(0);
    Real xp = (n % 2 == 0) ? x2 : x;
    Real xm = (n % 2 == 0) ? xinv2 : xinv;
    for (int k = n / 2 + 1; k <= n; ++k) {
        acc += poly.coeffs[static_cast<std::size_t>(k)] * (xp + xm);
        xp *= x2;
        xm *= xinv2;
    }
    return acc;
}

// Z(h) for complex h.
template <class Real>
Complex<Real> evaluate(const MagnetizationPolynomial<Real>& poly, const Complex<Real>& h) {
    const int n = poly.num_sites();
    const Complex<Real> x = exp(h);
    const Complex<Real> xinv = exp(Complex<Real>(-h.re, -h.im));
    const Complex<Real> x2 = x * x, xinv2 = xinv * xinv;
    Complex<Real> acc = (n % 2 == 0)
                            ? Complex<Real>(poly.coeffs[static_cast<std::size_t>(n / 2)])
                            : Complex<Real>(Real(0));
    Complex<Real> xp = (n % 2 == 0) ? x2 : x;
    Complex<Real> xm = (n % 2 == 0) ? xinv2 : xinv;
    for (int k = n / 2 + 1; k <= n; ++k) {
        acc += poly.coeffs[static_cast<std::size_t>(k)] * (xp + xm);
        xp = xp * x2;
        xm = xm * xinv2;
    }
    return acc;
}

// ln Z(h) / |Lambda| at real field.
template <class Real>
Real free_energy_per_site(const MagnetizationPolynomial<Real>& poly, const Real& h) {
    return mp::log(evaluate(poly, h)) / poly.num_sites();
}

}  // namespace leeyang
