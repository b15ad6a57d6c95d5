#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "leeyang/partition.hpp"
#include "leeyang/zeros.hpp"
#include "support/oracles.hpp"

using namespace leeyang;
using Real = Real40;

namespace {

ZeroSet<Real> zeros_of(const SpinDomain& dom, double beta, double tol = 1e-20) {
    const auto poly = dom.is_rectangle() ? transfer_partition<Real>(dom, beta)
                                         : enumerate_partition<Real>(dom, beta);
    return find_zeros(poly, Real(tol));
}

}  // namespace

TEST_CASE("restriction to the imaginary axis reproduces Z(i theta) exactly") {
    const auto poly = enumerate_partition<Real>(make_rectangle(2, {2, 3}), 0.8);
    const auto q = imaginary_axis_restriction(poly);
    for (double t : {0.1, 0.7, 1.3, 2.9}) {
        const auto z = evaluate(poly, Complex<Real>{Real(0), Real(t)});
        CHECK(mp::fabs(q.evaluate(Real(t)) - z.re) <= q.derivative_scale(0) * Real("1e-36"));
        // reality: Im Z(i theta) vanishes up to representation error
        CHECK(mp::fabs(z.im) <= q.derivative_scale(0) * Real("1e-36"));
    }
}

TEST_CASE("restriction closed-form examples") {
    // single site: Q = 2 cos theta
    const auto single = imaginary_axis_restriction(
        enumerate_partition<Real>(make_rectangle(1, {1}), 1.3));
    CHECK(mp::fabs(single.evaluate(Real(0)) - 2) < Real("1e-38"));
    CHECK(mp::fabs(single.evaluate(pi_const<Real>() / 3) - 1) < Real("1e-38"));

    // two-site chain beta=1: Q = 2e cos 2theta + 2/e
    const auto chain = imaginary_axis_restriction(
        enumerate_partition<Real>(make_rectangle(1, {2}), 1.0));
    const Real q0 = chain.evaluate(Real(0));
    CHECK(mp::fabs(q0 - (2 * mp::exp(Real(1)) + 2 * mp::exp(Real(-1)))) < Real("1e-37"));

    // beta=0, N sites: Q(0) = 2^N
    const auto b0 = imaginary_axis_restriction(
        enumerate_partition<Real>(make_rectangle(2, {2, 2}), 0.0));
    CHECK(mp::fabs(b0.evaluate(Real(0)) - 16) < Real("1e-36"));
}

TEST_CASE("single site: the only zero is pi/2 for any beta") {
    for (double beta : {0.0, 0.9, 2.5}) {
        const auto zs = zeros_of(make_rectangle(1, {1}), beta);
        REQUIRE(zs.angles.size() == 1);
        CHECK(zs.multiplicity[0] == 1);
        CHECK(mp::fabs(zs.angles[0] - pi_const<Real>() / 2) < Real("1e-19"));
    }
}

TEST_CASE("beta=0 collapses all zeros onto pi/2 with full multiplicity") {
    // 4 sites: (2 cos theta)^4
    const auto zs4 = zeros_of(make_rectangle(1, {4}), 0.0);
    REQUIRE(zs4.angles.size() == 1);
    CHECK(zs4.multiplicity[0] == 4);
    CHECK(mp::fabs(zs4.angles[0] - pi_const<Real>() / 2) < Real("1e-19"));

    // 9 sites (odd multiplicity)
    const auto zs9 = zeros_of(make_rectangle(2, {3, 3}), 0.0);
    REQUIRE(zs9.angles.size() == 1);
    CHECK(zs9.multiplicity[0] == 9);
    CHECK(mp::fabs(zs9.angles[0] - pi_const<Real>() / 2) < Real("1e-19"));
}

TEST_CASE("two-site chain at beta=1 has the closed-form zeros") {
    const auto zs = zeros_of(make_rectangle(1, {2}), 1.0);
    REQUIRE(zs.angles.size() == 2);
    const Real t1 = mp::acos(-mp::exp(Real(-2))) / 2;
    CHECK(mp::fabs(zs.angles[0] - t1) < Real("1e-19"));
    CHECK(mp::fabs(zs.angles[1] - (pi_const<Real>() - t1)) < Real("1e-19"));
    CHECK(first_zero(zs) == zs.angles[0]);
}

TEST_CASE("completeness certificate on a mixed corpus") {
    for (const auto& dom : {make_rectangle(1, {13}), make_rectangle(2, {3, 4}),
                            make_rectangle(2, {4, 4}), make_rectangle(3, {2, 2, 3})}) {
        for (double beta : {0.0, 0.25, 0.6, 1.0}) {
            const auto zs = zeros_of(dom, beta);
            CHECK(zs.total_multiplicity() == dom.size());
            // ascending distinct angles inside (0, pi)
            for (std::size_t i = 0; i < zs.angles.size(); ++i) {
                CHECK(zs.angles[i] > 0);
                CHECK(zs.angles[i] < pi_const<Real>());
                if (i) CHECK(zs.angles[i] > zs.angles[i - 1]);
            }
        }
    }
}

TEST_CASE("endpoint signs: Q(0) > 0 and sign Q(pi) = (-1)^N") {
    for (const auto& dom : {make_rectangle(1, {5}), make_rectangle(2, {2, 3})}) {
        const auto q = imaginary_axis_restriction(transfer_partition<Real>(dom, 0.7));
        CHECK(q.evaluate(Real(0)) > 0);
        const Real qpi = q.evaluate(pi_const<Real>());
        if (dom.size() % 2 == 0)
            CHECK(qpi > 0);
        else
            CHECK(qpi < 0);
    }
}

TEST_CASE("residuals sit below the declared tolerance scale") {
    const auto poly = transfer_partition<Real>(make_rectangle(2, {3, 3}), 0.4);
    const Real tol("1e-20");
    const auto zs = find_zeros(poly, tol);
    const auto q = imaginary_axis_restriction(poly);
    for (const auto& r : zs.residuals) CHECK(r <= tol * q.derivative_scale(1));
}

TEST_CASE("halving the tolerance moves each zero by less than the coarser one") {
    const auto poly = transfer_partition<Real>(make_rectangle(2, {2, 3}), 0.9);
    const Real tol1("1e-14"), tol2("5e-15");
    const auto z1 = find_zeros(poly, tol1);
    const auto z2 = find_zeros(poly, tol2);
    REQUIRE(z1.angles.size() == z2.angles.size());
    for (std::size_t i = 0; i < z1.angles.size(); ++i)
        CHECK(mp::fabs(z1.angles[i] - z2.angles[i]) < tol1);
}

TEST_CASE("the disk below the first zero is zero-free with margin") {
    const auto poly = transfer_partition<Real>(make_rectangle(2, {3, 3}), 0.3);
    const auto zs = find_zeros(poly, Real("1e-20"));
    const Real r = Real("0.95") * first_zero(zs);
    const Real z0 = poly.coefficient_sum();
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double re = unit(rng), im = unit(rng);
        const double norm = std::sqrt(re * re + im * im);
        if (norm == 0) continue;
        const double radius = std::abs(unit(rng));
        const Complex<Real> h{Real(re / norm * radius) * r, Real(im / norm * radius) * r};
        const Real magnitude = abs(evaluate(poly, h));
        CHECK(magnitude > z0 * pow10<Real>(-20));
    }
}

TEST_CASE("periodic zero sum: single site equals the analytic 1/2") {
    const auto zs = zeros_of(make_rectangle(1, {1}), 0.8);
    const auto s = periodic_zero_sum(zs, 1, Real("1e-8"));
    CHECK(mp::fabs(s.value - Real("0.5")) <= Real("0.5") * Real("1.1e-8"));
    CHECK(s.tail_bound <= s.value * Real("1e-8"));
}

TEST_CASE("periodic zero sums match the lattice-sum closed forms") {
    for (const auto& dom : {make_rectangle(1, {2}), make_rectangle(2, {2, 2})}) {
        for (double beta : {0.5, 1.0}) {
            const auto zs = zeros_of(dom, beta);
            Real exact1 = 0, exact2 = 0;
            for (std::size_t j = 0; j < zs.angles.size(); ++j) {
                exact1 += zs.multiplicity[j] * oracles::lattice_sum_k1(zs.angles[j]);
                exact2 += zs.multiplicity[j] * oracles::lattice_sum_k2(zs.angles[j]);
            }
            const auto s1 = periodic_zero_sum(zs, 1, Real("1e-9"));
            const auto s2 = periodic_zero_sum(zs, 2, Real("1e-9"));
            CHECK(mp::fabs(s1.value - exact1) <= exact1 * Real("1.1e-9"));
            CHECK(mp::fabs(s2.value - exact2) <= exact2 * Real("1.1e-9"));
            // truncation undershoots, and by no more than the certified tail
            CHECK(s1.value <= exact1);
            CHECK(exact1 - s1.value <= s1.tail_bound);
        }
    }
}

TEST_CASE("large k is dominated by the first zero") {
    const auto zs = zeros_of(make_rectangle(1, {2}), 1.0);
    const auto s = periodic_zero_sum(zs, 8, Real("1e-10"));
    const Real dominant = mp::pow(first_zero(zs), -16);
    CHECK(mp::fabs(s.value / dominant - 1) < Real("1e-5"));
}

TEST_CASE("near-degenerate clusters: refusal at P=30, resolved at P=60") {
    // At beta = 1e-9 the eight zeros split from pi/2 by ~sqrt(beta); the dips
    // between them sit below the 40-digit noise floor, so the finder must
    // refuse rather than report noise. Raising P resolves the cluster.
    const auto dom = make_rectangle(1, {8});
    const auto poly30 = transfer_partition<Real>(dom, 1e-9, 30);
    CHECK_THROWS_AS(find_zeros(poly30, Real("1e-20")), ZeroCountError);

    const auto poly60 = transfer_partition<Real60>(dom, 1e-9, 60);
    const auto zs = find_zeros(poly60, Real60("1e-40"));
    CHECK(zs.total_multiplicity() == 8);
    CHECK(zs.angles.size() == 8);
    for (const auto& a : zs.angles)
        CHECK(mp::fabs(a - pi_const<Real60>() / 2) < Real60("1e-4"));
}

TEST_CASE("theta_tol outside the resolvable range is rejected") {
    const auto poly = enumerate_partition<Real>(make_rectangle(1, {3}), 0.5);
    CHECK_THROWS_AS(find_zeros(poly, Real("1e-30")), ConfigError);  // below 10^-(P-8)
    CHECK_THROWS_AS(find_zeros(poly, Real("1e-10")), ConfigError);  // above 1e-12
    CHECK_THROWS_AS(periodic_zero_sum(find_zeros(poly, Real("1e-20")), 0, Real("1e-6")),
                    ConfigError);
}
