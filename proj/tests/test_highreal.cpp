#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "leeyang/highreal.hpp"
#include "leeyang/serialize.hpp"

using namespace leeyang;

TEST_CASE("precision dispatch selects a backend with guard digits") {
    with_precision(30, [](auto tag) {
        using Real = decltype(tag);
        CHECK(std::numeric_limits<Real>::digits10 >= 40);
    });
    with_precision(45, [](auto tag) {
        using Real = decltype(tag);
        CHECK(std::numeric_limits<Real>::digits10 >= 55);
    });
    with_precision(60, [](auto tag) {
        using Real = decltype(tag);
        CHECK(std::numeric_limits<Real>::digits10 >= 70);
    });
    CHECK_THROWS_AS(with_precision(0, [](auto) {}), ConfigError);
    CHECK_THROWS_AS(with_precision(71, [](auto) {}), ConfigError);
}

TEST_CASE("mantissa/exp2 serialization round-trips bit-exactly") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> scale(-200, 200);
    for (int i = 0; i < 200; ++i) {
        Real40 x = Real40(mant(rng)) * mp::pow(Real40(3), scale(rng) % 40) /
                   mp::pow(Real40(7), scale(rng) % 20);
        const Real40 back = real_from_json<Real40>(real_to_json(x));
        CHECK(back == x);
    }
    CHECK(real_from_json<Real40>(real_to_json(Real40(0))) == 0);
    const Real40 tiny = mp::exp(Real40(-500));
    CHECK(real_from_json<Real40>(real_to_json(tiny)) == tiny);
    const Real60 pi60 = pi_const<Real60>();
    CHECK(real_from_json<Real60>(real_to_json(pi60)) == pi60);
}

TEST_CASE("complex helpers agree with their real specializations") {
    const Real40 x("0.7312"), y("-1.25");
    const Complex<Real40> z{x, y};
    CHECK(mp::fabs(abs2(z) - (x * x + y * y)).is_zero());

    const auto e = exp(z);
    CHECK(mp::fabs(abs(e) - mp::exp(x)) < Real40("1e-38"));

    const auto l = log(Complex<Real40>{mp::exp(Real40(2)), Real40(0)});
    CHECK(mp::fabs(l.re - 2) < Real40("1e-38"));
    CHECK(l.im.is_zero());

    // log(exp(z)) == z for |Im z| < pi
    const auto z2 = log(exp(z));
    CHECK(mp::fabs(z2.re - z.re) < Real40("1e-37"));
    CHECK(mp::fabs(z2.im - z.im) < Real40("1e-37"));
}

TEST_CASE("exact and display strings parse back consistently") {
    const Real40 v = mp::sqrt(Real40(2)) * mp::pow(Real40(10), -25);
    CHECK(Real40(to_exact_string(v)) == v);
    const std::string disp = to_decimal_string(v, 20);
    CHECK(mp::fabs(Real40(disp) - v) < mp::fabs(v) * Real40("1e-18"));
}
