#pragma once

// Extended-precision scalar used throughout the engine. Sector weights span
// many orders of magnitude (e^{beta * #edges} against e^{-beta * #edges}),
// and zero isolation takes signed combinations of them, so plain doubles are
// not an option. Backed by boost::multiprecision binary floats: a requested
// decimal precision P is served by the next canned backend with at least ten
// guard digits.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <limits>
#include <string>

#include "leeyang/errors.hpp"

namespace leeyang {

namespace mp = boost::multiprecision;

template <unsigned Digits10>
using BinFloat = mp::number<mp::cpp_bin_float<Digits10>, mp::et_off>;

using Real40 = BinFloat<40>;  // serves requested P <= 30 (default)
using Real60 = BinFloat<60>;  // serves requested P <= 50
using Real80 = BinFloat<80>;  // serves requested P <= 70

inline constexpr int kDefaultPrecision = 30;
inline constexpr int kMaxPrecision = 70;

// Calls f with a default-initialized value of the backend serving P digits;
// f must be a generic callable. Throws ConfigError outside (0, kMaxPrecision].
template <class F>
decltype(auto) with_precision(int p, F&& f) {
    if (p < 1 || p > kMaxPrecision)
        throw ConfigError("precision must be in [1, " + std::to_string(kMaxPrecision) +
                          "], got " + std::to_string(p));
    if (p <= 30) return f(Real40{});
    if (p <= 50) return f(Real60{});
    return f(Real80{});
}

template <class Real>
Real pi_const() {
    return boost::math::constants::pi<Real>();
}

// Unit roundoff of the backend, as a power of ten; used to size the
// zero-bands below which a computed sign is not trustworthy.
template <class Real>
Real representation_eps() {
    return std::numeric_limits<Real>::epsilon();
}

template <class Real>
Real pow10(int e) {
    return mp::pow(Real(10), e);
}

// Decimal rendering with enough digits to reconstruct the value exactly.
template <class Real>
std::string to_exact_string(const Real& x) {
    return x.str(std::numeric_limits<Real>::max_digits10, std::ios_base::scientific);
}

// Decimal rendering at a requested significant-digit count (display/CSV).
template <class Real>
std::string to_decimal_string(const Real& x, int digits) {
    return x.str(digits, std::ios_base::scientific);
}

// --- minimal complex arithmetic over Real ---------------------------------
//
// std::complex is not specified for user-defined floating types, and the
// engine only needs a handful of operations: evaluation of sector sums at
// complex field, |z|, and log z for the Taylor-consistency check.

template <class Real>
struct Complex {
    Real re{};
    Real im{};

    Complex() = default;
    Complex(Real r) : re(std::move(r)) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    friend Complex operator+(const Complex& a, const Complex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend Complex operator-(const Complex& a, const Complex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Real& s, const Complex& a) { return {s * a.re, s * a.im}; }
    Complex& operator+=(const Complex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
};

template <class Real>
Real abs2(const Complex<Real>& z) {
    return z.re * z.re + z.im * z.im;
}

template <class Real>
Real abs(const Complex<Real>& z) {
    return mp::sqrt(abs2(z));
}

template <class Real>
Complex<Real> exp(const Complex<Real>& z) {
    const Real r = mp::exp(z.re);
    return {r * mp::cos(z.im), r * mp::sin(z.im)};
}

// Principal branch.
template <class Real>
Complex<Real> log(const Complex<Real>& z) {
    return {mp::log(abs(z)), mp::atan2(z.im, z.re)};
}

}  // namespace leeyang
