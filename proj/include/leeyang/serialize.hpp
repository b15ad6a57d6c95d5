#pragma once

// JSON serialization of engine objects. Extended-precision values are stored
// as {"mantissa": <integer string>, "exp2": e} with value = mantissa * 2^e,
// which round-trips losslessly for any binary backend. Human-facing decimal
// strings are emitted alongside where a report is meant to be read.

#include <json.hpp>

#include <cstdint>
#include <string>

#include "leeyang/cumulants.hpp"
#include "leeyang/highreal.hpp"
#include "leeyang/identities.hpp"
#include "leeyang/lattice.hpp"
#include "leeyang/partition.hpp"
#include "leeyang/thermo.hpp"
#include "leeyang/zeros.hpp"

namespace leeyang {

using json = nlohmann::json;

template <class Real>
json real_to_json(const Real& x) {
    if (x.is_zero()) return json{{"mantissa", "0"}, {"exp2", 0}};
    int e = 0;
    const Real fr = mp::frexp(x, &e);
    const int bits = std::numeric_limits<Real>::digits;
    const Real mant = mp::ldexp(fr, bits);  // integer by construction
    return json{{"mantissa", mant.str(0, std::ios_base::fixed)}, {"exp2", e - bits}};
}

template <class Real>
Real real_from_json(const json& j) {
    const Real mant(j.at("mantissa").get<std::string>());
    return mp::ldexp(mant, j.at("exp2").get<int>());
}

inline json domain_to_json(const SpinDomain& d) {
    json verts = json::array();
    for (const auto& v : d.vertices()) verts.push_back(v);
    json edges = json::array();
    for (const auto& [a, b] : d.edges()) edges.push_back(json::array({a, b}));
    return json{{"dimension", d.dimension()}, {"vertices", verts}, {"edges", edges}};
}

inline SpinDomain domain_from_json(const json& j) {
    std::vector<Coord> verts;
    for (const auto& v : j.at("vertices")) verts.push_back(v.get<Coord>());
    return SpinDomain::from_vertices(j.at("dimension").get<int>(), std::move(verts));
}

template <class Real>
json polynomial_to_json(const MagnetizationPolynomial<Real>& p) {
    json coeffs = json::array();
    for (const auto& c : p.coeffs) coeffs.push_back(real_to_json(c));
    return json{{"domain", domain_to_json(p.domain)},
                {"beta", p.beta},
                {"precision", p.precision},
                {"coefficients", coeffs}};
}

template <class Real>
MagnetizationPolynomial<Real> polynomial_from_json(const json& j) {
    MagnetizationPolynomial<Real> p{domain_from_json(j.at("domain")), j.at("beta").get<double>(),
                                    j.at("precision").get<int>(), {}};
    for (const auto& c : j.at("coefficients")) p.coeffs.push_back(real_from_json<Real>(c));
    return p;
}

template <class Real>
json zeroset_to_json(const ZeroSet<Real>& zs) {
    json theta = json::array(), mult = json::array(), resid = json::array();
    for (std::size_t i = 0; i < zs.angles.size(); ++i) {
        theta.push_back(to_exact_string(zs.angles[i]));
        mult.push_back(zs.multiplicity[i]);
        resid.push_back(to_exact_string(zs.residuals[i]));
    }
    return json{{"domain", domain_to_json(zs.domain)},
                {"beta", zs.beta},
                {"precision", zs.precision},
                {"theta", theta},
                {"multiplicity", mult},
                {"residual", resid},
                {"tol", to_exact_string(zs.theta_tol)},
                {"num_sites", zs.domain.size()},
                {"total_multiplicity", zs.total_multiplicity()}};
}

template <class Real>
json cumulants_to_json(const CumulantVector<Real>& cv) {
    json u = json::array();
    for (int k = 1; k <= cv.k_max; ++k) u.push_back(to_exact_string(cv.u[static_cast<std::size_t>(k)]));
    return json{{"domain", domain_to_json(cv.domain)},
                {"beta", cv.beta},
                {"precision", cv.precision},
                {"k_max", cv.k_max},
                {"u", u}};
}

inline json check_report_to_json(const CheckReport& r) {
    return json{{"name", r.name},       {"domain", r.domain_label}, {"beta", r.beta},
                {"precision", r.precision}, {"lhs", r.lhs},         {"rhs", r.rhs},
                {"rel_gap", r.rel_gap}, {"tolerance", r.tolerance}, {"pass", r.pass},
                {"note", r.note}};
}

template <class Real>
json fit_to_json(const PowerFit<Real>& f) {
    json j{{"label", f.label}, {"valid", f.valid}};
    if (f.valid) {
        j["p"] = to_decimal_string(f.p, 20);
        j["a"] = to_decimal_string(f.a, 20);
        j["b"] = to_decimal_string(f.b, 20);
        j["rms_residual"] = to_decimal_string(f.rms, 20);
    }
    return j;
}

template <class Real>
json radius_estimate_to_json(const RadiusEstimate<Real>& e) {
    json alpha = json::array();
    for (const auto& a : e.alpha1) alpha.push_back(to_exact_string(a));
    json j{{"d", e.d},
           {"beta", e.beta},
           {"precision", e.precision},
           {"n", e.ns},
           {"num_sites", e.sizes},
           {"alpha1", alpha},
           {"fit_p1", fit_to_json(e.fit_p1)},
           {"fit_p2", fit_to_json(e.fit_p2)},
           {"fit_free", fit_to_json(e.fit_free)},
           {"chosen_fit", e.chosen},
           {"extrapolated", to_decimal_string(e.extrapolated, 20)},
           {"clamped_at_zero", e.clamped}};
    if (e.has_reference) {
        j["reference"] = to_decimal_string(e.reference, 20);
        j["reference_kind"] = e.reference_kind;
    }
    return j;
}

// Shortest round-trip decimal form of a double (nlohmann's serializer).
inline std::string format_double(double x) {
    return json(x).dump();
}

}  // namespace leeyang
