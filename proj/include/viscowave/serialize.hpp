#pragma once

// JSON encoding of measures, representations and materials. Field names
// follow schema/viscowave.schema.json (schema_version 1). Infinite upper
// support bounds are written as null.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "viscowave/acoustics.hpp"
#include "viscowave/duality.hpp"
#include "viscowave/error.hpp"
#include "viscowave/functions.hpp"
#include "viscowave/measure.hpp"

namespace viscowave {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline double number(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw SchemaError(std::string("expected numeric field '") + key + "'");
    return j.at(key).get<double>();
}

inline double number_or(const Json& j, const char* key, double fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    if (!j.at(key).is_number()) throw SchemaError(std::string("field '") + key + "' must be numeric");
    return j.at(key).get<double>();
}

inline std::vector<double> numbers(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw SchemaError(std::string("expected numeric array '") + key + "'");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw SchemaError(std::string("array '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline std::vector<std::pair<double, double>> pairs(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw SchemaError(std::string("expected array of pairs '") + key + "'");
    std::vector<std::pair<double, double>> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw SchemaError(std::string("entries of '") + key + "' must be [number, number]");
        out.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return out;
}

inline std::string kind_of(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw SchemaError("expected an object with a string 'kind'");
    return j.at("kind").get<std::string>();
}

// Accepts a single object or an array of objects.
inline std::vector<Json> as_list(const Json& j) {
    if (j.is_array()) return {j.begin(), j.end()};
    return {j};
}

inline Json bound(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

} // namespace detail

inline Json to_json(const Density& d) {
    Json j;
    if (auto p = d.as<PowerDensity>()) {
        j["kind"] = "power";
        j["coeff"] = p->coeff;
        j["exponent"] = p->exponent;
        j["lo"] = p->lo;
        j["hi"] = detail::bound(p->hi);
    } else if (auto e = d.as<ExpDensity>()) {
        j["kind"] = "exp";
        Json terms = Json::array();
        for (const auto& t : e->terms) terms.push_back({t.coeff, t.rate});
        j["terms"] = terms;
    } else {
        const auto& t = std::get<TableDensity>(d.model());
        j["kind"] = "table";
        j["r"] = t.r;
        j["value"] = t.value;
    }
    return j;
}

inline Density density_from_json(const Json& j) {
    const std::string kind = detail::kind_of(j);
    if (kind == "power") {
        return PowerDensity{detail::number_or(j, "coeff", 1.0), detail::number(j, "exponent"),
                            detail::number_or(j, "lo", 0.0), detail::number_or(j, "hi", kInf)};
    }
    if (kind == "exp") {
        ExpDensity e;
        for (auto [c, s] : detail::pairs(j, "terms")) e.terms.push_back({c, s});
        return e;
    }
    if (kind == "table") return TableDensity{detail::numbers(j, "r"), detail::numbers(j, "value")};
    throw SchemaError("unknown density kind '" + kind + "'");
}

inline Json to_json(const RadonMeasure& m) {
    Json j;
    Json atoms = Json::array();
    for (const auto& a : m.atoms()) atoms.push_back({a.location, a.weight});
    j["atoms"] = atoms;
    if (!m.densities().empty()) {
        Json d = Json::array();
        for (const auto& x : m.densities()) d.push_back(to_json(x));
        j["density"] = d;
    }
    return j;
}

inline RadonMeasure measure_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("measure must be a JSON object");
    std::vector<Atom> atoms;
    if (j.contains("atoms"))
        for (auto [r, w] : detail::pairs(j, "atoms")) atoms.push_back({r, w});
    std::vector<Density> dens;
    if (j.contains("density") && !j.at("density").is_null())
        for (const auto& d : detail::as_list(j.at("density"))) dens.push_back(density_from_json(d));
    return RadonMeasure(std::move(atoms), std::move(dens));
}

inline Json to_json(const Kernel& k) {
    Json j;
    if (auto p = std::get_if<PowerKernel>(&k)) {
        j["kind"] = "power";
        j["c"] = p->c;
        j["alpha"] = p->alpha;
    } else if (auto e = std::get_if<ExpSumKernel>(&k)) {
        j["kind"] = "expsum";
        Json terms = Json::array();
        for (const auto& t : e->terms) terms.push_back({t.weight, t.rate});
        j["terms"] = terms;
    } else if (auto t = std::get_if<TableKernel>(&k)) {
        j["kind"] = "table";
        j["t"] = t->t;
        j["k"] = t->k;
    } else {
        j["kind"] = "tail";
        j["measure"] = to_json(std::get<TailKernel>(k).measure);
    }
    return j;
}

inline Kernel kernel_from_json(const Json& j) {
    const std::string kind = detail::kind_of(j);
    if (kind == "power") return PowerKernel{detail::number_or(j, "c", 1.0), detail::number(j, "alpha")};
    if (kind == "expsum") {
        ExpSumKernel e;
        for (auto [w, r] : detail::pairs(j, "terms")) e.terms.push_back({w, r});
        return e;
    }
    if (kind == "table") return TableKernel{detail::numbers(j, "t"), detail::numbers(j, "k")};
    if (kind == "tail") {
        if (!j.contains("measure")) throw SchemaError("tail kernel needs a 'measure'");
        return TailKernel{measure_from_json(j.at("measure"))};
    }
    throw SchemaError("unknown kernel kind '" + kind + "'");
}

inline Json to_json(const CrfRepr& c) {
    Json j;
    j["a"] = c.a;
    j["b"] = c.b;
    Json ks = Json::array();
    for (const auto& k : c.kernel) ks.push_back(to_json(k));
    j["kernel"] = ks;
    return j;
}

inline CrfRepr crf_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("creep representation must be a JSON object");
    CrfRepr c{detail::number_or(j, "a", 0.0), detail::number_or(j, "b", 0.0), {}};
    if (j.contains("kernel") && !j.at("kernel").is_null())
        for (const auto& k : detail::as_list(j.at("kernel"))) c.kernel.push_back(kernel_from_json(k));
    validate(c);
    return c;
}

template <class Repr>
Json triple_to_json(const Repr& f) {
    Json j;
    j["a"] = f.a;
    j["b"] = f.b;
    j["measure"] = to_json(f.measure);
    return j;
}

inline Json to_json(const BernsteinRepr& f) { return triple_to_json(f); }
inline Json to_json(const StieltjesRepr& f) { return triple_to_json(f); }

template <class Repr>
Repr triple_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("representation must be a JSON object");
    Repr f;
    f.a = detail::number_or(j, "a", 0.0);
    f.b = detail::number_or(j, "b", 0.0);
    if (j.contains("measure")) f.measure = measure_from_json(j.at("measure"));
    validate(f);
    return f;
}

inline BernsteinRepr bernstein_from_json(const Json& j) { return triple_from_json<BernsteinRepr>(j); }
inline StieltjesRepr stieltjes_from_json(const Json& j) { return triple_from_json<StieltjesRepr>(j); }

inline Json to_json(const Material& m) {
    Json j;
    j["rho"] = m.rho;
    j["creep"] = to_json(m.creep);
    return j;
}

/// {"rho": .., "creep": {...}} or {"rho": .., "bernstein": {...}}; the latter
/// is mapped to its creep compliance.
inline Material material_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("material must be a JSON object");
    Material m;
    m.rho = detail::number_or(j, "rho", 1.0);
    if (j.contains("creep"))
        m.creep = crf_from_json(j.at("creep"));
    else if (j.contains("bernstein"))
        m.creep = bf_to_crf(bernstein_from_json(j.at("bernstein")));
    else
        throw SchemaError("material needs 'creep' or 'bernstein'");
    validate(m);
    return m;
}

inline Json to_json(const BoundConstants& c) {
    Json j;
    j["form"] = c.form == BoundConstants::Form::linear ? "linear" : "square_root";
    j["K"] = c.K;
    j["L"] = c.L;
    j["sqrt_coeff"] = c.sqrt_coeff;
    j["m"] = c.m;
    j["M"] = c.M;
    j["A1"] = c.A1;
    j["T"] = c.T;
    j["a"] = c.a;
    j["b"] = c.b;
    return j;
}

inline Json to_json(const PowerLawFit& f) {
    Json j;
    j["A"] = f.A;
    j["alpha"] = f.alpha;
    j["r2"] = f.r2;
    j["rows"] = f.rows;
    return j;
}

inline Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json to_json(const CrfVerdict& v) {
    Json j;
    j["class"] = "crf";
    j["pass"] = v.is_crf;
    j["witness"] = optional_number(v.witness);
    j["reason"] = v.reason;
    j["tolerances"] = {{"absolute", v.tolerance}, {"scaled_by", "1+|f|"}};
    return j;
}

inline Json to_json(const DifferenceVerdict& v, const std::string& cls, double tolerance = kVerdictTolerance) {
    Json j;
    j["class"] = cls;
    j["pass"] = v.pass;
    j["witness"] = optional_number(v.witness);
    j["failing_order"] = v.failing_order ? Json(*v.failing_order) : Json(nullptr);
    j["first_failure"] = optional_number(v.first_failure);
    j["tolerances"] = {{"relative", tolerance}, {"at_failure", v.failing_order ? Json(v.tolerance) : Json(nullptr)}};
    return j;
}

inline Json to_json(const NevanlinnaVerdict& v) {
    Json j;
    j["class"] = "cbf";
    j["pass"] = v.pass;
    j["witness"] = v.witness ? Json::array({v.witness->real(), v.witness->imag()}) : Json(nullptr);
    j["tolerances"] = {{"relative", v.tolerance}};
    return j;
}

inline Json to_json(const BoundReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["constants"] = to_json(r.constants);
    j["K"] = r.constants.K;
    j["L"] = r.constants.L;
    j["max_violation"] = r.max_violation;
    j["worst_omega"] = r.worst_omega;
    j["tolerance"] = r.tolerance;
    j["holds"] = r.holds;
    return j;
}

inline Json to_json(const FrontReport& f) {
    Json j;
    j["front_arrival"] = optional_number(f.front_arrival);
    j["expected_arrival"] = optional_number(f.expected_arrival);
    j["first_crossing"] = optional_number(f.first_crossing);
    j["leakage"] = optional_number(f.leakage);
    j["rise_time"] = f.rise_time;
    j["max_abs"] = f.max_abs;
    j["threshold"] = f.threshold;
    return j;
}

} // namespace viscowave
