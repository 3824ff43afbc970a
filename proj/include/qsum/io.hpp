#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsum/product.hpp"
#include "qsum/qdiff_operator.hpp"
#include "qsum/series.hpp"

namespace qsum {

using Json = nlohmann::json;

// "re,im" -> complex; a bare real is accepted too.
inline Complex parse_complex(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double re = std::stod(s, &pos);
        if (pos == s.size()) return {re, 0.0};
        if (s[pos] != ',') throw ParseError("");
        std::size_t pos2 = 0;
        const double im = std::stod(s.substr(pos + 1), &pos2);
        if (pos + 1 + pos2 != s.size()) throw ParseError("");
        return {re, im};
    } catch (const std::exception&) {
        throw ParseError("bad complex literal (want re,im): '" + s + "'");
    }
}

// "r@theta" (surface point, theta unreduced) or "re,im" (principal lift).
inline LogPoint parse_logpoint(const std::string& s) {
    const auto at = s.find('@');
    if (at == std::string::npos) {
        const Complex z = parse_complex(s);
        if (z == Complex(0.0)) throw ParseError("zero has no surface lift: '" + s + "'");
        return LogPoint::from_complex(z);
    }
    try {
        const double r = std::stod(s.substr(0, at));
        const double th = std::stod(s.substr(at + 1));
        if (!(r > 0.0)) throw ParseError("");
        return {r, th};
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("bad surface point (want r@theta): '" + s + "'");
    }
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex entry must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

// Series literal: array of [re, im], index = power of x.
inline Json series_to_json(const FormalSeries& f) {
    Json arr = Json::array();
    for (const Complex& c : f.coefficients()) arr.push_back(complex_to_json(c));
    return arr;
}

inline FormalSeries series_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("series must be a nonempty array");
    std::vector<Complex> c;
    c.reserve(j.size());
    for (const auto& e : j) c.push_back(complex_from_json(e));
    return FormalSeries(std::move(c));
}

// Operator literal: map {"j": series}, j a non-negative shift exponent.
inline Json operator_to_json(const QDifferenceOperator& L) {
    Json obj = Json::object();
    for (const auto& [j, a] : L.terms) obj[std::to_string(j)] = series_to_json(a);
    return obj;
}

inline QDifferenceOperator operator_from_json(const Json& j) {
    if (!j.is_object() || j.empty()) throw ParseError("operator must be a nonempty object");
    std::map<int, FormalSeries> terms;
    for (const auto& [key, val] : j.items()) {
        int shift = 0;
        try {
            std::size_t pos = 0;
            shift = std::stoi(key, &pos);
            if (pos != key.size()) throw ParseError("");
        } catch (const std::exception&) {
            throw ParseError("operator key must be an integer shift exponent: '" + key + "'");
        }
        terms.emplace(shift, series_from_json(val));
    }
    return QDifferenceOperator(std::move(terms));
}

// Decomposition literal: {"terms": [{"prefactor": series, "radius": r,
// "a": [re, im], "m": int}, ...]}; a term without "a" is purely convergent.
inline Json decomposition_to_json(const EulerDecomposition& dec) {
    Json arr = Json::array();
    for (const auto& t : dec.terms) {
        Json term = Json::object();
        term["prefactor"] = series_to_json(t.prefactor);
        term["radius"] = t.radius;
        if (t.factor) {
            term["a"] = complex_to_json(t.factor->a);
            term["m"] = t.factor->m;
        }
        arr.push_back(std::move(term));
    }
    return Json{{"terms", std::move(arr)}};
}

inline EulerDecomposition decomposition_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        throw ParseError("decomposition must be {\"terms\": [...]}");
    EulerDecomposition dec;
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("prefactor"))
            throw ParseError("decomposition term needs a prefactor");
        EulerDecomposition::Term term;
        term.prefactor = series_from_json(t["prefactor"]);
        term.radius = t.value("radius", 1.0);
        if (!(term.radius > 0.0)) throw ParseError("term radius must be positive");
        if (t.contains("a"))
            term.factor = EulerFactor{complex_from_json(t["a"]), t.value("m", 0)};
        dec.terms.push_back(std::move(term));
    }
    if (dec.terms.empty()) throw ParseError("decomposition has no terms");
    return dec;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
}

}  // namespace qsum
