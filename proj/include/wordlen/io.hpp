// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file io.hpp
 * @brief JSON forms of matrix sets, length reports and pipeline witnesses.
 *
 * Literal format:
 *   {"field": {"p": 5, "e": 1}, "n": 3, "matrices": [[[..],[..],[..]], ...]}
 * Prime-field entries are integers (reduced mod p). Extension-field entries
 * are coefficient vectors over GF(p), low degree first; "modulus" (monic,
 * low degree first) fixes the defining polynomial, otherwise the default one
 * for (p, e) is used. p = 0 selects the rationals, with entries given as
 * integers or "a/b" strings.
 */

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordlen/constructive.hpp"
#include "wordlen/error.hpp"
#include "wordlen/extension.hpp"
#include "wordlen/matrix.hpp"
#include "wordlen/spans.hpp"

namespace wordlen {

using Json = nlohmann::ordered_json;

/// A parsed literal: exactly one of `finite` / `rational` is populated.
struct MatrixSetLiteral {
    std::uint64_t p = 2;
    unsigned e = 1;
    std::size_t n = 0;
    Field field;
    std::vector<Mat> finite;
    std::vector<Matrix<Rationals>> rational;

    bool is_rational() const { return p == 0; }
};

namespace detail {

inline Field::Elem parse_elem(const Field& F, const Json& j) {
    if (j.is_number_integer()) return F.from_int(j.get<std::int64_t>());
    if (j.is_array()) {
        if (j.size() > F.degree()) throw DomainError("coefficient vector longer than the extension degree");
        std::vector<std::uint64_t> c(F.degree(), 0);
        for (std::size_t i = 0; i < j.size(); ++i) {
            const auto v = j[i].get<std::int64_t>();
            const auto p = static_cast<std::int64_t>(F.characteristic());
            c[i] = static_cast<std::uint64_t>(((v % p) + p) % p);
        }
        return F.from_coeffs(c);
    }
    throw DomainError("field element must be an integer or a coefficient vector");
}

inline Rationals::Elem parse_rational(const Json& j) {
    if (j.is_number_integer()) return Rationals::Elem(j.get<std::int64_t>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        try {
            const auto slash = s.find('/');
            if (slash == std::string::npos) return Rationals::Elem(boost::multiprecision::cpp_int(s));
            const boost::multiprecision::cpp_int num(s.substr(0, slash)), den(s.substr(slash + 1));
            if (den == 0) throw DomainError("zero denominator in " + s);
            return Rationals::Elem(num, den);
        } catch (const std::runtime_error&) {
            throw DomainError("malformed rational " + s);
        }
    }
    throw DomainError("rational entry must be an integer or an \"a/b\" string");
}

template <class D, class ParseElem>
std::vector<Matrix<D>> parse_matrices(const D& dom, std::size_t n, const Json& arr, ParseElem parse) {
    if (!arr.is_array() || arr.empty()) throw DomainError("\"matrices\" must be a non-empty array");
    std::vector<Matrix<D>> out;
    for (const auto& m : arr) {
        if (!m.is_array() || m.size() != n) throw DomainError("each matrix must have n rows");
        Matrix<D> a(dom, n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!m[i].is_array() || m[i].size() != n) throw DomainError("each row must have n entries");
            for (std::size_t j = 0; j < n; ++j) a(i, j) = parse(m[i][j]);
        }
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace detail

inline Json field_to_json(const Field& F) {
    Json j;
    j["p"] = F.characteristic();
    j["e"] = F.degree();
    if (F.degree() > 1) j["modulus"] = F.modulus();
    return j;
}

inline Field field_from_json(const Json& j) {
    const auto p = j.at("p").get<std::uint64_t>();
    const auto e = j.value("e", 1u);
    if (j.contains("modulus")) return field_from_modulus(p, j["modulus"].get<std::vector<std::uint64_t>>());
    return make_field(p, e);
}

inline Json elem_to_json(const Field& F, Field::Elem a) {
    if (F.degree() == 1) return a;
    return F.coeffs(a);
}

inline Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(elem_to_json(m.domain(), m(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline Json matrix_to_json(const Matrix<Rationals>& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const auto& x = m(i, j);
            if (denominator(x) == 1)
                r.push_back(static_cast<std::int64_t>(numerator(x)));
            else
                r.push_back(x.str());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline Json literal_to_json(const std::vector<Mat>& s) {
    Json j;
    j["field"] = field_to_json(s.at(0).domain());
    j["n"] = s[0].rows();
    j["matrices"] = Json::array();
    for (const auto& m : s) j["matrices"].push_back(matrix_to_json(m));
    return j;
}

inline MatrixSetLiteral literal_from_json(const Json& j) {
    MatrixSetLiteral out;
    if (!j.contains("field") || !j.contains("matrices")) throw DomainError("literal needs \"field\" and \"matrices\"");
    out.p = j["field"].at("p").get<std::uint64_t>();
    out.e = j["field"].value("e", 1u);
    const auto& mats = j["matrices"];
    if (!mats.is_array() || mats.empty() || !mats[0].is_array()) throw DomainError("\"matrices\" must be a non-empty array");
    out.n = j.contains("n") ? j["n"].get<std::size_t>() : mats[0].size();
    if (out.n == 0) throw DomainError("n must be positive");
    if (out.p == 0) {
        if (out.e != 1) throw DomainError("the rationals have no extension degree");
        out.rational = detail::parse_matrices(Rationals{}, out.n, mats, detail::parse_rational);
        return out;
    }
    out.field = field_from_json(j["field"]);
    const Field& F = out.field;
    out.finite = detail::parse_matrices(F, out.n, mats, [&](const Json& x) { return detail::parse_elem(F, x); });
    return out;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error("parse error in " + path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

inline Json to_json(const LengthReport& r) {
    Json j;
    j["n"] = r.n;
    j["p"] = r.p;
    j["e"] = r.e;
    j["k_set"] = r.k_set;
    j["dims"] = r.dims;
    j["length"] = r.length;
    j["algebra_dim"] = r.algebra_dim;
    j["irreducible"] = r.irreducible;
    j["millis"] = r.millis;
    return j;
}

inline Json to_json(const WordExpr& e) {
    Json words = Json::array();
    for (const auto& [w, c] : e.terms()) words.push_back(Json::array({elem_to_json(e.field(), c), w}));
    return words;
}

inline Json to_json(const PipelineTrace& tr) {
    Json steps = Json::array();
    for (const auto& s : tr.steps) {
        Json st;
        st["lambda"] = s.lambda;
        st["rho"] = s.rho;
        st["case"] = s.case_label;
        st["k"] = s.k ? Json(*s.k) : Json(nullptr);
        st["delta"] = s.delta;
        st["mu"] = s.mu ? Json(*s.mu) : Json(nullptr);
        steps.push_back(std::move(st));
    }
    return steps;
}

/// {steps: [...], final: {rank, lambda, words: [[coef, [gen indices]]]}, field, tau}.
inline Json to_json(const PipelineResult& r) {
    Json j;
    j["steps"] = to_json(r.trace);
    j["final"] = {{"rank", r.witness.rho}, {"lambda", r.witness.lambda}, {"words", to_json(r.witness.expr)}};
    j["field"] = field_to_json(r.witness.field());
    j["tau"] = r.trace.tau();
    return j;
}

} // namespace wordlen
