// SPDX-License-Identifier: Apache-2.0
#include "breuil/json_io.hpp"

namespace breuil {

namespace {

int64_t require_int(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number_integer())
        throw InvalidParams(std::string("missing or non-integer field \"") + field + "\"");
    return j[field].get<int64_t>();
}

std::vector<int64_t> require_int_array(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_array())
        throw InvalidParams(std::string("missing or non-array field \"") + field + "\"");
    std::vector<int64_t> out;
    for (const auto& v : j[field]) {
        if (!v.is_number_integer())
            throw InvalidParams(std::string("non-integer entry in \"") + field + "\"");
        out.push_back(v.get<int64_t>());
    }
    return out;
}

} // namespace

json to_json(const FieldElem& x) {
    json a = json::array();
    for (int i = 0; i < x.field()->m; ++i) a.push_back(x.coeff(i));
    return a;
}

FieldElem field_elem_from_json(const FieldParams* k, const json& j) {
    if (j.is_number_integer()) return FieldElem(k, j.get<int64_t>());
    if (!j.is_array()) throw InvalidParams("field element must be an integer or an array");
    std::vector<int64_t> coeffs;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw InvalidParams("field element coefficients must be integers");
        coeffs.push_back(v.get<int64_t>());
    }
    if (static_cast<int>(coeffs.size()) != k->m)
        throw InvalidParams("field element has " + std::to_string(coeffs.size()) +
                            " coefficients, expected " + std::to_string(k->m));
    return FieldElem::from_coeffs(k, coeffs);
}

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

Mat mat_from_json(const FieldParams* k, const json& j) {
    if (!j.is_array() || j.empty()) throw InvalidParams("matrix must be a nonempty array of rows");
    size_t rows = j.size(), cols = j[0].size();
    Mat m(k, rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw InvalidParams("ragged matrix rows");
        for (size_t c = 0; c < cols; ++c) m.at(i, c) = field_elem_from_json(k, j[i][c]);
    }
    return m;
}

json params_to_json(const RingParams* ring) {
    json j;
    j["p"] = ring->p();
    j["m"] = ring->field->m;
    json mod = json::array();
    for (auto c : ring->field->modulus) mod.push_back(c);
    j["modulus"] = mod;
    j["e"] = ring->e;
    j["r"] = ring->r;
    j["eisenstein"] = ring->eisenstein;
    j["trunc_degree"] = ring->trunc_degree;
    return j;
}

const RingParams* params_from_json(const json& j, int64_t trunc_override) {
    if (!j.is_object()) throw InvalidParams("\"params\" must be an object");
    int64_t p = require_int(j, "p");
    int64_t m = j.contains("m") ? require_int(j, "m") : 1;
    const FieldParams* field;
    if (j.contains("modulus"))
        field = FieldParams::get(p, require_int_array(j, "modulus"));
    else
        field = FieldParams::get(p, static_cast<int>(m));
    if (field->m != m && j.contains("m"))
        throw InvalidParams("field \"m\" does not match the modulus degree");
    int64_t e = require_int(j, "e");
    int64_t r = require_int(j, "r");
    std::vector<int64_t> eis = require_int_array(j, "eisenstein");
    int64_t trunc = trunc_override != 0 ? trunc_override
                                        : (j.contains("trunc_degree") ? require_int(j, "trunc_degree") : 0);
    return RingParams::get(field, e, r, eis, trunc);
}

json to_json(const S1Elem& x) {
    json terms = json::array();
    for (const auto& [deg, w] : x.terms()) terms.push_back(json::array({deg, to_json(w)}));
    return json{{"terms", terms}};
}

S1Elem s1_elem_from_json(const RingParams* ring, const json& j) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        throw InvalidParams("S1 element must be {\"terms\": [[degree, coeffs], ...]}");
    S1Elem x(ring);
    for (const auto& t : j["terms"]) {
        if (!t.is_array() || t.size() != 2) throw InvalidParams("malformed S1 term");
        int64_t deg = t[0].get<int64_t>();
        if (deg < 0 || deg >= ring->trunc_degree)
            throw InvalidParams("S1 term degree outside [0, trunc_degree)");
        x.set_coeff(deg, x.coeff(deg) + field_elem_from_json(ring->field, t[1]));
    }
    return x;
}

json to_json(const TildeSElem& x) {
    json a = json::array();
    for (int64_t t = 0; t < x.ring()->p(); ++t) a.push_back(to_json(x.coeff(t)));
    return a;
}

TildeSElem tilde_elem_from_json(const RingParams* ring, const json& j) {
    if (!j.is_array() || static_cast<int64_t>(j.size()) != ring->p())
        throw InvalidParams("element of k[u]/u^p must be an array of p coefficient arrays");
    TildeSElem x(ring);
    for (int64_t t = 0; t < ring->p(); ++t)
        x.set_coeff(t, field_elem_from_json(ring->field, j[static_cast<size_t>(t)]));
    return x;
}

namespace {

json tvec_to_json(const TVec& v) {
    json a = json::array();
    for (const auto& comp : v) a.push_back(to_json(comp));
    return a;
}

TVec tvec_from_json(const RingParams* ring, int64_t d, const json& j) {
    if (!j.is_array() || static_cast<int64_t>(j.size()) != d)
        throw InvalidParams("module element must be an array of rank d");
    TVec v;
    for (const auto& comp : j) v.push_back(tilde_elem_from_json(ring, comp));
    return v;
}

json svec_to_json(const SVec& v) {
    json a = json::array();
    for (const auto& comp : v) a.push_back(to_json(comp));
    return a;
}

SVec svec_from_json(const RingParams* ring, int64_t d, const json& j) {
    if (!j.is_array() || static_cast<int64_t>(j.size()) != d)
        throw InvalidParams("module element must be an array of rank d");
    SVec v;
    for (const auto& comp : j) v.push_back(s1_elem_from_json(ring, comp));
    return v;
}

} // namespace

json to_json(const TildeModule& m) {
    json j;
    j["d"] = m.d;
    json gens = json::array(), phis = json::array(), uer = json::array();
    for (const auto& g : m.fil_gens) gens.push_back(tvec_to_json(g));
    for (const auto& f : m.phi_fil_gens) phis.push_back(tvec_to_json(f));
    for (const auto& f : m.phi_uer_basis) uer.push_back(tvec_to_json(f));
    j["fil_gens"] = gens;
    j["phi_fil_gens"] = phis;
    j["phi_uer_basis"] = uer;
    j["n_mat"] = mat_to_json(m.n_mat);
    return j;
}

TildeModule tilde_module_from_json(const RingParams* ring, const json& j) {
    TildeModule m;
    m.ring = ring;
    m.d = require_int(j, "d");
    if (m.d <= 0) throw InvalidParams("rank \"d\" must be positive");
    if (j.contains("fil_gens"))
        for (const auto& g : j["fil_gens"]) m.fil_gens.push_back(tvec_from_json(ring, m.d, g));
    if (j.contains("phi_fil_gens"))
        for (const auto& g : j["phi_fil_gens"]) m.phi_fil_gens.push_back(tvec_from_json(ring, m.d, g));
    else
        m.phi_fil_gens.assign(m.fil_gens.size(), tvec_zero(ring, m.d));
    if (j.contains("phi_uer_basis"))
        for (const auto& g : j["phi_uer_basis"]) m.phi_uer_basis.push_back(tvec_from_json(ring, m.d, g));
    else
        m.phi_uer_basis.assign(static_cast<size_t>(m.d), tvec_zero(ring, m.d));
    if (j.contains("n_mat"))
        m.n_mat = mat_from_json(ring->field, j["n_mat"]);
    else
        m.n_mat = Mat(ring->field, static_cast<size_t>(m.d), static_cast<size_t>(m.d));
    if (m.phi_fil_gens.size() != m.fil_gens.size())
        throw InvalidParams("\"phi_fil_gens\" and \"fil_gens\" must have equal length");
    if (m.phi_uer_basis.size() != static_cast<size_t>(m.d))
        throw InvalidParams("\"phi_uer_basis\" must have one column per basis vector");
    return m;
}

json to_json(const SimpleObject& s) {
    json j;
    j["d"] = s.d;
    j["weights"] = s.weights;
    j["G"] = mat_to_json(s.G);
    j["cyclic"] = s.cyclic;
    return j;
}

SimpleObject simple_from_json(const RingParams* ring, const json& j) {
    SimpleObject s;
    s.ring = ring;
    s.d = require_int(j, "d");
    s.weights = require_int_array(j, "weights");
    if (static_cast<int64_t>(s.weights.size()) != s.d)
        throw InvalidParams("\"weights\" length must equal \"d\"");
    s.cyclic = j.contains("cyclic") ? j["cyclic"].get<bool>() : false;
    if (j.contains("G"))
        s.G = mat_from_json(ring->field, j["G"]);
    else if (s.cyclic)
        s.G = SimpleObject::cyclic_simple(ring, s.weights).G;
    else
        throw InvalidParams("missing field \"G\"");
    return s;
}

json to_json(const S1Module& m) {
    json j;
    j["d"] = m.d;
    json gens = json::array(), phis = json::array(), uer = json::array(), nb = json::array();
    for (const auto& g : m.fil_gens) gens.push_back(svec_to_json(g));
    for (const auto& f : m.phi_fil_gens) phis.push_back(svec_to_json(f));
    for (const auto& f : m.phi_uer_basis) uer.push_back(svec_to_json(f));
    for (const auto& f : m.n_basis) nb.push_back(svec_to_json(f));
    j["fil_gens"] = gens;
    j["phi_fil_gens"] = phis;
    j["phi_uer_basis"] = uer;
    j["n_basis"] = nb;
    return j;
}

S1Module s1_module_from_json(const RingParams* ring, const json& j) {
    S1Module m;
    m.ring = ring;
    m.d = require_int(j, "d");
    if (m.d <= 0) throw InvalidParams("rank \"d\" must be positive");
    for (const char* key : {"fil_gens", "phi_fil_gens", "phi_uer_basis", "n_basis"})
        if (!j.contains(key) || !j[key].is_array())
            throw InvalidParams(std::string("missing field \"") + key + "\"");
    for (const auto& g : j["fil_gens"]) m.fil_gens.push_back(svec_from_json(ring, m.d, g));
    for (const auto& g : j["phi_fil_gens"]) m.phi_fil_gens.push_back(svec_from_json(ring, m.d, g));
    for (const auto& g : j["phi_uer_basis"]) m.phi_uer_basis.push_back(svec_from_json(ring, m.d, g));
    for (const auto& g : j["n_basis"]) m.n_basis.push_back(svec_from_json(ring, m.d, g));
    return m;
}

json to_json(const Report& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
    return checks;
}

} // namespace breuil
