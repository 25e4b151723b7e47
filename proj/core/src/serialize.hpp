// Internal JSON converters shared by the cache and export formats. Not part
// of the installed API: exact values travel as decimal strings, polynomials
// as ascending coefficient arrays.
#pragma once

#include "sphlas/linalg.hpp"
#include "sphlas/mvpoly.hpp"
#include "sphlas/polynomial.hpp"
#include "sphlas/tableau.hpp"

#include <json.hpp>

namespace sphlas::ser {

using Json = nlohmann::json;

inline Json mono_to_json(const Mono& m) {
    Json a = Json::array();
    for (uint8_t e : m) a.push_back(int(e));
    return a;
}

inline Mono mono_from_json(const Json& a) {
    Mono m;
    for (const auto& e : a) m.push_back(uint8_t(e.get<int>()));
    return mono_trim(m);
}

inline Json polyn_to_json(const PolyN& p) {
    Json a = Json::array();
    for (const Rat& c : p.c) a.push_back(rat_to_string(c));
    return a;
}

inline PolyN polyn_from_json(const Json& a) {
    std::vector<Rat> c;
    for (const auto& s : a) c.push_back(rat_from_string(s.get<std::string>()));
    return PolyN(std::move(c));
}

inline Json ratfunc_to_json(const RatFuncN& f) {
    Json j;
    j["num"] = polyn_to_json(f.num);
    j["den"] = polyn_to_json(f.den);
    return j;
}

inline RatFuncN ratfunc_from_json(const Json& j) {
    return RatFuncN(polyn_from_json(j.at("num")), polyn_from_json(j.at("den")));
}

inline Json mpolyfn_to_json(const MPoly<RatFuncN>& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms) {
        Json t;
        t["m"] = mono_to_json(m);
        t["num"] = polyn_to_json(c.num);
        t["den"] = polyn_to_json(c.den);
        terms.push_back(std::move(t));
    }
    return terms;
}

inline MPoly<RatFuncN> mpolyfn_from_json(const Json& terms) {
    MPoly<RatFuncN> p;
    for (const auto& t : terms)
        p.add_term(mono_from_json(t.at("m")),
                   RatFuncN(polyn_from_json(t.at("num")), polyn_from_json(t.at("den"))));
    return p;
}

inline Json partition_to_json(const Partition& p) {
    Json a = Json::array();
    for (unsigned x : p) a.push_back(x);
    return a;
}

inline Partition partition_from_json(const Json& a) {
    Partition p;
    for (const auto& x : a) p.push_back(x.get<unsigned>());
    return p;
}

inline Json entries_to_json(const std::vector<std::vector<MPoly<RatFuncN>>>& entries) {
    Json rows = Json::array();
    for (const auto& row : entries) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(mpolyfn_to_json(e));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<std::vector<MPoly<RatFuncN>>> entries_from_json(const Json& rows) {
    std::vector<std::vector<MPoly<RatFuncN>>> entries;
    for (const auto& r : rows) {
        std::vector<MPoly<RatFuncN>> row;
        for (const auto& e : r) row.push_back(mpolyfn_from_json(e));
        entries.push_back(std::move(row));
    }
    return entries;
}

inline Json rat_matrix_to_json(const Matrix<Rat>& g) {
    Json rows = Json::array();
    for (size_t i = 0; i < g.rows; ++i) {
        Json r = Json::array();
        for (size_t j = 0; j < g.cols; ++j) r.push_back(rat_to_string(g(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline Matrix<Rat> rat_matrix_from_json(const Json& rows) {
    size_t nr = rows.size();
    size_t nc = nr == 0 ? 0 : rows.at(0).size();
    Matrix<Rat> g(nr, nc);
    for (size_t i = 0; i < nr; ++i) {
        if (rows.at(i).size() != nc) throw std::invalid_argument("ragged matrix document");
        for (size_t j = 0; j < nc; ++j)
            g(i, j) = rat_from_string(rows.at(i).at(j).get<std::string>());
    }
    return g;
}

inline Json ratfunc_matrix_to_json(const Matrix<RatFuncN>& m) {
    Json rows = Json::array();
    for (size_t i = 0; i < m.rows; ++i) {
        Json r = Json::array();
        for (size_t j = 0; j < m.cols; ++j) r.push_back(ratfunc_to_json(m(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline Matrix<RatFuncN> ratfunc_matrix_from_json(const Json& rows) {
    size_t nr = rows.size();
    size_t nc = nr == 0 ? 0 : rows.at(0).size();
    Matrix<RatFuncN> m(nr, nc);
    for (size_t i = 0; i < nr; ++i) {
        if (rows.at(i).size() != nc) throw std::invalid_argument("ragged matrix document");
        for (size_t j = 0; j < nc; ++j) m(i, j) = ratfunc_from_json(rows.at(i).at(j));
    }
    return m;
}

}  // namespace sphlas::ser
