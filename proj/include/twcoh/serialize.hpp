#pragma once

// Deterministic JSON documents. nlohmann::json keeps object keys sorted, all
// numbers are integers and every scalar is a "p/q" string, so equal inputs
// give byte-identical text.

#include <json.hpp>

#include <sstream>
#include <string>

#include "constructions.hpp"
#include "identities.hpp"

namespace twcoh {

using Json = nlohmann::json;

inline const char* engine_version() { return "1.0.0"; }

inline Json to_json(const Scalar& s) { return s.to_string(); }

inline Json to_json(const Cutoff& c) { return Json(std::vector<int>(c)); }

/// [[k..., "p/q"], ...] in frequency order.
inline Json to_json(const TrigPoly& p) {
    Json out = Json::array();
    for (const auto& [k, c] : p.terms()) out.push_back({{"k", k.k}, {"c", c.to_string()}});
    return out;
}

/// Multi-indices are reported 1-based, as in dt1∧dt2.
inline Json to_json(const DifferentialForm& f) {
    Json comps = Json::array();
    for (const auto& [I, c] : f.components()) {
        std::vector<int> one_based;
        for (int j : I) one_based.push_back(j + 1);
        comps.push_back({{"index", one_based}, {"coefficient", to_json(c)}});
    }
    return {{"dim", f.dim()}, {"degree", f.degree()}, {"components", comps}};
}

inline Json to_json(const CohomologyRow& r) {
    return {{"D", r.cutoff},
            {"space_dim", r.space_dim},
            {"kernel", r.kernel},
            {"incoming_rank", r.incoming_rank},
            {"quotient_by", r.quotient_by},
            {"dim", r.dim}};
}

inline Json optional_json(const std::optional<long>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json to_json(const DegreeReport& d) {
    Json rows = Json::array();
    for (const auto& r : d.rows) rows.push_back(to_json(r));
    Json out{{"degree", d.degree},
             {"label", d.label},
             {"rows", rows},
             {"stabilized", d.stabilized},
             {"stabilized_dim", optional_json(d.stabilized_dim)}};
    if (!d.note.empty()) out["note"] = d.note;
    return out;
}

inline Json to_json(const CohomologyReport& rep) {
    Json degrees = Json::array();
    for (const auto& d : rep.degrees) degrees.push_back(to_json(d));
    return {{"complex", rep.complex_name}, {"stability", rep.stability}, {"degrees", degrees}};
}

inline Json to_json(const SuiteResult& s) {
    return {{"suite", s.name},
            {"description", s.description},
            {"trials", s.trials},
            {"checks", s.checks},
            {"passed", s.passed},
            {"failed", s.failed},
            {"failures", s.failures}};
}

inline Json to_json(const Certificate& c) { return {{"name", c.name}, {"passed", c.passed}}; }

inline Json to_json(const HatReport& rep) {
    Json degrees = Json::array();
    for (const auto& d : rep.degrees)
        degrees.push_back({{"degree", d.degree},
                           {"hat", optional_json(d.hat)},
                           {"h_theta1", optional_json(d.h1)},
                           {"h_theta0_below", optional_json(d.h0_below)},
                           {"rank_delta_before", optional_json(d.rank_before)},
                           {"rank_delta_at", optional_json(d.rank_at)},
                           {"identity_holds", d.identity_holds},
                           {"split_holds", d.split_holds}});
    return {{"hat", to_json(rep.hat)},
            {"theta0", to_json(rep.theta0)},
            {"theta1", to_json(rep.theta1)},
            {"delta_ranks", rep.delta_ranks},
            {"degrees", degrees}};
}

inline Json to_json(const EulerCheck& e) {
    return {{"source", e.source},
            {"relative", e.relative},
            {"target", e.target},
            {"alternating_sum", e.alternating_sum},
            {"complete", e.complete}};
}

/// Two-space indented, sorted keys, trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Sparse triplets "row col value", 0-based, one per line after a size header.
inline std::string to_triplets(const SparseMatrix& m) {
    std::ostringstream os;
    os << "# " << m.rows() << " " << m.cols() << " " << m.nnz() << "\n";
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (const auto& [i, v] : m.column(j).entries()) os << i << " " << j << " " << v.to_string() << "\n";
    return os.str();
}

/// Inverse of to_triplets.
inline SparseMatrix from_triplets(const std::string& text) {
    std::istringstream is(text);
    std::string hash;
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(is >> hash >> rows >> cols >> nnz) || hash != "#") throw InvalidInput("triplet text needs a '# rows cols nnz' header");
    std::vector<std::vector<SparseVector::Entry>> columns(cols);
    for (std::size_t k = 0; k < nnz; ++k) {
        std::size_t i = 0, j = 0;
        std::string value;
        if (!(is >> i >> j >> value)) throw InvalidInput("triplet text ended after " + std::to_string(k) + " entries");
        if (i >= rows || j >= cols) throw InvalidInput("triplet entry outside the declared shape");
        columns[j].emplace_back(i, Scalar::from_string(value));
    }
    SparseMatrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) m.set_column(j, SparseVector::from_entries(std::move(columns[j])));
    return m;
}

} // namespace twcoh
