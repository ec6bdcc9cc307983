#include "twobox/tbx.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "twobox/axioms.hpp"
#include "twobox/errors.hpp"

namespace twobox {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

ordered complex_json(Complex z) { return ordered::array({z.real(), z.imag()}); }

ordered vector_json(const CVector& v) {
    ordered a = ordered::array();
    for (const auto& z : v) a.push_back(complex_json(z));
    return a;
}

ordered table_json(const std::vector<CVector>& t, std::size_t n) {
    ordered rows = ordered::array();
    for (std::size_t i = 0; i < n; ++i) {
        ordered row = ordered::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(vector_json(t[i * n + j]));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered matrix_json(const ComplexMatrix& m) {
    ordered rows = ordered::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered row = ordered::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered index_json(std::optional<std::size_t> i) { return i ? ordered(*i) : ordered(nullptr); }

[[noreturn]] void syntax(const std::string& where, const std::string& msg) {
    throw Error(ErrorCode::SyntaxError, where + ": " + msg);
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) syntax(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) syntax(where, "number is not finite");
    return v;
}

Complex complex_at(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) syntax(where, "expected a [re, im] pair");
    return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

const json& array_of(const json& j, std::size_t n, const std::string& where) {
    if (!j.is_array()) syntax(where, "expected an array");
    if (j.size() != n) syntax(where, "expected " + std::to_string(n) + " entries, found " + std::to_string(j.size()));
    return j;
}

CVector vector_at(const json& j, std::size_t n, const std::string& where) {
    array_of(j, n, where);
    CVector v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = complex_at(j[k], where + "[" + std::to_string(k) + "]");
    return v;
}

std::vector<CVector> table_at(const json& j, std::size_t n, const std::string& where) {
    array_of(j, n, where);
    std::vector<CVector> t(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string wi = where + "[" + std::to_string(i) + "]";
        array_of(j[i], n, wi);
        for (std::size_t k = 0; k < n; ++k) t[i * n + k] = vector_at(j[i][k], n, wi + "[" + std::to_string(k) + "]");
    }
    return t;
}

ComplexMatrix matrix_at(const json& j, std::size_t n, const std::string& where) {
    array_of(j, n, where);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string wi = where + "[" + std::to_string(i) + "]";
        array_of(j[i], n, wi);
        for (std::size_t k = 0; k < n; ++k) m(i, k) = complex_at(j[i][k], wi + "[" + std::to_string(k) + "]");
    }
    return m;
}

std::optional<std::size_t> index_at(const json& j, std::size_t n, const std::string& where) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_number_unsigned()) syntax(where, "expected a basis index or null");
    const auto v = j.get<std::size_t>();
    if (v >= n) syntax(where, "index out of range");
    return v;
}

const std::set<std::string> kFields = {"format_version", "name",    "dim",            "delta",   "labels",
                                       "trace",          "product", "coproduct",      "contragredient",
                                       "adjoint",        "unit_index", "jones_index"};

}  // namespace

std::string serialize(const TwoBoxStructure& s) {
    const auto& d = s.data();
    const std::size_t n = s.dim();
    std::vector<std::pair<std::string, ordered>> fields;
    fields.emplace_back("format_version", std::string(kTbxVersion));
    fields.emplace_back("name", d.name);
    fields.emplace_back("dim", n);
    fields.emplace_back("delta", d.delta);
    fields.emplace_back("labels", d.labels);
    fields.emplace_back("trace", d.trace);
    fields.emplace_back("product", table_json(d.product, n));
    fields.emplace_back("coproduct", table_json(d.coproduct, n));
    fields.emplace_back("contragredient", matrix_json(d.contragredient));
    fields.emplace_back("adjoint", matrix_json(d.adjoint));
    fields.emplace_back("unit_index", index_json(s.unit_index()));
    fields.emplace_back("jones_index", index_json(s.jones_index()));

    // One field per line keeps documents diffable without exploding the tables.
    std::string out = "{\n";
    for (std::size_t i = 0; i < fields.size(); ++i) {
        out += "  " + ordered(fields[i].first).dump() + ": ";
        if (fields[i].first == "delta") {
            // delta is written with 17 significant digits; every other number in shortest round-trip form.
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.16e", d.delta);
            out += buf;
        } else {
            out += fields[i].second.dump();
        }
        out += i + 1 < fields.size() ? ",\n" : "\n";
    }
    out += "}\n";
    return out;
}

StructurePtr parse(std::string_view text, const ParseOptions& opts) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        const auto colon = msg.find(": ");
        if (colon != std::string::npos) msg = msg.substr(colon + 2);
        throw Error(ErrorCode::SyntaxError,
                    "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
    }
    if (!doc.is_object()) syntax("document", "expected a JSON object");
    for (const auto& [key, value] : doc.items())
        if (!kFields.count(key)) syntax(key, "unknown field");
    for (const auto& key : kFields)
        if (!doc.contains(key)) syntax(key, "missing field");

    if (!doc["format_version"].is_string()) syntax("format_version", "expected a string");
    const std::string version = doc["format_version"].get<std::string>();
    if (version != kTbxVersion)
        throw Error(ErrorCode::VersionMismatch, "expected " + std::string(kTbxVersion) + ", found " + version);

    if (!doc["name"].is_string()) syntax("name", "expected a string");
    if (!doc["dim"].is_number_unsigned() || doc["dim"].get<std::size_t>() == 0) syntax("dim", "expected a positive integer");
    const std::size_t n = doc["dim"].get<std::size_t>();

    StructureData d;
    d.name = doc["name"].get<std::string>();
    d.delta = number(doc["delta"], "delta");
    array_of(doc["labels"], n, "labels");
    for (const auto& l : doc["labels"]) {
        if (!l.is_string()) syntax("labels", "expected strings");
        d.labels.push_back(l.get<std::string>());
    }
    array_of(doc["trace"], n, "trace");
    for (std::size_t i = 0; i < n; ++i) d.trace.push_back(number(doc["trace"][i], "trace[" + std::to_string(i) + "]"));
    d.product = table_at(doc["product"], n, "product");
    d.coproduct = table_at(doc["coproduct"], n, "coproduct");
    d.contragredient = matrix_at(doc["contragredient"], n, "contragredient");
    d.adjoint = matrix_at(doc["adjoint"], n, "adjoint");
    d.unit_index = index_at(doc["unit_index"], n, "unit_index");
    d.jones_index = index_at(doc["jones_index"], n, "jones_index");

    StructurePtr s = TwoBoxStructure::create(std::move(d));
    if (!opts.force) {
        const AxiomReport report = verify_axioms(s, opts.tol);
        if (!report.passed()) {
            std::ostringstream msg;
            msg.precision(3);
            msg << "document fails";
            for (const auto& c : report.checks)
                if (!c.passed) msg << ' ' << c.name << " (residual " << c.residual << ")";
            throw Error(ErrorCode::AxiomFailure, msg.str());
        }
    }
    return s;
}

StructurePtr load_file(const std::string& path, const ParseOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), opts);
}

void save_file(const std::string& path, const TwoBoxStructure& s) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << serialize(s);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace twobox
