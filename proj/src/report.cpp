#include "twobox/report.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "twobox/axioms.hpp"
#include "twobox/blocks.hpp"
#include "twobox/errors.hpp"
#include "twobox/positivity.hpp"

namespace twobox {

namespace {

using ordered = nlohmann::ordered_json;

// Noise below this is printed as an exact zero so reports stay readable.
constexpr double kClean = 1e-13;

double clean(double x) { return std::abs(x) < kClean ? 0.0 : x; }

ordered cjson(Complex z) { return ordered::array({clean(z.real()), clean(z.imag())}); }

ordered vjson(const CVector& v) {
    ordered a = ordered::array();
    for (const auto& z : v) a.push_back(cjson(z));
    return a;
}

ordered mjson(const ComplexMatrix& m) {
    ordered rows = ordered::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered row = ordered::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(cjson(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << clean(x);
    return os.str();
}

std::string cnum(Complex z) {
    const double re = clean(z.real()), im = clean(z.imag());
    if (im == 0.0) return num(re);
    if (re == 0.0) return num(im) + "i";
    return num(re) + (im < 0 ? "-" : "+") + num(std::abs(im)) + "i";
}

// "0.5 e + 0.5 g1"
std::string combination(const CVector& v, const std::vector<std::string>& labels) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (std::abs(v[k]) < 1e-12) continue;
        if (!out.empty()) out += " + ";
        const bool one = std::abs(v[k] - Complex(1.0)) < 1e-12;
        out += one ? labels[k] : "(" + cnum(v[k]) + ") " + labels[k];
    }
    return out.empty() ? "0" : out;
}

ordered split_json(const SplitNode& node) {
    ordered j;
    j["kind"] = node.kind;
    j["dim"] = node.dim;
    j["delta"] = node.delta;
    j["identified"] = node.identified ? ordered(*node.identified) : ordered(nullptr);
    if (node.kind == "free") j["separator_trace"] = node.separator_trace;
    ordered children = ordered::array();
    for (const auto& c : node.children) children.push_back(split_json(c));
    j["children"] = std::move(children);
    return j;
}

void split_text(std::ostringstream& os, const SplitNode& node, int depth) {
    os << std::string(2 * std::size_t(depth) + 2, ' ') << node.kind << " dim " << node.dim << " delta " << num(node.delta);
    if (node.identified) os << " (" << *node.identified << ")";
    if (node.kind == "free") os << " separator trace " << num(node.separator_trace);
    os << '\n';
    for (const auto& c : node.children) split_text(os, c, depth + 1);
}

ordered build_report(const StructurePtr& s, const Tolerance& tol) {
    const std::size_t n = s->dim();
    ordered r;
    r["name"] = s->name();
    r["dim"] = n;
    r["delta"] = s->delta();
    r["index"] = s->delta() * s->delta();
    r["labels"] = s->labels();
    ordered traces = ordered::array();
    for (double t : s->trace_vector()) traces.push_back(clean(t));
    r["trace"] = std::move(traces);
    r["unit"] = vjson(s->unit().coeffs());
    r["jones"] = vjson(s->jones().coeffs());

    const AxiomReport axioms = verify_axioms(s, tol);
    r["axioms"] = {{"passed", axioms.passed()}, {"failures", axioms.failures()}};

    ordered table = ordered::array();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            table.push_back({{"i", i}, {"j", j}, {"value", vjson(s->coproduct_row(i, j))}});
    r["coproduct"] = std::move(table);

    std::optional<BlockDecomposition> blocks;
    try {
        blocks = block_decomposition(s, tol);
        r["blocks"] = {{"dims", blocks->block_dims}, {"traces", blocks->block_traces}};
    } catch (const Error& e) {
        r["blocks"] = {{"unavailable", e.what()}};
    }

    try {
        ordered list = ordered::array();
        for (const auto& b : enumerate_biprojections(s, tol))
            list.push_back({{"trace", clean(b.trace)}, {"element", vjson(b.element.coeffs())}});
        r["biprojections"] = std::move(list);
    } catch (const Error& e) {
        r["biprojections"] = {{"unavailable", e.what()}};
    }

    if (blocks) {
        ordered list = ordered::array();
        const auto minimal = blocks->all_minimal_projections();
        for (std::size_t i = 1; i < minimal.size(); ++i) {
            ordered entry = {{"index", i}, {"trace", clean(trace(minimal[i]).real())},
                             {"element", vjson(minimal[i].coeffs())}};
            try {
                entry["virtual_normalizer"] = is_virtual_normalizer(minimal[i], Side::Both, tol);
            } catch (const Error& e) {
                entry["virtual_normalizer"] = nullptr;
                entry["note"] = e.what();
            }
            list.push_back(std::move(entry));
        }
        r["minimal_projections"] = std::move(list);
    }

    try {
        const LambdaMatrix lm = lambda_matrix(s, tol);
        ordered rows = ordered::array();
        for (std::size_t i = 0; i < lm.rows.size(); ++i) {
            ordered row = ordered::array();
            for (const auto& z : lm.lambda[i]) row.push_back(cjson(z));
            rows.push_back({{"trace", clean(lm.row_traces[i])}, {"bound", lm.row_traces[i] / lm.delta}, {"lambda", row}});
        }
        const std::size_t npd = new_part_dimension(lm, tol);
        r["lambda_matrix"] = std::move(rows);
        r["new_part_dimension"] = npd;
        r["depth2_support_trace"] = clean(trace(depth2_support(lm, s, tol)).real());
    } catch (const Error& e) {
        r["lambda_matrix"] = {{"unavailable", e.what()}};
        r["new_part_dimension"] = nullptr;
    }

    const DimBoundReport bound = dim_bound_report(s, tol);
    r["dim_bound"] = {{"bound", bound.bound},
                      {"estimate", bound.estimate ? ordered(*bound.estimate) : ordered(nullptr)}};

    try {
        const CommuteReport c = check_commute_relation_necessary(s, tol);
        ordered inv = ordered::array();
        for (const auto& e : c.inventory)
            inv.push_back({{"index", e.index}, {"trace", clean(e.trace)}, {"virtual_normalizer", e.virtual_normalizer}});
        r["commute"] = {{"product_abelian", c.product_abelian},
                        {"dual_abelian", c.dual_abelian},
                        {"depth2", c.depth2},
                        {"inventory", inv},
                        {"split_tree", c.split_tree ? split_json(*c.split_tree) : ordered(nullptr)}};
    } catch (const Error& e) {
        r["commute"] = {{"unavailable", e.what()}};
    }
    return r;
}

}  // namespace

std::string report_json(const StructurePtr& s, const Tolerance& tol) { return build_report(s, tol).dump(2) + "\n"; }

std::string report_text(const StructurePtr& s, const Tolerance& tol) {
    const ordered r = build_report(s, tol);
    const auto& labels = s->labels();
    auto vec = [](const ordered& j) {
        CVector v;
        for (const auto& z : j) v.emplace_back(z[0].get<double>(), z[1].get<double>());
        return v;
    };
    std::ostringstream os;
    os << "structure " << s->name() << "\n";
    os << "  dim " << s->dim() << ", delta " << num(s->delta()) << ", index " << num(s->delta() * s->delta()) << "\n";
    os << "  id = " << combination(s->unit().coeffs(), labels) << "\n";
    os << "  e  = " << combination(s->jones().coeffs(), labels) << "\n";
    os << "  traces:";
    for (std::size_t i = 0; i < s->dim(); ++i) os << ' ' << labels[i] << '=' << num(s->trace_vector()[i]);
    os << "\n  axioms: " << (r["axioms"]["passed"].get<bool>() ? "pass" : "FAIL");
    for (const auto& f : r["axioms"]["failures"]) os << ' ' << f.get<std::string>();
    os << "\n";

    os << "coproduct table\n";
    for (std::size_t i = 0; i < s->dim(); ++i)
        for (std::size_t j = 0; j < s->dim(); ++j)
            os << "  " << labels[i] << " * " << labels[j] << " = " << combination(s->coproduct_row(i, j), labels) << "\n";

    if (r["blocks"].contains("dims")) {
        os << "blocks: dims";
        for (const auto& d : r["blocks"]["dims"]) os << ' ' << d.get<std::size_t>();
        os << "\n";
    } else {
        os << "blocks: unavailable (" << r["blocks"]["unavailable"].get<std::string>() << ")\n";
    }

    os << "biprojections\n";
    if (r["biprojections"].is_array()) {
        for (const auto& b : r["biprojections"])
            os << "  trace " << num(b["trace"].get<double>()) << ": " << combination(vec(b["element"]), labels) << "\n";
    } else {
        os << "  unavailable (" << r["biprojections"]["unavailable"].get<std::string>() << ")\n";
    }

    if (r.contains("minimal_projections")) {
        os << "virtual normalizers\n";
        for (const auto& m : r["minimal_projections"]) {
            os << "  P" << m["index"].get<std::size_t>() << " (trace " << num(m["trace"].get<double>()) << "): ";
            if (m["virtual_normalizer"].is_null())
                os << "n/a (" << m["note"].get<std::string>() << ")";
            else
                os << (m["virtual_normalizer"].get<bool>() ? "yes" : "no");
            os << "\n";
        }
    }

    os << "lambda matrix\n";
    if (r["lambda_matrix"].is_array()) {
        for (const auto& row : r["lambda_matrix"]) {
            os << "  tr " << num(row["trace"].get<double>()) << " bound " << num(row["bound"].get<double>()) << ":";
            for (const auto& z : row["lambda"]) os << ' ' << cnum({z[0].get<double>(), z[1].get<double>()});
            os << "\n";
        }
        os << "depth-2 support trace: " << num(r["depth2_support_trace"].get<double>()) << "\n";
        os << "new_part_dimension: " << r["new_part_dimension"].get<std::size_t>() << "\n";
    } else {
        os << "  unavailable (" << r["lambda_matrix"]["unavailable"].get<std::string>() << ")\n";
        os << "new_part_dimension: unavailable\n";
    }
    os << "dim bound: " << r["dim_bound"]["bound"].get<std::size_t>();
    if (!r["dim_bound"]["estimate"].is_null()) os << ", dim S3 estimate " << r["dim_bound"]["estimate"].get<std::size_t>();
    os << "\n";

    const auto& c = r["commute"];
    if (c.contains("unavailable")) {
        os << "commute relation: unavailable (" << c["unavailable"].get<std::string>() << ")\n";
    } else {
        os << "commute relation: product " << (c["product_abelian"].get<bool>() ? "abelian" : "nonabelian") << ", dual "
           << (c["dual_abelian"].get<bool>() ? "abelian" : "nonabelian") << (c["depth2"].get<bool>() ? ", depth 2" : "")
           << "\n";
        if (!c["split_tree"].is_null()) {
            os << "split tree\n";
            // Rebuild the node structure from JSON for printing.
            std::function<SplitNode(const ordered&)> node = [&](const ordered& j) {
                SplitNode out;
                out.kind = j["kind"].get<std::string>();
                out.dim = j["dim"].get<std::size_t>();
                out.delta = j["delta"].get<double>();
                if (!j["identified"].is_null()) out.identified = j["identified"].get<std::string>();
                if (j.contains("separator_trace")) out.separator_trace = j["separator_trace"].get<double>();
                for (const auto& ch : j["children"]) out.children.push_back(node(ch));
                return out;
            };
            split_text(os, node(c["split_tree"]), 0);
        }
    }
    return os.str();
}

namespace {

ordered verdict_object(const ClassificationVerdict& v) {
    ordered j;
    j["class"] = class_number(v.tag);
    j["tag"] = to_string(v.tag);
    j["reason"] = v.reason.empty() ? ordered(nullptr) : ordered(v.reason);
    j["new_part_dimension"] = v.new_part ? ordered(*v.new_part) : ordered(nullptr);
    j["group"] = v.group ? ordered(*v.group) : ordered(nullptr);
    j["group_isomorphism"] = v.group_isomorphism ? mjson(*v.group_isomorphism) : ordered(nullptr);
    ordered free = ordered::array();
    for (const auto& w : v.free_witnesses)
        free.push_back({{"normalizer", w.normalizer},
                        {"normalizer_trace", clean(w.normalizer_trace)},
                        {"construction", w.construction},
                        {"separator_trace", clean(w.separator.trace)},
                        {"separator", vjson(w.separator.element.coeffs())},
                        {"inner_dim", w.separation.inner_dim},
                        {"outer_dim", w.separation.outer_dim},
                        {"joint_dim", w.separation.joint_dim}});
    j["free_witnesses"] = std::move(free);
    ordered tensor = ordered::array();
    for (const auto& w : v.tensor_witnesses)
        tensor.push_back({{"a_trace", clean(w.a.trace)},
                          {"a", vjson(w.a.element.coeffs())},
                          {"b_trace", clean(w.b.trace)},
                          {"b", vjson(w.b.element.coeffs())}});
    j["tensor_witnesses"] = std::move(tensor);
    if (v.subgroup) {
        const auto& w = *v.subgroup;
        ordered table = ordered::array();
        for (const auto& row : w.coproduct_table) table.push_back(vjson(row));
        j["subgroup"] = {{"c", w.c},
                         {"reconstructed_delta", w.reconstructed_delta},
                         {"order", w.order},
                         {"coproduct_table", table},
                         {"isomorphism", w.isomorphism ? mjson(*w.isomorphism) : ordered(nullptr)}};
    } else {
        j["subgroup"] = nullptr;
    }
    j["log"] = v.log;
    return j;
}

}  // namespace

std::string verdict_json(const ClassificationVerdict& v) { return verdict_object(v).dump(2) + "\n"; }

std::string verdict_text(const ClassificationVerdict& v) {
    std::ostringstream os;
    if (v.tag == ClassTag::Unclassified) {
        os << "unclassified: " << v.reason << "\n";
    } else {
        os << "class " << class_number(v.tag) << " (" << to_string(v.tag) << ")\n";
    }
    if (v.group) os << "group: " << *v.group << "\n";
    for (const auto& w : v.free_witnesses)
        os << "free split: separator trace " << num(w.separator.trace) << ", dims " << w.separation.inner_dim << " + "
           << w.separation.outer_dim << "\n";
    for (const auto& w : v.tensor_witnesses)
        os << "tensor split: biprojections of trace " << num(w.a.trace) << " and " << num(w.b.trace) << "\n";
    if (v.subgroup) os << "c=" << num(v.subgroup->c) << ", reconstructed delta " << num(v.subgroup->reconstructed_delta) << "\n";
    if (v.new_part) os << "new_part_dimension: " << *v.new_part << "\n";
    for (const auto& l : v.log) os << "  " << l << "\n";
    return os.str();
}

}  // namespace twobox
