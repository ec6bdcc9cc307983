#include "twobox/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twobox/axioms.hpp"
#include "twobox/catalog.hpp"
#include "twobox/classify.hpp"
#include "twobox/errors.hpp"
#include "twobox/report.hpp"
#include "twobox/tbx.hpp"

namespace twobox {

namespace {

struct Common {
    double tol = -1;  // unset
    bool json = false;
    std::vector<std::string> params;
    std::string output;
};

Tolerance tolerance(double flag) {
    Tolerance t;
    if (const char* env = std::getenv("TBX_TOL"); env && *env) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0') throw Error(ErrorCode::BadShape, std::string("TBX_TOL is not a number: ") + env);
        t.eq_tol = v;
    }
    if (flag > 0) t.eq_tol = flag;
    t.validate();
    return t;
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& raw) {
    std::map<std::string, std::string> out;
    for (const auto& p : raw) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--param", "expected k=v, got '" + p + "'");
        out[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return out;
}

// A file path if one exists, otherwise a catalog name.
StructurePtr resolve(const std::string& arg, const std::map<std::string, std::string>& params, const Tolerance& tol,
                     bool force = false) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) return load_file(arg, {tol, force});
    return named(arg, params);
}

void emit(const TwoBoxStructure& s, const std::string& output, std::ostream& out) {
    if (output.empty() || output == "-")
        out << serialize(s);
    else
        save_file(output, s);
}

int code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::SyntaxError:
        case ErrorCode::VersionMismatch:
        case ErrorCode::IoError:
        case ErrorCode::UnknownName:
        case ErrorCode::BadShape:
        case ErrorCode::BadDelta:
        case ErrorCode::BadPrime: return kExitUsage;
        default: return kExitNegative;
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"twobox: 2-box structures of subfactor planar algebras", "twobox"};
    app.require_subcommand(1);

    Common c;
    std::string a, b;
    bool force = false;

    auto add_tol = [&](CLI::App* sub) { sub->add_option("--tol", c.tol, "equality tolerance (overrides TBX_TOL)"); };
    auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--output", c.output, "output file (default stdout)"); };
    auto add_params = [&](CLI::App* sub) { sub->add_option("--param", c.params, "catalog parameter k=v"); };

    auto* list = app.add_subcommand("list", "print catalog names");

    auto* make = app.add_subcommand("make", "build a catalog structure");
    make->add_option("name", a, "catalog name")->required();
    add_params(make);
    add_out(make);

    auto* free = app.add_subcommand("free", "free product of two structures (files or catalog names)");
    free->add_option("A", a)->required();
    free->add_option("B", b)->required();
    add_params(free);
    add_out(free);
    add_tol(free);

    auto* tensor = app.add_subcommand("tensor", "tensor product of two structures");
    tensor->add_option("A", a)->required();
    tensor->add_option("B", b)->required();
    add_params(tensor);
    add_out(tensor);
    add_tol(tensor);

    auto* dual = app.add_subcommand("dual", "Fourier dual of a structure");
    dual->add_option("A", a)->required();
    add_params(dual);
    add_out(dual);
    add_tol(dual);

    auto* verify = app.add_subcommand("verify", "check every axiom of a tbx document");
    verify->add_option("file", a)->required();
    add_tol(verify);

    auto* classify = app.add_subcommand("classify", "run the dim-4 classification");
    classify->add_option("file", a)->required();
    classify->add_flag("--json", c.json, "machine-readable output");
    add_tol(classify);

    auto* report = app.add_subcommand("report", "summarize a structure");
    report->add_option("file", a)->required();
    report->add_flag("--json", c.json, "machine-readable output");
    add_tol(report);

    auto* iso = app.add_subcommand("iso", "search for an isomorphism between two structures");
    iso->add_option("A", a)->required();
    iso->add_option("B", b)->required();
    add_params(iso);
    add_tol(iso);

    for (auto* sub : {free, tensor, dual, iso}) sub->add_flag("--force", force, "accept documents that fail verification");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const Tolerance tol = tolerance(c.tol);
        const auto params = parse_params(c.params);

        if (*list) {
            for (const auto& n : catalog_names()) out << n << "\n";
            return kExitOk;
        }
        if (*make) {
            emit(*named(a, params), c.output, out);
            return kExitOk;
        }
        if (*free) {
            emit(*free_product(resolve(a, params, tol, force), resolve(b, params, tol, force), tol), c.output, out);
            return kExitOk;
        }
        if (*tensor) {
            emit(*tensor_product(resolve(a, params, tol, force), resolve(b, params, tol, force)), c.output, out);
            return kExitOk;
        }
        if (*dual) {
            emit(*fourier_dual(resolve(a, params, tol, force), tol), c.output, out);
            return kExitOk;
        }
        if (*verify) {
            const StructurePtr s = load_file(a, {tol, true});
            const AxiomReport r = verify_axioms(s, tol);
            for (const auto& check : r.checks) {
                out << (check.passed ? "pass " : "FAIL ") << std::left << std::setw(36) << check.name
                    << " residual " << std::setprecision(3) << check.residual;
                if (!check.passed && !check.detail.empty()) out << "  " << check.detail;
                out << "\n";
            }
            out << (r.passed() ? "verified" : "verification failed") << "\n";
            return r.passed() ? kExitOk : kExitNegative;
        }
        if (*classify) {
            const StructurePtr s = load_file(a, {tol, true});
            const ClassificationVerdict v = classify_dim4(s, tol);
            out << (c.json ? verdict_json(v) : verdict_text(v));
            return v.tag == ClassTag::Unclassified ? kExitNegative : kExitOk;
        }
        if (*report) {
            const StructurePtr s = load_file(a, {tol, true});
            out << (c.json ? report_json(s, tol) : report_text(s, tol));
            return kExitOk;
        }
        if (*iso) {
            const auto sa = resolve(a, params, tol, force);
            const auto sb = resolve(b, params, tol, force);
            const auto phi = find_isomorphism(sa, sb, tol);
            if (!phi) {
                out << "not isomorphic\n";
                return kExitNegative;
            }
            out << "isomorphic; coefficient matrix (columns are images of " << sa->name() << " basis vectors):\n";
            for (std::size_t i = 0; i < phi->rows(); ++i) {
                out << " ";
                for (std::size_t j = 0; j < phi->cols(); ++j) {
                    const Complex z = (*phi)(i, j);
                    const double re = std::abs(z.real()) < 1e-13 ? 0.0 : z.real();
                    const double im = std::abs(z.imag()) < 1e-13 ? 0.0 : z.imag();
                    std::ostringstream cell;
                    cell << std::setprecision(6);
                    if (im == 0.0)
                        cell << re;
                    else if (re == 0.0)
                        cell << im << "i";
                    else
                        cell << re << (im < 0 ? "-" : "+") << std::abs(im) << "i";
                    out << ' ' << std::setw(12) << cell.str();
                }
                out << "\n";
            }
            return kExitOk;
        }
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return code_for(e);
    }
    return kExitUsage;
}

}  // namespace twobox
