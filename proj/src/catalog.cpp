#include "twobox/catalog.hpp"

#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "twobox/axioms.hpp"
#include "twobox/errors.hpp"

namespace twobox {

// ---------------------------------------------------------------------------
// Groups

void GroupPresentation::validate() const {
    const std::size_t n = order();
    auto fail = [&](const std::string& msg) { throw Error(ErrorCode::BadShape, "group " + name + ": " + msg); };
    if (n == 0) fail("empty group");
    if (identity >= n || inverse.size() != n) fail("bad identity or inverse table");
    if (!element_names.empty() && element_names.size() != n) fail("element name count mismatch");
    for (const auto& row : multiplication) {
        if (row.size() != n) fail("multiplication table is not square");
        for (std::size_t x : row)
            if (x >= n) fail("product out of range");
    }
    for (std::size_t g = 0; g < n; ++g) {
        if (multiplication[identity][g] != g || multiplication[g][identity] != g) fail("identity law");
        if (multiplication[g][inverse[g]] != identity || multiplication[inverse[g]][g] != identity) fail("inverse law");
        for (std::size_t h = 0; h < n; ++h)
            for (std::size_t k = 0; k < n; ++k)
                if (multiplication[multiplication[g][h]][k] != multiplication[g][multiplication[h][k]])
                    fail("associativity");
    }
}

GroupPresentation GroupPresentation::cyclic(std::size_t n) {
    GroupPresentation g;
    g.name = "Z" + std::to_string(n);
    g.multiplication.assign(n, std::vector<std::size_t>(n));
    g.inverse.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        g.element_names.push_back(std::to_string(a));
        g.inverse[a] = (n - a) % n;
        for (std::size_t b = 0; b < n; ++b) g.multiplication[a][b] = (a + b) % n;
    }
    return g;
}

GroupPresentation GroupPresentation::klein_four() {
    GroupPresentation g;
    g.name = "Z2xZ2";
    g.element_names = {"00", "10", "01", "11"};
    g.multiplication.assign(4, std::vector<std::size_t>(4));
    g.inverse = {0, 1, 2, 3};
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) g.multiplication[a][b] = a ^ b;
    return g;
}

GroupPresentation GroupPresentation::symmetric3() {
    // Permutations of {0,1,2} in one-line notation; composition (st)(x) = s(t(x)).
    const std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {1, 0, 2}, {0, 2, 1},
                                                   {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
    GroupPresentation g;
    g.name = "S3";
    g.element_names = {"()", "(01)", "(12)", "(02)", "(012)", "(021)"};
    const std::size_t n = perms.size();
    g.multiplication.assign(n, std::vector<std::size_t>(n));
    g.inverse.resize(n);
    auto index_of = [&](const std::array<int, 3>& p) {
        for (std::size_t i = 0; i < n; ++i)
            if (perms[i] == p) return i;
        return n;
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            std::array<int, 3> c{};
            for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
            g.multiplication[a][b] = index_of(c);
            if (g.multiplication[a][b] == 0) g.inverse[a] = b;
        }
    return g;
}

namespace {

CVector basis_vector(std::size_t n, std::size_t i, Complex value = 1.0) {
    CVector v(n);
    v[i] = value;
    return v;
}

StructureData empty_data(std::string name, std::size_t n, double delta) {
    StructureData d;
    d.name = std::move(name);
    d.delta = delta;
    d.product.assign(n * n, CVector(n));
    d.coproduct.assign(n * n, CVector(n));
    d.trace.assign(n, 0.0);
    d.contragredient = ComplexMatrix::identity(n);
    d.adjoint = ComplexMatrix::identity(n);
    return d;
}

std::string format_number(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

CVector kron(const CVector& a, const CVector& b) {
    CVector out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

std::vector<std::size_t> leaves(const StructurePtr& s) {
    const auto& f = s->data().free_factor_dims;
    return f.empty() ? std::vector<std::size_t>{s->dim()} : f;
}

bool is_odd_prime(int p) {
    if (p < 3 || p % 2 == 0) return false;
    for (int d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

StructurePtr make_TL(double delta) {
    if (!(std::isfinite(delta) && delta > 1.0))
        throw Error(ErrorCode::BadDelta, "TL needs delta > 1, got " + format_number(delta));
    StructureData d = empty_data("TL(" + format_number(delta) + ")", 2, delta);
    d.labels = {"e", "id"};
    enum { E = 0, ID = 1 };
    d.product[E * 2 + E] = basis_vector(2, E);
    d.product[E * 2 + ID] = basis_vector(2, E);
    d.product[ID * 2 + E] = basis_vector(2, E);
    d.product[ID * 2 + ID] = basis_vector(2, ID);
    d.coproduct[E * 2 + E] = basis_vector(2, E, 1.0 / delta);
    d.coproduct[E * 2 + ID] = basis_vector(2, ID, 1.0 / delta);
    d.coproduct[ID * 2 + E] = basis_vector(2, ID, 1.0 / delta);
    d.coproduct[ID * 2 + ID] = basis_vector(2, ID, delta);
    d.trace = {1.0, delta * delta};
    d.unit_index = ID;
    d.jones_index = E;
    return TwoBoxStructure::create(std::move(d));
}

StructurePtr make_group(const GroupPresentation& g) {
    g.validate();
    const std::size_t n = g.order();
    if (n < 2) throw Error(ErrorCode::BadDelta, "the trivial group gives delta = 1");
    const double delta = std::sqrt(double(n));
    StructureData d = empty_data(g.name, n, delta);
    for (std::size_t a = 0; a < n; ++a) {
        d.labels.push_back("P" + (g.element_names.empty() ? std::to_string(a) : g.element_names[a]));
        d.trace[a] = 1.0;
        d.product[a * n + a] = basis_vector(n, a);
        for (std::size_t b = 0; b < n; ++b) d.coproduct[a * n + b] = basis_vector(n, g.multiplication[a][b], 1.0 / delta);
    }
    d.contragredient = ComplexMatrix(n, n);
    for (std::size_t a = 0; a < n; ++a) d.contragredient(g.inverse[a], a) = 1.0;
    d.jones_index = g.identity;
    return TwoBoxStructure::create(std::move(d));
}

StructurePtr make_subgroup_2p2(int p) {
    if (!is_odd_prime(p)) throw Error(ErrorCode::BadPrime, std::to_string(p) + " is not an odd prime");
    const std::size_t h = std::size_t(p - 1) / 2;
    const std::size_t n = h + 1;
    const double delta = std::sqrt(double(p));
    StructureData d = empty_data("Z2subZ" + std::to_string(p), n, delta);
    d.labels.push_back("e");
    for (std::size_t m = 1; m <= h; ++m) d.labels.push_back("g" + std::to_string(m));
    d.trace[0] = 1.0;
    for (std::size_t m = 0; m < n; ++m) d.product[m * n + m] = basis_vector(n, m);
    for (std::size_t m = 1; m < n; ++m) d.trace[m] = 2.0;

    // g_k as a coefficient vector, with g_0 = 2e and g_k = g_{p-k}.
    auto g = [&](std::size_t k) {
        if (k > h) k = std::size_t(p) - k;
        return k == 0 ? basis_vector(n, 0, 2.0) : basis_vector(n, k);
    };
    for (std::size_t x = 0; x < n; ++x) {
        d.coproduct[0 * n + x] = basis_vector(n, x, 1.0 / delta);
        d.coproduct[x * n + 0] = basis_vector(n, x, 1.0 / delta);
    }
    for (std::size_t a = 1; a < n; ++a)
        for (std::size_t b = 1; b < n; ++b) {
            CVector v = g(a + b);
            const CVector w = g(a > b ? a - b : b - a);
            for (std::size_t k = 0; k < n; ++k) v[k] = (v[k] + w[k]) / delta;
            d.coproduct[a * n + b] = v;
        }
    d.jones_index = 0;
    return TwoBoxStructure::create(std::move(d));
}

StructurePtr tensor_product(const StructurePtr& a, const StructurePtr& b) {
    const std::size_t na = a->dim(), nb = b->dim(), n = na * nb;
    StructureData d;
    d.name = a->name() + "-tensor-" + b->name();
    d.delta = a->delta() * b->delta();
    d.product.resize(n * n);
    d.coproduct.resize(n * n);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            d.labels.push_back(a->labels()[i] + "(x)" + b->labels()[j]);
            d.trace.push_back(a->trace_vector()[i] * b->trace_vector()[j]);
            for (std::size_t k = 0; k < na; ++k)
                for (std::size_t l = 0; l < nb; ++l) {
                    const std::size_t row = (i * nb + j) * n + (k * nb + l);
                    d.product[row] = kron(a->product_row(i, k), b->product_row(j, l));
                    d.coproduct[row] = kron(a->coproduct_row(i, k), b->coproduct_row(j, l));
                }
        }
    d.contragredient = kron(a->data().contragredient, b->data().contragredient);
    d.adjoint = kron(a->data().adjoint, b->data().adjoint);
    if (a->unit_index() && b->unit_index()) d.unit_index = *a->unit_index() * nb + *b->unit_index();
    if (a->jones_index() && b->jones_index()) d.jones_index = *a->jones_index() * nb + *b->jones_index();
    d.canonical_biprojections = {kron(a->unit().coeffs(), b->jones().coeffs()),
                                 kron(a->jones().coeffs(), b->unit().coeffs())};
    return TwoBoxStructure::create(std::move(d));
}

StructurePtr free_product(const StructurePtr& a, const StructurePtr& b, const Tolerance& tol) {
    const StructurePtr t = tensor_product(a, b);
    const std::size_t na = a->dim(), nb = b->dim(), nt = t->dim();

    // Embedding: a_i (x) e_B for every i, then id_A (x) b_j whenever it adds a new direction.
    std::vector<CVector> columns;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < na; ++i) {
        columns.push_back(kron(a->basis(i).coeffs(), b->jones().coeffs()));
        labels.push_back(a->labels()[i] + "(x)e");
    }
    for (std::size_t j = 0; j < nb; ++j) {
        columns.push_back(kron(a->unit().coeffs(), b->basis(j).coeffs()));
        if (matrix_rank(ComplexMatrix::from_columns(columns, nt), tol) < columns.size()) {
            columns.pop_back();
            continue;
        }
        labels.push_back("id(x)" + b->labels()[j]);
    }
    const std::size_t n = columns.size();
    const ComplexMatrix embed = ComplexMatrix::from_columns(columns, nt);

    auto restrict = [&](const CVector& v, const std::string& what) {
        CVector x = solve_least_squares(embed, v, tol);
        const CVector back = embed * std::span<const Complex>(x);
        if (relative_difference(back, v) > tol.eq_tol)
            throw Error(ErrorCode::ClosureFailure, what + " leaves the free product span");
        for (auto& c : x)
            if (std::abs(c) < 1e-15) c = 0.0;
        return x;
    };

    StructureData d;
    d.name = a->name() + "-free-" + b->name();
    d.delta = t->delta();
    d.labels = labels;
    d.product.resize(n * n);
    d.coproduct.resize(n * n);
    d.contragredient = ComplexMatrix(n, n);
    d.adjoint = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        d.trace.push_back(t->trace(columns[i]).real());
        d.contragredient.set_column(i, restrict(t->contragredient(columns[i]), "contragredient"));
        CVector conj_col(columns[i].size());
        for (std::size_t k = 0; k < conj_col.size(); ++k) conj_col[k] = std::conj(columns[i][k]);
        const CVector adj = t->data().adjoint * std::span<const Complex>(conj_col);
        d.adjoint.set_column(i, restrict(adj, "adjoint"));
        for (std::size_t j = 0; j < n; ++j) {
            d.product[i * n + j] = restrict(t->multiply(columns[i], columns[j]), "product");
            d.coproduct[i * n + j] = restrict(t->coproduct(columns[i], columns[j]), "coproduct");
        }
    }
    d.free_factor_dims = leaves(a);
    const auto lb = leaves(b);
    d.free_factor_dims.insert(d.free_factor_dims.end(), lb.begin(), lb.end());
    d.canonical_biprojections = {restrict(kron(a->unit().coeffs(), b->jones().coeffs()), "separator")};

    return TwoBoxStructure::create(std::move(d));
}

StructurePtr fourier_dual(const StructurePtr& s, const Tolerance& tol) {
    const std::size_t n = s->dim();
    const double delta = s->delta();
    const CVector e = s->jones().coeffs();
    StructureData d;
    d.name = "dual-" + s->name();
    d.delta = delta;
    d.labels = s->labels();
    d.product.resize(n * n);
    d.coproduct.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            d.product[i * n + j] = s->coproduct_row(i, j);
            d.coproduct[i * n + j] = s->product_row(i, j);
        }
    for (std::size_t i = 0; i < n; ++i) {
        const Complex t = delta * s->trace(s->multiply(s->basis(i).coeffs(), e));
        if (std::abs(t.imag()) > tol.eq_tol * (1.0 + std::abs(t)))
            throw Error(ErrorCode::DualAxiomFailure, "dual trace is not real");
        d.trace.push_back(t.real());
    }
    d.contragredient = s->data().contragredient;
    d.adjoint = s->data().contragredient * s->data().adjoint;
    StructurePtr out = TwoBoxStructure::create(std::move(d));
    const AxiomReport rep = verify_axioms(out, tol, 50);
    if (!rep.passed()) {
        std::string failed;
        for (const auto& f : rep.failures()) failed += (failed.empty() ? "" : ", ") + f;
        throw Error(ErrorCode::DualAxiomFailure, "dual of " + s->name() + " fails: " + failed);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Named catalog

namespace {

class Params {
public:
    explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

    double get(const std::string& key, double fallback) {
        used_.insert(key);
        const auto it = raw_.find(key);
        if (it == raw_.end()) return fallback;
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(it->second, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != it->second.size())
            throw Error(ErrorCode::BadShape, "parameter " + key + " is not a number: " + it->second);
        return v;
    }

    void finish() const {
        for (const auto& [k, v] : raw_)
            if (!used_.count(k)) throw Error(ErrorCode::UnknownName, "unknown parameter '" + k + "'");
    }

private:
    const std::map<std::string, std::string>& raw_;
    std::set<std::string> used_;
};

bool parse_suffix(const std::string& s, const std::string& prefix, int& value) {
    if (s.rfind(prefix, 0) != 0 || s.size() == prefix.size()) return false;
    const std::string rest = s.substr(prefix.size());
    for (char c : rest)
        if (c < '0' || c > '9') return false;
    if (rest.size() > 6) return false;
    value = std::stoi(rest);
    return true;
}

StructurePtr atom(const std::string& name, Params& p) {
    if (name.rfind("dual-", 0) == 0) return fourier_dual(atom(name.substr(5), p));
    if (name == "TL") return make_TL(p.get("delta", 2.0));
    if (name == "FussCatalan") return free_product(make_TL(p.get("delta_a", 2.0)), make_TL(p.get("delta_b", 2.0)));
    if (name == "Z2xZ2") return make_group(GroupPresentation::klein_four());
    if (name == "S3") return make_group(GroupPresentation::symmetric3());
    int k = 0;
    if (parse_suffix(name, "Z2subZ", k)) return make_subgroup_2p2(k);
    if (parse_suffix(name, "Z", k) && k >= 2) return make_group(GroupPresentation::cyclic(std::size_t(k)));
    throw Error(ErrorCode::UnknownName, "unknown catalog name '" + name + "'");
}

// name := atom (("-free-" | "-tensor-") name)?
StructurePtr compose(const std::string& name, Params& p) {
    const std::size_t f = name.find("-free-");
    const std::size_t t = name.find("-tensor-");
    if (f == std::string::npos && t == std::string::npos) return atom(name, p);
    if (f != std::string::npos && (t == std::string::npos || f < t))
        return free_product(atom(name.substr(0, f), p), compose(name.substr(f + 6), p));
    return tensor_product(atom(name.substr(0, t), p), compose(name.substr(t + 8), p));
}

}  // namespace

StructurePtr named(const std::string& name, const std::map<std::string, std::string>& params) {
    Params p(params);
    StructurePtr s = compose(name, p);
    p.finish();
    return s;
}

std::vector<std::string> catalog_names() {
    return {"TL",          "Z2",         "Z3",          "Z4",         "Z5",          "Z2xZ2",
            "S3",          "dual-S3",    "Z2subZ3",     "Z2subZ5",    "Z2subZ7",     "Z2subZ11",
            "FussCatalan", "TL-free-Z2", "TL-free-Z3",  "Z3-free-TL", "Z2-free-Z2",  "Z2-free-Z3",
            "Z2-tensor-TL", "TL-free-FussCatalan"};
}

}  // namespace twobox
