#pragma once

// Reference computations that share no code with the library: characteristic
// polynomials, polynomial roots, DFT matrices, hand-written structure tables and
// brute-force checks over them. Tests compare library output against these.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;  // row-major, small
using Vec = std::vector<C>;

inline Mat identity(std::size_t n) {
    Mat m(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
    const std::size_t n = a.size(), k = b.size(), m = b[0].size();
    Mat c(n, Vec(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

// Faddeev-LeVerrier: coefficients c[0..n] of det(xI - A), c[n] = 1.
inline Vec characteristic_polynomial(const Mat& a) {
    const std::size_t n = a.size();
    Vec c(n + 1);
    c[n] = 1.0;
    Mat m(n, Vec(n));  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        Mat am = mul(a, m);
        for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
        m = am;  // M_k = A M_{k-1} + c_{n-k+1} I
        const Mat amk = mul(a, m);
        C tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += amk[i][i];
        c[n - k] = -tr / double(k);
    }
    return c;
}

// Durand-Kerner simultaneous iteration for a monic polynomial.
inline Vec polynomial_roots(const Vec& coeffs) {
    const std::size_t n = coeffs.size() - 1;
    auto eval = [&](C x) {
        C v = 0;
        for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
        return v;
    };
    Vec z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(C(0.4, 0.9), double(i));
    for (int it = 0; it < 2000; ++it) {
        double change = 0;
        for (std::size_t i = 0; i < n; ++i) {
            C den = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) den *= z[i] - z[j];
            const C step = eval(z[i]) / den;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15) break;
    }
    return z;
}

// Real parts of the roots of the characteristic polynomial, sorted ascending.
inline std::vector<double> real_eigenvalues(const Mat& a) {
    std::vector<double> out;
    for (const auto& r : polynomial_roots(characteristic_polynomial(a))) out.push_back(r.real());
    std::sort(out.begin(), out.end());
    return out;
}

// One null vector of a (assumed rank n-1) by Gaussian elimination with full pivoting.
inline Vec null_vector(Mat a) {
    const std::size_t n = a.size();
    std::vector<std::size_t> col(n);
    std::iota(col.begin(), col.end(), 0);
    std::size_t r = 0;
    for (; r < n; ++r) {
        std::size_t bi = r, bj = r;
        for (std::size_t i = r; i < n; ++i)
            for (std::size_t j = r; j < n; ++j)
                if (std::abs(a[i][col[j]]) > std::abs(a[bi][col[bj]])) bi = i, bj = j;
        if (std::abs(a[bi][col[bj]]) < 1e-9) break;
        std::swap(a[r], a[bi]);
        std::swap(col[r], col[bj]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r) continue;
            const C f = a[i][col[r]] / a[r][col[r]];
            for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[r][j];
        }
    }
    Vec v(n);
    v[col[r]] = 1.0;  // free variable
    for (std::size_t i = 0; i < r; ++i) v[col[i]] = -a[i][col[r]] / a[i][col[i]];
    return v;
}

// F(j, k) = omega^{jk} / sqrt(n), omega = exp(2 pi i / n).
inline Mat dft(std::size_t n) {
    Mat f(n, Vec(n));
    const double pi = std::acos(-1.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) f[j][k] = std::polar(1.0 / std::sqrt(double(n)), 2 * pi * double(j * k) / double(n));
    return f;
}

// Structure written directly as "minimal projections with a fusion-style table":
// basis b_0 = e, b_1..; products b_i b_j = delta_ij b_i; coproduct table coproduct[i][j][k].
struct FusionTable {
    double delta = 0;
    std::vector<double> trace;
    std::vector<std::vector<std::vector<double>>> coproduct;
};

// delta g_m * g_n = g_{m+n} + g_{|m-n|}, with g_0 = 2e and g_k = g_{p-k} folding.
inline FusionTable subgroup_table(int p) {
    const int h = (p - 1) / 2;
    FusionTable t;
    t.delta = std::sqrt(double(p));
    t.trace.assign(std::size_t(h + 1), 2.0);
    t.trace[0] = 1.0;
    t.coproduct.assign(std::size_t(h + 1), std::vector<std::vector<double>>(std::size_t(h + 1), std::vector<double>(std::size_t(h + 1))));
    auto fold = [&](int k) { return k > h ? p - k : k; };
    auto add = [&](std::vector<double>& v, int k, double w) {
        if (k == 0)
            v[0] += 2.0 * w;  // g_0 = 2e
        else
            v[std::size_t(fold(k))] += w;
    };
    for (int m = 0; m <= h; ++m)
        for (int n = 0; n <= h; ++n) {
            auto& v = t.coproduct[std::size_t(m)][std::size_t(n)];
            if (m == 0 || n == 0) {
                v[std::size_t(m == 0 ? n : m)] = 1.0 / t.delta;  // e is the coproduct unit up to delta
                continue;
            }
            add(v, m + n, 1.0 / t.delta);
            add(v, std::abs(m - n), 1.0 / t.delta);
        }
    return t;
}

// Group Z_n: P_a * P_b = P_{a+b} / sqrt(n).
inline FusionTable cyclic_table(int n) {
    FusionTable t;
    t.delta = std::sqrt(double(n));
    t.trace.assign(std::size_t(n), 1.0);
    t.coproduct.assign(std::size_t(n), std::vector<std::vector<double>>(std::size_t(n), std::vector<double>(std::size_t(n))));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t.coproduct[std::size_t(a)][std::size_t(b)][std::size_t((a + b) % n)] = 1.0 / t.delta;
    return t;
}

// Matrix of x -> a * x in the orthonormal basis b_i / sqrt(tr b_i).
inline Mat convolution_matrix(const FusionTable& t, const std::vector<double>& a) {
    const std::size_t n = t.trace.size();
    Mat m(n, Vec(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                m[l][k] += a[i] * t.coproduct[i][k][l] * std::sqrt(t.trace[l] / t.trace[k]);
    return m;
}

// Coproduct of two elements given by coefficients over the minimal projections.
inline std::vector<double> coproduct(const FusionTable& t, const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = t.trace.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) out[k] += a[i] * b[j] * t.coproduct[i][j][k];
    return out;
}

// Q = sum of b_i over the subset is a biprojection iff Q*Q is supported inside Q.
inline bool is_biprojection(const FusionTable& t, const std::vector<int>& subset) {
    std::vector<double> q(t.trace.size());
    for (int i : subset) q[std::size_t(i)] = 1.0;
    const auto qq = coproduct(t, q, q);
    for (std::size_t k = 0; k < q.size(); ++k)
        if (q[k] == 0.0 && std::abs(qq[k]) > 1e-12) return false;
    return true;
}

inline int count_biprojections(const FusionTable& t) {
    const std::size_t n = t.trace.size();
    int count = 0;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        if (!(mask & 1)) continue;  // must contain e
        std::vector<int> subset;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) subset.push_back(int(i));
        if (is_biprojection(t, subset)) ++count;
    }
    return count;
}

// Subgroups of Z_n are the divisors of n.
inline int subgroup_count_cyclic(int n) {
    int c = 0;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) ++c;
    return c;
}

// Character degrees of a finite group from its multiplication table:
// number of classes, number of linear characters = |G / [G, G]|, and the
// remaining degrees forced by sum of squares (enough for groups of order <= 6).
struct Degrees {
    int classes = 0;
    int linear = 0;
    std::vector<int> degrees;
};

inline Degrees character_degrees(const std::vector<std::vector<int>>& mul) {
    const int n = int(mul.size());
    std::vector<int> inv(static_cast<std::size_t>(n));
    int id = 0;
    for (int g = 0; g < n; ++g)
        if (mul[std::size_t(g)][std::size_t(g)] == g) id = g;
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (mul[std::size_t(g)][std::size_t(h)] == id) inv[std::size_t(g)] = h;
    std::set<std::set<int>> classes;
    for (int x = 0; x < n; ++x) {
        std::set<int> cls;
        for (int g = 0; g < n; ++g) cls.insert(mul[std::size_t(mul[std::size_t(g)][std::size_t(x)])][std::size_t(inv[std::size_t(g)])]);
        classes.insert(cls);
    }
    std::set<int> commutators = {id};
    bool grown = true;
    while (grown) {  // closure of commutators under multiplication
        grown = false;
        std::set<int> next = commutators;
        for (int g = 0; g < n; ++g)
            for (int h = 0; h < n; ++h) {
                const int c = mul[std::size_t(mul[std::size_t(mul[std::size_t(g)][std::size_t(h)])][std::size_t(inv[std::size_t(g)])])][std::size_t(inv[std::size_t(h)])];
                next.insert(c);
            }
        for (int a : next)
            for (int b : next) next.insert(mul[std::size_t(a)][std::size_t(b)]);
        if (next.size() != commutators.size()) grown = true;
        commutators = next;
    }
    Degrees d;
    d.classes = int(classes.size());
    d.linear = n / int(commutators.size());
    d.degrees.assign(std::size_t(d.linear), 1);
    const int rest_classes = d.classes - d.linear;
    const int rest_sum = n - d.linear;
    if (rest_classes > 0) {
        const int sq = rest_sum / rest_classes;
        const int deg = int(std::lround(std::sqrt(double(sq))));
        for (int i = 0; i < rest_classes; ++i) d.degrees.push_back(deg);
    }
    std::sort(d.degrees.begin(), d.degrees.end());
    return d;
}

inline std::vector<std::vector<int>> s3_table() {
    // Elements as permutations of {0,1,2}; product (g h)(x) = g(h(x)).
    std::vector<std::vector<int>> perms = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    auto index = [&](const std::vector<int>& p) {
        return int(std::find(perms.begin(), perms.end(), p) - perms.begin());
    };
    std::vector<std::vector<int>> mul(6, std::vector<int>(6));
    for (int g = 0; g < 6; ++g)
        for (int h = 0; h < 6; ++h) {
            std::vector<int> p(3);
            for (int x = 0; x < 3; ++x) p[std::size_t(x)] = perms[std::size_t(g)][std::size_t(perms[std::size_t(h)][std::size_t(x)])];
            mul[std::size_t(g)][std::size_t(h)] = index(p);
        }
    return mul;
}

}  // namespace oracle
