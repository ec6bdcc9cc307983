#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "twobox/axioms.hpp"
#include "twobox/blocks.hpp"
#include "twobox/catalog.hpp"
#include "twobox/classify.hpp"
#include "twobox/errors.hpp"
#include "twobox/positivity.hpp"

using namespace twobox;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

// Rank in an abelian algebra counted directly: minimal projections P with P x != 0.
std::size_t abelian_rank(const Element& x) {
    std::size_t r = 0;
    for (const auto& p : block_decomposition(x.owner()).all_minimal_projections())
        r += norm2(multiply(p, x).coeffs()) > 1e-9 * (1 + norm2(x.coeffs()));
    return r;
}

oracle::FusionTable klein_table() {
    oracle::FusionTable t;
    t.delta = 2.0;
    t.trace.assign(4, 1.0);
    t.coproduct.assign(4, std::vector<std::vector<double>>(4, std::vector<double>(4)));
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) t.coproduct[a][b][a ^ b] = 0.5;
    return t;
}

std::vector<StructurePtr> sample_structures() {
    std::vector<StructurePtr> out;
    for (const char* n : {"TL", "Z3", "Z4", "Z2xZ2", "S3", "dual-S3", "Z2subZ5", "Z2subZ7", "FussCatalan", "TL-free-Z3",
                          "Z2-tensor-TL"})
        out.push_back(named(n));
    return out;
}

}  // namespace

TEST_CASE("Schur product examples") {
    const auto tl = make_TL(2.0);
    const Element ee = coproduct(tl->jones(), tl->jones());
    CHECK(is_positive(ee));
    CHECK(residual(ee, 0.5 * tl->jones()) < 1e-15);

    const auto z4 = make_group(GroupPresentation::cyclic(4));
    for (std::size_t g = 0; g < 4; ++g)
        for (std::size_t h = 0; h < 4; ++h) {
            const Element x = coproduct(z4->basis(g), z4->basis(h));
            CHECK(is_positive(x));
            CHECK(rank(x) == 1);
        }

    const auto p7 = make_subgroup_2p2(7);
    const Element g11 = coproduct(p7->basis(1), p7->basis(1));
    CHECK(is_positive(g11));
    CHECK(rank(g11) == 2);

    for (const auto& s : sample_structures()) {
        INFO(s->name());
        const SchurReport r = schur_product_check(s, 100);
        CHECK(r.passed);
        CHECK(r.trace_positive);
    }
}

TEST_CASE("is_biprojection against brute force") {
    const auto z4 = make_group(GroupPresentation::cyclic(4));
    CHECK(is_biprojection(z4->jones()));
    CHECK(is_biprojection(z4->unit()));
    const auto t4 = oracle::cyclic_table(4);
    CHECK(oracle::is_biprojection(t4, {0, 2}));
    CHECK(is_biprojection(z4->jones() + z4->basis(2)));
    CHECK_FALSE(oracle::is_biprojection(t4, {0, 1}));
    CHECK_FALSE(is_biprojection(z4->jones() + z4->basis(1)));

    const auto p7 = make_subgroup_2p2(7);
    CHECK_FALSE(oracle::is_biprojection(oracle::subgroup_table(7), {0, 1}));
    CHECK_FALSE(is_biprojection(p7->jones() + p7->basis(1)));

    CHECK(code_of([&] { is_biprojection(2.0 * z4->jones()); }) == ErrorCode::NotAProjection);
}

TEST_CASE("enumerate_biprojections") {
    const auto z4 = make_group(GroupPresentation::cyclic(4));
    const auto b4 = enumerate_biprojections(z4);
    REQUIRE(b4.size() == 3);
    CHECK(b4[0].trace == doctest::Approx(1.0));
    CHECK(b4[1].trace == doctest::Approx(2.0));
    CHECK(b4[2].trace == doctest::Approx(4.0));

    CHECK(enumerate_biprojections(named("Z2xZ2")).size() == std::size_t(oracle::count_biprojections(klein_table())));
    CHECK(oracle::count_biprojections(klein_table()) == 5);
    CHECK(enumerate_biprojections(make_subgroup_2p2(7)).size() ==
          std::size_t(oracle::count_biprojections(oracle::subgroup_table(7))));
    CHECK(oracle::count_biprojections(oracle::subgroup_table(7)) == 2);

    const auto ds3 = named("dual-S3");
    CHECK(code_of([&] { enumerate_biprojections(ds3); }) == ErrorCode::UnsupportedNonCentralSearch);
    CHECK(enumerate_biprojections(ds3, {}, true).size() >= 2);

    for (const auto& s : sample_structures()) {
        if (!block_decomposition(s).abelian()) continue;
        for (const auto& b : enumerate_biprojections(s)) {
            CHECK(b.trace >= 1.0 - 1e-9);
            CHECK(b.trace <= s->delta() * s->delta() + 1e-9);
            CHECK(residual(contragredient(b.element), b.element) < 1e-9);
            CHECK(precedes(s->jones(), b.element));
        }
    }
}

TEST_CASE("generated biprojections") {
    const auto z4 = make_group(GroupPresentation::cyclic(4));
    CHECK(residual(generated_biprojection(z4->jones()).element, z4->jones()) < 1e-9);
    const auto g2 = generate_biprojection(z4->basis(2));
    CHECK(residual(g2.biprojection.element, z4->jones() + z4->basis(2)) < 1e-8);
    CHECK(g2.iterations <= z4->dim());

    for (int p : {5, 7}) {
        const auto s = make_subgroup_2p2(p);
        const auto g = generate_biprojection(s->basis(1));
        CHECK(residual(g.biprojection.element, s->unit()) < 1e-8);
        CHECK(g.iterations <= s->dim());
    }

    // Monotone in y for positive y, z.
    for (const auto& s : sample_structures()) {
        if (!block_decomposition(s).abelian()) continue;
        std::mt19937_64 rng(21);
        const auto minimal = block_decomposition(s).all_minimal_projections();
        for (std::size_t i = 0; i < minimal.size(); ++i) {
            const Element y = minimal[i];
            const Element z = minimal[(i * 7 + 3) % minimal.size()];
            CHECK(precedes(generated_biprojection(y).element, generated_biprojection(y + z).element));
        }
    }
}

TEST_CASE("convolution operators") {
    for (const auto& s : sample_structures()) {
        INFO(s->name());
        CHECK(relative_difference(convolution_operator(s->delta() * s->jones()), ComplexMatrix::identity(s->dim())) < 1e-12);
        std::mt19937_64 rng(4);
        const Element a = random_element(s, rng), b = random_element(s, rng);
        CHECK(relative_difference(convolution_operator(coproduct(a, b)), convolution_operator(a) * convolution_operator(b)) <
              1e-10);
        // The adjoint of L_a is L_{(a^*)'}.
        CHECK(relative_difference(convolution_operator(a).adjoint(), convolution_operator(contragredient(adjoint(a)))) <
              1e-10);
    }
    const auto tl = make_TL(2.0);
    CHECK(hermitian_eig(convolution_operator(tl->unit())).eigenvalues.back() == doctest::Approx(2.0));
}

TEST_CASE("norm law") {
    const auto tl = make_TL(3.0);
    CHECK(norm_check(tl->jones()) == doctest::Approx(1.0 / 3.0));
    CHECK(norm_check(tl->unit()) == doctest::Approx(3.0));
    const auto p7 = make_subgroup_2p2(7);
    const double top = oracle::real_eigenvalues(oracle::convolution_matrix(oracle::subgroup_table(7), {0, 1, 0, 0})).back();
    CHECK(norm_check(p7->basis(1)) == doctest::Approx(top).epsilon(1e-10));
    CHECK(top == doctest::Approx(2.0 / std::sqrt(7.0)));
    for (const auto& s : sample_structures()) {
        std::mt19937_64 rng(8);
        for (int t = 0; t < 20; ++t) {
            const Element a = random_positive(s, rng);
            CHECK(std::abs(norm_check(a) - trace(a).real() / s->delta()) < 1e-8);
        }
    }
}

TEST_CASE("spectral projection theorem") {
    const auto z4 = make_group(GroupPresentation::cyclic(4));
    const auto r1 = spectral_biprojection_check(z4->jones());
    CHECK(r1.passed);
    const auto r2 = spectral_biprojection_check(z4->basis(2));
    CHECK(r2.passed);
    CHECK(matrix_rank(spectral_projection_max(convolution_operator(z4->basis(2) + contragredient(z4->basis(2))))) == 2);
    const auto p7 = make_subgroup_2p2(7);
    const auto r3 = spectral_biprojection_check(p7->basis(1));
    CHECK(r3.passed);
    CHECK(residual(r3.generated.element, p7->unit()) < 1e-8);
    CHECK(relative_difference(spectral_projection_max(convolution_operator(2.0 * p7->basis(1))),
                              (1.0 / p7->delta()) * convolution_operator(p7->unit())) < 1e-9);
}

TEST_CASE("virtual normalizers") {
    const auto tl = make_TL(2.0);
    CHECK(is_virtual_normalizer(tl->unit() - tl->jones()));

    // In TL * TL the A-side projection (id - e) (x) e has rank-one coproducts with every other minimal projection.
    const auto fc = named("FussCatalan", {{"delta_a", "2"}, {"delta_b", "3"}});
    const auto minimal = block_decomposition(fc).all_minimal_projections();
    const Element a_side = fc->element({0.0, 1.0, 0.0}) - fc->element({1.0, 0.0, 0.0});  // (id - e)(x)e
    bool found = false;
    for (const auto& p : minimal)
        if (residual(p, a_side) < 1e-9) found = true;
    REQUIRE(found);
    for (const auto& q : minimal) {
        if (residual(q, contragredient(a_side)) < 1e-9) continue;
        CHECK(abelian_rank(coproduct(a_side, q)) == 1);
        CHECK(abelian_rank(coproduct(q, a_side)) == 1);
    }
    CHECK(is_virtual_normalizer(a_side));

    const auto p7 = make_subgroup_2p2(7);
    CHECK(abelian_rank(coproduct(p7->basis(1), p7->basis(2))) == 2);
    CHECK_FALSE(is_virtual_normalizer(p7->basis(1)));
    CHECK(code_of([&] { is_virtual_normalizer(p7->unit()); }) == ErrorCode::NotCentralMinimal);
}

TEST_CASE("separating biprojections") {
    // Z2 * Z2: the B-side projection id (x) P_1 has trace 2 and separates by id (x) e.
    const auto zz = named("Z2-free-Z2");
    const Element sep = zz->element(zz->data().canonical_biprojections[0]);
    const auto minimal = block_decomposition(zz).all_minimal_projections();
    std::optional<Element> b_side;
    for (const auto& p : minimal)
        if (trace(p).real() > 1.5) b_side = p;
    REQUIRE(b_side.has_value());
    const auto r = find_separating_biprojection(*b_side);
    CHECK(r.construction == 2);
    CHECK(residual(r.biprojection.element, sep) < 1e-9);

    // Case 1: the TL projection in TL * Z2 gives e + P.
    const auto tz = named("TL-free-Z2");
    const Element jw = tz->element({0.0, 1.0, 0.0}) - tz->element({1.0, 0.0, 0.0});  // (id - e)(x)e
    REQUIRE(is_virtual_normalizer(jw));
    const auto r1 = find_separating_biprojection(jw);
    CHECK(r1.construction == 1);
    CHECK(residual(r1.biprojection.element, tz->jones() + jw) < 1e-9);

    const auto p7 = make_subgroup_2p2(7);
    CHECK(code_of([&] { find_separating_biprojection(p7->basis(1)); }) == ErrorCode::NotVirtualNormalizer);
}

TEST_CASE("free separation") {
    for (const char* name : {"FussCatalan", "TL-free-Z3", "Z3-free-TL", "Z2-free-Z3"}) {
        INFO(name);
        const auto s = named(name);
        const auto fs = free_separation(s->element(s->data().canonical_biprojections[0]));
        CHECK(fs.separating);
        CHECK(fs.inner_dim + fs.outer_dim - 1 == s->dim());
        CHECK(fs.inner_dim == s->data().free_factor_dims.front());
    }
    const auto z4 = make_group(GroupPresentation::cyclic(4));
    CHECK(is_free_separating(z4->unit()));
    const auto fs = free_separation(z4->jones() + z4->basis(2));
    CHECK_FALSE(fs.separating);
    CHECK(fs.joint_dim == 3);
}

TEST_CASE("tensor separation") {
    const auto s = named("Z2-tensor-TL");
    const Element a = s->element(s->data().canonical_biprojections[0]);
    const Element b = s->element(s->data().canonical_biprojections[1]);
    const auto t = tensor_separation(a, b);
    CHECK(t.product_is_e);
    CHECK(t.coproduct_is_id_over_delta);
    CHECK(t.commutes);
    CHECK(t.separating);
    CHECK_FALSE(is_tensor_separating(s->jones(), s->jones()));

    // (e, id) is the trivial split; 2p2 at p=7 has no other biprojections to pair.
    const auto p7 = make_subgroup_2p2(7);
    CHECK(is_tensor_separating(p7->jones(), p7->unit()));
    CHECK_FALSE(is_tensor_separating(p7->unit(), p7->unit()));
    CHECK(enumerate_biprojections(p7).size() == 2);
    // In Z4 the only nontrivial biprojection e + P2 cannot be paired with itself.
    const auto z4 = named("Z4");
    CHECK_FALSE(is_tensor_separating(z4->jones() + z4->basis(2), z4->jones() + z4->basis(2)));
}

TEST_CASE("group structures have rank-one coproducts of minimal projections") {
    for (const char* name : {"Z2", "Z3", "Z4", "Z2xZ2", "Z5", "S3"}) {
        const auto s = named(name);
        const auto minimal = block_decomposition(s).all_minimal_projections();
        for (const auto& p : minimal)
            for (const auto& q : minimal) CHECK(rank(coproduct(contragredient(p), q)) == 1);
    }
}

TEST_CASE("trace dichotomy for virtual normalizers") {
    // tr(P_j (P_i' * P_k)) is 0 or tr(P_i) tr(P_k) / delta when P_i is a virtual normalizer.
    for (const char* name : {"TL-free-Z3", "Z3-free-TL", "Z2-free-Z3", "TL-free-FussCatalan", "FussCatalan"}) {
        INFO(name);
        const auto s = named(name);
        const auto minimal = block_decomposition(s).all_minimal_projections();
        for (const auto& pi : minimal) {
            if (trace(pi).real() <= 1.0 + 1e-9 || !is_virtual_normalizer(pi)) continue;
            for (const auto& pk : minimal) {
                if (residual(pk, pi) < 1e-9) continue;
                const double full = trace(pi).real() * trace(pk).real() / s->delta();
                const Element c = coproduct(contragredient(pi), pk);
                for (const auto& pj : minimal) {
                    const double t = trace(multiply(pj, c)).real();
                    CHECK((std::abs(t) < 1e-9 || std::abs(t - full) < 1e-9));
                }
            }
        }
    }
}
