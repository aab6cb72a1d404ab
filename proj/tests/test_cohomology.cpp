#include "ogw/model.hpp"

#include <doctest.h>

using namespace ogw;

namespace {

ClassVector basis_vec(const CohomologyModel& coh, int i) {
    ClassVector v(coh.basis.size(), Rational(0));
    v[i] = 1;
    return v;
}

} // namespace

TEST_CASE("cup product on the CP^2 basis") {
    Model m = preset_projective(2);
    const CohomologyModel& coh = m.coh;
    // 1 ^ H = H
    CHECK(coh.cup(basis_vec(coh, 0), basis_vec(coh, 1)) == basis_vec(coh, 1));
    // H ^ H = H^2
    CHECK(coh.cup(basis_vec(coh, 1), basis_vec(coh, 1)) == basis_vec(coh, 2));
    // H^2 ^ H = 0
    CHECK(coh.cup(basis_vec(coh, 2), basis_vec(coh, 1)) ==
          ClassVector(coh.basis.size(), Rational(0)));
}

TEST_CASE("integration is supported in top degree and linear") {
    Model m = preset_projective(2);
    const CohomologyModel& coh = m.coh;
    CHECK(coh.integrate_X(basis_vec(coh, 2)) == 1);
    CHECK(coh.integrate_X(basis_vec(coh, 1)) == 0);
    ClassVector v = basis_vec(coh, 2);
    v[2] = 3;
    v[1] = 1;
    CHECK(coh.integrate_X(v) == 3);
}

TEST_CASE("pairing matrix and exact inverse") {
    for (int n : {1, 2, 3}) {
        Model m = preset_projective(n);
        const auto& p = m.coh.pairing;
        int K1 = m.coh.basis.size();
        for (int i = 0; i < K1; ++i)
            for (int j = 0; j < K1; ++j) {
                CHECK(p.g[i][j] == p.g[j][i]);
                Rational dot = 0;
                for (int l = 0; l < K1; ++l)
                    dot += p.g[i][l] * p.g_inv[l][j];
                CHECK(dot == (i == j ? Rational(1) : Rational(0)));
                if (m.coh.deg(i) + m.coh.deg(j) != m.coh.basis.top_degree)
                    CHECK(p.g[i][j] == 0);
            }
    }
}

TEST_CASE("degenerate ring input is rejected") {
    Model m = preset_projective(2);
    // wipe the integral: the pairing becomes singular
    m.coh.ring.integral.assign(m.coh.basis.size(), Rational(0));
    CHECK_THROWS_AS(build_pairing(m.coh.basis, m.coh.ring), Error);
}

TEST_CASE("cup is commutative and associative on the product preset") {
    Model m = preset_product(3, 3);
    const CohomologyModel& coh = m.coh;
    int K1 = coh.basis.size();
    for (int i = 0; i < K1; i += 3)
        for (int j = 0; j < K1; j += 5) {
            CHECK(coh.cup(basis_vec(coh, i), basis_vec(coh, j)) ==
                  coh.cup(basis_vec(coh, j), basis_vec(coh, i)));
            for (int l = 0; l < K1; l += 7) {
                auto left = coh.cup(coh.cup(basis_vec(coh, i), basis_vec(coh, j)), basis_vec(coh, l));
                auto right = coh.cup(basis_vec(coh, i), coh.cup(basis_vec(coh, j), basis_vec(coh, l)));
                CHECK(left == right);
            }
        }
}

TEST_CASE("resolve_unit_projection reproduces admissible classes") {
    Model m = preset_product(3, 3);
    const CohomologyModel& coh = m.coh;
    for (int a = 0; a <= coh.kappa(); ++a)
        CHECK(coh.resolve_unit_projection(basis_vec(coh, a)) == basis_vec(coh, a));
    // linearity: a + 2b
    ClassVector v(coh.basis.size(), Rational(0));
    v[2] = 1;
    v[5] = 2;
    CHECK(coh.resolve_unit_projection(v) == v);
    // zero maps to zero
    CHECK(coh.resolve_unit_projection(ClassVector(coh.basis.size(), Rational(0))) ==
          ClassVector(coh.basis.size(), Rational(0)));
}

TEST_CASE("inverse pairing row of the unit is supported in top degree") {
    Model m = preset_product(3, 3);
    const auto& coh = m.coh;
    int unit = coh.basis.unit_index;
    for (int mu = 0; mu < coh.basis.size(); ++mu)
        if (coh.deg(mu) != coh.basis.top_degree)
            CHECK(coh.pairing.g_inv[mu][unit] == 0);
}

TEST_CASE("P_R vanishes on absolute classes and is 1 on the diamond") {
    Model m = preset_projective(3);
    const auto& rel = *m.coh.rel;
    std::vector<Rational> v(rel.N + 1, Rational(0));
    v[1] = 5; // an absolute class
    CHECK(m.coh.pr_value(v) == 0);
    v[rel.diamond] = 2;
    CHECK(m.coh.pr_value(v) == 2);
}

TEST_CASE("H^2 factorization certificate on presets") {
    Model m = preset_product(3, 3);
    CHECK(m.coh.h2_generated);
    for (int i = 0; i < m.coh.basis.size(); ++i) {
        if (m.coh.deg(i) <= 2)
            continue;
        const Factorization& f = m.coh.factor_of(i);
        CHECK(m.coh.deg(f.d2) == 2);
        const auto& prod = m.coh.cup_basis(f.dprime, f.d2);
        REQUIRE(prod.size() == 1);
        CHECK(prod[0].first == i);
        CHECK(prod[0].second == f.coeff);
    }
}
